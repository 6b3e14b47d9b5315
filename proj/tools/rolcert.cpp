#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rolewicz/frontend.hpp"

namespace {

using rolewicz::json;

json parse_json_text(const std::string& text, const std::string& what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) throw rolewicz::config_error(what + ": not valid JSON");
  return parsed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rolcert - certify chaos for scaled composition-sum operators on lp spaces,\n"
      "construct exactly verified transitivity witnesses and periodic approximants,\n"
      "and brute-force the combinatorial identities behind the certificates"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  json overrides = json::object();
  std::vector<long long> shift_args;
  std::vector<std::string> ceil_args, coeff_args;
  long long interleaved_arg = 0;

  auto common_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON configuration file; explicit flags override its keys");
    sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sub->add_flag_callback(
        "--float", [&] { overrides["float"] = true; },
        "floating-point diagnostic mode (verification is skipped; results inexact)");
    sub->add_option_function<long long>(
        "--horizon", [&](const long long& v) { overrides["horizon"] = v; },
        "scan horizon for disjointness checks that lack a closed form");
    sub->add_option_function<long long>(
        "--max-words", [&](const long long& v) { overrides["budget"]["max_words"] = v; },
        "cap on enumerated words per class table");
    sub->add_option_function<long long>(
        "--max-terms", [&](const long long& v) { overrides["budget"]["max_terms"] = v; },
        "cap on evaluated terms per verification pass");
    sub->add_option_function<long long>(
        "--max-materialize",
        [&](const long long& v) { overrides["budget"]["max_materialize"] = v; },
        "cap on stored witness coordinates");
  };
  auto family_opts = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--maps",
        [&](const std::string& v) { overrides["maps"] = parse_json_text(v, "--maps"); },
        "map descriptors as a JSON array (same schema as the config file)");
    sub->add_option("--shift", shift_args, "shift map k -> k+d (repeatable)");
    sub->add_option("--interleaved", interleaved_arg,
                    "interleaved family k -> T*k + (i-1) for i = 1..T");
    sub->add_option("--ceil", ceil_args,
                    "ceiling-pairing map with rational ratio c > 1, e.g. 3/2 (repeatable)");
  };
  auto operator_opts = [&](CLI::App* sub) {
    sub->add_option("--coeff", coeff_args,
                    "operator coefficient, one per map (repeatable, rationals like -2/3)");
    sub->add_option_function<std::string>(
        "--lambda", [&](const std::string& v) { overrides["lambda"] = v; },
        "scaling factor (rational)");
    sub->add_option_function<long long>(
        "--p", [&](const long long& v) { overrides["p"] = v; }, "lp exponent, integer >= 1");
  };
  auto point_opts = [&](CLI::App* sub, bool with_y) {
    sub->add_option_function<std::string>(
        "--x", [&](const std::string& v) { overrides["x"] = parse_json_text(v, "--x"); },
        "finitely supported point as a JSON object, e.g. '{\"1\": \"1\", \"3\": \"-1/2\"}'");
    if (with_y)
      sub->add_option_function<std::string>(
          "--y", [&](const std::string& v) { overrides["y"] = parse_json_text(v, "--y"); },
          "target point (same schema as --x)");
    sub->add_option_function<std::string>(
        "--epsilon", [&](const std::string& v) { overrides["epsilon"] = v; },
        "approximation tolerance (rational)");
    sub->add_option_function<long long>(
        "--levels", [&](const long long& v) { overrides["levels"] = v; },
        "number of approach levels L");
  };

  CLI::App* c_certify = app.add_subcommand(
      "certify", "decide the sufficient chaos conditions and emit a certificate");
  common_opts(c_certify);
  family_opts(c_certify);
  operator_opts(c_certify);

  CLI::App* c_witness = app.add_subcommand(
      "witness", "construct and exactly verify a transitivity witness from x to y");
  common_opts(c_witness);
  family_opts(c_witness);
  operator_opts(c_witness);
  point_opts(c_witness, true);

  CLI::App* c_periodic = app.add_subcommand(
      "periodic", "construct and exactly verify a periodic approximant of x");
  common_opts(c_periodic);
  family_opts(c_periodic);
  operator_opts(c_periodic);
  point_opts(c_periodic, false);

  CLI::App* c_family = app.add_subcommand(
      "family", "validate a map family and report the disjointness threshold");
  common_opts(c_family);
  family_opts(c_family);

  CLI::App* c_classes =
      app.add_subcommand("classes", "enumerate word classes at a given length and base index");
  common_opts(c_classes);
  family_opts(c_classes);
  operator_opts(c_classes);
  c_classes->add_option_function<long long>(
      "--r", [&](const long long& v) { overrides["r"] = v; }, "word length");
  c_classes->add_option_function<long long>(
      "--i", [&](const long long& v) { overrides["i"] = v; }, "base index");

  CLI::App* c_sample = app.add_subcommand(
      "sample", "Monte Carlo scan of the non-zero condition over a coefficient box");
  common_opts(c_sample);
  family_opts(c_sample);
  c_sample->add_option_function<long long>(
      "--samples", [&](const long long& v) { overrides["samples"] = v; },
      "number of coefficient tuples to draw");
  c_sample->add_option_function<unsigned long long>(
      "--seed", [&](const unsigned long long& v) { overrides["seed"] = v; },
      "deterministic sampling seed");
  c_sample->add_option_function<long long>(
      "--grid-denom", [&](const long long& v) { overrides["grid_denom"] = v; },
      "denominator of the rational sampling grid");
  c_sample->add_option_function<std::string>(
      "--box", [&](const std::string& v) { overrides["box"] = parse_json_text(v, "--box"); },
      "coefficient box as a JSON array of [lo, hi] rational pairs");

  CLI::App* c_prop = app.add_subcommand(
      "propcheck", "brute-force sweeps of the combinatorial identities behind certification");
  common_opts(c_prop);
  family_opts(c_prop);
  operator_opts(c_prop);
  c_prop->add_option_function<std::string>(
      "--mode", [&](const std::string& v) { overrides["mode"] = v; },
      "sweep scale: ci (default) or audit");
  c_prop->add_option_function<long long>(
      "--rmax", [&](const long long& v) { overrides["rmax"] = v; }, "largest word length");
  c_prop->add_option_function<long long>(
      "--kmax", [&](const long long& v) { overrides["kmax"] = v; }, "largest argument checked");
  c_prop->add_option_function<long long>(
      "--imax", [&](const long long& v) { overrides["imax"] = v; }, "largest base index");

  CLI::App* c_demo = app.add_subcommand(
      "demo-counterexample",
      "run the built-in boundary example: two maps agreeing at one point, where one "
      "coefficient choice certifies and the sign-flipped choice kills the first coordinate");
  common_opts(c_demo);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }

    if (!shift_args.empty() || interleaved_arg > 0 || !ceil_args.empty()) {
      json maps = json::array();
      for (long long d : shift_args) maps.push_back(json{{"kind", "shift"}, {"d", d}});
      for (long long i = 1; i <= interleaved_arg; ++i)
        maps.push_back(json{{"kind", "interleaved"}, {"t", interleaved_arg}, {"i", i}});
      for (const std::string& c : ceil_args) maps.push_back(json{{"kind", "ceil"}, {"c", c}});
      overrides["maps"] = std::move(maps);
    }
    if (!coeff_args.empty()) overrides["coeffs"] = coeff_args;

    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw rolewicz::config_error("cannot open " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = parse_json_text(ss.str(), config_path);
      if (!cfg.is_object())
        throw rolewicz::config_error(config_path + ": top level must be a JSON object");
    }
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
      if (it.key() == "budget" && cfg.contains("budget") && cfg["budget"].is_object()) {
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
          cfg["budget"][jt.key()] = jt.value();
      } else {
        cfg[it.key()] = it.value();
      }
    }

    CLI::App* sub = app.get_subcommands().front();
    rolewicz::RunResult rr = rolewicz::run_command(cfg, sub->get_name());

    std::string text = rr.report.dump(2);
    text += "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw rolewicz::config_error("cannot write " + out_path);
      out << text;
    }
    return rr.exit_code;
  } catch (const rolewicz::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const rolewicz::exactness_error& e) {
    std::cerr << "internal exactness failure: " << e.what() << "\n";
    return 70;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
}
