#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json_io.hpp"

namespace rolewicz {

// Exit code contract: 0 = certified / verified / clean, 2 = mathematically
// negative outcome (threshold not met, condition fails, sweep violations),
// 3 = resource budget exceeded, 4 = malformed configuration.
struct RunResult {
  int exit_code = 0;
  json report;
};

// The two-map family whose coefficient choice (2, -2) defeats the non-zero
// condition even though every coefficient is non-zero: f1(k) = 2k and
// f2 = 2k - 1 patched with 1 -> 2, so both maps send 1 to 2 and the class
// {(1), (2)} at base 1 sums to c1 + c2.
inline Family counterexample_family(long horizon = 4096) {
  std::vector<IncreasingMap> maps;
  maps.push_back(IncreasingMap::affine(2, 0));
  maps.push_back(IncreasingMap::patched(IncreasingMap::affine(2, -1), {{Nat(1), Nat(2)}}));
  return make_family(std::move(maps), horizon);
}

namespace detail {

inline unsigned long long ull_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw config_error(path + ": not a non-negative integer");
  return j.get<unsigned long long>();
}

inline Budget budget_from_config(const json& cfg) {
  Budget b;
  if (!cfg.contains("budget")) return b;
  const json& bj = cfg.at("budget");
  if (!bj.is_object()) throw config_error("$.budget: not an object");
  if (bj.contains("max_words")) b.max_words = ull_from_json(bj.at("max_words"), "$.budget.max_words");
  if (bj.contains("max_terms")) b.max_terms = ull_from_json(bj.at("max_terms"), "$.budget.max_terms");
  if (bj.contains("max_materialize"))
    b.max_materialize = ull_from_json(bj.at("max_materialize"), "$.budget.max_materialize");
  return b;
}

inline SweepConfig sweep_config_from(const json& cfg, const Budget& budget) {
  SweepConfig sc;
  sc.budget = budget;
  std::string mode = cfg.value("mode", "ci");
  if (mode == "ci") {
    sc.r_max = 3;
    sc.k_max = 12;
    sc.i_max = 12;
  } else if (mode == "audit") {
    sc.r_max = 4;
    sc.k_max = 25;
    sc.i_max = 25;
  } else {
    throw config_error("$.mode: unknown mode \"" + mode + "\" (ci or audit)");
  }
  if (cfg.contains("rmax")) sc.r_max = long_from_json(cfg.at("rmax"), "$.rmax");
  if (cfg.contains("kmax")) sc.k_max = long_from_json(cfg.at("kmax"), "$.kmax");
  if (cfg.contains("imax")) sc.i_max = long_from_json(cfg.at("imax"), "$.imax");
  return sc;
}

inline std::vector<std::pair<Rat, Rat>> box_from_config(const json& cfg) {
  const json& bj = member(cfg, "box", "$");
  if (!bj.is_array() || bj.empty()) throw config_error("$.box: not a non-empty array");
  std::vector<std::pair<Rat, Rat>> box;
  if (bj[0].is_array()) {
    for (std::size_t q = 0; q < bj.size(); ++q) {
      std::string path = "$.box[" + std::to_string(q) + "]";
      if (!bj[q].is_array() || bj[q].size() != 2) throw config_error(path + ": not a [lo, hi] pair");
      box.emplace_back(rat_from_json(bj[q][0], path + "[0]"), rat_from_json(bj[q][1], path + "[1]"));
    }
  } else {
    if (bj.size() != 2) throw config_error("$.box: not a [lo, hi] pair");
    box.emplace_back(rat_from_json(bj[0], "$.box[0]"), rat_from_json(bj[1], "$.box[1]"));
  }
  return box;
}

template <class S>
OperatorSpec<S> op_from_config(const json& cfg, Family fam) {
  std::vector<S> coeffs = coeffs_from_json<S>(member(cfg, "coeffs", "$"), "$.coeffs");
  S lambda = scalar_traits<S>::from_rat(rat_from_json(member(cfg, "lambda", "$"), "$.lambda"));
  long p = cfg.contains("p") ? long_from_json(cfg.at("p"), "$.p") : 1;
  return make_operator(std::move(fam), std::move(coeffs), std::move(lambda), p);
}

inline RunResult run_demo(const Budget& budget) {
  json checks = json::array();
  bool all = true;
  auto add = [&](const char* name, bool ok, json detail) {
    checks.push_back({{"check", name}, {"ok", ok}, {"detail", std::move(detail)}});
    all = all && ok;
  };

  Family fam = counterexample_family();

  auto cert17 = certify(make_operator<Rat>(fam, {Rat(2), Rat(2)}, Rat(17), 1), budget);
  add("certified-strictly-above-threshold",
      cert17.verdict == Verdict::certified_chaotic && cert17.m == 2 &&
          cert17.m_status == MStatus::exact && cert17.gamma && *cert17.gamma == Rat(1) &&
          cert17.lambda_min && *cert17.lambda_min == Rat(16),
      certificate_to_json(cert17));

  auto cert16 = certify(make_operator<Rat>(fam, {Rat(2), Rat(2)}, Rat(16), 1), budget);
  add("not-certified-at-threshold", cert16.verdict == Verdict::threshold_not_met,
      certificate_to_json(cert16));

  auto cert_neg = certify(make_operator<Rat>(fam, {Rat(2), Rat(-2)}, Rat(17), 1), budget);
  add("condition-fails-with-witness",
      cert_neg.verdict == Verdict::nonzero_condition_fails && cert_neg.witness &&
          cert_neg.witness->sigma == Word{1} && cert_neg.witness->i == 1,
      certificate_to_json(cert_neg));

  auto op_neg = make_operator<Rat>(fam, {Rat(2), Rat(-2)}, Rat(1), 1);
  DetRng rng(20260816u);
  bool collapse = true;
  for (int s = 0; s < 100 && collapse; ++s) {
    SparseSeq<Rat> x;
    for (int e = 0; e < 3; ++e) {
      Nat k(rng.between(1, 12));
      long num = static_cast<long>(rng.between(1, 9));
      long den = static_cast<long>(rng.between(1, 9));
      if (rng.below(2) == 0) num = -num;
      x.set(k, Rat(num, den));
    }
    collapse = apply_operator(op_neg, x).at(1) == Rat(0);
  }
  add("first-coordinate-collapses", collapse, {{"samples", 100}});

  return {all ? 0 : 2, json{{"checks", checks}, {"all_ok", all}}};
}

template <class S>
RunResult run_typed(const json& cfg, const std::string& cmd) {
  Budget budget = budget_from_config(cfg);
  long horizon = cfg.contains("horizon") ? long_from_json(cfg.at("horizon"), "$.horizon") : 4096;

  if (cmd == "demo-counterexample") return run_demo(budget);

  const json& fj = cfg.contains("family") ? cfg.at("family") : member(cfg, "maps", "$");
  Family fam = family_from_json(fj, cfg.contains("family") ? "$.family" : "$.maps", horizon);

  if (cmd == "family") return {0, family_report_to_json(fam)};

  if (cmd == "sample") {
    long count = cfg.contains("samples") ? long_from_json(cfg.at("samples"), "$.samples") : 1000;
    std::uint64_t seed = cfg.contains("seed") ? ull_from_json(cfg.at("seed"), "$.seed") : 1;
    long denom =
        cfg.contains("grid_denom") ? long_from_json(cfg.at("grid_denom"), "$.grid_denom") : 1000000;
    auto report = sample_coefficients(fam, box_from_config(cfg), count, seed, denom, budget);
    return {0, sample_report_to_json(report)};
  }

  if (cmd == "propcheck") {
    std::vector<S> coeffs = coeffs_from_json<S>(member(cfg, "coeffs", "$"), "$.coeffs");
    auto results = run_all_sweeps(fam, coeffs, sweep_config_from(cfg, budget));
    bool clean = true;
    for (const auto& r : results) clean = clean && r.clean();
    return {clean ? 0 : 2, sweep_results_to_json(results)};
  }

  if (cmd == "classes") {
    std::vector<S> coeffs = coeffs_from_json<S>(member(cfg, "coeffs", "$"), "$.coeffs");
    long r = long_from_json(member(cfg, "r", "$"), "$.r");
    Nat i = nat_from_json(member(cfg, "i", "$"), "$.i");
    return {0, class_table_to_json(enumerate_classes(fam, coeffs, r, i, budget))};
  }

  OperatorSpec<S> op = op_from_config<S>(cfg, std::move(fam));

  if (cmd == "certify") {
    auto cert = certify(op, budget);
    return {cert.verdict == Verdict::certified_chaotic ? 0 : 2, certificate_to_json(cert)};
  }

  if (cmd == "witness" || cmd == "periodic") {
    SparseSeq<S> x = seq_from_json<S>(member(cfg, "x", "$"), "$.x");
    SparseSeq<S> y = cmd == "periodic" ? x : seq_from_json<S>(member(cfg, "y", "$"), "$.y");
    S eps = scalar_traits<S>::from_rat(rat_from_json(member(cfg, "epsilon", "$"), "$.epsilon"));
    long L = cfg.contains("levels") ? long_from_json(cfg.at("levels"), "$.levels") : 2;

    Witness<S> w = build_witness(op, x, y, eps, L, budget);
    json out;
    out["witness"] = witness_to_json(w);
    if constexpr (scalar_traits<S>::exact) {
      VerifyReport<S> rep = cmd == "periodic" ? verify_periodic(op, x, w, budget)
                                              : verify_witness(op, x, y, w, budget);
      out["report"] = verify_report_to_json(rep, cmd == "periodic");
      bool ok = rep.base_exact && rep.approach_within_epsilon && rep.target_within_epsilon &&
                (cmd != "periodic" || rep.mismatch_within_bound);
      return {ok ? 0 : 2, out};
    } else {
      out["report"] = nullptr;
      out["note"] = "verification needs exact scalars; float mode is diagnostic only";
      return {0, out};
    }
  }

  throw config_error("unknown command \"" + cmd + "\"");
}

}  // namespace detail

inline RunResult run_command(const json& cfg, const std::string& cmd) {
  try {
    if (!cfg.is_object()) throw config_error("$: configuration must be a JSON object");
    bool use_float = false;
    if (cfg.contains("float")) {
      if (!cfg.at("float").is_boolean()) throw config_error("$.float: not a boolean");
      use_float = cfg.at("float").get<bool>();
    }
    return use_float ? detail::run_typed<double>(cfg, cmd) : detail::run_typed<Rat>(cfg, cmd);
  } catch (const nonzero_condition_error& e) {
    return {2, json{{"error", "nonzero-condition"},
                    {"what", e.what()},
                    {"witness", condition_witness_to_json(e.witness)}}};
  } catch (const witness_error& e) {
    return {2, json{{"error", "witness"}, {"what", e.what()}}};
  } catch (const budget_error& e) {
    return {3, json{{"error", "budget"}, {"what", e.what()}}};
  } catch (const config_error& e) {
    return {4, json{{"error", "config"}, {"what", e.what()}}};
  } catch (const family_error& e) {
    return {4, json{{"error", "family"}, {"what", e.what()}}};
  } catch (const std::invalid_argument& e) {
    return {4, json{{"error", "config"}, {"what", e.what()}}};
  }
  // exactness_error deliberately escapes: it marks an internal invariant
  // failure the caller must surface loudly, not a reportable outcome.
}

}  // namespace rolewicz
