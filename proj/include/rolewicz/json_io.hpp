#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaos_certifier.hpp"
#include "prop_oracles.hpp"
#include "witness_engine.hpp"

namespace rolewicz {

using nlohmann::json;

// Unbounded integers ride as JSON numbers while they fit a double-safe int64,
// as decimal strings beyond; readers accept both everywhere.
inline json nat_json(const Nat& v) {
  static const Nat lo = -(Nat(1) << 53), hi = Nat(1) << 53;
  if (v >= lo && v <= hi) return json(static_cast<std::int64_t>(v));
  return json(v.str());
}

inline Nat nat_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Nat(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_nat(j.get<std::string>());
    } catch (const std::exception& e) {
      throw config_error(path + ": " + e.what());
    }
  }
  throw config_error(path + ": not an integer (number or decimal string)");
}

inline long long_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw config_error(path + ": not an integer");
  return j.get<long>();
}

inline Rat rat_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::exception& e) {
      throw config_error(path + ": " + e.what());
    }
  }
  if (j.is_number_float())
    throw config_error(path + ": floating literals are not exact; write \"p/q\"");
  throw config_error(path + ": not a rational (integer or \"p/q\" string)");
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw config_error(path + ": not an object");
  auto it = j.find(key);
  if (it == j.end()) throw config_error(path + ": missing key \"" + key + "\"");
  return *it;
}

// ---- increasing maps ----

inline json map_to_json(const IncreasingMap& f) {
  using Kind = IncreasingMap::Kind;
  switch (f.kind()) {
    case Kind::shift:
      return {{"kind", "shift"}, {"d", f.shift_d()}};
    case Kind::interleaved:
      return {{"kind", "interleaved"}, {"t", f.inter_t()}, {"i", f.inter_i()}};
    case Kind::affine:
      return {{"kind", "affine"}, {"a", nat_json(f.a())}, {"b", nat_json(f.b())}};
    case Kind::ceil:
      return {{"kind", "ceil"}, {"c", rat_str(f.c())}};
    case Kind::patched: {
      json ovr = json::array();
      for (const auto& [k, v] : f.overrides()) ovr.push_back(json::array({nat_json(k), nat_json(v)}));
      return {{"kind", "patched"}, {"base", map_to_json(f.base())}, {"overrides", ovr}};
    }
  }
  throw std::logic_error("unhandled map kind");
}

inline IncreasingMap map_from_json(const json& j, const std::string& path) {
  const json& kj = member(j, "kind", path);
  if (!kj.is_string()) throw config_error(path + ".kind: not a string");
  std::string kind = kj.get<std::string>();
  try {
    if (kind == "shift") return IncreasingMap::shift(long_from_json(member(j, "d", path), path + ".d"));
    if (kind == "interleaved")
      return IncreasingMap::interleaved(long_from_json(member(j, "t", path), path + ".t"),
                                        long_from_json(member(j, "i", path), path + ".i"));
    if (kind == "affine")
      return IncreasingMap::affine(nat_from_json(member(j, "a", path), path + ".a"),
                                   nat_from_json(member(j, "b", path), path + ".b"));
    if (kind == "ceil") return IncreasingMap::ceil_pair(rat_from_json(member(j, "c", path), path + ".c"));
    if (kind == "patched") {
      const json& oj = member(j, "overrides", path);
      if (!oj.is_array()) throw config_error(path + ".overrides: not an array");
      std::vector<std::pair<Nat, Nat>> ovr;
      for (std::size_t q = 0; q < oj.size(); ++q) {
        std::string opath = path + ".overrides[" + std::to_string(q) + "]";
        if (!oj[q].is_array() || oj[q].size() != 2)
          throw config_error(opath + ": not a [k, v] pair");
        ovr.emplace_back(nat_from_json(oj[q][0], opath + "[0]"), nat_from_json(oj[q][1], opath + "[1]"));
      }
      return IncreasingMap::patched(map_from_json(member(j, "base", path), path + ".base"),
                                    std::move(ovr));
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(path + ": " + e.what());
  }
  throw config_error(path + ".kind: unknown kind \"" + kind + "\"");
}

inline Family family_from_json(const json& j, const std::string& path, long horizon = 4096) {
  if (!j.is_array() || j.empty()) throw config_error(path + ": not a non-empty array of maps");
  std::vector<IncreasingMap> maps;
  for (std::size_t q = 0; q < j.size(); ++q)
    maps.push_back(map_from_json(j[q], path + "[" + std::to_string(q) + "]"));
  return make_family(std::move(maps), horizon);
}

// ---- sequences and scalars ----

template <class S>
json seq_to_json(const SparseSeq<S>& x) {
  json j = json::object();
  for (const auto& [k, v] : x.entries()) j[k.str()] = scalar_traits<S>::str(v);
  return j;
}

template <class S>
SparseSeq<S> seq_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw config_error(path + ": not an index->value object");
  SparseSeq<S> x;
  for (const auto& [key, val] : j.items()) {
    Nat k;
    try {
      k = parse_nat(key);
    } catch (const std::exception& e) {
      throw config_error(path + "." + key + ": " + e.what());
    }
    if (k < 1) throw config_error(path + "." + key + ": index must be >= 1");
    x.set(k, scalar_traits<S>::from_rat(rat_from_json(val, path + "." + key)));
  }
  return x;
}

template <class S>
std::vector<S> coeffs_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw config_error(path + ": not a non-empty array");
  std::vector<S> out;
  for (std::size_t q = 0; q < j.size(); ++q)
    out.push_back(scalar_traits<S>::from_rat(rat_from_json(j[q], path + "[" + std::to_string(q) + "]")));
  return out;
}

// ---- words, classes, condition witnesses ----

inline json word_to_json(const Word& w) {
  json a = json::array();
  for (int letter : w) a.push_back(letter);
  return a;
}

inline json condition_witness_to_json(const ConditionWitness& w) {
  return {{"sigma", word_to_json(w.sigma)}, {"i", nat_json(w.i)}};
}

template <class S>
json class_table_to_json(const ClassTable<S>& t) {
  json classes = json::array();
  for (const auto& cls : t.classes) {
    json members = json::array();
    for (const Word& w : cls.members) members.push_back(word_to_json(w));
    classes.push_back(
        {{"value", cls.key.str()}, {"members", members}, {"sum", scalar_traits<S>::str(cls.sum)}});
  }
  return {{"r", t.r}, {"i", nat_json(t.i)}, {"classes", classes},
          {"count", static_cast<std::int64_t>(t.classes.size())}};
}

// ---- certificates, range reports ----

inline const char* m_status_name(MStatus s) {
  return s == MStatus::exact ? "exact" : "horizon-bounded";
}

template <class S>
json certificate_to_json(const Certificate<S>& c) {
  json j;
  j["t"] = c.t;
  j["m"] = c.m;
  j["m_status"] = m_status_name(c.m_status);
  j["gamma"] = c.gamma ? json(scalar_traits<S>::str(*c.gamma)) : json(nullptr);
  j["lambda_min"] = c.lambda_min ? json(scalar_traits<S>::str(*c.lambda_min)) : json(nullptr);
  j["lambda"] = scalar_traits<S>::str(c.lambda);
  j["p"] = c.p;
  j["verdict"] = verdict_name(c.verdict);
  j["witness"] = c.witness ? condition_witness_to_json(*c.witness) : json(nullptr);
  j["alpha"] = c.alpha;
  j["notes"] = c.notes;
  j["scalar"] = scalar_traits<S>::name;
  return j;
}

inline json family_report_to_json(const Family& fam) {
  json agr = json::array();
  for (const auto& a : fam.agreements())
    agr.push_back({{"maps", json::array({static_cast<std::int64_t>(a.fi + 1),
                                         static_cast<std::int64_t>(a.gj + 1)})},
                   {"k", nat_json(a.k)},
                   {"value", nat_json(a.value)}});
  RangeReport rr = disjoint_ranges(fam);
  json rj = {{"disjoint", rr.disjoint}, {"exact", rr.exact}};
  if (rr.witness)
    rj["witness"] = {{"maps", json::array({static_cast<std::int64_t>(rr.witness->fi + 1),
                                           static_cast<std::int64_t>(rr.witness->gj + 1)})},
                     {"k", nat_json(rr.witness->k)},
                     {"kp", nat_json(rr.witness->kp)},
                     {"value", nat_json(rr.witness->value)}};
  json maps = json::array();
  for (const auto& f : fam.maps()) maps.push_back(map_to_json(f));
  return {{"t", fam.t()},          {"m", fam.m()},
          {"m_status", m_status_name(fam.m_status())}, {"horizon", fam.horizon()},
          {"maps", maps},          {"agreements", agr},
          {"disjoint_ranges", rj}};
}

// ---- witnesses and verification reports ----

template <class S>
json verify_report_to_json(const VerifyReport<S>& r, bool periodic) {
  json j;
  j["j"] = r.j;
  j["n"] = r.n;
  j["L"] = r.L;
  j["base_exact"] = r.base_exact;
  j["base_checked"] = r.base_checked;
  j["approach_error"] = scalar_traits<S>::str(r.approach_error);
  j["target_error"] = scalar_traits<S>::str(r.target_error);
  j["tail_bound"] = scalar_traits<S>::str(r.tail_bound);
  j["epsilon"] = scalar_traits<S>::str(r.epsilon);
  j["approach_within_epsilon"] = r.approach_within_epsilon;
  j["target_within_epsilon"] = r.target_within_epsilon;
  j["approach_direct_checked"] = r.approach_direct_checked;
  j["target_direct_checked"] = r.target_direct_checked;
  j["accessor_samples_checked"] = r.accessor_samples_checked;
  if (periodic) {
    j["level_exact_up_to"] = r.level_exact_up_to;
    j["a_coords_checked"] = r.a_coords_checked;
    j["a_levels_full"] = r.a_levels_full;
    j["b_coords_checked"] = r.b_coords_checked;
    j["level_mismatch_mass"] = scalar_traits<S>::str(r.level_mismatch_mass);
    j["level_mismatch_bound"] = scalar_traits<S>::str(r.level_mismatch_bound);
    j["mismatch_within_bound"] = r.mismatch_within_bound;
    j["mismatch_direct_checked"] = r.mismatch_direct_checked;
  }
  return j;
}

template <class S>
json witness_to_json(const Witness<S>& w) {
  const WitnessPlan<S>& plan = w.plan();
  json j;
  j["j"] = plan.j;
  j["n"] = plan.n;
  j["L"] = plan.L;
  j["m"] = plan.m;
  j["path"] = plan.theorem_path ? "theorem" : "subthreshold";
  j["epsilon"] = scalar_traits<S>::str(plan.epsilon);
  j["gamma"] = scalar_traits<S>::str(plan.gamma);
  j["materialized"] = w.materialized();
  j["w"] = w.materialized() ? seq_to_json(w.seq()) : json(nullptr);
  json levels = json::array();
  for (long l = 1; l <= plan.L; ++l)
    levels.push_back({{"level", l},
                      {"mass", scalar_traits<S>::str(plan.level_mass[static_cast<std::size_t>(l - 1)])},
                      {"coords", nat_json(plan.level_coords[static_cast<std::size_t>(l - 1)])}});
  j["levels"] = levels;
  j["assigned_total"] = nat_json(plan.assigned_total);
  j["tail_bound"] = scalar_traits<S>::str(plan.tail_bound);
  return j;
}

// ---- sweeps and samples ----

inline json sweep_results_to_json(const std::vector<SweepResult>& results) {
  json out = json::array();
  for (const auto& r : results) {
    json viols = json::array();
    for (const auto& v : r.violations)
      viols.push_back({{"sigma", word_to_json(v.sigma)},
                       {"tau", word_to_json(v.tau)},
                       {"k", nat_json(v.k)},
                       {"kp", nat_json(v.kp)},
                       {"detail", v.detail}});
    out.push_back({{"sweep", r.sweep},
                   {"cases_checked", r.cases_checked},
                   {"clean", r.clean()},
                   {"violations", viols}});
  }
  return out;
}

inline json sample_report_to_json(const SampleReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) {
    json cs = json::array();
    for (const Rat& c : f.coeffs) cs.push_back(rat_str(c));
    fails.push_back({{"index", f.index},
                     {"coeffs", cs},
                     {"witness", condition_witness_to_json(f.witness)},
                     {"zero_sum", rat_str(f.zero_sum)}});
  }
  return {{"total", r.total},           {"passes", r.passes},
          {"failures", fails},          {"seed", r.seed},
          {"grid_denom", r.grid_denom}, {"all_pass", r.failures.empty()}};
}

}  // namespace rolewicz
