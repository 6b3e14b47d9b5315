#pragma once

#include <optional>
#include <string>
#include <vector>

#include "operator_core.hpp"
#include "rng.hpp"
#include "word_calculus.hpp"

namespace rolewicz {

enum class Verdict { certified_chaotic, threshold_not_met, nonzero_condition_fails, heuristic_only };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified_chaotic: return "CertifiedChaotic";
    case Verdict::threshold_not_met: return "ThresholdNotMet";
    case Verdict::nonzero_condition_fails: return "NonZeroConditionFails";
    case Verdict::heuristic_only: return "HeuristicOnly";
  }
  return "?";
}

// Strict lower bound on the scaling: chaos is certified for lambda strictly
// above it. The single-map case needs only lambda > 1.
template <class S>
S lambda_threshold(long t, const S& gamma) {
  if (t < 1) throw std::invalid_argument("family size must be >= 1");
  if (!(gamma > S(0)) || gamma > S(1))
    throw std::invalid_argument("gamma must lie in (0, 1]");
  if (t == 1) return S(1);
  return S(4 * t * t) / gamma;
}

template <class S>
struct Certificate {
  long t = 1;
  long m = 1;
  MStatus m_status = MStatus::exact;
  std::optional<S> gamma;       // defined once the non-zero condition holds
  std::optional<S> lambda_min;  // strict threshold for the given gamma
  S lambda{};
  long p = 1;
  Verdict verdict = Verdict::threshold_not_met;
  std::optional<ConditionWitness> witness;  // zero class sum, when the condition fails
  std::string alpha = "cantor-1indexed";    // pairing convention baked into ceil maps
  std::vector<std::string> notes;
};

template <class S>
Certificate<S> certify(const OperatorSpec<S>& op, const Budget& budget = {}) {
  Certificate<S> cert;
  cert.t = op.fam.t();
  cert.m = op.fam.m();
  cert.m_status = op.fam.m_status();
  cert.lambda = op.lambda;
  cert.p = op.p;

  for (std::size_t i = 0; i < op.coeffs.size(); ++i)
    if (op.coeffs[i] == S(0))
      cert.notes.push_back("coefficient " + std::to_string(i + 1) + " is zero");

  auto cond = check_nonzero_condition(op.fam, op.coeffs, budget);
  if (!cond.holds) {
    cert.verdict = Verdict::nonzero_condition_fails;
    cert.witness = cond.witness;
    return cert;
  }

  auto g = compute_gamma(op.fam, op.coeffs, budget);
  cert.gamma = g.gamma;
  // For a single map the iterated-shift argument certifies (lambda*|c1|) T_f as
  // soon as lambda*|c1| > 1, so the bound on lambda itself is 1/gamma (= 1 when
  // |c1| >= 1).  For t >= 2 the bound is 4t^2/gamma.
  cert.lambda_min = cert.t == 1 ? lambda_threshold(cert.t, g.gamma) / g.gamma
                                : lambda_threshold(cert.t, g.gamma);

  if (!(op.lambda > *cert.lambda_min)) {
    cert.verdict = Verdict::threshold_not_met;
  } else if (cert.m_status == MStatus::horizon_bounded) {
    cert.verdict = Verdict::heuristic_only;
    cert.notes.push_back("disjointness threshold is horizon-bounded (scanned to " +
                         std::to_string(op.fam.horizon()) + "); not a full certificate");
  } else {
    cert.verdict = Verdict::certified_chaotic;
  }

  if (cert.m == 1 && cert.m_status == MStatus::exact)
    cert.notes.push_back("map ranges are pairwise disjoint; every length-1 class is a singleton");
  if (cert.t == 1)
    cert.notes.push_back(
        "single-map family: lambda*gamma > 1 suffices (iterated-shift argument), so the "
        "threshold is 1/gamma rather than 4/gamma");
  return cert;
}

struct SampleFailure {
  long index = 0;
  std::vector<Rat> coeffs;
  ConditionWitness witness;
  Rat zero_sum;  // the class sum recomputed at the witness; always exactly 0
};

struct SampleReport {
  long total = 0;
  long passes = 0;
  std::vector<SampleFailure> failures;
  std::uint64_t seed = 0;
  long grid_denom = 0;
};

// Draws coefficient tuples from the rational grid with denominator grid_denom
// inside the given box (one interval for all coordinates, or one per
// coordinate) and checks the non-zero condition exactly for each. Draws use
// fixed-size substream blocks, so sample #s is reproducible independently of
// the total count.
inline SampleReport sample_coefficients(const Family& fam,
                                        const std::vector<std::pair<Rat, Rat>>& box, long count,
                                        std::uint64_t seed, long grid_denom = 1000000,
                                        const Budget& budget = {}) {
  const long t = fam.t();
  if (box.size() != 1 && static_cast<long>(box.size()) != t)
    throw std::invalid_argument("box needs one interval, or one per coefficient");
  if (count < 0) throw std::invalid_argument("sample count must be >= 0");
  if (grid_denom < 1) throw std::invalid_argument("grid denominator must be >= 1");

  struct GridInterval {
    Nat lo;
    std::uint64_t span;
  };
  std::vector<GridInterval> grid;
  for (const auto& [lo, hi] : box) {
    if (hi < lo) throw std::invalid_argument("box interval is empty");
    Nat lo_n = ceil_rat(lo * grid_denom), hi_n = floor_rat(hi * grid_denom);
    if (hi_n < lo_n)
      throw std::invalid_argument("box interval contains no grid point at denominator " +
                                  std::to_string(grid_denom));
    Nat span = hi_n - lo_n + 1;
    if (span > 1000000000000ull) throw budget_error("grid interval too wide to sample");
    grid.push_back({lo_n, span.convert_to<std::uint64_t>()});
  }

  constexpr std::uint64_t kBlock = 1024;
  SampleReport report;
  report.total = count;
  report.seed = seed;
  report.grid_denom = grid_denom;

  DetRng rng = DetRng::substream(seed, 0);
  for (long s = 0; s < count; ++s) {
    if (s % static_cast<long>(kBlock) == 0 && s > 0)
      rng = DetRng::substream(seed, static_cast<std::uint64_t>(s) / kBlock);
    std::vector<Rat> coeffs(static_cast<std::size_t>(t));
    for (long q = 0; q < t; ++q) {
      const auto& gi = grid[box.size() == 1 ? 0 : static_cast<std::size_t>(q)];
      coeffs[static_cast<std::size_t>(q)] =
          Rat(gi.lo + Nat(rng.below(gi.span)), Nat(grid_denom));
    }
    auto cond = check_nonzero_condition(fam, coeffs, budget);
    if (cond.holds) {
      ++report.passes;
      continue;
    }
    // recompute the offending class sum from scratch so the failure carries an
    // independently derived exact zero
    const auto& w = *cond.witness;
    auto table = enumerate_classes(fam, coeffs, static_cast<long>(w.sigma.size()), Nat(w.i), budget);
    Nat key = eval_word(fam, w.sigma, Nat(w.i));
    Rat zero;
    bool found = false;
    for (const auto& cls : table.classes)
      if (cls.key == key) {
        zero = cls.sum;
        found = true;
      }
    if (!found || zero != 0)
      throw exactness_error("sample failure witness does not recompute to zero");
    report.failures.push_back({s, std::move(coeffs), w, zero});
  }
  return report;
}

}  // namespace rolewicz
