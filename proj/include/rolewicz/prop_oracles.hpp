#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "word_calculus.hpp"

namespace rolewicz {

// Brute-force sweeps over the structural propositions behind the certifier
// and the witness construction, at desk scale. Each sweep returns every
// violation it finds (capped), so deliberately broken inputs are visible.
struct SweepConfig {
  long r_max = 4;   // word lengths
  long k_max = 25;  // coordinate window for the two map sweeps
  long i_max = 25;  // base index window for the class sweeps
  Budget budget{};
};

struct SweepViolation {
  Word sigma, tau;
  Nat k, kp;
  std::string detail;
};

struct SweepResult {
  std::string sweep;
  unsigned long long cases_checked = 0;
  std::vector<SweepViolation> violations;
  bool clean() const { return violations.empty(); }
};

namespace detail {

inline void record(SweepResult& res, SweepViolation v) {
  if (res.violations.size() < 8) res.violations.push_back(std::move(v));
}

}  // namespace detail

// Same-length words never connect two different base indices to one value:
// f_sigma(k) = f_tau(k') forces k = k'.
inline SweepResult sweep_base_uniqueness(const Family& fam, const SweepConfig& cfg = {}) {
  SweepResult res{"base-uniqueness"};
  for (long r = 1; r <= cfg.r_max; ++r) {
    std::map<Nat, std::pair<Word, Nat>> seen;
    for_each_word(fam.t(), r, cfg.budget, [&](const Word& w) {
      for (long k = 1; k <= cfg.k_max; ++k) {
        Nat v = eval_word(fam, w, Nat(k));
        auto [it, fresh] = seen.emplace(v, std::make_pair(w, Nat(k)));
        ++res.cases_checked;
        if (!fresh && it->second.second != k)
          detail::record(res, {w, it->second.first, Nat(k), it->second.second,
                               "value " + v.str() + " reached from two base indices"});
      }
    });
  }
  return res;
}

// At base indices past the disjointness threshold, words of one length act
// injectively: sigma != tau of equal length forces f_sigma(k) != f_tau(k).
inline SweepResult sweep_word_injectivity(const Family& fam, const SweepConfig& cfg = {}) {
  SweepResult res{"word-injectivity"};
  for (long k = fam.m(); k <= cfg.k_max; ++k) {
    for (long r = 1; r <= cfg.r_max; ++r) {
      std::map<Nat, Word> seen;
      for_each_word(fam.t(), r, cfg.budget, [&](const Word& w) {
        Nat v = eval_word(fam, w, Nat(k));
        auto [it, fresh] = seen.emplace(v, w);
        ++res.cases_checked;
        if (!fresh)
          detail::record(res, {w, it->second, Nat(k), Nat(k),
                               "words collide at value " + v.str()});
      });
    }
  }
  return res;
}

// Past the threshold length, every class is a base class with a fixed tail
// appended: keys, member sets, and sums of the direct enumeration all match
// the lifted prediction, and distinct (base class, tail) pairs stay distinct.
template <class S>
SweepResult sweep_class_factorization(const Family& fam, const std::vector<S>& coeffs,
                                      const SweepConfig& cfg = {}) {
  SweepResult res{"class-factorization"};
  const long m = fam.m();
  for (long i = 1; i <= cfg.i_max; ++i) {
    ClassTable<S> base = enumerate_classes(fam, coeffs, m, Nat(i), cfg.budget);
    for (long r = m + 1; r <= cfg.r_max; ++r) {
      ClassTable<S> direct = enumerate_classes(fam, coeffs, r, Nat(i), cfg.budget);
      struct Lifted {
        S sum;
        std::vector<Word> members;
        Word tail;
      };
      std::map<Nat, Lifted> lifted;
      for_each_lifted_class(
          fam, coeffs, base, r, cfg.budget,
          [&](const Nat& key, const S& sum, std::size_t ci, const Word& tail) {
            ++res.cases_checked;
            Lifted lf{sum, {}, tail};
            for (const Word& b : base.classes[ci].members) {
              Word w = b;
              w.insert(w.end(), tail.begin(), tail.end());
              lf.members.push_back(std::move(w));
            }
            Word first_new = lf.members.front();
            auto [it, fresh] = lifted.emplace(key, std::move(lf));
            if (!fresh)
              detail::record(res, {it->second.members.front(), first_new, Nat(i), key,
                                   "two lifted classes share the key " + key.str()});
          });
      for (const auto& cls : direct.classes) {
        ++res.cases_checked;
        auto it = lifted.find(cls.key);
        if (it == lifted.end()) {
          detail::record(res, {cls.members.front(), {}, Nat(i), cls.key,
                               "direct class has no lifted counterpart"});
          continue;
        }
        if (cls.members != it->second.members)
          detail::record(res, {cls.members.front(), it->second.members.front(), Nat(i), cls.key,
                               "member sets differ at key " + cls.key.str()});
        else if (cls.sum != it->second.sum)
          detail::record(res, {cls.members.front(), it->second.tail, Nat(i), cls.key,
                               "class sum " + scalar_traits<S>::str(cls.sum) +
                                   " != lifted sum " + scalar_traits<S>::str(it->second.sum)});
      }
    }
  }
  return res;
}

// Class counts scale geometrically: sharp(s, i) = t^{s-r} * sharp(r, i) for
// threshold <= r < s.
template <class S>
SweepResult sweep_class_counts(const Family& fam, const std::vector<S>& coeffs,
                               const SweepConfig& cfg = {}) {
  SweepResult res{"class-counts"};
  const long m = fam.m();
  for (long i = 1; i <= cfg.i_max; ++i) {
    std::vector<ClassTable<S>> tables;
    for (long r = m; r <= cfg.r_max; ++r)
      tables.push_back(enumerate_classes(fam, coeffs, r, Nat(i), cfg.budget));
    for (std::size_t a = 0; a < tables.size(); ++a) {
      for (std::size_t b = a + 1; b < tables.size(); ++b) {
        ++res.cases_checked;
        Nat predicted = lifted_sharp(fam.t(), tables[a].r, tables[a].sharp(), tables[b].r);
        if (predicted != tables[b].sharp())
          detail::record(res, {{}, {}, Nat(i), Nat(tables[b].r),
                               "sharp(" + std::to_string(tables[b].r) + "," + std::to_string(i) +
                                   ") = " + tables[b].sharp().str() + " != " + predicted.str()});
      }
    }
  }
  return res;
}

// Splitting any long word after the threshold factors its class sum:
// c([head tail]_i) = c_tail * c([head]_i).
template <class S>
SweepResult sweep_sum_factorization(const Family& fam, const std::vector<S>& coeffs,
                                    const SweepConfig& cfg = {}) {
  SweepResult res{"sum-factorization"};
  const long m = fam.m();
  for (long i = 1; i <= cfg.i_max; ++i) {
    ClassTable<S> base = enumerate_classes(fam, coeffs, m, Nat(i), cfg.budget);
    std::map<Nat, S> base_sum;
    for (const auto& cls : base.classes) base_sum.emplace(cls.key, cls.sum);
    for (long r = m + 1; r <= cfg.r_max; ++r) {
      ClassTable<S> direct = enumerate_classes(fam, coeffs, r, Nat(i), cfg.budget);
      std::map<Nat, S> direct_sum;
      for (const auto& cls : direct.classes) direct_sum.emplace(cls.key, cls.sum);
      for_each_word(fam.t(), r, cfg.budget, [&](const Word& w) {
        Word head(w.begin(), w.begin() + m), tail(w.begin() + m, w.end());
        Nat base_key = eval_word(fam, head, Nat(i));
        Nat full_key = eval_word(fam, tail, base_key);
        S predicted = word_coeff(coeffs, tail) * base_sum.at(base_key);
        S actual = direct_sum.at(full_key);
        ++res.cases_checked;
        if (actual != predicted)
          detail::record(res, {w, tail, Nat(i), full_key,
                               "class sum " + scalar_traits<S>::str(actual) +
                                   " != tail-factored " + scalar_traits<S>::str(predicted)});
      });
    }
  }
  return res;
}

// Every class sum at length r stays at least gamma^r in absolute value.
// Requires the non-zero condition (compute_gamma throws otherwise).
template <class S>
SweepResult sweep_sum_lower_bound(const Family& fam, const std::vector<S>& coeffs,
                                  const SweepConfig& cfg = {}) {
  SweepResult res{"sum-lower-bound"};
  GammaReport<S> g = compute_gamma(fam, coeffs, cfg.budget);
  for (long r = 1; r <= cfg.r_max; ++r) {
    S bound = pow_scalar(g.gamma, r);
    for (long i = 1; i <= cfg.i_max; ++i) {
      ClassTable<S> table = enumerate_classes(fam, coeffs, r, Nat(i), cfg.budget);
      for (const auto& cls : table.classes) {
        ++res.cases_checked;
        if (abs_val(cls.sum) < bound)
          detail::record(res, {cls.members.front(), {}, Nat(i), cls.key,
                               "|class sum| = " + scalar_traits<S>::str(abs_val(cls.sum)) +
                                   " < " + scalar_traits<S>::str(bound)});
      }
    }
  }
  return res;
}

template <class S>
std::vector<SweepResult> run_all_sweeps(const Family& fam, const std::vector<S>& coeffs,
                                        const SweepConfig& cfg = {}) {
  return {sweep_base_uniqueness(fam, cfg),
          sweep_word_injectivity(fam, cfg),
          sweep_class_factorization(fam, coeffs, cfg),
          sweep_class_counts(fam, coeffs, cfg),
          sweep_sum_factorization(fam, coeffs, cfg),
          sweep_sum_lower_bound(fam, coeffs, cfg)};
}

}  // namespace rolewicz
