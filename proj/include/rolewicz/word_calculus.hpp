#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "func_family.hpp"
#include "rational.hpp"

namespace rolewicz {

// Letters 1..t; the first letter acts first:
//   eval_word(st, k) = eval_word(t, eval_word(s, k)).
using Word = std::vector<int>;

struct Budget {
  unsigned long long max_words = 1ull << 20;        // cap on t^r enumerations
  unsigned long long max_terms = 1ull << 23;        // cap on term-level verification work
  unsigned long long max_materialize = 1ull << 20;  // cap on materialized witness support
};

inline unsigned long long checked_word_count(long t, long r, const Budget& b) {
  if (t < 1 || r < 0) throw std::invalid_argument("bad word enumeration bounds");
  unsigned long long acc = 1;
  for (long q = 0; q < r; ++q) {
    if (acc > b.max_words / static_cast<unsigned long long>(t))
      throw budget_error("word enumeration " + std::to_string(t) + "^" + std::to_string(r) +
                         " exceeds budget " + std::to_string(b.max_words));
    acc *= static_cast<unsigned long long>(t);
  }
  return acc;
}

inline Nat eval_word(const Family& fam, const Word& w, Nat k) {
  for (int letter : w) {
    if (letter < 1 || letter > fam.t())
      throw std::invalid_argument("word letter " + std::to_string(letter) + " out of range");
    k = fam.maps()[static_cast<std::size_t>(letter - 1)](k);
  }
  return k;
}

template <class S>
S word_coeff(const std::vector<S>& coeffs, const Word& w) {
  S acc(1);
  for (int letter : w) acc *= coeffs.at(static_cast<std::size_t>(letter - 1));
  return acc;
}

// Words of length r over 1..t in lexicographic order (first letter most
// significant). r = 0 yields the single empty word.
template <class Fn>
void for_each_word(long t, long r, const Budget& b, Fn&& fn) {
  checked_word_count(t, r, b);
  Word w(static_cast<std::size_t>(r), 1);
  if (r == 0) {
    fn(static_cast<const Word&>(w));
    return;
  }
  for (;;) {
    fn(static_cast<const Word&>(w));
    long pos = r - 1;
    while (pos >= 0 && w[static_cast<std::size_t>(pos)] == t) {
      w[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++w[static_cast<std::size_t>(pos)];
  }
}

// One equivalence class of words of length r at base index i: all words with
// the same evaluation at i. The key is that common value.
template <class S>
struct ClassInfo {
  Nat key;
  std::vector<Word> members;  // lexicographic order
  S sum{};                    // sum of member coefficients (0 when no coeffs given)
};

template <class S>
struct ClassTable {
  long r = 0;
  Nat i = 1;
  std::vector<ClassInfo<S>> classes;  // ascending by key
  Nat sharp() const { return Nat(classes.size()); }
  std::size_t total_members() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.members.size();
    return n;
  }
};

template <class S>
ClassTable<S> enumerate_classes(const Family& fam, const std::vector<S>* coeffs, long r,
                                const Nat& i, const Budget& budget = {}) {
  if (r < 0) throw std::invalid_argument("word length must be >= 0");
  if (i < 1) throw std::invalid_argument("base index must be >= 1");
  if (coeffs && static_cast<long>(coeffs->size()) != fam.t())
    throw std::invalid_argument("coefficient count does not match family size");
  checked_word_count(fam.t(), r, budget);

  ClassTable<S> table;
  table.r = r;
  table.i = i;
  std::map<Nat, std::size_t> index;
  Word w;
  w.reserve(static_cast<std::size_t>(r));
  // DFS keeps the evaluation chain incremental; visits words lexicographically.
  auto descend = [&](auto&& self, const Nat& v, const S& c) -> void {
    if (static_cast<long>(w.size()) == r) {
      auto [it, fresh] = index.try_emplace(v, table.classes.size());
      if (fresh) table.classes.push_back({v, {}, S(0)});
      auto& cls = table.classes[it->second];
      cls.members.push_back(w);
      if (coeffs) cls.sum += c;
      return;
    }
    for (int letter = 1; letter <= fam.t(); ++letter) {
      w.push_back(letter);
      const IncreasingMap& f = fam.maps()[static_cast<std::size_t>(letter - 1)];
      self(self, f(v), coeffs ? S(c * (*coeffs)[static_cast<std::size_t>(letter - 1)]) : c);
      w.pop_back();
    }
  };
  descend(descend, Nat(i), S(1));

  // classes were created in first-appearance order; re-sort by key
  std::vector<std::size_t> order(table.classes.size());
  for (std::size_t q = 0; q < order.size(); ++q) order[q] = q;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return table.classes[x].key < table.classes[y].key;
  });
  std::vector<ClassInfo<S>> sorted;
  sorted.reserve(order.size());
  for (std::size_t q : order) sorted.push_back(std::move(table.classes[q]));
  table.classes = std::move(sorted);
  return table;
}

template <class S>
ClassTable<S> enumerate_classes(const Family& fam, const std::vector<S>& coeffs, long r,
                                const Nat& i, const Budget& budget = {}) {
  return enumerate_classes<S>(fam, &coeffs, r, i, budget);
}

// The classes of A(r, i) for r >= m, produced through the tail factorization
// instead of direct enumeration: every class is {b.a : b in C} for a base
// class C of A(m, i) and a fixed tail word a of length r - m, with
//   key = eval(a, key(C)),  sum = c_a * sum(C),  size = |C|.
// fn(key, sum, base_class_index, tail); tails run lexicographically within
// each base class.
template <class S, class Fn>
void for_each_lifted_class(const Family& fam, const std::vector<S>& coeffs,
                           const ClassTable<S>& base, long r, const Budget& budget, Fn&& fn) {
  if (r < base.r) throw std::invalid_argument("lift target shorter than base length");
  unsigned long long tails = checked_word_count(fam.t(), r - base.r, budget);
  if (tails > budget.max_words / std::max<std::size_t>(base.classes.size(), 1))
    throw budget_error("lifted class enumeration exceeds budget");

  Word tail;
  tail.reserve(static_cast<std::size_t>(r - base.r));
  for (std::size_t ci = 0; ci < base.classes.size(); ++ci) {
    auto descend = [&](auto&& self, const Nat& v, const S& c) -> void {
      if (static_cast<long>(tail.size()) == r - base.r) {
        fn(v, S(c * base.classes[ci].sum), ci, static_cast<const Word&>(tail));
        return;
      }
      for (int letter = 1; letter <= fam.t(); ++letter) {
        tail.push_back(letter);
        const IncreasingMap& f = fam.maps()[static_cast<std::size_t>(letter - 1)];
        self(self, f(v), S(c * coeffs[static_cast<std::size_t>(letter - 1)]));
        tail.pop_back();
      }
    };
    descend(descend, base.classes[ci].key, S(1));
  }
}

inline Nat lifted_sharp(long t, long base_r, const Nat& base_sharp, long r) {
  if (r < base_r) throw std::invalid_argument("lift target shorter than base length");
  return pow_nat(t, static_cast<unsigned long>(r - base_r)) * base_sharp;
}

struct ConditionWitness {
  Word sigma;
  long i = 0;
};

struct nonzero_condition_error : std::runtime_error {
  ConditionWitness witness;
  nonzero_condition_error(ConditionWitness w, const std::string& msg)
      : std::runtime_error(msg), witness(std::move(w)) {}
};

struct ConditionReport {
  bool holds = true;
  long level = 0;  // the disjointness threshold the check ran at
  std::optional<ConditionWitness> witness;
};

namespace detail {

// Shared sweep over class sums for word lengths 1..m and base indices 1..m.
// Returns the first zero in (length, word, index) order if any, and tracks the
// minimum |sum| and the class attaining it.
template <class S>
struct ConditionScan {
  ConditionReport report;
  S min_abs{};
  bool have_min = false;
  Word min_word;
  long min_i = 0;
};

template <class S>
ConditionScan<S> scan_condition(const Family& fam, const std::vector<S>& coeffs,
                                const Budget& budget) {
  ConditionScan<S> out;
  out.report.level = fam.m();
  const long m = fam.m();
  for (long len = 1; len <= m && out.report.holds; ++len) {
    std::vector<std::map<Nat, std::size_t>> key_to_class(static_cast<std::size_t>(m));
    std::vector<ClassTable<S>> tables;
    tables.reserve(static_cast<std::size_t>(m));
    for (long i = 1; i <= m; ++i) {
      tables.push_back(enumerate_classes(fam, coeffs, len, Nat(i), budget));
      auto& back = tables.back();
      for (std::size_t q = 0; q < back.classes.size(); ++q) {
        key_to_class[static_cast<std::size_t>(i - 1)][back.classes[q].key] = q;
        S a = abs_val(back.classes[q].sum);
        if (a != S(0) && (!out.have_min || a < out.min_abs)) {
          out.have_min = true;
          out.min_abs = a;
          out.min_word = back.classes[q].members.front();
          out.min_i = i;
        }
      }
    }
    // witness order: length, then word lexicographically, then base index
    for_each_word(fam.t(), len, budget, [&](const Word& w) {
      if (!out.report.holds) return;
      for (long i = 1; i <= m; ++i) {
        Nat key = eval_word(fam, w, Nat(i));
        const auto& tab = tables[static_cast<std::size_t>(i - 1)];
        std::size_t ci = key_to_class[static_cast<std::size_t>(i - 1)].at(key);
        if (tab.classes[ci].sum == S(0)) {
          out.report.holds = false;
          out.report.witness = ConditionWitness{w, i};
          return;
        }
      }
    });
  }
  return out;
}

}  // namespace detail

// The non-zero condition at level m: every class sum c([sigma]_i) with
// |sigma| <= m and i <= m is non-zero.
template <class S>
ConditionReport check_nonzero_condition(const Family& fam, const std::vector<S>& coeffs,
                                        const Budget& budget = {}) {
  if (static_cast<long>(coeffs.size()) != fam.t())
    throw std::invalid_argument("coefficient count does not match family size");
  return detail::scan_condition(fam, coeffs, budget).report;
}

template <class S>
struct GammaReport {
  S gamma{};
  bool floored = false;  // every |sum| >= 1, so gamma is the floor 1
  Word arg_word;         // lex-least member of an attaining class (when !floored)
  long arg_i = 0;
};

// gamma = min(1, |c([sigma]_i)| : |sigma| <= m, i <= m), positive exactly when
// the non-zero condition holds; throws with the first zero witness otherwise.
template <class S>
GammaReport<S> compute_gamma(const Family& fam, const std::vector<S>& coeffs,
                             const Budget& budget = {}) {
  if (static_cast<long>(coeffs.size()) != fam.t())
    throw std::invalid_argument("coefficient count does not match family size");
  auto scan = detail::scan_condition(fam, coeffs, budget);
  if (!scan.report.holds) {
    const auto& w = *scan.report.witness;
    std::string word;
    for (int letter : w.sigma) word += (word.empty() ? "" : ",") + std::to_string(letter);
    throw nonzero_condition_error(
        w, "zero class sum at sigma=(" + word + "), i=" + std::to_string(w.i));
  }
  GammaReport<S> out;
  if (!scan.have_min || scan.min_abs >= S(1)) {
    out.gamma = S(1);
    out.floored = true;
  } else {
    out.gamma = scan.min_abs;
    out.arg_word = scan.min_word;
    out.arg_i = scan.min_i;
  }
  return out;
}

}  // namespace rolewicz
