#pragma once

#include <vector>

#include "func_family.hpp"
#include "sparse_seq.hpp"
#include "word_calculus.hpp"

namespace rolewicz {

// The operator lambda * sum_i c_i T_{f_i} acting on finitely supported
// sequences inside l_p, with (T_f x)(k) = x(f(k)).
template <class S>
struct OperatorSpec {
  Family fam;
  std::vector<S> coeffs;
  S lambda{};
  long p = 1;
};

template <class S>
OperatorSpec<S> make_operator(Family fam, std::vector<S> coeffs, S lambda, long p) {
  if (static_cast<long>(coeffs.size()) != fam.t())
    throw std::invalid_argument("coefficient count does not match family size");
  if (p < 1) throw std::invalid_argument("space exponent p must be an integer >= 1");
  if (!(lambda > S(0))) throw std::invalid_argument("scaling lambda must be positive");
  return {std::move(fam), std::move(coeffs), std::move(lambda), p};
}

// One application, computed by pulling each support point of x back through
// every map: x(s) contributes lambda * c_i to coordinate f_i^{-1}(s).
template <class S>
SparseSeq<S> apply_operator(const OperatorSpec<S>& op, const SparseSeq<S>& x) {
  SparseSeq<S> out;
  for (const auto& [s, v] : x.entries()) {
    for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
      auto k = op.fam.maps()[i].preimage(s);
      if (k) out.add(*k, op.lambda * op.coeffs[i] * v);
    }
  }
  return out;
}

template <class S>
SparseSeq<S> iterate(const OperatorSpec<S>& op, SparseSeq<S> x, long n) {
  if (n < 0) throw std::invalid_argument("iteration count must be >= 0");
  for (long q = 0; q < n; ++q) x = apply_operator(op, x);
  return x;
}

// Same power, computed from the definition instead of repeated pullbacks:
//   ((lambda T)^n x)(k) = lambda^n * sum_{|sigma|=n} c_sigma x(eval(sigma, k)).
// Values only grow along a word, so the recursion prunes once past supp(x).
template <class S>
SparseSeq<S> iterate_via_words(const OperatorSpec<S>& op, const SparseSeq<S>& x, long n,
                               const Budget& budget = {}) {
  if (n < 0) throw std::invalid_argument("iteration count must be >= 0");
  if (n == 0) return x;
  Nat top = x.max_support();
  if (top == 0) return {};
  if (top > budget.max_words)
    throw budget_error("coordinate range " + top.str() + " exceeds word-route budget");
  unsigned long long words = checked_word_count(op.fam.t(), n, budget);
  unsigned long long range = top.convert_to<unsigned long long>();
  if (range > budget.max_terms / words)
    throw budget_error("word-route term count exceeds budget");

  S scale = pow_scalar(op.lambda, n);
  SparseSeq<S> out;
  for (Nat k = 1; k <= top; ++k) {
    S acc(0);
    auto descend = [&](auto&& self, const Nat& v, const S& c, long depth) -> void {
      if (v > top) return;  // every extension only increases v
      if (depth == n) {
        acc += c * x.at(v);
        return;
      }
      for (std::size_t i = 0; i < op.coeffs.size(); ++i)
        self(self, op.fam.maps()[i](v), S(c * op.coeffs[i]), depth + 1);
    };
    descend(descend, k, S(1), 0);
    if (acc != S(0)) out.set(k, scale * acc);
  }
  return out;
}

}  // namespace rolewicz
