#pragma once

#include <initializer_list>
#include <map>
#include <stdexcept>
#include <utility>

#include "rational.hpp"

namespace rolewicz {

// Finitely supported sequence over 1-based indices. Zero values are never
// stored, so support_size() and equality are canonical.
template <class S>
class SparseSeq {
 public:
  using map_type = std::map<Nat, S>;

  SparseSeq() = default;
  SparseSeq(std::initializer_list<std::pair<Nat, S>> init) {
    for (const auto& [k, v] : init) set(k, v);
  }

  S at(const Nat& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? S(0) : it->second;
  }

  void set(const Nat& k, const S& v) {
    check_index(k);
    if (v == S(0))
      entries_.erase(k);
    else
      entries_[k] = v;
  }

  void add(const Nat& k, const S& v) {
    check_index(k);
    auto [it, fresh] = entries_.try_emplace(k, v);
    if (!fresh) it->second += v;
    if (it->second == S(0)) entries_.erase(it);
  }

  const map_type& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  // 0 when empty (no index 0 exists otherwise).
  Nat max_support() const {
    return entries_.empty() ? Nat(0) : entries_.rbegin()->first;
  }

  bool operator==(const SparseSeq& o) const { return entries_ == o.entries_; }
  bool operator!=(const SparseSeq& o) const { return !(*this == o); }

 private:
  static void check_index(const Nat& k) {
    if (k < 1) throw std::invalid_argument("sequence index must be >= 1");
  }
  map_type entries_;
};

template <class S>
struct NormValue {
  enum class Kind { p_power, sup };
  S value{};
  Kind kind{Kind::p_power};
  long p{1};  // meaningful for p_power only
};

// Sum of |x_k|^p. Returned as the p-th power: in exact mode the p-th root
// generally does not exist in the scalar field, so all comparisons downstream
// are done between p-th powers.
template <class S>
NormValue<S> lp_norm_pow(const SparseSeq<S>& x, long p) {
  if (p < 1) throw std::invalid_argument("lp norm requires integer p >= 1");
  S acc(0);
  for (const auto& [k, v] : x.entries()) acc += pow_scalar(abs_val(v), p);
  return {acc, NormValue<S>::Kind::p_power, p};
}

template <class S>
NormValue<S> sup_norm(const SparseSeq<S>& x) {
  S best(0);
  for (const auto& [k, v] : x.entries()) {
    S a = abs_val(v);
    if (a > best) best = a;
  }
  return {best, NormValue<S>::Kind::sup, 0};
}

// a*x + y
template <class S>
SparseSeq<S> seq_axpy(const S& a, const SparseSeq<S>& x, const SparseSeq<S>& y) {
  SparseSeq<S> out = y;
  if (a == S(0)) return out;
  for (const auto& [k, v] : x.entries()) out.add(k, a * v);
  return out;
}

}  // namespace rolewicz
