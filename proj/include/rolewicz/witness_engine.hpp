#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "chaos_certifier.hpp"
#include "operator_core.hpp"
#include "sparse_seq.hpp"
#include "word_calculus.hpp"

namespace rolewicz {

struct witness_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smallest n with n > j and j * |y|_sup^p / (4^n - 1) < eps: the closed form
// of the a-priori geometric error series.
template <class S>
long choose_n(long j, const S& y_sup, long p, const S& eps) {
  if (j < 0) throw std::invalid_argument("support bound j must be >= 0");
  if (p < 1) throw std::invalid_argument("space exponent p must be >= 1");
  if (!(eps > S(0))) throw std::invalid_argument("epsilon must be positive");
  S lead = S(j) * pow_scalar(abs_val(y_sup), p);
  long n = std::max(j + 1, 1L);
  while (!(lead < eps * (pow_scalar(S(4), n) - S(1)))) ++n;
  return n;
}

// Construction data for a truncated transitivity/periodicity witness:
// base coordinates carry x; every class of A(l*n, i) with l <= L, i <= j,
// y_i != 0 carries one assigned coordinate (its key); everything else is 0.
template <class S>
struct WitnessPlan {
  long t = 1, m = 1, p = 1;
  long j = 1, n = 2, L = 1;
  S epsilon{}, gamma{}, lambda{};
  bool theorem_path = true;  // lambda clears the general 4t^2/gamma bound
  SparseSeq<S> x, y;
  std::vector<ClassTable<S>> base_tables;  // A(m, i), index i-1, i = 1..j
  S s_factor{};                   // sum_i |c_i|^{-p}
  std::vector<S> q_factor;        // index i-1: sum over A(m,i) of |class sum|^{-p}
  std::vector<S> level_mass;      // index l-1: exact p-mass of the level-l assignments
  std::vector<Nat> level_coords;  // index l-1: number of level-l assigned coordinates
  S tail_bound{};                 // closed-form bound on the masses beyond L
  Nat assigned_total{};

  Nat sharp(long level, long i) const {
    return lifted_sharp(t, m, base_tables[static_cast<std::size_t>(i - 1)].sharp(), level * n);
  }
};

struct CoordClass {
  enum class Tag { base, a_level, b_outside };
  Tag tag = Tag::b_outside;
  long level = 0;  // a_level only
  Nat i;           // base: the coordinate itself; a_level: landing base index
  Nat base_key;    // a_level: chain value after the first m letters
  std::vector<long> tail_letter_count;  // a_level: letter multiplicities in the tail
};

// Walks the preimage-value chain downward. The cross clause makes the value
// chain unique, and with n > j the landing (level, i) is unique too, so the
// classification is well-defined. Letters above the first m steps are unique
// because no two maps agree at arguments >= m.
template <class S>
CoordClass classify_coordinate(const Family& fam, const WitnessPlan<S>& plan, const Nat& k) {
  if (k < 1) throw std::invalid_argument("coordinate must be >= 1");
  CoordClass out;
  if (k <= plan.j) {
    out.tag = CoordClass::Tag::base;
    out.i = k;
    return out;
  }
  std::vector<Nat> chain{k};
  std::vector<int> letters;  // letters[s]: unique letter of step s+1, or 0 if ambiguous
  const long maxsteps = plan.L * plan.n;
  for (long s = 1; s <= maxsteps; ++s) {
    const Nat cur = chain.back();
    Nat u;
    int letter = 0;
    bool found = false;
    for (long idx = 0; idx < fam.t(); ++idx) {
      auto pre = fam.maps()[static_cast<std::size_t>(idx)].preimage(cur);
      if (!pre) continue;
      if (!found) {
        u = *pre;
        letter = static_cast<int>(idx + 1);
        found = true;
      } else if (*pre != u) {
        throw exactness_error("preimage values disagree at coordinate " + cur.str() +
                              ": the maps are not almost disjoint");
      } else {
        letter = 0;  // multiple letters; only possible below the threshold m
      }
    }
    if (!found) return out;  // chain ends above the base window: outside coordinate
    chain.push_back(u);
    letters.push_back(letter);
    if (u <= plan.j && s % plan.n == 0) {
      out.tag = CoordClass::Tag::a_level;
      out.level = s / plan.n;
      out.i = u;
      out.base_key = chain[static_cast<std::size_t>(s - plan.m)];
      out.tail_letter_count.assign(static_cast<std::size_t>(fam.t()), 0);
      for (long q = 0; q < s - plan.m; ++q) {
        if (letters[static_cast<std::size_t>(q)] == 0)
          throw exactness_error("ambiguous tail letter above the disjointness threshold");
        ++out.tail_letter_count[static_cast<std::size_t>(letters[static_cast<std::size_t>(q)] - 1)];
      }
      return out;
    }
  }
  return out;
}

// The value the plan assigns to a classified coordinate.
template <class S>
S assignment_value(const OperatorSpec<S>& op, const WitnessPlan<S>& plan, const CoordClass& cc) {
  switch (cc.tag) {
    case CoordClass::Tag::base:
      return plan.x.at(cc.i);
    case CoordClass::Tag::b_outside:
      return S(0);
    case CoordClass::Tag::a_level:
      break;
  }
  long i = to_long(cc.i, "landing index");
  S yi = plan.y.at(cc.i);
  if (yi == S(0)) return S(0);
  const auto& table = plan.base_tables[static_cast<std::size_t>(i - 1)];
  const ClassInfo<S>* cls = nullptr;
  auto it = std::lower_bound(table.classes.begin(), table.classes.end(), cc.base_key,
                             [](const ClassInfo<S>& c, const Nat& key) { return c.key < key; });
  if (it != table.classes.end() && it->key == cc.base_key) cls = &*it;
  if (!cls) throw exactness_error("classified coordinate has no base class with key " +
                                  cc.base_key.str());
  S tail_coeff(1);
  for (std::size_t q = 0; q < cc.tail_letter_count.size(); ++q)
    tail_coeff *= pow_scalar(op.coeffs[q], cc.tail_letter_count[q]);
  S class_sum = tail_coeff * cls->sum;
  S sharp = scalar_traits<S>::from_nat(plan.sharp(cc.level, i));
  return yi * pow_scalar(plan.lambda, -cc.level * plan.n) / (class_sum * sharp);
}

template <class S>
class Witness {
 public:
  Witness(OperatorSpec<S> op, WitnessPlan<S> plan, SparseSeq<S> seq, bool materialized)
      : op_(std::move(op)), plan_(std::move(plan)), seq_(std::move(seq)),
        materialized_(materialized) {}

  const OperatorSpec<S>& op() const { return op_; }
  const WitnessPlan<S>& plan() const { return plan_; }
  bool materialized() const { return materialized_; }

  const SparseSeq<S>& seq() const {
    if (!materialized_) throw witness_error("witness was not materialized within budget");
    return seq_;
  }

  // Classification route: independent of the materialized map.
  S at(const Nat& k) const {
    if (k <= plan_.j) return plan_.x.at(k);
    return assignment_value(op_, plan_, classify_coordinate(op_.fam, plan_, k));
  }

  // Fast route for inner verification loops.
  S at_fast(const Nat& k) const { return materialized_ ? seq_.at(k) : at(k); }

 private:
  OperatorSpec<S> op_;
  WitnessPlan<S> plan_;
  SparseSeq<S> seq_;
  bool materialized_ = false;
};

namespace detail {

// Exact per-level masses and the tail bound for a candidate n; returns
// approach error = sum of the L level masses.
template <class S>
S fill_masses(WitnessPlan<S>& plan) {
  plan.level_mass.assign(static_cast<std::size_t>(plan.L), S(0));
  plan.level_coords.assign(static_cast<std::size_t>(plan.L), Nat(0));
  plan.assigned_total = 0;
  S approach(0);
  for (long l = 1; l <= plan.L; ++l) {
    S mass(0);
    Nat coords(0);
    for (long i = 1; i <= plan.j; ++i) {
      S yi = plan.y.at(Nat(i));
      if (yi == S(0)) continue;
      Nat sharp_n = plan.sharp(l, i);
      coords += sharp_n;
      S sharp = scalar_traits<S>::from_nat(sharp_n);
      S term = pow_scalar(abs_val(yi), plan.p) *
               pow_scalar(plan.lambda, -plan.p * l * plan.n) / pow_scalar(sharp, plan.p) *
               pow_scalar(plan.s_factor, l * plan.n - plan.m) *
               plan.q_factor[static_cast<std::size_t>(i - 1)];
      mass += term;
    }
    plan.level_mass[static_cast<std::size_t>(l - 1)] = mass;
    plan.level_coords[static_cast<std::size_t>(l - 1)] = coords;
    plan.assigned_total += coords;
    approach += mass;
  }
  S q = pow_scalar(S(plan.gamma * plan.lambda), -plan.p * plan.n);
  S sup_y = sup_norm(plan.y).value;
  plan.tail_bound = S(plan.j) * pow_scalar(sup_y, plan.p) * pow_scalar(q, plan.L + 1) / (S(1) - q);
  return approach;
}

}  // namespace detail

template <class S>
Witness<S> build_witness(const OperatorSpec<S>& op, const SparseSeq<S>& x, const SparseSeq<S>& y,
                         const S& epsilon, long L, const Budget& budget = {}) {
  if (!(epsilon > S(0))) throw std::invalid_argument("epsilon must be positive");
  if (L < 1) throw std::invalid_argument("truncation depth L must be >= 1");

  WitnessPlan<S> plan;
  plan.t = op.fam.t();
  plan.m = op.fam.m();
  plan.p = op.p;
  plan.L = L;
  plan.epsilon = epsilon;
  plan.lambda = op.lambda;
  plan.x = x;
  plan.y = y;

  auto g = compute_gamma(op.fam, op.coeffs, budget);  // throws when the condition fails
  plan.gamma = g.gamma;
  if (!(plan.gamma * plan.lambda > S(1)))
    throw witness_error("gamma * lambda <= 1: level masses do not contract, no truncation depth works");
  S general_bound = S(4 * plan.t * plan.t) / plan.gamma;
  plan.theorem_path = plan.lambda > general_bound;

  Nat sup_index = std::max(x.max_support(), y.max_support());
  long supports = sup_index == 0 ? 0 : to_long(sup_index, "support index");
  // The general construction keeps the base window strictly past the
  // disjointness threshold. The single-map small-lambda route is the one shape
  // that works unpadded, and stays unpadded so minimal examples stay minimal.
  if (plan.t == 1 && !plan.theorem_path)
    plan.j = std::max(supports, 1L);
  else
    plan.j = std::max(supports, plan.m + 1);

  unsigned long long base_words = checked_word_count(plan.t, plan.m, budget);
  if (static_cast<unsigned long long>(plan.j) > budget.max_words / std::max(base_words, 1ull))
    throw budget_error("base window too wide for class table enumeration");
  plan.base_tables.reserve(static_cast<std::size_t>(plan.j));
  for (long i = 1; i <= plan.j; ++i)
    plan.base_tables.push_back(enumerate_classes(op.fam, op.coeffs, plan.m, Nat(i), budget));

  plan.s_factor = S(0);
  for (const S& c : op.coeffs) plan.s_factor += S(1) / pow_scalar(abs_val(c), plan.p);
  plan.q_factor.assign(static_cast<std::size_t>(plan.j), S(0));
  for (long i = 1; i <= plan.j; ++i) {
    S q(0);
    for (const auto& cls : plan.base_tables[static_cast<std::size_t>(i - 1)].classes) {
      if (cls.sum == S(0))
        throw exactness_error("zero class sum at base index " + std::to_string(i) +
                              " past the non-zero condition");
      q += S(1) / pow_scalar(abs_val(cls.sum), plan.p);
    }
    plan.q_factor[static_cast<std::size_t>(i - 1)] = q;
  }

  const S sup_y = sup_norm(y).value;
  long n0 = std::max({choose_n(plan.j, sup_y, plan.p, epsilon), plan.j + 1, plan.m + 1});
  bool sized = false;
  for (long n = n0; n <= n0 + 256; ++n) {
    plan.n = n;
    S approach = detail::fill_masses(plan);
    if (approach + plan.tail_bound < epsilon) {
      sized = true;
      break;
    }
  }
  if (!sized)
    throw witness_error("epsilon " + scalar_traits<S>::str(epsilon) +
                        " not reachable within the n growth cap");

  // Materialize when the assignment count and coordinate sizes stay modest.
  SparseSeq<S> seq;
  bool materialized = false;
  if (plan.assigned_total <= budget.max_materialize) {
    materialized = true;
    for (const auto& [k, v] : x.entries()) seq.set(k, v);
    unsigned long long bits_used = 0;
    const unsigned long long bit_cap = 1ull << 27;
    std::size_t inserted = 0;
    for (long l = 1; l <= plan.L && materialized; ++l) {
      for (long i = 1; i <= plan.j && materialized; ++i) {
        S yi = y.at(Nat(i));
        if (yi == S(0)) continue;
        S scale = yi * pow_scalar(plan.lambda, -l * plan.n) /
                  scalar_traits<S>::from_nat(plan.sharp(l, i));
        const auto& base = plan.base_tables[static_cast<std::size_t>(i - 1)];
        for_each_lifted_class(op.fam, op.coeffs, base, l * plan.n, budget,
                              [&](const Nat& key, const S& sum, std::size_t, const Word&) {
                                if (!materialized) return;
                                bits_used += boost::multiprecision::msb(key) + 1;
                                if (bits_used > bit_cap) {
                                  materialized = false;
                                  return;
                                }
                                seq.set(key, scale / sum);
                                ++inserted;
                              });
      }
    }
    if (materialized) {
      if (seq.support_size() != x.support_size() + static_cast<std::size_t>(inserted))
        throw exactness_error("assigned coordinates collide: level structure violated");
      Nat expected = plan.assigned_total;
      if (Nat(inserted) != expected)
        throw exactness_error("assignment count mismatch against the factored class counts");
    } else {
      seq = SparseSeq<S>{};
    }
  }

  return Witness<S>(op, std::move(plan), std::move(seq), materialized);
}

template <class S>
struct VerifyReport {
  long j = 0, n = 0, L = 0;
  bool base_exact = false;
  long base_checked = 0;
  S approach_error{}, target_error{}, tail_bound{}, epsilon{};
  bool approach_within_epsilon = false;
  bool target_within_epsilon = false;
  bool approach_direct_checked = false;
  bool target_direct_checked = false;
  long accessor_samples_checked = 0;
  // periodic verification extras
  long level_exact_up_to = 0;
  unsigned long long a_coords_checked = 0;
  bool a_levels_full = false;
  long b_coords_checked = 0;
  S level_mismatch_mass{};
  S level_mismatch_bound{};
  bool mismatch_within_bound = false;
  bool mismatch_direct_checked = false;
};

namespace detail {

// lambda^n * sum over words sigma of c_sigma * w(eval(sigma, k)), by direct
// word enumeration against the witness accessor.
template <class S>
S power_at(const OperatorSpec<S>& op, const Witness<S>& w, const Nat& k) {
  S acc(0);
  auto descend = [&](auto&& self, const Nat& v, const S& c, long depth) -> void {
    if (depth == w.plan().n) {
      S wv = w.at_fast(v);
      if (wv != S(0)) acc += c * wv;
      return;
    }
    for (std::size_t idx = 0; idx < op.coeffs.size(); ++idx)
      self(self, op.fam.maps()[idx](v), S(c * op.coeffs[idx]), depth + 1);
  };
  descend(descend, k, S(1), 0);
  return pow_scalar(op.lambda, w.plan().n) * acc;
}

}  // namespace detail

// Exactness checks for the transitivity half: the base mapping identity, the
// exact approach/target errors against their closed forms, and the tail bound.
// Any exactness failure is a hard error, never a report field.
template <class S>
VerifyReport<S> verify_witness(const OperatorSpec<S>& op, const SparseSeq<S>& x,
                               const SparseSeq<S>& y, const Witness<S>& w,
                               const Budget& budget = {}) {
  const WitnessPlan<S>& plan = w.plan();
  if (!(plan.x == x) || !(plan.y == y))
    throw std::invalid_argument("witness was built for different targets");

  VerifyReport<S> rep;
  rep.j = plan.j;
  rep.n = plan.n;
  rep.L = plan.L;
  rep.epsilon = plan.epsilon;

  unsigned long long words = checked_word_count(plan.t, plan.n, budget);
  if (static_cast<unsigned long long>(plan.j) > budget.max_terms / words)
    throw budget_error("base verification exceeds term budget");
  for (long k = 1; k <= plan.j; ++k) {
    S lhs = detail::power_at(op, w, Nat(k));
    if (lhs != y.at(Nat(k)))
      throw exactness_error("base mapping identity fails at coordinate " + std::to_string(k));
  }
  rep.base_checked = plan.j;
  rep.base_exact = true;

  for (long l = 1; l <= plan.L; ++l)
    rep.approach_error += plan.level_mass[static_cast<std::size_t>(l - 1)];
  for (long l = 1; l < plan.L; ++l)
    rep.target_error += plan.level_mass[static_cast<std::size_t>(l - 1)];
  rep.tail_bound = plan.tail_bound;
  rep.approach_within_epsilon = rep.approach_error + rep.tail_bound < plan.epsilon;
  rep.target_within_epsilon = rep.target_error < plan.epsilon;

  if (w.materialized()) {
    // dual route 1: |x - w|_p^p recomputed from the materialized coordinates
    S direct = lp_norm_pow(seq_axpy(S(-1), w.seq(), x), plan.p).value;
    if (direct != rep.approach_error)
      throw exactness_error("approach error mismatch between closed form and coordinates");
    rep.approach_direct_checked = true;

    // dual route 2: |(lambda T)^n w - y|_p^p recomputed by operator iteration
    unsigned long long cost = static_cast<unsigned long long>(w.seq().support_size()) *
                              static_cast<unsigned long long>(plan.n) *
                              static_cast<unsigned long long>(plan.t);
    if (cost <= budget.max_terms) {
      SparseSeq<S> it = iterate(op, w.seq(), plan.n);
      S direct_target = lp_norm_pow(seq_axpy(S(-1), y, it), plan.p).value;
      if (direct_target != rep.target_error)
        throw exactness_error("target error mismatch between closed form and iteration");
      rep.target_direct_checked = true;
    }

    // dual route 3: classification accessor against the materialized map
    std::size_t support = w.seq().support_size();
    std::size_t stride = support <= 2048 ? 1 : support / 2048;
    std::size_t idx = 0;
    for (const auto& [k, v] : w.seq().entries()) {
      if (idx++ % stride != 0) continue;
      if (w.at(k) != v)
        throw exactness_error("accessor route disagrees with materialized witness at " + k.str());
      ++rep.accessor_samples_checked;
    }
    for (long d = 1; d <= 8; ++d) {
      Nat k = Nat(plan.j) + d;
      if (w.at(k) != w.seq().at(k))
        throw exactness_error("accessor route disagrees just past the base window at " + k.str());
      ++rep.accessor_samples_checked;
    }
  }
  return rep;
}

// Periodicity checks on top of verify_witness (built with y = x): the exact
// reproduction identity on every assigned coordinate of levels 1..L-1, zero
// at outside coordinates, and the level-L truncation mismatch with its bound.
template <class S>
VerifyReport<S> verify_periodic(const OperatorSpec<S>& op, const SparseSeq<S>& x,
                                const Witness<S>& w, const Budget& budget = {}) {
  const WitnessPlan<S>& plan = w.plan();
  VerifyReport<S> rep = verify_witness(op, x, x, w, budget);

  unsigned long long words = checked_word_count(plan.t, plan.n, budget);
  unsigned long long terms_used = 0;
  rep.a_levels_full = true;
  for (long l = 1; l < plan.L && rep.a_levels_full; ++l) {
    for (long i = 1; i <= plan.j && rep.a_levels_full; ++i) {
      S yi = x.at(Nat(i));
      if (yi == S(0)) continue;
      S scale = yi * pow_scalar(plan.lambda, -l * plan.n) /
                scalar_traits<S>::from_nat(plan.sharp(l, i));
      const auto& base = plan.base_tables[static_cast<std::size_t>(i - 1)];
      for_each_lifted_class(
          op.fam, op.coeffs, base, l * plan.n, budget,
          [&](const Nat& key, const S& sum, std::size_t, const Word&) {
            if (!rep.a_levels_full) return;
            terms_used += words;
            if (terms_used > budget.max_terms) {
              rep.a_levels_full = false;
              return;
            }
            S expected = scale / sum;
            if (w.at_fast(key) != expected)
              throw exactness_error("assigned value mismatch at coordinate " + key.str());
            if (detail::power_at(op, w, key) != expected)
              throw exactness_error("reproduction identity fails at coordinate " + key.str());
            ++rep.a_coords_checked;
          });
    }
  }
  if (rep.a_levels_full) rep.level_exact_up_to = plan.L - 1;

  for (long d = 1; d <= 64; ++d) {
    Nat k = Nat(plan.j) + d;
    auto cc = classify_coordinate(op.fam, plan, k);
    if (cc.tag != CoordClass::Tag::b_outside) continue;
    if (detail::power_at(op, w, k) != S(0))
      throw exactness_error("outside coordinate " + k.str() + " is not invariant at zero");
    ++rep.b_coords_checked;
  }

  rep.level_mismatch_mass = plan.level_mass[static_cast<std::size_t>(plan.L - 1)];
  rep.level_mismatch_bound = S(plan.j) * pow_scalar(sup_norm(x).value, plan.p) *
                             pow_scalar(S(plan.gamma * plan.lambda), -plan.p * plan.L * plan.n);
  rep.mismatch_within_bound = !(rep.level_mismatch_mass > rep.level_mismatch_bound);

  if (w.materialized()) {
    unsigned long long cost = static_cast<unsigned long long>(w.seq().support_size()) *
                              static_cast<unsigned long long>(plan.n) *
                              static_cast<unsigned long long>(plan.t);
    if (cost <= budget.max_terms) {
      SparseSeq<S> full = iterate(op, w.seq(), plan.n);
      SparseSeq<S> diff = seq_axpy(S(-1), w.seq(), full);  // (lambda T)^n w - w
      if (lp_norm_pow(diff, plan.p).value != rep.level_mismatch_mass)
        throw exactness_error("truncation mismatch mass disagrees with closed form");
      std::size_t support = diff.support_size();
      std::size_t stride = support <= 4096 ? 1 : support / 1024;
      std::size_t idx = 0;
      for (const auto& [k, v] : diff.entries()) {
        if (idx++ % stride != 0) continue;
        auto cc = classify_coordinate(op.fam, plan, k);
        if (cc.tag != CoordClass::Tag::a_level || cc.level != plan.L)
          throw exactness_error("truncation mismatch leaks outside level " +
                                std::to_string(plan.L));
      }
      rep.mismatch_direct_checked = true;
    }
  }
  return rep;
}

template <class S>
struct PeriodicBuild {
  Witness<S> w;
  VerifyReport<S> report;
};

template <class S>
PeriodicBuild<S> build_periodic(const OperatorSpec<S>& op, const SparseSeq<S>& x,
                                const S& epsilon, long L, const Budget& budget = {}) {
  Witness<S> w = build_witness(op, x, x, epsilon, L, budget);
  VerifyReport<S> rep = verify_periodic(op, x, w, budget);
  return {std::move(w), std::move(rep)};
}

}  // namespace rolewicz
