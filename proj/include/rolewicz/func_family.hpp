#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace rolewicz {

struct family_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 1-based Cantor pairing: alpha(1,1)=1, strictly increasing in each argument.
inline Nat pairing(const Nat& i, const Nat& j) {
  if (i < 1 || j < 1) throw std::invalid_argument("pairing arguments must be >= 1");
  Nat s = i + j - 2;
  return s * (s + 1) / 2 + i;
}

inline std::pair<Nat, Nat> unpair(const Nat& v) {
  if (v < 1) throw std::invalid_argument("unpair argument must be >= 1");
  Nat w = boost::multiprecision::sqrt(Nat(8) * v - 7);
  Nat s = (w - 1) / 2;
  while (s > 0 && s * (s + 1) / 2 >= v) --s;
  while ((s + 1) * (s + 2) / 2 < v) ++s;
  Nat i = v - s * (s + 1) / 2;
  Nat j = s + 2 - i;
  return {i, j};
}

// Strictly increasing map on positive integers with f(k) > k, in one of a few
// closed forms. f(k) > k is required throughout: an identity-like map admits
// no chaotic scalar multiple and breaks the level structure f_sigma(k) >= k+|sigma|.
class IncreasingMap {
 public:
  enum class Kind { shift, interleaved, affine, ceil, patched };

  // f(k) = k + d, d >= 1
  static IncreasingMap shift(long d) {
    if (d < 1) throw std::invalid_argument("shift distance must be >= 1");
    IncreasingMap f;
    f.kind_ = Kind::shift;
    f.a_ = 1;
    f.b_ = d;
    f.d_ = d;
    return f;
  }

  // f(k) = t*k + (i-1); the i-th of t maps with pairwise disjoint ranges.
  // t = 1 would be the identity and is rejected.
  static IncreasingMap interleaved(long t, long i) {
    if (t < 2) throw std::invalid_argument("interleaved needs t >= 2");
    if (i < 1 || i > t) throw std::invalid_argument("interleaved needs 1 <= i <= t");
    IncreasingMap f;
    f.kind_ = Kind::interleaved;
    f.a_ = t;
    f.b_ = i - 1;
    f.t_ = t;
    f.i_ = i;
    return f;
  }

  // f(k) = a*k + b with a >= 1. When a >= 2 and b is negative enough, the
  // first few arguments violate f(k) > k; such a map is deficient there and
  // only usable under a patch whose overrides cover those arguments.
  static IncreasingMap affine(const Nat& a, const Nat& b) {
    if (a < 1) throw std::invalid_argument("affine slope must be >= 1");
    if (a == 1 && b < 1) throw std::invalid_argument("affine map with unit slope needs b >= 1");
    IncreasingMap f;
    f.kind_ = Kind::affine;
    f.a_ = a;
    f.b_ = b;
    if (a + b < 2) f.deficient_max_ = (-b) / (a - 1);  // largest k with a*k + b <= k
    return f;
  }

  // f(k) = pairing(k, ceil(c*k)) for rational c > 1.
  static IncreasingMap ceil_pair(const Rat& c) {
    if (c <= 1) throw std::invalid_argument("ceil-pair map needs c > 1");
    IncreasingMap f;
    f.kind_ = Kind::ceil;
    f.core_ceil_ = true;
    f.cp_ = numerator(c);
    f.cq_ = denominator(c);
    return f;
  }

  // Finite overrides (k, v) on top of a closed-form base. Redundant overrides
  // are dropped; nested patches are flattened (outer wins).
  static IncreasingMap patched(IncreasingMap base, std::vector<std::pair<Nat, Nat>> overrides) {
    if (base.kind_ == Kind::patched) {
      for (const auto& o : base.overrides_) {
        bool shadowed = false;
        for (const auto& n : overrides) shadowed = shadowed || n.first == o.first;
        if (!shadowed) overrides.push_back(o);
      }
      IncreasingMap inner = *base.base_;  // copy first: base.base_ dies on assignment
      base = std::move(inner);
    }
    std::sort(overrides.begin(), overrides.end());
    for (std::size_t q = 1; q < overrides.size(); ++q)
      if (overrides[q].first == overrides[q - 1].first)
        throw std::invalid_argument("duplicate override key " + overrides[q].first.str());
    std::vector<std::pair<Nat, Nat>> kept;
    for (const auto& [k, v] : overrides) {
      if (k < 1) throw std::invalid_argument("override key must be >= 1");
      if (k <= base.deficient_max_ || v != base.eval_base(k)) kept.emplace_back(k, v);
    }
    if (kept.empty()) return base;

    IncreasingMap f;
    f.kind_ = Kind::patched;
    f.core_ceil_ = base.core_ceil_;
    f.a_ = base.a_;
    f.b_ = base.b_;
    f.cp_ = base.cp_;
    f.cq_ = base.cq_;
    f.base_ = std::make_shared<IncreasingMap>(base);
    f.overrides_ = std::move(kept);
    for (Nat k = 1; k <= base.deficient_max_; ++k)
      if (!f.find_override(k))
        throw std::invalid_argument("base map violates f(k) > k at k = " + k.str() +
                                    " and needs an override there");
    for (const auto& [k, v] : f.overrides_) {
      if (v <= k) throw std::invalid_argument("override violates f(k) > k at k = " + k.str());
      if (k > 1 && f(k - 1) >= v)
        throw std::invalid_argument("override breaks monotonicity at k = " + k.str());
      if (f(k + 1) <= v)
        throw std::invalid_argument("override breaks monotonicity at k = " + k.str());
    }
    return f;
  }

  Nat operator()(const Nat& k) const {
    if (k < 1) throw std::invalid_argument("map argument must be >= 1");
    if (const Nat* v = find_override(k)) return *v;
    return eval_base(k);
  }

  // Exact inverse on the map's range.
  std::optional<Nat> preimage(const Nat& v) const {
    for (const auto& [k, ov] : overrides_)
      if (ov == v) return k;
    auto k = preimage_base(v);
    if (k && find_override(*k)) return std::nullopt;  // base value shadowed
    return k;
  }

  Nat eval_base(const Nat& k) const {
    if (!core_ceil_) {
      if (k <= deficient_max_)
        throw family_error("map violates f(k) > k at k = " + k.str() + "; patch it there");
      return a_ * k + b_;
    }
    Nat g = (cp_ * k + cq_ - 1) / cq_;  // ceil(c*k), positive operands
    return pairing(k, g);
  }

  std::optional<Nat> preimage_base(const Nat& v) const {
    if (v < 1) return std::nullopt;
    if (!core_ceil_) {
      Nat w = v - b_;
      if (w < a_ || w % a_ != 0) return std::nullopt;
      Nat k = w / a_;
      if (k <= deficient_max_) return std::nullopt;
      return k;
    }
    auto [i, j] = unpair(v);
    if ((cp_ * i + cq_ - 1) / cq_ == j) return i;
    return std::nullopt;
  }

  bool has_override(const Nat& k) const { return find_override(k) != nullptr; }

  // Largest argument where the (unpatched) map violates f(k) > k; 0 when none.
  const Nat& deficient_max() const { return deficient_max_; }

  Kind kind() const { return kind_; }
  bool is_ceil_core() const { return core_ceil_; }
  const Nat& a() const { return a_; }
  const Nat& b() const { return b_; }
  Rat c() const { return Rat(cp_, cq_); }
  long shift_d() const { return d_; }
  long inter_t() const { return t_; }
  long inter_i() const { return i_; }
  const IncreasingMap& base() const {
    if (!base_) throw std::logic_error("not a patched map");
    return *base_;
  }
  const std::vector<std::pair<Nat, Nat>>& overrides() const { return overrides_; }

  // Semantic identity (kind tags aside): same core and same overrides.
  bool same_map(const IncreasingMap& o) const {
    if (core_ceil_ != o.core_ceil_ || overrides_ != o.overrides_) return false;
    return core_ceil_ ? (cp_ * o.cq_ == o.cp_ * cq_) : (a_ == o.a_ && b_ == o.b_);
  }

 private:
  IncreasingMap() = default;
  const Nat* find_override(const Nat& k) const {
    auto it = std::lower_bound(overrides_.begin(), overrides_.end(), k,
                               [](const auto& p, const Nat& key) { return p.first < key; });
    if (it != overrides_.end() && it->first == k) return &it->second;
    return nullptr;
  }

  Kind kind_{Kind::shift};
  bool core_ceil_{false};
  Nat deficient_max_{0};
  Nat a_{1}, b_{1};
  Nat cp_{2}, cq_{1};
  long d_{1}, t_{0}, i_{0};
  std::shared_ptr<const IncreasingMap> base_;
  std::vector<std::pair<Nat, Nat>> overrides_;
};

enum class MStatus { exact, horizon_bounded };

// One same-argument range agreement f_fi(k) = f_gj(k).
struct AgreementRec {
  std::size_t fi, gj;
  Nat k, value;
};

struct RangeWitness {
  std::size_t fi, gj;
  Nat k, kp, value;
};

struct RangeReport {
  bool disjoint;
  bool exact;  // when disjoint: whether that was proved rather than horizon-scanned
  std::optional<RangeWitness> witness;
};

namespace detail {

struct PairAnalysis {
  std::vector<Nat> agreements;  // same-argument agreement indices, sorted
  bool exact = true;
  struct Violation {
    Nat k, kp, value;
  };
  std::optional<Violation> violation;  // cross equality f(k) = g(k'), k != k'
  bool infinite_agreements = false;
};

// Decide almost-disjointness of a pair exactly where the closed forms permit:
//  - affine vs affine: solutions of a1*k + b1 = a2*k' + b2 exist iff
//    gcd(a1,a2) | (b2-b1); when they exist and the maps differ, infinitely many
//    are off-diagonal, so the pair is rejected. Otherwise there are none at all.
//  - ceil vs ceil: the pairing is injective in its first argument, so cross
//    equalities are impossible; agreements need |c-d|*k <= 1.
//  - mixed: agreements need a*k + b >= 2k^2 (exact finite scan); cross
//    equalities are only excluded up to the horizon.
// Finite overrides are fixed up exactly in every case.
inline PairAnalysis analyze_pair(const IncreasingMap& F, const IncreasingMap& G, long horizon) {
  PairAnalysis out;
  std::set<Nat> candidates;  // same-argument agreement candidates, verified below

  const bool fc = F.is_ceil_core(), gc = G.is_ceil_core();
  if (!fc && !gc) {
    const Nat &aF = F.a(), &bF = F.b(), &aG = G.a(), &bG = G.b();
    if (aF == aG && bF == bG) {
      out.infinite_agreements = true;  // identical cores differ only at finitely many overrides
      return out;
    }
    Nat g = boost::multiprecision::gcd(aF, aG);
    if ((bG - bF) % g == 0) {
      // Infinitely many base collisions; report the first one not masked by an override.
      Nat k = 1;
      if (bG + aG > bF + aF) {
        Nat need = bG + aG - bF;  // smallest k with f(k) >= g(1)
        k = (need + aF - 1) / aF;
        if (k < 1) k = 1;
      }
      long guard = 0;
      for (;; ++k) {
        if (++guard > 4000000) throw exactness_error("affine collision search did not terminate");
        if (F.has_override(k)) continue;
        Nat v = F.eval_base(k);
        Nat w = v - bG;
        if (w < aG || w % aG != 0) continue;
        Nat kp = w / aG;
        if (G.has_override(kp)) continue;
        if (kp != k) {
          out.violation = PairAnalysis::Violation{k, kp, v};
          return out;
        }
      }
    }
    // no base solutions at all; agreements can only come from overrides
  } else if (fc && gc) {
    Nat cross =
        numerator(F.c()) * denominator(G.c()) - numerator(G.c()) * denominator(F.c());
    if (cross == 0) {
      out.infinite_agreements = true;
      return out;
    }
    // |c - d| * k > 1 forces distinct ceilings; scan the finite window.
    Nat bound = denominator(F.c()) * denominator(G.c()) / abs_val(cross) + 1;
    if (bound > 2000000)
      throw budget_error("ceil ratios are too close: the agreement window extends to k = " +
                         nat_str(bound));
    for (Nat k = 1; k <= bound; ++k)
      if (F.eval_base(k) == G.eval_base(k)) candidates.insert(k);
    // pairing is injective in the first argument: no cross equalities from bases
  } else {
    const IncreasingMap& A = fc ? G : F;  // affine side
    const IncreasingMap& C = fc ? F : G;  // ceil side
    // agreements: ceil-pair values are >= 2k^2, so a*k + b >= 2k^2 bounds the scan
    for (Nat k = 1; 2 * k * k <= A.a() * k + A.b(); ++k) {
      if (k > 2000000)
        throw budget_error("affine slope too large for the mixed agreement scan");
      if (A.eval_base(k) == C.eval_base(k)) candidates.insert(k);
    }
    // cross equalities: only excluded up to the horizon
    out.exact = false;
    for (Nat kp = 1; kp <= horizon; ++kp) {
      if (C.has_override(kp)) continue;
      Nat v = C.eval_base(kp);
      auto k = A.preimage_base(v);
      if (!k || A.has_override(*k) || *k == kp) continue;
      if (fc)
        out.violation = PairAnalysis::Violation{kp, *k, v};
      else
        out.violation = PairAnalysis::Violation{*k, kp, v};
      return out;
    }
  }

  // Override fix-ups, exact in all cases.
  auto fix_up = [&](const IncreasingMap& P, const IncreasingMap& Q, bool p_is_first) {
    for (const auto& [k, v] : P.overrides()) {
      candidates.insert(k);
      auto kp = Q.preimage(v);
      if (kp && *kp != k) {
        out.violation = p_is_first ? PairAnalysis::Violation{k, *kp, v}
                                   : PairAnalysis::Violation{*kp, k, v};
        return false;
      }
    }
    return true;
  };
  if (!fix_up(F, G, true)) return out;
  if (!fix_up(G, F, false)) return out;

  for (const Nat& k : candidates)
    if (F(k) == G(k)) out.agreements.push_back(k);
  return out;
}

}  // namespace detail

// A tuple of pairwise almost-disjoint increasing maps together with the
// disjointness threshold m: all same-argument agreements sit below m, and
// cross equalities f_i(k) = f_j(k') with k != k' are ruled out (exactly, or up
// to the construction horizon for mixed closed forms).
class Family {
 public:
  const std::vector<IncreasingMap>& maps() const { return maps_; }
  long t() const { return static_cast<long>(maps_.size()); }
  long m() const { return m_; }
  MStatus m_status() const { return m_status_; }
  long horizon() const { return horizon_; }
  const std::vector<AgreementRec>& agreements() const { return agreements_; }

  Nat eval(std::size_t map_index, const Nat& k) const { return maps_.at(map_index)(k); }

  // Test hook: builds a Family without any validation, with a caller-asserted
  // m. Exists so property sweeps can be pointed at deliberately broken inputs;
  // never used on a user path.
  static Family unchecked(std::vector<IncreasingMap> maps, long m,
                          MStatus status = MStatus::exact) {
    Family f;
    f.maps_ = std::move(maps);
    f.m_ = m;
    f.m_status_ = status;
    f.horizon_ = 0;
    return f;
  }

 private:
  Family() = default;
  friend Family make_family(std::vector<IncreasingMap>, long);

  std::vector<IncreasingMap> maps_;
  long m_ = 1;
  MStatus m_status_ = MStatus::exact;
  long horizon_ = 0;
  std::vector<AgreementRec> agreements_;
};

inline Family make_family(std::vector<IncreasingMap> maps, long horizon = 4096) {
  if (maps.empty()) throw family_error("family needs at least one map");
  if (horizon < 16) horizon = 16;
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (maps[i].deficient_max() > 0)
      throw family_error("map " + std::to_string(i + 1) + " violates f(k) > k at k <= " +
                         maps[i].deficient_max().str() + "; wrap it in a patch");

  Family fam;
  Nat max_agreement = 0;
  bool all_exact = true;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    for (std::size_t j = i + 1; j < maps.size(); ++j) {
      if (maps[i].same_map(maps[j]))
        throw family_error("maps " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " are identical");
      auto pa = detail::analyze_pair(maps[i], maps[j], horizon);
      if (pa.infinite_agreements)
        throw family_error("maps " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " agree at infinitely many arguments");
      if (pa.violation)
        throw family_error("maps " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " overlap off-diagonal: f(" + pa.violation->k.str() + ") = g(" +
                           pa.violation->kp.str() + ") = " + pa.violation->value.str());
      all_exact = all_exact && pa.exact;
      for (const Nat& k : pa.agreements) {
        fam.agreements_.push_back({i, j, k, maps[i](k)});
        if (k > max_agreement) max_agreement = k;
      }
    }
  }
  if (max_agreement > 1000000)
    throw budget_error("agreement index " + max_agreement.str() +
                       " makes the disjointness threshold unusably large");

  fam.maps_ = std::move(maps);
  fam.m_ = 1 + to_long(max_agreement, "disjointness threshold");
  fam.m_status_ = all_exact ? MStatus::exact : MStatus::horizon_bounded;
  fam.horizon_ = horizon;
  std::sort(fam.agreements_.begin(), fam.agreements_.end(),
            [](const AgreementRec& x, const AgreementRec& y) {
              return x.k < y.k || (x.k == y.k && std::tie(x.fi, x.gj) < std::tie(y.fi, y.gj));
            });
  return fam;
}

// Range disjointness, decided from the construction-time analysis: for a valid
// family the only possible range intersections are same-argument agreements.
inline RangeReport disjoint_ranges(const Family& fam) {
  if (fam.agreements().empty())
    return {true, fam.m_status() == MStatus::exact, std::nullopt};
  const AgreementRec& a = fam.agreements().front();
  return {false, true, RangeWitness{a.fi, a.gj, a.k, a.k, a.value}};
}

}  // namespace rolewicz
