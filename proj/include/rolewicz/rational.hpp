#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace rolewicz {

// Coordinate indices are unbounded: iterated index maps blow up doubly
// exponentially (pairing-based maps square the index per application).
using Nat = boost::multiprecision::cpp_int;
// Exact scalar, kept in lowest terms by the backend.
using Rat = boost::multiprecision::cpp_rational;

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// An exactness assertion failed: the constructed object violates an identity
// it is supposed to satisfy by design. Always a bug, never an input problem.
struct exactness_error : std::logic_error {
  explicit exactness_error(const std::string& what) : std::logic_error(what) {}
};

inline Nat parse_nat(const std::string& s) {
  if (s.empty()) throw config_error("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw config_error("bad integer literal: '" + s + "'");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw config_error("bad integer literal: '" + s + "'");
  return Nat(s);
}

inline std::string nat_str(const Nat& n) { return n.str(); }

// Accepts "p/q" or "p" with optional sign on either part; q must be non-zero.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_nat(s));
  Nat num = parse_nat(s.substr(0, slash));
  Nat den = parse_nat(s.substr(slash + 1));
  if (den == 0) throw config_error("zero denominator in '" + s + "'");
  if (den < 0) {  // the rational backend insists on canonical signs
    num = -num;
    den = -den;
  }
  return Rat(num, den);
}

// Lowest terms; integers render without the "/1".
inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Nat pow_nat(Nat base, unsigned long e) {
  Nat acc = 1;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

template <class S>
S pow_scalar(const S& base, long e) {
  if (e < 0) {
    if (base == S(0)) throw std::domain_error("negative power of zero");
    return S(1) / pow_scalar(base, -e);
  }
  S acc(1), b = base;
  unsigned long k = static_cast<unsigned long>(e);
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

template <class S>
S abs_val(const S& s) {
  return s < S(0) ? S(-s) : s;
}

// Denominators are kept positive by the backend, so these are plain floor/ceil.
inline Nat floor_rat(const Rat& r) {
  Nat q = numerator(r) / denominator(r);
  if (numerator(r) % denominator(r) != 0 && numerator(r) < 0) --q;
  return q;
}

inline Nat ceil_rat(const Rat& r) {
  Nat q = numerator(r) / denominator(r);
  if (numerator(r) % denominator(r) != 0 && numerator(r) > 0) ++q;
  return q;
}

// The library is templated on the scalar. Rat is the exact mode every
// guarantee is stated for; double is a diagnostic mode only.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rat from_rat(const Rat& r) { return r; }
  static Rat from_nat(const Nat& n) { return Rat(n); }
  static std::string str(const Rat& r) { return rat_str(r); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double from_rat(const Rat& r) { return r.convert_to<double>(); }
  static double from_nat(const Nat& n) { return n.convert_to<double>(); }
  static std::string str(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

// Safe narrowing for loop bounds that are mathematically small.
inline long to_long(const Nat& n, const char* what) {
  if (n > std::numeric_limits<long>::max() || n < std::numeric_limits<long>::min())
    throw budget_error(std::string(what) + " out of machine range: " + n.str());
  return n.convert_to<long>();
}

}  // namespace rolewicz
