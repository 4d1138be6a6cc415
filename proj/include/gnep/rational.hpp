#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnep {

// Exact rational scalar used throughout the core. All equalities asserted by
// the solvers and checkers are exact comparisons on this type.
using Rational = mpq_class;

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

inline Rational rat(long long num, long long den = 1) {
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

// Parses "p/q", "p", or a decimal-free integer string. Used by the JSON layer.
inline Rational rat_from_string(const std::string& s) {
  mpq_class r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

inline std::string rat_to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline Rational rat_pow(const Rational& base, long exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("rat_pow: zero to a negative power");
    return rat(1) / rat_pow(base, -exp);
  }
  Rational out = 1, b = base;
  for (long e = exp; e > 0; e >>= 1) {
    if (e & 1) out *= b;
    b *= b;
  }
  return out;
}

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Nearest integer, halves away from zero.
inline long long round_half_away(double v) {
  return static_cast<long long>(v < 0 ? -std::floor(0.5 - v) : std::floor(0.5 + v));
}

}  // namespace gnep
