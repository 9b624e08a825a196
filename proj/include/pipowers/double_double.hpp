#pragma once

// Error-free transformations and double-word arithmetic used by the far-field
// summation tiers. Relative error constants (in units of u^2, u = 2^-53) are
// the published bounds for these algorithms, rounded up.

#include <cmath>

namespace pipowers::dd {

inline constexpr double unit_roundoff = 0x1p-53;

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void fast_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

/// a*b = p + e exactly.
inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
#if defined(__FMA__) || defined(FP_FAST_FMA)
  e = std::fma(a, b, -p);
#else
  constexpr double split = 134217729.0;  // 2^27 + 1
  double ca = split * a, cb = split * b;
  double ahi = ca - (ca - a), alo = a - ahi;
  double bhi = cb - (cb - b), blo = b - bhi;
  e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
#endif
}

/// 1 - d*y, rounded once.
inline double residual(double d, double y) {
#if defined(__FMA__) || defined(FP_FAST_FMA)
  return std::fma(-d, y, 1.0);
#else
  double p, e;
  two_prod(d, y, p, e);
  return (1.0 - p) - e;
#endif
}

/// Accurate double-word + double-word; relative error <= 3u^2 + 13u^3.
inline DoubleDouble add(DoubleDouble x, DoubleDouble y) {
  double sh, sl, th, tl;
  two_sum(x.hi, y.hi, sh, sl);
  two_sum(x.lo, y.lo, th, tl);
  sl += th;
  fast_two_sum(sh, sl, sh, sl);
  sl += tl;
  DoubleDouble r;
  fast_two_sum(sh, sl, r.hi, r.lo);
  return r;
}

/// Double-word + double; relative error <= 2u^2.
inline DoubleDouble add(DoubleDouble x, double y) {
  double sh, sl;
  two_sum(x.hi, y, sh, sl);
  sl += x.lo;
  DoubleDouble r;
  fast_two_sum(sh, sl, r.hi, r.lo);
  return r;
}

/// Double-word * double-word; relative error <= 5u^2 (budgeted as 8u^2).
inline DoubleDouble mul(DoubleDouble x, DoubleDouble y) {
  double ch, cl;
  two_prod(x.hi, y.hi, ch, cl);
  double tl0 = x.lo * y.lo;
  double tl1 = x.hi * y.lo + tl0;
  cl += x.lo * y.hi + tl1;
  DoubleDouble r;
  fast_two_sum(ch, cl, r.hi, r.lo);
  return r;
}

/// 1/d for a double d as a double word; relative error <= 2u^2.
inline DoubleDouble reciprocal(double d) {
  double y = 1.0 / d;
  double e = residual(d, y);
  return {y, y * e};
}

}  // namespace pipowers::dd
