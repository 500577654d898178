#pragma once

// Minimal error-free-transformation arithmetic (pairs of doubles, Dekker /
// Knuth style). Used where a recurrence value is needed to high relative
// accuracy although it is exponentially smaller than the intermediate terms
// that cancel to produce it, e.g. the residue numerator of an exponentially
// small spectral weight. Roughly doubles the effective mantissa; absolute
// accuracy ~ eps^2 times the largest intermediate.

#include <cmath>

namespace rtl::detail {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  DD(double h) : hi(h) {}
  DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return DD(s, (a - (s - bb)) + (b - bb));
}

inline DD quick_two_sum(double a, double b) {  // requires |a| >= |b|
  const double s = a + b;
  return DD(s, b - (s - a));
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return DD(p, std::fma(a, b, -p));
}

inline DD dd_add(const DD& x, const DD& y) {
  DD s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD dd_neg(const DD& x) { return DD(-x.hi, -x.lo); }

inline DD dd_sub(const DD& x, const DD& y) { return dd_add(x, dd_neg(y)); }

inline DD dd_mul(const DD& x, const DD& y) {
  DD p = two_prod(x.hi, y.hi);
  p.lo += x.hi * y.lo + x.lo * y.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD dd_mul(double a, const DD& y) { return dd_mul(DD(a), y); }

inline DD dd_div(const DD& x, const DD& y) {
  const double q1 = x.hi / y.hi;
  const DD r = dd_sub(x, dd_mul(q1, y));
  const double q2 = r.hi / y.hi;
  return quick_two_sum(q1, q2);
}

}  // namespace rtl::detail
