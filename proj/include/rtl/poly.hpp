#pragma once

// The two recurrence polynomial families attached to the pencil:
//   P_n(z) = (z - a_n) P_{n-1}(z) - b_{n-1} z P_{n-2}(z)   (top-left minors)
//   D_n(z) = (z - a_{N-n+1}) D_{n-1}(z) - b_{N-n+1} z D_{n-2}(z)  (bottom-right)
// plus zero isolation by interlacing brackets and bisection.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "rtl/core.hpp"
#include "rtl/errors.hpp"

namespace rtl {

/// values[n] holds the degree-n member of a recurrence family evaluated at
/// one point; values[0] is always 1.
struct RecurrenceSequence {
  std::vector<double> values;
};

/// All P_0..P_N at z.
inline RecurrenceSequence eval_P(const BidiagonalPencil& p, double z) {
  const std::size_t n = p.size();
  RecurrenceSequence seq;
  seq.values.resize(n + 1);
  seq.values[0] = 1.0;
  double prev2 = 0.0;  // P_{-1}
  double prev1 = 1.0;  // P_0
  for (std::size_t k = 1; k <= n; ++k) {
    const double bk = (k >= 2) ? p.b[k - 2] : 0.0;
    const double cur = (z - p.a[k - 1]) * prev1 - bk * z * prev2;
    seq.values[k] = cur;
    prev2 = prev1;
    prev1 = cur;
  }
  return seq;
}

/// All D_0..D_N at z, built from the bottom-right corner (D_1 = z - a_N).
inline RecurrenceSequence eval_Delta(const BidiagonalPencil& p, double z) {
  const std::size_t n = p.size();
  RecurrenceSequence seq;
  seq.values.resize(n + 1);
  seq.values[0] = 1.0;
  double prev2 = 0.0;
  double prev1 = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    // index N-k+1 in 1-based subscripts; b_{N-k+1} exists only for k >= 2
    const double ak = p.a[n - k];
    const double bk = (k >= 2) ? p.b[n - k] : 0.0;
    const double cur = (z - ak) * prev1 - bk * z * prev2;
    seq.values[k] = cur;
    prev2 = prev1;
    prev1 = cur;
  }
  return seq;
}

/// D_0..D_N and their z-derivatives at z (term-wise differentiation of the
/// recurrence).
inline std::pair<RecurrenceSequence, RecurrenceSequence>
eval_Delta_with_derivative(const BidiagonalPencil& p, double z) {
  const std::size_t n = p.size();
  RecurrenceSequence val, der;
  val.values.resize(n + 1);
  der.values.resize(n + 1);
  val.values[0] = 1.0;
  der.values[0] = 0.0;
  double v2 = 0.0, v1 = 1.0;
  double d2 = 0.0, d1 = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double ak = p.a[n - k];
    const double bk = (k >= 2) ? p.b[n - k] : 0.0;
    const double v = (z - ak) * v1 - bk * z * v2;
    const double d = v1 + (z - ak) * d1 - bk * (v2 + z * d2);
    val.values[k] = v;
    der.values[k] = d;
    v2 = v1; v1 = v;
    d2 = d1; d1 = d;
  }
  return {val, der};
}

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Bisection with the bracket's endpoint signs fixed by the caller; stops at
// relative interval width `rel` or 200 iterations. Near a zero the evaluated
// sign may be rounding noise, in which case the interval simply settles
// inside the noise band.
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, int sign_lo, double rel = 1e-14) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
    const int sm = sign_of(f(mid));
    if (sm == 0) return mid;
    if (sm == sign_lo)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= rel * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Zeros of the degree-n member of an interlacing family, given the sorted
/// zeros of the degree n-1 member. Each zero is bracketed by
/// (0, z_1), (z_j, z_{j+1}), (z_{n-1}, U) with U found by doubling
/// `upper_hint` until the (monic) polynomial is positive. The endpoint signs
/// inside each bracket are not evaluated but fixed by the interlacing
/// structure: the recurrence gives P_n = -b_{n-1} z P_{n-2} at a zero of
/// P_{n-1}, so the sign alternation (-1)^{n-j} is exact even where the
/// floating-point value is noise. Each zero is refined by bisection to
/// relative width 1e-14 and one Newton step when `derivative` is supplied.
inline std::vector<double> zeros_interlaced(
    const std::function<double(double)>& evaluate,
    const std::vector<double>& prev_zeros, double upper_hint,
    const std::function<double(double)>* derivative = nullptr) {
  const std::size_t n = prev_zeros.size() + 1;

  for (std::size_t j = 0; j + 1 < prev_zeros.size(); ++j)
    if (!(prev_zeros[j] < prev_zeros[j + 1]))
      throw BracketFailure(prev_zeros[j], prev_zeros[j + 1],
                           "previous zeros are not strictly increasing");
  if (!prev_zeros.empty() && !(prev_zeros.front() > 0.0))
    throw BracketFailure(0.0, prev_zeros.front(),
                         "previous zeros must be positive");

  double upper = std::max(upper_hint, 1.0);
  if (!prev_zeros.empty()) upper = std::max(upper, prev_zeros.back() * 2.0);
  int doublings = 0;
  while (evaluate(upper) <= 0.0) {
    upper *= 2.0;
    if (++doublings > 600)
      throw BracketFailure(upper_hint, upper, "no sign change above last zero");
  }

  std::vector<double> zeros(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = (j == 0) ? 0.0 : prev_zeros[j - 1];
    const double hi = (j + 1 == n) ? upper : prev_zeros[j];
    // sign of P_n between its zeros j+1 and j+2 (1-based) is (-1)^{n-(j+1)}
    const int right_sign = ((n - (j + 1)) % 2 == 0) ? +1 : -1;
    double z = detail::bisect(evaluate, lo, hi, -right_sign);
    if (derivative) {
      const double d = (*derivative)(z);
      if (d != 0.0) {
        const double polished = z - evaluate(z) / d;
        if (polished > lo && polished < hi && std::isfinite(polished))
          z = polished;
      }
    }
    zeros[j] = z;
  }
  return zeros;
}

}  // namespace rtl
