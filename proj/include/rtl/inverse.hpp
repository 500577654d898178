#pragma once

// Inverse spectral transform. Primary route: peel the Weyl function as a
// terminating T-fraction f(z) = 1/(z - a - b z g(z)), with the remainder g
// kept in pole-residue form throughout (no polynomial coefficients are ever
// formed). Independent route: recover the recurrence coefficients from
// Laurent orthogonality of the P_n over the discrete measure.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rtl/core.hpp"
#include "rtl/detail/log_weyl.hpp"
#include "rtl/direct.hpp"
#include "rtl/errors.hpp"

namespace rtl {

namespace detail {

// Weights below this floor are rejected rather than silently deflated;
// long-time reconstruction must use the flow module's log-space path.
inline constexpr double kWeightFloor = 1e-250;

inline void check_weight_floor(const std::vector<double>& w, const char* where) {
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] < kWeightFloor) throw DegenerateWeight(j + 1, where);
}

}  // namespace detail

struct PeelResult {
  double a = 0.0;
  double b = 0.0;
  WeylFunction remainder;
};

/// One T-fraction peel: given f in W_n (n >= 2), produce a, b > 0 and
/// g in W_{n-1} with f(z) = 1/(z - a - b z g(z)).
///   a = (sum w_j/lambda_j)^{-1}
///   b = sum w_j lambda_j - a
///   poles of g  = zeros of f (one per pole gap, by interlacing)
///   residues of g = -1/(b lambda*_j f'(lambda*_j))
inline PeelResult tfraction_peel_step(const WeylFunction& f) {
  const std::size_t n = f.size();
  if (n < 2)
    throw ValidationError("PeelUnderflow", "peel step requires at least two poles");
  detail::check_weight_floor(f.residues, "tfraction_peel_step");

  double inv_moment = 0.0;  // sum w/lambda
  double first_moment = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    inv_moment += f.residues[j] / f.poles[j];
    first_moment += f.residues[j] * f.poles[j];
  }
  const double a = 1.0 / inv_moment;
  const double b = first_moment - a;
  if (!(a > 0.0) || !std::isfinite(a)) throw NonPositiveCoefficient('a', a);
  if (!(b > 0.0) || !std::isfinite(b)) throw NonPositiveCoefficient('b', b);

  std::vector<double> zeros(n - 1);
  std::vector<double> residues(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    // f decreases from +inf to -inf across the gap and has a single zero in it
    double lo = f.poles[j];
    double hi = f.poles[j + 1];
    double z;
    const double at_lo = weyl_eval(f, std::nextafter(lo, hi));
    const double at_hi = weyl_eval(f, std::nextafter(hi, lo));
    if (at_lo <= 0.0) {
      z = std::nextafter(lo, hi);  // zero hugs the left pole below resolution
    } else if (at_hi >= 0.0) {
      z = std::nextafter(hi, lo);
    } else {
      lo = std::nextafter(lo, hi);
      hi = std::nextafter(hi, lo);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = weyl_eval(f, mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        (fm > 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * hi) break;
      }
      z = 0.5 * (lo + hi);
      for (int it = 0; it < 2; ++it) {  // Newton polish, clamped to the gap
        const double d = weyl_derivative(f, z);
        if (d == 0.0) break;
        const double next = z - weyl_eval(f, z) / d;
        if (next > f.poles[j] && next < f.poles[j + 1] && std::isfinite(next))
          z = next;
        else
          break;
      }
    }
    zeros[j] = z;
    const double deriv = weyl_derivative(f, z);
    residues[j] = -1.0 / (b * z * deriv);
    if (!(residues[j] > 0.0) || !std::isfinite(residues[j]))
      throw BracketFailure(f.poles[j], f.poles[j + 1],
                           "zero of the Weyl function too close to a pole");
  }
  return PeelResult{a, b, make_weyl_function(std::move(zeros), std::move(residues))};
}

/// Full inverse transform by repeated peeling; the final member of W_1 has
/// a single pole, which is a_N. The peel cascade runs with log-domain
/// residues: the intermediate residues decay like ratios of consecutive
/// weights, and the zeros of f may hug poles closer than double resolution
/// even for inputs well above the weight floor.
inline BidiagonalPencil inverse_transform(const SpectralData& s) {
  const WeylFunction f = make_weyl_function(s.lambda, s.w);
  detail::check_weight_floor(f.residues, "inverse_transform");
  const detail::LogPencil lp =
      detail::inverse_transform_log(detail::log_weyl_from(to_spectral(f)));
  BidiagonalPencil p;
  p.a = lp.a;
  p.b.resize(lp.log_b.size());
  for (std::size_t i = 0; i < p.b.size(); ++i) p.b[i] = std::exp(lp.log_b[i]);
  validate_pencil(p);
  return p;
}

/// Independent inverse route: build the monic recurrence polynomials on the
/// nodes and extract the coefficients from the inner products
/// <f,g>_k = sum_j f(l_j) g(l_j) w_j / l_j^k:
///   a_n = <P_{n-1},P_{n-1}>_{n-1} / <P_{n-1},P_{n-1}>_n
///   b_n = <P_n,P_n>_n / <P_{n-1},P_{n-1}>_{n-1}
/// The node values of P_k shrink by near-total cancellation wherever the
/// associated weight is exponentially small, so the table and the inner
/// products run in compensated arithmetic.
inline BidiagonalPencil inverse_transform_stieltjes(const SpectralData& s) {
  using detail::DD;
  const WeylFunction f = make_weyl_function(s.lambda, s.w);
  detail::check_weight_floor(f.residues, "inverse_transform_stieltjes");
  const std::size_t n = f.size();
  const std::vector<double>& nodes = f.poles;
  const std::vector<double>& w = f.residues;

  BidiagonalPencil p;
  p.a.reserve(n);
  p.b.reserve(n - 1);

  std::vector<DD> prev(n, DD(0.0));      // P_{k-1} on the nodes
  std::vector<DD> cur(n, DD(1.0));       // P_k on the nodes
  std::vector<DD> inv_pow(n, DD(1.0));   // lambda_j^{-k}
  std::vector<DD> inv_node(n);
  for (std::size_t j = 0; j < n; ++j) inv_node[j] = detail::dd_div(DD(1.0), DD(nodes[j]));
  DD norm_prev(0.0);                     // <P_{k-1},P_{k-1}>_{k-1}
  DD a_dd(0.0), b_prev_dd(0.0);

  for (std::size_t k = 1; k <= n; ++k) {
    DD norm_k1(0.0), norm_k(0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const DD t = detail::dd_mul(detail::dd_mul(cur[j], cur[j]),
                                  detail::dd_mul(w[j], inv_pow[j]));
      norm_k1 = detail::dd_add(norm_k1, t);
      norm_k = detail::dd_add(norm_k, detail::dd_mul(t, inv_node[j]));
    }
    if (!(norm_k1.value() > 0.0) || !std::isfinite(norm_k1.value()) ||
        norm_k1.value() < 1e-280)
      throw ZeroNorm(k);
    a_dd = detail::dd_div(norm_k1, norm_k);
    p.a.push_back(a_dd.value());
    if (k > 1) {
      b_prev_dd = detail::dd_div(norm_k1, norm_prev);
      p.b.push_back(b_prev_dd.value());
    }
    norm_prev = norm_k1;

    if (k == n) break;
    for (std::size_t j = 0; j < n; ++j) {
      const DD z(nodes[j]);
      const DD next = detail::dd_sub(
          detail::dd_mul(detail::dd_sub(z, a_dd), cur[j]),
          (k >= 2) ? detail::dd_mul(b_prev_dd, detail::dd_mul(z, prev[j]))
                   : DD(0.0));
      prev[j] = cur[j];
      cur[j] = next;
      inv_pow[j] = detail::dd_mul(inv_pow[j], inv_node[j]);
    }
  }
  validate_pencil(p);
  return p;
}

}  // namespace rtl
