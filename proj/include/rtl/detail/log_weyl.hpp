#pragma once

// Log-domain pole-residue machinery backing the flow module's long-time
// reconstruction. Residues are carried as normalized logs, so the T-fraction
// peel keeps full relative accuracy when the evolved weights span many
// hundreds of orders of magnitude (far beyond double range). Zeros that hug
// a pole closer than double resolution are refined by bisection in the log
// of the offset and consumed through that log, never through the rounded
// difference.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rtl/core.hpp"
#include "rtl/errors.hpp"

namespace rtl::detail {

inline double logsumexp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs)
    if (x > m) m = x;
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

struct LogWeyl {
  std::vector<double> poles;  // strictly increasing, positive
  std::vector<double> logw;   // log residues, normalized so logsumexp == 0

  std::size_t size() const { return poles.size(); }

  void normalize() {
    const double s = logsumexp(logw);
    for (double& x : logw) x -= s;
  }
};

inline LogWeyl log_weyl_from(const SpectralData& s) {
  LogWeyl f;
  f.poles = s.lambda;
  f.logw.resize(s.w.size());
  for (std::size_t j = 0; j < s.w.size(); ++j) f.logw[j] = std::log(s.w[j]);
  f.normalize();
  return f;
}

// Sign of f(z) = sum exp(logw_k)/(z - pole_k), combining the signed terms at
// the scale of the largest magnitude.
inline int log_weyl_sign(const LogWeyl& f, double z) {
  const std::size_t n = f.size();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double lm = f.logw[k] - std::log(std::fabs(z - f.poles[k]));
    if (lm > m) m = lm;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = z - f.poles[k];
    const double lm = f.logw[k] - std::log(std::fabs(d));
    s += (d > 0.0 ? 1.0 : -1.0) * std::exp(lm - m);
  }
  return (s > 0.0) - (s < 0.0);
}

// Sign of f at pole_end + side * exp(u), with the hugged pole's term formed
// from u directly (exp(u) may underflow as a double).
inline int log_weyl_sign_at_offset(const LogWeyl& f, std::size_t end, int side,
                                   double u) {
  const std::size_t n = f.size();
  const double z = f.poles[end] + side * std::exp(u);
  double m = -std::numeric_limits<double>::infinity();
  std::vector<double> lms(n);
  for (std::size_t k = 0; k < n; ++k) {
    lms[k] = (k == end) ? f.logw[k] - u
                        : f.logw[k] - std::log(std::fabs(z - f.poles[k]));
    if (lms[k] > m) m = lms[k];
  }
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double sgn = (k == end) ? side : (z - f.poles[k] > 0.0 ? 1.0 : -1.0);
    s += sgn * std::exp(lms[k] - m);
  }
  return (s > 0.0) - (s < 0.0);
}

struct GapZero {
  double z = 0.0;          // double representative of the zero
  int hug = 0;             // 0 interior, -1 hugs the left pole, +1 the right
  double log_delta = 0.0;  // ln distance to the hugged pole when hug != 0
};

// The single zero of f in (poles[j], poles[j+1]). f decreases from +inf to
// -inf across the gap endpoints, so the sign pattern locates it; when it sits
// within h0 of a pole the offset is bisected in log space.
inline GapZero find_gap_zero(const LogWeyl& f, std::size_t j) {
  const double lo_pole = f.poles[j];
  const double hi_pole = f.poles[j + 1];
  const double gap = hi_pole - lo_pole;
  if (!(gap > 0.0))
    throw BracketFailure(lo_pole, hi_pole,
                         "coincident poles in log-domain peel");
  const double h0 = 1e-3 * gap;
  const int s_lo = log_weyl_sign(f, lo_pole + h0);
  const int s_hi = log_weyl_sign(f, hi_pole - h0);

  if (s_lo > 0 && s_hi < 0) {
    double lo = lo_pole + h0, hi = hi_pole - h0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const int sm = log_weyl_sign(f, mid);
      if (sm == 0) { lo = hi = mid; break; }
      (sm > 0 ? lo : hi) = mid;
      if (hi - lo <= 1e-15 * hi) break;
    }
    return GapZero{0.5 * (lo + hi), 0, 0.0};
  }

  // Zero within h0 of a pole. side = -1: z = lo_pole + delta, f goes from
  // + (delta -> 0) to s_lo <= 0 at delta = h0. side = +1: z = hi_pole - delta,
  // f goes from - (delta -> 0) to s_hi >= 0 at delta = h0.
  const int side = (s_lo <= 0) ? -1 : +1;
  const std::size_t end = (side < 0) ? j : j + 1;
  const int offset_sign = (side < 0) ? +1 : -1;  // z relative to the pole
  const int inner_sign = (side < 0) ? +1 : -1;   // sign of f as delta -> 0

  double u_hi = std::log(h0);
  double u_lo = u_hi - 60.0;
  while (log_weyl_sign_at_offset(f, end, offset_sign, u_lo) != inner_sign) {
    u_hi = u_lo;
    u_lo -= 60.0;
    if (u_lo < -5000.0)
      throw BracketFailure(lo_pole, hi_pole,
                           "no sign change while approaching a hugged pole");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (u_lo + u_hi);
    const int sm = log_weyl_sign_at_offset(f, end, offset_sign, mid);
    if (sm == 0) { u_lo = u_hi = mid; break; }
    (sm == inner_sign ? u_lo : u_hi) = mid;
    if (u_hi - u_lo <= 1e-13) break;
  }
  const double u = 0.5 * (u_lo + u_hi);
  const double z = f.poles[end] + offset_sign * std::exp(u);
  return GapZero{z, side, u};
}

// ln|f'(z*)|; every term of f' is negative, so the magnitudes just add.
inline double log_abs_weyl_derivative(const LogWeyl& f, const GapZero& gz,
                                      std::size_t gap_index) {
  const std::size_t n = f.size();
  const std::size_t hugged =
      (gz.hug < 0) ? gap_index : (gz.hug > 0 ? gap_index + 1 : n);
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lnd = (k == hugged)
                           ? gz.log_delta
                           : std::log(std::fabs(gz.z - f.poles[k]));
    terms[k] = f.logw[k] - 2.0 * lnd;
  }
  return logsumexp(terms);
}

struct LogPeelResult {
  double a = 0.0;
  double log_b = 0.0;
  LogWeyl rest;
};

// One T-fraction peel in the log domain.
//   a    = (sum w/lambda)^{-1}
//   b    = [sum_{j<k} w_j w_k (l_k - l_j)^2/(l_j l_k)] / [sum w/lambda]
//   w*_j = -1/(b z*_j f'(z*_j))
// The b formula is the cancellation-free rearrangement of
// sum w l - (sum w/l)^{-1} under sum w = 1; every term is positive.
inline LogPeelResult peel_log(const LogWeyl& f) {
  const std::size_t n = f.size();
  if (n < 2)
    throw ValidationError("PeelUnderflow", "peel step requires at least two poles");

  std::vector<double> inv_terms(n);
  for (std::size_t k = 0; k < n; ++k)
    inv_terms[k] = f.logw[k] - std::log(f.poles[k]);
  const double den_log = logsumexp(inv_terms);
  const double a = std::exp(-den_log);

  std::vector<double> pair_terms;
  pair_terms.reserve(n * (n - 1) / 2);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      pair_terms.push_back(f.logw[j] + f.logw[k] +
                           2.0 * std::log(f.poles[k] - f.poles[j]) -
                           std::log(f.poles[j]) - std::log(f.poles[k]));
  const double log_b = logsumexp(pair_terms) - den_log;

  LogPeelResult out;
  out.a = a;
  out.log_b = log_b;
  out.rest.poles.resize(n - 1);
  out.rest.logw.resize(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const GapZero gz = find_gap_zero(f, j);
    out.rest.poles[j] = gz.z;
    out.rest.logw[j] =
        -(log_b + std::log(gz.z) + log_abs_weyl_derivative(f, gz, j));
    if (j > 0 && !(out.rest.poles[j] > out.rest.poles[j - 1]))
      throw BracketFailure(out.rest.poles[j - 1], out.rest.poles[j],
                           "consecutive zeros collapsed to one double");
  }
  out.rest.normalize();
  return out;
}

struct LogPencil {
  std::vector<double> a;
  std::vector<double> log_b;
};

inline LogPencil inverse_transform_log(LogWeyl f) {
  LogPencil out;
  const std::size_t n = f.size();
  out.a.reserve(n);
  out.log_b.reserve(n - 1);
  while (f.size() > 1) {
    LogPeelResult step = peel_log(f);
    out.a.push_back(step.a);
    out.log_b.push_back(step.log_b);
    f = std::move(step.rest);
  }
  out.a.push_back(f.poles[0]);
  return out;
}

}  // namespace rtl::detail
