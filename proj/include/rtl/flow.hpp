#pragma once

// Analytic time evolution of the spectral data, the full trajectory solver
// (direct transform once, then per-time evolution + log-domain inverse), the
// asymptotic sorting-rate predictors, and the Newtonian change of variables.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rtl/core.hpp"
#include "rtl/detail/log_weyl.hpp"
#include "rtl/direct.hpp"
#include "rtl/errors.hpp"

namespace rtl {

enum class Direction { plus_infinity, minus_infinity };

namespace detail {

inline std::vector<double> flow_values(const std::vector<double>& lambda,
                                       const FlowSpec& F) {
  std::vector<double> out(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    out[j] = F(lambda[j]);
    if (!std::isfinite(out[j]))
      throw OverflowError("F(lambda_" + std::to_string(j + 1) + ") is not finite");
  }
  return out;
}

inline LogWeyl evolve_log(const LogWeyl& f0, const std::vector<double>& fvals,
                          double t) {
  LogWeyl f = f0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double shift = t * fvals[j];
    if (!std::isfinite(shift))
      throw OverflowError("t*F(lambda_" + std::to_string(j + 1) +
                          ") is not finite");
    f.logw[j] -= shift;
  }
  f.normalize();
  return f;
}

// Strictly monotone check for the named family; power with exponent 0
// would be constant on the spectrum.
inline void require_monotone(const FlowSpec& F) {
  if (F.kind == FlowSpec::Kind::power &&
      (F.exponent == 0.0 || !std::isfinite(F.exponent)))
    throw NonMonotoneFlow();
}

}  // namespace detail

/// Weights at time t: w_j(t) = w_j(0) e^{-t F(lambda_j)} / normalization,
/// computed in log space. Eigenvalues are constants of motion.
inline SpectralData evolve_weights(const SpectralData& s0, const FlowSpec& F,
                                   double t) {
  SpectralData checked = make_spectral_data(s0.lambda, s0.w);
  const std::vector<double> fvals = detail::flow_values(checked.lambda, F);
  detail::LogWeyl lw = detail::evolve_log(detail::log_weyl_from(checked), fvals, t);
  std::vector<double> w(lw.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = std::exp(lw.logw[j]);
    sum += w[j];
  }
  for (double& x : w) x /= sum;
  return SpectralData{std::move(checked.lambda), std::move(w)};
}

/// Solve the lattice on a time grid: one direct transform, then for every t
/// the evolved weights are peeled back to matrix data through the log-domain
/// path (each time independent of the others). Very small subdiagonal
/// entries may underflow to 0 in the returned samples at extreme times.
inline Trajectory solve_trajectory(const BidiagonalPencil& p0, const FlowSpec& F,
                                   const std::vector<double>& times,
                                   bool with_spectra = false) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("UnsortedTimes", "times must be strictly increasing");

  const SpectralData s0 = direct_transform(p0);
  const std::vector<double> fvals = detail::flow_values(s0.lambda, F);
  const detail::LogWeyl base = detail::log_weyl_from(s0);

  Trajectory traj;
  traj.times = times;
  traj.samples.reserve(times.size());
  if (with_spectra) traj.spectra.reserve(times.size());

  for (double t : times) {
    try {
      const detail::LogWeyl lw = detail::evolve_log(base, fvals, t);
      const detail::LogPencil lp = detail::inverse_transform_log(lw);
      BidiagonalPencil sample;
      sample.a = lp.a;
      sample.b.resize(lp.log_b.size());
      for (std::size_t i = 0; i < lp.log_b.size(); ++i)
        sample.b[i] = std::exp(lp.log_b[i]);
      traj.samples.push_back(std::move(sample));
      if (with_spectra) {
        std::vector<double> w(lw.size());
        double sum = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
          w[j] = std::exp(lw.logw[j]);
          sum += w[j];
        }
        for (double& x : w) x /= sum;
        traj.spectra.push_back(SpectralData{s0.lambda, std::move(w)});
      }
    } catch (const NumericError& e) {
      throw NumericError(e.kind(),
                         std::string(e.what()) + " at t = " + std::to_string(t));
    }
  }
  return traj;
}

/// Asymptotic law of one subdiagonal entry: b_n(t) ~ prefactor *
/// exp(-exponent * |t|) as t approaches the given direction.
struct RatePrediction {
  std::size_t n = 0;  // 1-based subdiagonal index
  double exponent = 0.0;
  double prefactor = 0.0;
  Direction direction = Direction::plus_infinity;
};

inline RatePrediction predict_b_rate(const SpectralData& s0, const FlowSpec& F,
                                     std::size_t n, Direction direction) {
  detail::require_monotone(F);
  const std::size_t N = s0.size();
  if (n < 1 || n >= N)
    throw ValidationError("IndexOutOfRange",
                          "b index must satisfy 1 <= n <= N-1");
  std::vector<double> g = detail::flow_values(s0.lambda, F);
  Direction dir = direction;
  if (!F.increasing()) {
    // w_j(t; F) = w_j(-t; -F): predict for the increasing flow at -t
    for (double& x : g) x = -x;
    dir = (direction == Direction::plus_infinity) ? Direction::minus_infinity
                                                  : Direction::plus_infinity;
  }
  const std::vector<double>& l = s0.lambda;
  const std::vector<double>& w = s0.w;

  RatePrediction out;
  out.n = n;
  out.direction = direction;
  if (dir == Direction::plus_infinity) {
    out.exponent = g[n] - g[n - 1];
    double ratio = w[n] / w[n - 1];
    ratio *= std::pow(l[n - 1], static_cast<double>(n) - 1.0) /
             std::pow(l[n], static_cast<double>(n));
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= l[n] - l[i];
    for (std::size_t i = 0; i + 1 < n; ++i) prod /= l[n - 1] - l[i];
    out.prefactor = ratio * prod * prod;
  } else {
    // mirrored formula; 0-based: lambda_{N-n} -> l[N-n-1], lambda_{N-n+1} -> l[N-n]
    const std::size_t lo = N - n - 1, hi = N - n;
    out.exponent = g[hi] - g[lo];
    double ratio = (w[lo] * std::pow(l[hi], static_cast<double>(n) - 1.0)) /
                   (w[hi] * std::pow(l[lo], static_cast<double>(n)));
    double prod = 1.0;
    for (std::size_t i = hi; i < N; ++i) prod *= l[lo] - l[i];
    for (std::size_t i = hi + 1; i < N; ++i) prod /= l[hi] - l[i];
    out.prefactor = ratio * prod * prod;
  }
  return out;
}

/// Limit of a_n(t) and the first-order correction coefficients:
/// limit - a_n(t) ~ coeff_next * b_n(t) + coeff_prev * b_{n-1}(t).
struct ALimitPrediction {
  double limit = 0.0;
  double coeff_next = 0.0;  // multiplies b_n (zero when n == N)
  double coeff_prev = 0.0;  // multiplies b_{n-1} (zero when n == 1)
};

inline ALimitPrediction predict_a_limit(const SpectralData& s0, const FlowSpec& F,
                                        std::size_t n, Direction direction) {
  detail::require_monotone(F);
  const std::size_t N = s0.size();
  if (n < 1 || n > N)
    throw ValidationError("IndexOutOfRange", "a index must satisfy 1 <= n <= N");
  Direction dir = direction;
  if (!F.increasing())
    dir = (direction == Direction::plus_infinity) ? Direction::minus_infinity
                                                  : Direction::plus_infinity;
  const std::vector<double>& l = s0.lambda;

  ALimitPrediction out;
  if (dir == Direction::plus_infinity) {
    const std::size_t m = n - 1;  // 0-based index of lambda_n
    out.limit = l[m];
    if (n < N) out.coeff_next = l[m] / (l[m] - l[m + 1]);
    if (n > 1) out.coeff_prev = -l[m] / (l[m - 1] - l[m]);
  } else {
    const std::size_t m = N - n;  // 0-based index of lambda_{N-n+1}
    out.limit = l[m];
    if (n < N) out.coeff_next = l[m] / (l[m] - l[m - 1]);
    if (n > 1) out.coeff_prev = -l[m] / (l[m + 1] - l[m]);
  }
  return out;
}

/// Matrix data from positions/momenta, with h(x) = sqrt(1 + eps^2 e^x) and
/// the boundary conventions q_0 = -inf, q_{N+1} = +inf (both h factors 1).
/// The result evolves under the F(x) = x flow.
inline BidiagonalPencil newtonian_to_pencil(const NewtonianState& s) {
  validate_newtonian(s);
  const std::size_t n = s.q.size();
  const double eps2 = s.epsilon * s.epsilon;
  const auto h = [eps2](double x) { return std::sqrt(1.0 + eps2 * std::exp(x)); };

  BidiagonalPencil p;
  p.a.resize(n);
  p.b.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double h_prev = (i == 0) ? 1.0 : h(s.q[i - 1] - s.q[i]);
    const double h_next = (i + 1 == n) ? 1.0 : h(s.q[i] - s.q[i + 1]);
    p.a[i] = h_prev * std::exp(s.p[i]) / h_next;
    if (i + 1 < n)
      p.b[i] = eps2 * std::exp(s.q[i] - s.q[i + 1] + s.p[i]) * h_prev / h_next;
  }
  for (double x : p.a)
    if (!std::isfinite(x)) throw OverflowError("position gap overflows exp");
  for (double x : p.b)
    if (!std::isfinite(x)) throw OverflowError("position gap overflows exp");
  validate_pencil(p);
  return p;
}

/// Asymptotic slopes of the position gaps q_{n+1} - q_n under the F(x) = x
/// flow: lambda gaps for t -> +inf, reversed and negated for t -> -inf.
inline std::vector<double> q_gap_slopes(const SpectralData& s0,
                                        Direction direction) {
  const std::size_t N = s0.size();
  std::vector<double> slopes(N >= 1 ? N - 1 : 0);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    if (direction == Direction::plus_infinity)
      slopes[i] = s0.lambda[i + 1] - s0.lambda[i];
    else
      slopes[i] = -(s0.lambda[N - 1 - i] - s0.lambda[N - 2 - i]);
  }
  return slopes;
}

}  // namespace rtl
