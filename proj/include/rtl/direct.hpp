#pragma once

// Direct spectral transform: pencil -> (eigenvalues, weights), plus Weyl
// function evaluation and the explicit left/right eigenvectors of
// L x = lambda M x.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "rtl/core.hpp"
#include "rtl/detail/compensated.hpp"
#include "rtl/errors.hpp"
#include "rtl/poly.hpp"

namespace rtl {

namespace detail {

struct DeltaTail {
  DD second_last;  // D_{N-1}(z)
  DD last;         // D_N(z)
  DD dlast;        // D_N'(z)
};

// The tail of the D recurrence and its derivative in compensated arithmetic,
// with the evaluation point itself carried as a double pair. At an
// eigenvalue with an exponentially small weight the residue numerator
// D_{N-1} is produced by near-total cancellation of O(1) terms, and the
// nearby zero of D_{N-1} sits closer to the eigenvalue than one double ulp.
inline DeltaTail delta_tail_dd(const BidiagonalPencil& p, const DD& z) {
  const std::size_t n = p.size();
  DD v2(0.0), v1(1.0);
  DD d2(0.0), d1(0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double ak = p.a[n - k];
    const double bk = (k >= 2) ? p.b[n - k] : 0.0;
    const DD z_minus_a = dd_add(z, DD(-ak));
    const DD bz = dd_mul(bk, z);
    const DD v = dd_sub(dd_mul(z_minus_a, v1), dd_mul(bz, v2));
    const DD d = dd_add(v1, dd_sub(dd_mul(z_minus_a, d1),
                                   dd_add(dd_mul(bk, v2), dd_mul(bz, d2))));
    v2 = v1; v1 = v;
    d2 = d1; d1 = d;
  }
  return DeltaTail{v2, v1, d1};
}

// Newton refinement of an eigenvalue in compensated arithmetic; the double
// input is already accurate to ~1 ulp, two steps push the pair to ~eps^2.
inline DD polish_eigenvalue_dd(const BidiagonalPencil& p, double lambda) {
  DD z(lambda);
  for (int it = 0; it < 2; ++it) {
    const DeltaTail t = delta_tail_dd(p, z);
    if (t.last.value() == 0.0 || t.dlast.value() == 0.0) break;
    const DD step = dd_div(t.last, t.dlast);
    const DD next = dd_sub(z, step);
    if (!std::isfinite(next.hi)) break;
    z = next;
  }
  return z;
}

}  // namespace detail

/// Right and left eigenvectors for one eigenvalue, both normalized to have
/// first component exactly 1.
struct EigenvectorPair {
  std::vector<double> right;  // (1, P_1(l), ..., P_{N-1}(l))
  std::vector<double> left;   // (1, P_1(l)/(l b_1), ..., P_{N-1}(l)/(l^{N-1} b_{N-1}..b_1))
};

inline EigenvectorPair eigenvector_pair(const BidiagonalPencil& p, double lambda) {
  const std::size_t n = p.size();
  const RecurrenceSequence seq = eval_P(p, lambda);
  EigenvectorPair out;
  out.right.resize(n);
  out.left.resize(n);
  out.right[0] = 1.0;
  out.left[0] = 1.0;
  double denom = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    denom *= lambda * p.b[k - 1];
    out.right[k] = seq.values[k];
    out.left[k] = seq.values[k] / denom;
  }
  return out;
}

/// The N generalized eigenvalues, strictly increasing, all positive: the
/// zeros of P_N found by cascading the interlacing brackets up from P_1.
inline std::vector<double> generalized_eigenvalues(const BidiagonalPencil& p) {
  validate_pencil(p);
  const std::size_t n = p.size();
  if (n == 1) return {p.a[0]};

  const double hint = std::accumulate(p.a.begin(), p.a.end(), 0.0) +
                      std::accumulate(p.b.begin(), p.b.end(), 0.0) + 1.0;

  std::vector<double> zeros;  // zeros of the previous level
  for (std::size_t level = 1; level <= n; ++level) {
    const std::function<double(double)> eval = [&p, level](double z) {
      return eval_P(p, z).values[level];
    };
    if (level < n) {
      zeros = zeros_interlaced(eval, zeros, hint);
    } else {
      // polish the final level with the derivative of D_N (= P_N pointwise)
      const std::function<double(double)> deriv = [&p, level](double z) {
        return eval_Delta_with_derivative(p, z).second.values[level];
      };
      zeros = zeros_interlaced(eval, zeros, hint, &deriv);
    }
  }
  return zeros;
}

/// Weights as residues of D_{N-1}/D_N at the eigenvalues:
/// w_j = D_{N-1}(lambda_j) / D_N'(lambda_j), renormalized to sum 1.
inline std::vector<double> weights_from_residues(const BidiagonalPencil& p,
                                                 const std::vector<double>& lambda) {
  const std::size_t n = p.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const detail::DD z = detail::polish_eigenvalue_dd(p, lambda[j]);
    const detail::DeltaTail t = detail::delta_tail_dd(p, z);
    w[j] = detail::dd_div(t.second_last, t.dlast).value();
    if (!(w[j] > 0.0) || !std::isfinite(w[j])) throw NonPositiveWeight(j + 1);
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9)
    throw NumericError("UnnormalizedWeights",
                       "residues sum to " + std::to_string(sum) +
                           "; eigenvalues are likely inaccurate");
  for (double& x : w) x /= sum;
  return w;
}

/// Weights through the eigenvector route, w_j = (u_j^T M v_j)^{-1}.
/// Independent of weights_from_residues; kept as a cross-check path.
inline std::vector<double> weights_from_eigenvectors(const BidiagonalPencil& p,
                                                     const std::vector<double>& lambda) {
  const std::size_t n = p.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const EigenvectorPair ev = eigenvector_pair(p, lambda[j]);
    // u^T M v with (M v)_i = v_i - b_{i-1} v_{i-1}
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mvi = ev.right[i];
      if (i > 0) mvi -= p.b[i - 1] * ev.right[i - 1];
      dot += ev.left[i] * mvi;
    }
    if (dot == 0.0 || !std::isfinite(dot)) throw NonPositiveWeight(j + 1);
    w[j] = 1.0 / dot;
    if (!(w[j] > 0.0)) throw NonPositiveWeight(j + 1);
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9)
    throw NumericError("UnnormalizedWeights",
                       "eigenvector weights sum to " + std::to_string(sum));
  for (double& x : w) x /= sum;
  return w;
}

/// The full direct transform (eigenvalues + residue weights).
inline SpectralData direct_transform(const BidiagonalPencil& p) {
  std::vector<double> lambda = generalized_eigenvalues(p);
  std::vector<double> w = weights_from_residues(p, lambda);
  return make_spectral_data(std::move(lambda), std::move(w));
}

/// f(z) = sum_j w_j / (z - lambda_j).
inline double weyl_eval(const WeylFunction& f, double z) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double d = z - f.poles[j];
    if (d == 0.0) throw PoleEvaluation(j + 1);
    sum += f.residues[j] / d;
  }
  return sum;
}

inline double weyl_eval(const SpectralData& s, double z) {
  return weyl_eval(WeylFunction{s.lambda, s.w}, z);
}

/// f'(z) = -sum_j w_j / (z - lambda_j)^2.
inline double weyl_derivative(const WeylFunction& f, double z) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double d = z - f.poles[j];
    if (d == 0.0) throw PoleEvaluation(j + 1);
    sum -= f.residues[j] / (d * d);
  }
  return sum;
}

inline double weyl_derivative(const SpectralData& s, double z) {
  return weyl_derivative(WeylFunction{s.lambda, s.w}, z);
}

}  // namespace rtl
