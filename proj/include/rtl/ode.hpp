#pragma once

// Independent verification path: the lattice equations integrated directly
// with fixed-step classical RK4. Closed-form right-hand sides for the
// reciprocal and identity flows; the general flow assembles
// F(L M^{-1}) = U^{-T} diag(F(lambda)) U^T and
// F(M^{-1} L) = V diag(F(lambda)) V^{-1}
// with an internal partial-pivot LU solve.

#include <cmath>
#include <cstddef>
#include <vector>

#include "rtl/core.hpp"
#include "rtl/direct.hpp"
#include "rtl/errors.hpp"

namespace rtl {

struct PencilDerivative {
  std::vector<double> da;
  std::vector<double> db;
};

/// F(x) = 1/x flow:
///   a'_n = b_n/a_{n+1} - b_{n-1}/a_{n-1},  b'_n = b_n (1/a_n - 1/a_{n+1}).
inline PencilDerivative rhs_reciprocal(const BidiagonalPencil& p) {
  validate_pencil(p);
  const std::size_t n = p.size();
  PencilDerivative d;
  d.da.resize(n);
  d.db.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (i + 1 < n) v += p.b[i] / p.a[i + 1];
    if (i > 0) v -= p.b[i - 1] / p.a[i - 1];
    d.da[i] = v;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    d.db[i] = p.b[i] * (1.0 / p.a[i] - 1.0 / p.a[i + 1]);
  return d;
}

/// F(x) = x flow:
///   a'_n = a_n (b_{n-1} - b_n),  b'_n = b_n (a_n - a_{n+1} + b_{n-1} - b_{n+1}).
inline PencilDerivative rhs_identity(const BidiagonalPencil& p) {
  validate_pencil(p);
  const std::size_t n = p.size();
  PencilDerivative d;
  d.da.resize(n);
  d.db.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double b_prev = (i > 0) ? p.b[i - 1] : 0.0;
    const double b_next = (i + 1 < n) ? p.b[i] : 0.0;
    d.da[i] = p.a[i] * (b_prev - b_next);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double b_prev = (i > 0) ? p.b[i - 1] : 0.0;
    const double b_next = (i + 2 < n) ? p.b[i + 1] : 0.0;
    d.db[i] = p.b[i] * (p.a[i] - p.a[i + 1] + b_prev - b_next);
  }
  return d;
}

namespace detail {

// Solve A X = B in place by LU with partial pivoting; A and B are clobbered,
// the solution lands in B.
inline void lu_solve_inplace(Matrix& A, Matrix& B) {
  const std::size_t n = A.rows;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(A(r, col)) > std::fabs(A(piv, col))) piv = r;
    if (A(piv, col) == 0.0) throw SingularEigenvectorMatrix();
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
      for (std::size_t j = 0; j < B.cols; ++j) std::swap(B(piv, j), B(col, j));
    }
    const double inv = 1.0 / A(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = A(r, col) * inv;
      if (factor == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) A(r, j) -= factor * A(col, j);
      for (std::size_t j = 0; j < B.cols; ++j) B(r, j) -= factor * B(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const double inv = 1.0 / A(col, col);
    for (std::size_t j = 0; j < B.cols; ++j) B(col, j) *= inv;
    for (std::size_t r = 0; r < col; ++r) {
      const double factor = A(r, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < B.cols; ++j) B(r, j) -= factor * B(col, j);
    }
  }
}

}  // namespace detail

/// General flow via the spectral decomposition of L M^{-1} and M^{-1} L:
///   a'_n = (F(L M^{-1}))_{n,n-1} - (F(M^{-1} L))_{n+1,n}
///   b'_n = (F(M^{-1} L))_{n+1,n} - (F(L M^{-1}))_{n+1,n}
inline PencilDerivative rhs_general(const BidiagonalPencil& p, const FlowSpec& F) {
  validate_pencil(p);
  const std::size_t n = p.size();
  PencilDerivative d;
  d.da.assign(n, 0.0);
  d.db.assign(n > 0 ? n - 1 : 0, 0.0);
  if (n == 1) return d;  // strictly lower parts of 1x1 matrices vanish

  const std::vector<double> lambda = generalized_eigenvalues(p);
  std::vector<double> fvals(n);
  for (std::size_t j = 0; j < n; ++j) {
    fvals[j] = F(lambda[j]);
    if (!std::isfinite(fvals[j]))
      throw OverflowError("F is not finite on the spectrum");
  }

  // Row j of VT/UT holds the right/left eigenvector for lambda_j.
  Matrix VT(n, n), UT(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const RecurrenceSequence seq = eval_P(p, lambda[j]);
    double denom = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      VT(j, i) = seq.values[i];
      if (i > 0) denom *= lambda[j] * p.b[i - 1];
      UT(j, i) = seq.values[i] / denom;
    }
  }

  // X = F(M^{-1}L) = V diag(f) V^{-1}:  V^T X^T = diag(f) V^T.
  Matrix rhs_x(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rhs_x(j, i) = fvals[j] * VT(j, i);
  Matrix vt_copy = VT;
  detail::lu_solve_inplace(vt_copy, rhs_x);  // rhs_x now holds X^T

  // Y = F(L M^{-1}) = U^{-T} diag(f) U^T:  U^T Y = diag(f) U^T.
  Matrix rhs_y(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rhs_y(j, i) = fvals[j] * UT(j, i);
  detail::lu_solve_inplace(UT, rhs_y);  // rhs_y now holds Y

  const auto X = [&rhs_x](std::size_t r, std::size_t c) { return rhs_x(c, r); };
  const auto Y = [&rhs_y](std::size_t r, std::size_t c) { return rhs_y(r, c); };

  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (i > 0) v += Y(i, i - 1);
    if (i + 1 < n) v -= X(i + 1, i);
    d.da[i] = v;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) d.db[i] = X(i + 1, i) - Y(i + 1, i);
  return d;
}

namespace detail {

inline PencilDerivative dispatch_rhs(const BidiagonalPencil& p, const FlowSpec& F) {
  switch (F.kind) {
    case FlowSpec::Kind::reciprocal: return rhs_reciprocal(p);
    case FlowSpec::Kind::identity: return rhs_identity(p);
    default: return rhs_general(p, F);
  }
}

struct Rk4Stepper {
  const FlowSpec& F;
  std::size_t n;

  std::vector<double> deriv(const std::vector<double>& y, double t_now) const {
    BidiagonalPencil p;
    p.a.assign(y.begin(), y.begin() + n);
    p.b.assign(y.begin() + n, y.end());
    for (double x : y)
      if (!(x > 0.0)) throw PositivityLoss(t_now);
    const PencilDerivative d = dispatch_rhs(p, F);
    std::vector<double> out(y.size());
    std::copy(d.da.begin(), d.da.end(), out.begin());
    std::copy(d.db.begin(), d.db.end(), out.begin() + n);
    return out;
  }

  void step(std::vector<double>& y, double t_now, double h) const {
    const std::vector<double> k1 = deriv(y, t_now);
    std::vector<double> tmp(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const std::vector<double> k2 = deriv(tmp, t_now + 0.5 * h);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const std::vector<double> k3 = deriv(tmp, t_now + 0.5 * h);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
    const std::vector<double> k4 = deriv(tmp, t_now + h);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
};

inline BidiagonalPencil unpack_state(const std::vector<double>& y, std::size_t n,
                                     double t_now) {
  BidiagonalPencil p;
  p.a.assign(y.begin(), y.begin() + n);
  p.b.assign(y.begin() + n, y.end());
  for (double x : y) {
    if (!std::isfinite(x)) throw OverflowError("integration state diverged");
    if (!(x > 0.0)) throw PositivityLoss(t_now);
  }
  return p;
}

}  // namespace detail

/// Fixed-step RK4 from t = 0 to t_final (either sign) on the uniform grid of
/// spacing dt; the last step is shortened to land exactly on t_final.
inline Trajectory integrate(const BidiagonalPencil& p0, const FlowSpec& F,
                            double t_final, double dt) {
  validate_pencil(p0);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ValidationError("BadStep", "dt must be positive and finite");
  if (!std::isfinite(t_final))
    throw ValidationError("BadTime", "t_final must be finite");

  const std::size_t n = p0.size();
  std::vector<double> y(2 * n - 1);
  std::copy(p0.a.begin(), p0.a.end(), y.begin());
  std::copy(p0.b.begin(), p0.b.end(), y.begin() + n);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.samples.push_back(p0);
  if (t_final == 0.0) return traj;

  const double dir = (t_final > 0.0) ? 1.0 : -1.0;
  const detail::Rk4Stepper stepper{F, n};
  const std::size_t n_steps =
      static_cast<std::size_t>(std::ceil(std::fabs(t_final) / dt - 1e-12));
  double t = 0.0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_next =
        (k + 1 == n_steps) ? t_final : dir * dt * static_cast<double>(k + 1);
    stepper.step(y, t, t_next - t);
    t = t_next;
    traj.times.push_back(t);
    traj.samples.push_back(detail::unpack_state(y, n, t));
  }
  return traj;
}

/// Integrate to each requested time (strictly increasing, either sign),
/// marching outward from t = 0 with substeps of size at most dt.
inline Trajectory integrate_at(const BidiagonalPencil& p0, const FlowSpec& F,
                               const std::vector<double>& times, double dt) {
  validate_pencil(p0);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ValidationError("BadStep", "dt must be positive and finite");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("UnsortedTimes", "times must be strictly increasing");

  const std::size_t n = p0.size();
  const detail::Rk4Stepper stepper{F, n};
  Trajectory traj;
  traj.times = times;
  traj.samples.resize(times.size());

  const auto march = [&](bool negative) {
    std::vector<double> y(2 * n - 1);
    std::copy(p0.a.begin(), p0.a.end(), y.begin());
    std::copy(p0.b.begin(), p0.b.end(), y.begin() + n);
    double t = 0.0;
    // visit negative targets from the closest to zero outward
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < times.size(); ++i)
      if ((times[i] < 0.0) == negative) order.push_back(i);
    if (negative) std::reverse(order.begin(), order.end());
    for (std::size_t idx : order) {
      const double target = times[idx];
      const double span = target - t;
      if (span != 0.0) {
        const std::size_t nsub =
            static_cast<std::size_t>(std::ceil(std::fabs(span) / dt - 1e-12));
        const double h = span / static_cast<double>(std::max<std::size_t>(nsub, 1));
        for (std::size_t k = 0; k < std::max<std::size_t>(nsub, 1); ++k) {
          stepper.step(y, t, h);
          t += h;
        }
        t = target;
      }
      traj.samples[idx] = detail::unpack_state(y, n, t);
    }
  };
  march(false);
  march(true);
  return traj;
}

}  // namespace rtl
