#pragma once

// Domain types for the relativistic Toda lattice solver: the bidiagonal
// matrix data (a, b), spectral data (lambda, w), the Weyl function in
// pole-residue form, flow functions F, and dense assembly of L, M, M^{-1}
// for oracle-style checks.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rtl/errors.hpp"

namespace rtl {

/// Matrix data of the lattice: diagonal a_1..a_N of L and subdiagonal
/// b_1..b_{N-1} of M (stored positive; M carries them with a minus sign).
/// The conventions b_0 = b_N = 0 are implicit and never stored.
struct BidiagonalPencil {
  std::vector<double> a;
  std::vector<double> b;

  std::size_t size() const { return a.size(); }
};

inline void validate_pencil(const BidiagonalPencil& p) {
  if (p.a.empty())
    throw ValidationError("EmptyPencil", "pencil needs at least one diagonal entry");
  if (p.b.size() + 1 != p.a.size())
    throw ValidationError("SizeMismatch",
                          "b must have exactly one entry less than a");
  for (std::size_t i = 0; i < p.a.size(); ++i)
    if (!(p.a[i] > 0.0) || !std::isfinite(p.a[i]))
      throw NonPositiveEntry(i + 1, 'a');
  for (std::size_t i = 0; i < p.b.size(); ++i)
    if (!(p.b[i] > 0.0) || !std::isfinite(p.b[i]))
      throw NonPositiveEntry(i + 1, 'b');
}

namespace detail {

// Shared construction gate for spectral data and Weyl functions:
// strictly increasing positive nodes, positive masses summing to 1.
// The mass sum is renormalized when within 1e-9 of 1; a larger deviation
// signals inaccurate eigenvalues upstream and is an error.
inline void check_nodes_and_masses(const std::vector<double>& nodes,
                                   std::vector<double>& masses,
                                   const char* what) {
  if (nodes.empty() || nodes.size() != masses.size())
    throw ValidationError("SizeMismatch",
                          std::string(what) + ": node and mass lists must have "
                                              "equal nonzero length");
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (!(nodes[j] > 0.0) || !std::isfinite(nodes[j]))
      throw ValidationError("NonPositiveNode",
                            std::string(what) + ": node " + std::to_string(j + 1) +
                                " must be positive and finite");
    if (j > 0 && !(nodes[j] > nodes[j - 1]))
      throw ValidationError("UnsortedNodes",
                            std::string(what) + ": nodes must be strictly increasing");
    if (!(masses[j] > 0.0) || !std::isfinite(masses[j]))
      throw ValidationError("NonPositiveMass",
                            std::string(what) + ": mass " + std::to_string(j + 1) +
                                " must be positive and finite");
  }
  double sum = 0.0;
  for (double m : masses) sum += m;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("UnnormalizedMasses",
                          std::string(what) + ": masses sum to " +
                              std::to_string(sum) + ", expected 1");
  for (double& m : masses) m /= sum;
}

}  // namespace detail

/// Spectral data of a pencil: eigenvalues 0 < lambda_1 < ... < lambda_N and
/// positive weights summing to 1. Build through make_spectral_data so the
/// invariants hold; raw aggregates are used internally for transient states
/// (e.g. underflowed long-time weights) that are never handed back to the
/// transforms without revalidation.
struct SpectralData {
  std::vector<double> lambda;
  std::vector<double> w;

  std::size_t size() const { return lambda.size(); }
};

inline SpectralData make_spectral_data(std::vector<double> lambda,
                                       std::vector<double> w) {
  detail::check_nodes_and_masses(lambda, w, "spectral data");
  return SpectralData{std::move(lambda), std::move(w)};
}

/// A rational function sum_j residues_j / (z - poles_j) in the class W_N:
/// simple positive increasing poles, positive residues summing to 1.
struct WeylFunction {
  std::vector<double> poles;
  std::vector<double> residues;

  std::size_t size() const { return poles.size(); }
};

inline WeylFunction make_weyl_function(std::vector<double> poles,
                                       std::vector<double> residues) {
  detail::check_nodes_and_masses(poles, residues, "Weyl function");
  return WeylFunction{std::move(poles), std::move(residues)};
}

inline WeylFunction to_weyl(const SpectralData& s) {
  return WeylFunction{s.lambda, s.w};
}

inline SpectralData to_spectral(const WeylFunction& f) {
  return SpectralData{f.poles, f.residues};
}

/// Flow function F on (0, inf), restricted to a named strictly monotone
/// family. `power` requires a nonzero exponent.
struct FlowSpec {
  enum class Kind { reciprocal, identity, power, log };

  Kind kind = Kind::identity;
  double exponent = 1.0;  // used by power only

  double operator()(double x) const {
    switch (kind) {
      case Kind::reciprocal: return 1.0 / x;
      case Kind::identity: return x;
      case Kind::power: return std::pow(x, exponent);
      case Kind::log: return std::log(x);
    }
    return 0.0;  // unreachable
  }

  /// Strictly increasing on (0, inf)?
  bool increasing() const {
    switch (kind) {
      case Kind::reciprocal: return false;
      case Kind::identity: return true;
      case Kind::power: return exponent > 0.0;
      case Kind::log: return true;
    }
    return true;
  }

  static FlowSpec reciprocal() { return {Kind::reciprocal, 0.0}; }
  static FlowSpec identity() { return {Kind::identity, 0.0}; }
  static FlowSpec log_flow() { return {Kind::log, 0.0}; }
  static FlowSpec power(double p) {
    if (p == 0.0 || !std::isfinite(p)) throw NonMonotoneFlow();
    return {Kind::power, p};
  }
};

/// Positions, momenta and the perturbation parameter of the Newtonian form.
/// Conventions q_0 = -inf, q_{N+1} = +inf.
struct NewtonianState {
  std::vector<double> q;
  std::vector<double> p;
  double epsilon = 1.0;
};

inline void validate_newtonian(const NewtonianState& s) {
  if (s.q.empty() || s.q.size() != s.p.size())
    throw ValidationError("SizeMismatch",
                          "positions and momenta must have equal nonzero length");
  if (!(s.epsilon > 0.0) || !std::isfinite(s.epsilon))
    throw ValidationError("NonPositiveEpsilon", "epsilon must be positive");
}

/// Time grid plus per-time matrix data (and optionally spectral data).
struct Trajectory {
  std::vector<double> times;
  std::vector<BidiagonalPencil> samples;
  std::vector<SpectralData> spectra;  // empty, or one entry per time
};

/// Small dense row-major matrix, for oracle checks and the ODE path.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Matrix operator*(const Matrix& other) const {
    Matrix out(rows, other.cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        const double lik = (*this)(i, k);
        if (lik == 0.0) continue;
        for (std::size_t j = 0; j < other.cols; ++j)
          out(i, j) += lik * other(k, j);
      }
    return out;
  }
};

struct DenseForms {
  Matrix L;     // upper bidiagonal: diag a, superdiag 1
  Matrix M;     // lower bidiagonal: unit diag, subdiag -b
  Matrix Minv;  // explicit inverse of M: (Minv)_{ij} = prod_{k=j..i-1} b_k
};

inline DenseForms assemble_dense(const BidiagonalPencil& p) {
  validate_pencil(p);
  const std::size_t n = p.size();
  DenseForms out{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.L(i, i) = p.a[i];
    if (i + 1 < n) out.L(i, i + 1) = 1.0;
    out.M(i, i) = 1.0;
    if (i > 0) out.M(i, i - 1) = -p.b[i - 1];
    out.Minv(i, i) = 1.0;
    // fill row i right-to-left so each entry is b_j times its right neighbour
    for (std::size_t j = i; j-- > 0;)
      out.Minv(i, j) = p.b[j] * out.Minv(i, j + 1);
  }
  return out;
}

}  // namespace rtl
