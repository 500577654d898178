#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rtl/direct.hpp"
#include "test_util.hpp"

using namespace rtl;

TEST_CASE("generalized eigenvalues: reference table, N=1, quadratic") {
  const auto lambda = generalized_eigenvalues(refcase::pencil());
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(std::abs(lambda[j] - refcase::lambdas()[j]) < 1e-8);

  const auto single = generalized_eigenvalues(BidiagonalPencil{{5.0}, {}});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 5.0);

  const auto quad = generalized_eigenvalues(BidiagonalPencil{{1.0, 2.0}, {1.0}});
  CHECK(quad[0] == Catch::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-13));
  CHECK(quad[1] == Catch::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("weights from residues") {
  const BidiagonalPencil ref = refcase::pencil();
  const auto w = weights_from_residues(ref, generalized_eigenvalues(ref));
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(std::abs(w[j] - refcase::weights()[j]) < 1e-8);

  // residues of (z-2)/(z^2-4z+2) are 1/2 at both poles
  const BidiagonalPencil p{{1.0, 2.0}, {1.0}};
  const auto w2 = weights_from_residues(p, generalized_eigenvalues(p));
  CHECK(w2[0] == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(w2[1] == Catch::Approx(0.5).epsilon(1e-12));

  const BidiagonalPencil single{{5.0}, {}};
  CHECK(weights_from_residues(single, {5.0})[0] == 1.0);
}

TEST_CASE("weights from eigenvectors agree with residues") {
  const BidiagonalPencil ref = refcase::pencil();
  const auto lambda = generalized_eigenvalues(ref);
  const auto w = weights_from_eigenvectors(ref, lambda);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(std::abs(w[j] - refcase::weights()[j]) < 1e-7);

  const BidiagonalPencil p{{1.0, 2.0}, {1.0}};
  const auto w2 = weights_from_eigenvectors(p, generalized_eigenvalues(p));
  CHECK(w2[0] == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(w2[1] == Catch::Approx(0.5).epsilon(1e-12));

  CHECK(weights_from_eigenvectors(BidiagonalPencil{{5.0}, {}}, {5.0})[0] == 1.0);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const BidiagonalPencil rp = testutil::random_pencil(rng);
    const auto l = generalized_eigenvalues(rp);
    const auto wa = weights_from_residues(rp, l);
    const auto wb = weights_from_eigenvectors(rp, l);
    CHECK(testutil::max_rel_diff(wa, wb) < 1e-8);
  }
}

TEST_CASE("direct transform composes and satisfies the invariants") {
  const SpectralData s = direct_transform(refcase::pencil());
  CHECK(testutil::max_abs_diff(s.lambda, refcase::lambdas()) < 1e-8);
  CHECK(testutil::max_abs_diff(s.w, refcase::weights()) < 1e-8);

  const SpectralData single = direct_transform(BidiagonalPencil{{5.0}, {}});
  CHECK(single.lambda[0] == 5.0);
  CHECK(single.w[0] == 1.0);

  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const SpectralData rs = direct_transform(testutil::random_pencil(rng));
    double sum = 0.0;
    for (double w : rs.w) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    for (std::size_t j = 1; j < rs.size(); ++j)
      CHECK(rs.lambda[j] > rs.lambda[j - 1]);
    CHECK(rs.lambda[0] > 0.0);
  }
}

TEST_CASE("weyl_eval values and derivative") {
  const SpectralData s = direct_transform(BidiagonalPencil{{1.0, 2.0}, {1.0}});
  CHECK(weyl_eval(s, 0.0) == Catch::Approx(-1.0).epsilon(1e-12));

  // z f(z) -> 1 as z -> inf because the residues sum to 1
  CHECK(1e9 * weyl_eval(s, 1e9) == Catch::Approx(1.0).margin(1e-6));

  const SpectralData ref = refcase::spectral();
  CHECK(1e9 * weyl_eval(ref, 1e9) == Catch::Approx(1.0).margin(1e-6));
  // -1/f(0) = a_1 = 3
  CHECK(-1.0 / weyl_eval(ref, 0.0) == Catch::Approx(3.0).margin(1e-7));

  const WeylFunction f = to_weyl(s);
  const double z = 5.0, h = 1e-6;
  const double fd = (weyl_eval(f, z + h) - weyl_eval(f, z - h)) / (2.0 * h);
  CHECK(testutil::rel_diff(weyl_derivative(f, z), fd) < 1e-7);

  CHECK_THROWS_AS(weyl_eval(f, f.poles[0]), PoleEvaluation);
}

TEST_CASE("weyl function equals Delta_{N-1}/Delta_N off the poles") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    const BidiagonalPencil p = testutil::random_pencil(rng);
    const SpectralData s = direct_transform(p);
    std::uniform_real_distribution<double> zdist(-10.0, 60.0);
    for (int k = 0; k < 20; ++k) {
      const double z = zdist(rng);
      bool near_pole = false;
      for (double l : s.lambda)
        if (std::abs(z - l) < 1e-3 * std::max(1.0, l)) near_pole = true;
      if (near_pole) continue;
      const auto seq = eval_Delta(p, z);
      const double expected = seq.values[p.size() - 1] / seq.values[p.size()];
      CHECK(testutil::rel_diff(weyl_eval(s, z), expected) < 1e-9);
    }
  }
}

TEST_CASE("left and right eigenvectors are M-orthogonal") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    const BidiagonalPencil p = testutil::random_pencil(rng);
    const std::size_t n = p.size();
    const auto lambda = generalized_eigenvalues(p);
    std::vector<EigenvectorPair> pairs;
    for (double l : lambda) pairs.push_back(eigenvector_pair(p, l));
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(pairs[j].right[0] == 1.0);
      CHECK(pairs[j].left[0] == 1.0);
    }
    const auto m_dot = [&](std::size_t j, std::size_t k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double mvi = pairs[k].right[i];
        if (i > 0) mvi -= p.b[i - 1] * pairs[k].right[i - 1];
        dot += pairs[j].left[i] * mvi;
      }
      return dot;
    };
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (j == k) continue;
        CHECK(std::abs(m_dot(j, k)) < 1e-9 * std::abs(m_dot(j, j)));
      }
  }
}
