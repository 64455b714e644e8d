#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sphkern/symmetric_eigen.hpp"

using namespace sphkern;

namespace {

SymmetricMatrix random_symmetric(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = dist(rng);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

}  // namespace

TEST(SymmetricEigen, BackwardErrorOn512) {
  const auto a = random_symmetric(512, 7);
  const auto dec = symmetric_eigen(a);
  const std::size_t n = a.size();
  double resid = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0;
      for (std::size_t k = 0; k < n; ++k) av += a(i, k) * dec.vectors(k, j);
      resid = std::max(resid, std::abs(av - dec.values[j] * dec.vectors(i, j)));
    }
  }
  EXPECT_LE(resid, 1e-10 * a.norm_inf());

  double orth = 0.0;
  for (std::size_t p = 0; p < n; p += 37) {
    for (std::size_t q = 0; q < n; q += 41) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += dec.vectors(i, p) * dec.vectors(i, q);
      orth = std::max(orth, std::abs(dot - (p == q ? 1.0 : 0.0)));
    }
  }
  EXPECT_LE(orth, 1e-12);
}

TEST(SymmetricEigen, TraceAndFrobeniusPreserved) {
  const auto a = random_symmetric(120, 3);
  const auto vals = symmetric_eigenvalues(a);
  double tr = 0.0, fro = 0.0, sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    tr += a(i, i);
    for (std::size_t j = 0; j < a.size(); ++j) fro += a(i, j) * a(i, j);
  }
  for (double v : vals) {
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum, tr, 1e-10 * std::abs(fro));
  EXPECT_NEAR(sq, fro, 1e-11 * fro);
  EXPECT_TRUE(std::is_sorted(vals.begin(), vals.end()));
}

TEST(SymmetricEigen, KnownTridiagonalSpectrum) {
  // second-difference matrix: 2 - 2 cos(j pi / (n+1))
  const std::size_t n = 50;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  const auto vals = tridiagonal_eigenvalues(d, e);
  for (std::size_t j = 0; j < n; ++j) {
    const double want = 2.0 - 2.0 * std::cos((j + 1) * std::numbers::pi / (n + 1));
    EXPECT_NEAR(vals[j], want, 1e-13);
  }
}

TEST(SymmetricEigen, DiagonalAndRankOne) {
  SymmetricMatrix a(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = 1.0;
  }
  const auto vals = symmetric_eigenvalues(a);
  EXPECT_NEAR(vals.back(), 4.0, 1e-14);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(vals[i], 0.0, 1e-14);

  SymmetricMatrix empty(0);
  EXPECT_TRUE(symmetric_eigenvalues(empty).empty());
}

TEST(SymmetricEigen, LengthMismatchIsRejected) {
  std::vector<double> d(3, 1.0), e(3, 0.0);
  EXPECT_THROW(tridiagonal_eigenvalues(d, e), DimensionError);
}
