#pragma once

// Brute-force check of Funk–Hecke spectra on S^2: a product quadrature grid,
// the symmetrized Nyström matrix M_ij = sqrt(w_i w_j) K_i(x_i . x_j) and its
// eigenvalues.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/kernels.hpp"
#include "sphkern/parallel.hpp"
#include "sphkern/sphere_math.hpp"
#include "sphkern/symmetric_eigen.hpp"

namespace sphkern {

/// Gauss–Legendre nodes in cos(theta) crossed with n_phi uniform longitudes.
/// Point (a, b) sits at index a * n_phi + b.
struct SphereGrid {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> cos_theta;       ///< n_theta Gauss–Legendre nodes
  std::vector<double> theta_weights;   ///< matching weights (sum 2)
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;         ///< sum 4 pi

  std::size_t size() const noexcept { return points.size(); }
};

inline SphereGrid build_grid(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 4) {
    throw DomainError("build_grid: need n_theta >= 2 and n_phi >= 4");
  }
  const auto rule = gegenbauer_quadrature(2, n_theta);
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.cos_theta.assign(rule.nodes().begin(), rule.nodes().end());
  g.theta_weights.assign(rule.weights().begin(), rule.weights().end());
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  g.points.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  g.weights.reserve(g.points.capacity());
  for (int a = 0; a < n_theta; ++a) {
    const double z = g.cos_theta[a];
    const double r = std::sqrt((1.0 - z) * (1.0 + z));
    for (int b = 0; b < n_phi; ++b) {
      const double phi = dphi * b;
      g.points.push_back({r * std::cos(phi), r * std::sin(phi), z});
      g.weights.push_back(g.theta_weights[a] * dphi);
    }
  }
  return g;
}

/// Clamp a dot product of unit vectors back into [-1, 1].
inline double clamp_unit(double u) { return std::clamp(u, -1.0, 1.0); }

/// The full symmetrized Nyström matrix (dense). Rows assembled in parallel.
inline SymmetricMatrix gram_matrix(const IsotropicProfile& p, const SphereGrid& g) {
  const std::size_t n = g.size();
  SymmetricMatrix mat(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& x = g.points[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& y = g.points[j];
      const double u = clamp_unit(x[0] * y[0] + x[1] * y[1] + x[2] * y[2]);
      mat(i, j) = std::sqrt(g.weights[i] * g.weights[j]) * p(u);
    }
  });
  return mat;
}

enum class GramMethod {
  /// Longitude shifts commute with the Nyström matrix, so a discrete Fourier
  /// transform in longitude splits it into n_phi symmetric n_theta blocks
  ///   B_j = sum_d C_d cos(2 pi j d / n_phi),
  ///   (C_d)_{ab} = sqrt(w_a w_b) K_i(z_a z_b + s_a s_b cos(2 pi d / n_phi)),
  /// whose eigenvalues together are exactly those of the full matrix.
  fourier_blocks,
  /// Assemble and diagonalize the full matrix.
  dense,
};

/// All eigenvalues of the Nyström matrix, nonincreasing.
inline std::vector<double> gram_spectrum(const IsotropicProfile& p, const SphereGrid& g,
                                         GramMethod method = GramMethod::fourier_blocks) {
  std::vector<double> all;
  if (method == GramMethod::dense) {
    all = symmetric_eigenvalues(gram_matrix(p, g));
  } else {
    const std::size_t nt = static_cast<std::size_t>(g.n_theta);
    const std::size_t np = static_cast<std::size_t>(g.n_phi);
    const double dphi = 2.0 * std::numbers::pi / g.n_phi;
    std::vector<double> sin_theta(nt);
    std::vector<double> wt(nt);
    for (std::size_t a = 0; a < nt; ++a) {
      const double z = g.cos_theta[a];
      sin_theta[a] = std::sqrt((1.0 - z) * (1.0 + z));
      wt[a] = g.theta_weights[a] * dphi;
    }
    // C_d for d = 0..np-1, stored as np blocks of nt x nt
    std::vector<double> cblocks(np * nt * nt);
    parallel_for(np, [&](std::size_t d) {
      const double cd = std::cos(dphi * static_cast<double>(d));
      double* block = cblocks.data() + d * nt * nt;
      for (std::size_t a = 0; a < nt; ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
          const double u = clamp_unit(g.cos_theta[a] * g.cos_theta[b] +
                                      sin_theta[a] * sin_theta[b] * cd);
          block[a * nt + b] = std::sqrt(wt[a] * wt[b]) * p(u);
        }
      }
    });
    std::vector<std::vector<double>> per_mode(np);
    parallel_for(np, [&](std::size_t j) {
      SymmetricMatrix bj(nt);
      for (std::size_t d = 0; d < np; ++d) {
        const double phase = std::cos(2.0 * std::numbers::pi *
                                      static_cast<double>((j * d) % np) / static_cast<double>(np));
        const double* block = cblocks.data() + d * nt * nt;
        for (std::size_t a = 0; a < nt; ++a) {
          for (std::size_t b = 0; b < nt; ++b) bj(a, b) += phase * block[a * nt + b];
        }
      }
      per_mode[j] = symmetric_eigenvalues(std::move(bj));
    });
    for (const auto& v : per_mode) all.insert(all.end(), v.begin(), v.end());
  }
  std::sort(all.begin(), all.end(), std::greater<>());
  return all;
}

/// Top `count` Nyström eigenvalues, nonincreasing.
inline std::vector<double> gram_eigenvalues(const IsotropicProfile& p, const SphereGrid& g,
                                            std::size_t count,
                                            GramMethod method = GramMethod::fourier_blocks) {
  if (count > g.size()) throw RangeError("gram_eigenvalues: count exceeds the grid size");
  auto all = gram_spectrum(p, g, method);
  all.resize(count);
  return all;
}

struct SpectrumComparison {
  double max_rel_err = 0.0;
  std::size_t matched = 0;  ///< length of the prefix where reference > floor
};

/// Positionwise relative errors over the prefix where reference > floor.
inline SpectrumComparison compare_spectra(std::span<const double> oracle_vals,
                                          std::span<const double> reference, double floor) {
  SpectrumComparison out;
  const std::size_t n = std::min(oracle_vals.size(), reference.size());
  while (out.matched < n && reference[out.matched] > floor) {
    const double r = reference[out.matched];
    out.max_rel_err = std::max(out.max_rel_err, std::abs(oracle_vals[out.matched] - r) / r);
    ++out.matched;
  }
  if (out.matched == 0) throw DomainError("compare_spectra: no reference entry above the floor");
  return out;
}

/// Lengths of runs of nearly equal values in a nonincreasing sequence; a new
/// run starts where consecutive values differ by more than gap relative.
inline std::vector<std::size_t> plateau_lengths(std::span<const double> values,
                                                double gap = 1e-4) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool split =
        i == 0 || std::abs(values[i - 1] - values[i]) >
                      gap * std::max(std::abs(values[i - 1]), std::abs(values[i]));
    if (split) {
      out.push_back(1);
    } else {
      ++out.back();
    }
  }
  return out;
}

}  // namespace sphkern
