#pragma once

// Funk–Hecke spectra of isotropic kernels, the multiplicity-expanded sorted
// spectrum, Kolmogorov widths d_n = sqrt(lambda_{n+1}), optimal subspaces and
// eigenvalue decay diagnostics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/kernels.hpp"
#include "sphkern/parallel.hpp"
#include "sphkern/sphere_math.hpp"

namespace sphkern {

/// Eigenvalues below this fraction of max|lambda| (in absolute value) are
/// quadrature noise and clamped to zero; anything more negative is an error.
inline constexpr double kClampThreshold = 1e-12;

struct SpectrumEntry {
  int k;                       ///< harmonic degree
  double lambda;               ///< eigenvalue on H_k^m
  std::uint64_t multiplicity;  ///< d_k^m for Funk–Hecke spectra
};

/// One degree's run inside the nonincreasing flat sequence.
struct SortedBlock {
  int k;
  double lambda;
  std::uint64_t multiplicity;
  std::uint64_t offset;  ///< number of flat entries before this block
};

/// Per-degree eigenvalues with multiplicities. The sorted view is a list of
/// blocks (value descending, then degree ascending) so the flat sequence
/// lambda_1 >= lambda_2 >= ... never has to be materialized in full.
class Spectrum {
public:
  Spectrum() = default;

  /// Funk–Hecke form: lambdas[k] for k = 0..K, multiplicity d_k^m.
  Spectrum(int m, const std::vector<double>& lambdas) : m_(SphereDim(m).value()) {
    entries_.reserve(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      entries_.push_back({static_cast<int>(k), lambdas[k],
                          harmonic_dim(m, static_cast<int>(k))});
    }
    finish();
  }

  /// Arbitrary entries; m = 0 marks a synthetic spectrum with no sphere.
  Spectrum(int m, std::vector<SpectrumEntry> entries)
      : m_(m), entries_(std::move(entries)) {
    finish();
  }

  int m() const noexcept { return m_; }
  /// Largest degree present (-1 if empty).
  int kmax() const noexcept { return entries_.empty() ? -1 : entries_.back().k; }
  const std::vector<SpectrumEntry>& entries() const noexcept { return entries_; }
  const std::vector<SortedBlock>& blocks() const noexcept { return blocks_; }
  std::uint64_t total_count() const noexcept { return total_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Per-degree eigenvalue lambda_k (0 if k is not present).
  double lambda(int k) const {
    for (const auto& e : entries_) {
      if (e.k == k) return e.lambda;
    }
    return 0.0;
  }

  /// Block containing flat (0-based) position n.
  const SortedBlock& block_at(std::uint64_t n) const {
    if (n >= total_) {
      std::ostringstream os;
      os << "spectrum holds " << total_ << " eigenvalues with multiplicity; index "
         << n << " requested (increase kmax)";
      throw RangeError(os.str());
    }
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), n,
                               [](std::uint64_t v, const SortedBlock& b) {
                                 return v < b.offset;
                               });
    return *(it - 1);
  }

  /// Flat (0-based) sorted value: value_at(n) = lambda_{n+1}.
  double value_at(std::uint64_t n) const { return block_at(n).lambda; }

  /// sum_k d_k lambda_k over the included degrees.
  double trace() const {
    double acc = 0.0;
    for (const auto& e : entries_) acc += static_cast<double>(e.multiplicity) * e.lambda;
    return acc;
  }

private:
  void finish() {
    for (const auto& e : entries_) {
      if (!(e.lambda >= 0.0) || !std::isfinite(e.lambda)) {
        throw DomainError("spectrum eigenvalues must be finite and >= 0");
      }
      if (e.multiplicity == 0) throw DomainError("spectrum multiplicity must be positive");
    }
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (entries_[a].lambda != entries_[b].lambda) {
        return entries_[a].lambda > entries_[b].lambda;
      }
      return entries_[a].k < entries_[b].k;
    });
    blocks_.clear();
    total_ = 0;
    for (std::size_t i : order) {
      const auto& e = entries_[i];
      blocks_.push_back({e.k, e.lambda, e.multiplicity, total_});
      total_ += e.multiplicity;
    }
  }

  int m_ = 0;
  std::vector<SpectrumEntry> entries_;
  std::vector<SortedBlock> blocks_;
  std::uint64_t total_ = 0;
};

namespace detail {

/// ln of int_{-1}^{1} u^j P_k^lambda(u) (1-u^2)^{lambda-1/2} du for j >= k,
/// j - k even, via Rodrigues' formula; the integral is positive.
inline double log_gegenbauer_moment(double lambda, int j, int k) {
  const int i = (j - k) / 2;
  return log_gamma(j + 1.0) - log_gamma(j - k + 1.0) - k * std::numbers::ln2 +
         log_gamma(lambda + 0.5) + log_gamma(i + 0.5) - log_gamma(i + k + lambda + 1.0);
}

inline std::vector<double> clamp_eigenvalues(std::vector<double> lambdas) {
  double scale = 0.0;
  for (double l : lambdas) scale = std::max(scale, std::abs(l));
  const double threshold = kClampThreshold * scale;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!std::isfinite(lambdas[k])) {
      throw NumericalError("Funk–Hecke eigenvalue is not finite at degree " +
                           std::to_string(k));
    }
    if (lambdas[k] < 0.0) {
      if (lambdas[k] < -threshold) {
        std::ostringstream os;
        os << "not positive definite at this resolution: lambda_" << k << " = "
           << lambdas[k] << " (threshold " << -threshold << ")";
        throw NotPositiveDefinite(os.str());
      }
      lambdas[k] = 0.0;
    }
  }
  return lambdas;
}

}  // namespace detail

/// Default Gauss–Gegenbauer size for degrees up to kmax.
inline int default_quadrature_nodes(int kmax) { return 2 * kmax + 64; }

/// Raw Funk–Hecke coefficients lambda_k = omega_{m-1} int K_i P_k w du for
/// k = 0..kmax, without clamping.
///  - power_series: exact Gegenbauer moments of each monomial (no
///    cancellation for nonnegative coefficients);
///  - closed_form and eigen_series: the Gauss–Gegenbauer rule q.
inline std::vector<double> funk_hecke_raw(const IsotropicProfile& p, int m, int kmax,
                                          const QuadratureRule& q) {
  const SphereDim dim(m);
  detail::require(kmax >= 0, "funk_hecke: kmax must be >= 0");
  if (q.m() != m) throw DimensionError("funk_hecke: quadrature rule built for another m");
  const double lambda_idx = dim.gegenbauer_index();
  const double omega_prev = surface_volume(m - 1);
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);

  if (p.kind() == ProfileKind::power_series) {
    const auto b = p.coefficients();
    const int T = static_cast<int>(b.size()) - 1;
    parallel_for(out.size(), [&](std::size_t kk) {
      const int k = static_cast<int>(kk);
      double acc = 0.0;
      for (int j = k; j <= T; j += 2) {
        if (b[j] == 0.0) continue;
        acc += b[j] * std::exp(detail::log_gegenbauer_moment(lambda_idx, j, k));
      }
      out[kk] = omega_prev * acc;
    });
    return out;
  }

  if (p.kind() == ProfileKind::eigen_series) {
    if (p.eigen_m() != m) throw DimensionError("funk_hecke: eigen_series built for another m");
    const auto K = static_cast<std::size_t>(p.coefficients().size() - 1);
    if (2 * q.size() < K + static_cast<std::size_t>(kmax) + 1) {
      throw DomainError("funk_hecke: quadrature too small for the eigen_series degree");
    }
  } else if (q.size() < static_cast<std::size_t>(kmax) + 1) {
    throw DomainError("funk_hecke: quadrature needs at least kmax+1 nodes");
  }

  const std::size_t N = q.size();
  const std::size_t K1 = out.size();
  std::vector<double> fvals(N);
  std::vector<double> poly(N * K1);
  for (std::size_t i = 0; i < N; ++i) {
    const double u = q.nodes()[i];
    fvals[i] = q.weights()[i] * p(u);
    ultraspherical_all(lambda_idx, u, std::span<double>(poly.data() + i * K1, K1));
  }
  parallel_for(K1, [&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += fvals[i] * poly[i * K1 + k];
    out[k] = omega_prev * acc;
  });
  return out;
}

/// Funk–Hecke spectrum for degrees 0..kmax. Small negative values are clamped;
/// values below -1e-12 max|lambda| raise NotPositiveDefinite.
inline Spectrum funk_hecke_eigenvalues(const IsotropicProfile& p, int m, int kmax,
                                       const QuadratureRule& q) {
  return Spectrum(m, detail::clamp_eigenvalues(funk_hecke_raw(p, m, kmax, q)));
}

/// Convenience overload that builds the default rule.
inline Spectrum funk_hecke_eigenvalues(const IsotropicProfile& p, int m, int kmax) {
  return funk_hecke_eigenvalues(p, m, kmax,
                                gegenbauer_quadrature(m, default_quadrature_nodes(kmax)));
}

/// Flat nonincreasing sequence lambda_1 >= lambda_2 >= ..., each lambda_k
/// repeated d_k times; at most `limit` entries.
inline std::vector<double> sorted_eigenvalues(const Spectrum& s,
                                              std::uint64_t limit = UINT64_MAX) {
  std::vector<double> out;
  const std::uint64_t n = std::min(limit, s.total_count());
  out.reserve(static_cast<std::size_t>(n));
  for (const auto& b : s.blocks()) {
    for (std::uint64_t j = 0; j < b.multiplicity && out.size() < n; ++j) {
      out.push_back(b.lambda);
    }
    if (out.size() >= n) break;
  }
  return out;
}

/// (degree, slot) label of one eigenvalue; slots are 1-based within H_k^m.
struct HarmonicIndex {
  int k;
  std::uint64_t slot;
  friend bool operator==(const HarmonicIndex&, const HarmonicIndex&) = default;
};

struct WidthSequence {
  std::vector<double> values;          ///< d_0 .. d_nmax
  std::vector<HarmonicIndex> sources;  ///< label of lambda_{n+1}
};

/// d_n(S; L^2) = sqrt(lambda_{n+1}) for n = 0..nmax.
inline WidthSequence kolmogorov_widths(const Spectrum& s, int nmax) {
  detail::require(nmax >= 0, "kolmogorov_widths: nmax must be >= 0");
  if (s.total_count() < static_cast<std::uint64_t>(nmax) + 1) {
    std::ostringstream os;
    os << "kolmogorov_widths: spectrum has " << s.total_count()
       << " eigenvalues with multiplicity but nmax+1 = " << nmax + 1
       << " are needed; use a larger kmax";
    throw RangeError(os.str());
  }
  WidthSequence w;
  w.values.reserve(static_cast<std::size_t>(nmax) + 1);
  w.sources.reserve(static_cast<std::size_t>(nmax) + 1);
  for (int n = 0; n <= nmax; ++n) {
    const auto& b = s.block_at(static_cast<std::uint64_t>(n));
    w.values.push_back(std::sqrt(b.lambda));
    w.sources.push_back({b.k, static_cast<std::uint64_t>(n) - b.offset + 1});
  }
  return w;
}

struct OptimalSubspace {
  std::vector<HarmonicIndex> indices;
  /// lambda_n == lambda_{n+1}: the truncation splits a tie, so the
  /// n-dimensional optimal subspace is not unique.
  bool non_unique = false;
};

/// Indices of the n largest eigenvalues (with multiplicity): Omega_n.
inline OptimalSubspace optimal_subspace(const Spectrum& s, std::uint64_t n) {
  detail::require(n >= 1, "optimal_subspace: n must be >= 1");
  if (n > s.total_count()) {
    throw RangeError("optimal_subspace: n exceeds the available eigenvalues");
  }
  OptimalSubspace out;
  out.indices.reserve(static_cast<std::size_t>(n));
  for (const auto& b : s.blocks()) {
    for (std::uint64_t j = 0; j < b.multiplicity && out.indices.size() < n; ++j) {
      out.indices.push_back({b.k, j + 1});
    }
    if (out.indices.size() >= n) break;
  }
  if (n < s.total_count()) {
    const double a = s.value_at(n - 1);
    const double b = s.value_at(n);
    out.non_unique = std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
  }
  return out;
}

struct DecayDiagnostic {
  std::vector<double> values;  ///< lambda_n n^{1+rho/m}, n = 1..len
  double sup = 0.0;
  std::uint64_t argmax = 0;  ///< 1-based n attaining sup
  /// sup attained in the first half of the range (no growth at the tail)
  bool bounded = false;
};

/// lambda_n n^{1 + rho/m} over a given nonincreasing sequence (1-indexed).
inline DecayDiagnostic decay_diagnostic(const std::vector<double>& sorted, double rho, int m) {
  if (!(rho > 0.0 && rho <= 2.0)) throw DomainError("decay_diagnostic: rho must lie in (0, 2]");
  detail::require(m >= 1, "decay_diagnostic: m must be >= 1");
  DecayDiagnostic d;
  d.values.reserve(sorted.size());
  const double expo = 1.0 + rho / m;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double v = sorted[i] * std::pow(n, expo);
    d.values.push_back(v);
    if (i == 0 || v > d.sup) {
      d.sup = v;
      d.argmax = i + 1;
    }
  }
  d.bounded = !sorted.empty() && 2 * d.argmax <= sorted.size();
  return d;
}

inline DecayDiagnostic decay_diagnostic(const Spectrum& s, double rho, std::uint64_t count) {
  return decay_diagnostic(sorted_eigenvalues(s, count), rho, s.m());
}

/// The diagnostic at the last position of each sorted block, where it peaks
/// within a plateau of equal eigenvalues: pairs (n, lambda_n n^{1+rho/m}).
inline std::vector<std::pair<std::uint64_t, double>> decay_block_envelope(
    const Spectrum& s, double rho, std::uint64_t count) {
  if (!(rho > 0.0 && rho <= 2.0)) throw DomainError("decay_block_envelope: rho must lie in (0, 2]");
  std::vector<std::pair<std::uint64_t, double>> out;
  const double expo = 1.0 + rho / s.m();
  for (const auto& b : s.blocks()) {
    const std::uint64_t last = b.offset + b.multiplicity;
    if (last > count) break;
    out.emplace_back(last, b.lambda * std::pow(static_cast<double>(last), expo));
  }
  return out;
}

}  // namespace sphkern
