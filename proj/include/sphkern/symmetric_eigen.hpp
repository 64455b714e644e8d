#pragma once

// Dense real symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit-shift QL iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "sphkern/errors.hpp"

namespace sphkern {

/// Row-major square matrix; only symmetric contents are meaningful here.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }

  /// max_i sum_j |a_ij|; bounds the spectral norm for symmetric matrices.
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (double v : row(i)) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  SymmetricMatrix vectors;     ///< column j is the eigenvector of values[j]; empty if not requested
};

namespace detail {

/// Implicit QL on a symmetric tridiagonal matrix. d holds the diagonal, e the
/// subdiagonal in e[1..n-1] (e[0] unused). On return d holds the eigenvalues
/// (unsorted). If z is non-null its columns are rotated along.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           SymmetricMatrix* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t mm = l;
    do {
      for (mm = l; mm + 1 < n; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (mm != l) {
        if (iter++ == 60) {
          std::ostringstream os;
          os << "tridiagonal QL: no convergence for eigenvalue " << l
             << " after 60 iterations";
          throw NumericalError(os.str());
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = mm;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z != nullptr) {
            for (std::size_t k = 0; k < n; ++k) {
              f = (*z)(k, i + 1);
              (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
              (*z)(k, i) = c * (*z)(k, i) - s * f;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }
}

/// Householder tridiagonalization (tred2). On return d/e hold the diagonal
/// and subdiagonal (e[0] = 0); if want_vectors, a holds the accumulated
/// orthogonal transform, otherwise a is destroyed.
inline void householder_tridiagonalize(SymmetricMatrix& a, std::vector<double>& d,
                                       std::vector<double>& e, bool want_vectors) {
  const std::size_t n = a.size();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0) return;
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          if (want_vectors) a(j, i) = a(i, j) / h;
          double gg = 0.0;
          for (std::size_t k = 0; k <= j; ++k) gg += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) gg += a(k, j) * a(i, k);
          e[j] = gg / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a(i, j);
          const double gg = e[j] - hh * f;
          e[j] = gg;
          for (std::size_t k = 0; k <= j; ++k) {
            a(j, k) -= (f * e[k] + gg * a(i, k));
          }
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  if (want_vectors) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] != 0.0) {
        for (std::size_t j = 0; j < i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
          for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
        }
      }
      d[i] = a(i, i);
      a(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) {
        a(j, i) = 0.0;
        a(i, j) = 0.0;
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  }
}

}  // namespace detail

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal (offdiag.size() == diag.size() - 1).
inline std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                                   std::span<const double> offdiag) {
  if (!diag.empty() && offdiag.size() + 1 != diag.size()) {
    throw DimensionError("tridiagonal_eigenvalues: off-diagonal length mismatch");
  }
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(d.size(), 0.0);
  for (std::size_t i = 0; i < offdiag.size(); ++i) e[i + 1] = offdiag[i];
  detail::tridiagonal_ql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

/// Full symmetric eigendecomposition; the matrix is taken by value and used
/// as workspace. Only the lower triangle is read.
inline EigenDecomposition symmetric_eigen(SymmetricMatrix a, bool want_vectors = true) {
  const std::size_t n = a.size();
  std::vector<double> d, e;
  detail::householder_tridiagonalize(a, d, e, want_vectors);
  detail::tridiagonal_ql(d, e, want_vectors ? &a : nullptr);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  EigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = d[order[i]];
  if (want_vectors) {
    out.vectors = SymmetricMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = a(i, order[j]);
    }
  }
  return out;
}

/// Eigenvalues only, ascending.
inline std::vector<double> symmetric_eigenvalues(SymmetricMatrix a) {
  return symmetric_eigen(std::move(a), false).values;
}

}  // namespace sphkern
