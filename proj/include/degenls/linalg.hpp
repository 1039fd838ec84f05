/// @file linalg.hpp
/// @brief Tridiagonal kernels: LU without pivoting, pivoted solves and
/// symmetric eigenpairs (LAPACK), and Sturm-sequence inertia counts.

#pragma once

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "degenls/error.hpp"

namespace degenls::linalg {

/// LU factorization of a tridiagonal matrix without pivoting.
///
/// Used for matrices whose Hermitian part is positive definite (the
/// Crank-Nicolson system W + i dt/2 K and the shifted gradient-flow system
/// W + tau (K + W)); both admit a stable pivot-free elimination.
template <class T>
class TridiagonalLU {
 public:
  TridiagonalLU() = default;

  /// sub[i] couples row i+1 to column i, sup[i] couples row i to column i+1.
  TridiagonalLU(std::span<const T> sub, std::span<const T> diag,
                std::span<const T> sup)
      : sup_(sup.begin(), sup.end()), piv_(diag.size()), mult_(sub.size()) {
    const std::size_t n = diag.size();
    if (sub.size() + 1 != n || sup.size() + 1 != n) {
      raise(ErrorKind::LengthMismatch, "tridiagonal band lengths inconsistent");
    }
    piv_[0] = diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(piv_[i - 1]) == 0.0) {
        raise(ErrorKind::EigensolverBreakdown, "zero pivot in tridiagonal LU");
      }
      mult_[i - 1] = sub[i - 1] / piv_[i - 1];
      piv_[i] = diag[i] - mult_[i - 1] * sup_[i - 1];
    }
  }

  std::size_t size() const noexcept { return piv_.size(); }

  /// Solves in place.
  void solve(std::span<T> rhs) const {
    const std::size_t n = piv_.size();
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= mult_[i - 1] * rhs[i - 1];
    rhs[n - 1] /= piv_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      rhs[i] = (rhs[i] - sup_[i] * rhs[i + 1]) / piv_[i];
    }
  }

 private:
  std::vector<T> sup_;
  std::vector<T> piv_;
  std::vector<T> mult_;
};

/// Solves a general real tridiagonal system with partial pivoting (dgtsv).
inline std::vector<double> solve_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> sup,
                                             std::span<const double> rhs) {
  const auto n = static_cast<lapack_int>(diag.size());
  std::vector<double> dl(sub.begin(), sub.end());
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> du(sup.begin(), sup.end());
  std::vector<double> b(rhs.begin(), rhs.end());
  const lapack_int info =
      LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(),
                    b.data(), n);
  if (info != 0) {
    raise(ErrorKind::SingularLPlus,
          "tridiagonal solve failed (dgtsv info=" + std::to_string(info) + ")");
  }
  return b;
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below sigma, from the signs of the LDL^T pivots of T - sigma I.
inline int count_below(std::span<const double> diag,
                       std::span<const double> off, double sigma) {
  const double tiny = std::numeric_limits<double>::min() * 1e8;
  int count = 0;
  double q = diag[0] - sigma;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == diag.size()) break;
    q = diag[i + 1] - sigma - off[i] * off[i] / q;
  }
  return count;
}

struct Eigenpairs {
  std::vector<double> values;
  /// Column-major, one eigenvector of length n per value.
  std::vector<std::vector<double>> vectors;
};

/// The k smallest eigenpairs of a symmetric tridiagonal matrix (dstevr).
inline Eigenpairs smallest_eigenpairs(std::span<const double> diag,
                                      std::span<const double> off, int k) {
  const auto n = static_cast<lapack_int>(diag.size());
  k = std::clamp(k, 1, static_cast<int>(n));
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(off.begin(), off.end());
  e.push_back(0.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k, 0.0,
      &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != k) {
    raise(ErrorKind::EigensolverBreakdown,
          "dstevr failed (info=" + std::to_string(info) + ", found=" +
              std::to_string(found) + " of " + std::to_string(k) + ")");
  }
  Eigenpairs out;
  out.values.assign(w.begin(), w.begin() + k);
  out.vectors.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto first = z.begin() + static_cast<std::ptrdiff_t>(j) * n;
    out.vectors[static_cast<std::size_t>(j)].assign(first, first + n);
  }
  return out;
}

}  // namespace degenls::linalg
