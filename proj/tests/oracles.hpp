#pragma once

// Reference computations for the tests. They deliberately avoid the library's
// own kernels: dense spectra and singular values come from LAPACK, S_n from
// enumerating every sign sequence without the reversal quotient.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline std::vector<cplx> eig(const CMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  CMatrix a = m;  // column-major copy
  std::vector<cplx> w(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw std::runtime_error("zgeev failed");
  return w;
}

inline std::vector<double> singular_values(const CMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  CMatrix a = m;
  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(1, n - 1)));
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', n, n, a.data(), n, s.data(), nullptr, 1,
                                         nullptr, 1, superb.data());
  if (info != 0) throw std::runtime_error("zgesvd failed");
  return s;  // descending
}

inline double smin(const CMatrix& m) { return singular_values(m).back(); }

/// Solves m X = I by LU (zgesv).
inline CMatrix inverse(const CMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  CMatrix a = m;
  CMatrix x = CMatrix::Identity(n, n);
  std::vector<lapack_int> piv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, n, a.data(), n, piv.data(), x.data(), n);
  if (info != 0) throw std::runtime_error("zgesv failed");
  return x;
}

/// Largest distance in a greedy nearest matching of two equal-size multisets.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const cplx& z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - z) < std::abs(q - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

/// Order-n hopping matrix with sub-diagonal signs from `mask` (bit j set iff
/// entry j+1 is -1), super-diagonal ones, minus lambda on the diagonal.
inline CMatrix hopping(std::uint64_t mask, std::size_t n, cplx lambda = 0.0) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = ((mask >> i) & 1U) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = 1.0;
  }
  return m;
}

/// Characteristic polynomial det(z I - A) of the order-n hopping matrix with
/// sub-diagonal signs from `mask`, by the three-term recurrence. Coefficients
/// (lowest degree first) are exact integers.
inline std::vector<double> charpoly(std::uint64_t mask, std::size_t n) {
  std::vector<double> p0{1.0}, p1{0.0, 1.0};
  for (std::size_t k = 2; k <= n; ++k) {
    std::vector<double> p2(k + 1, 0.0);
    for (std::size_t i = 0; i < p1.size(); ++i) p2[i + 1] += p1[i];
    const double b = ((mask >> (k - 2)) & 1U) ? -1.0 : 1.0;
    for (std::size_t i = 0; i < p0.size(); ++i) p2[i] -= b * p0[i];
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return p1;
}

inline cplx horner(const std::vector<double>& poly, cplx z) {
  cplx v = 0.0;
  for (std::size_t i = poly.size(); i-- > 0;) v = v * z + poly[i];
  return v;
}

/// Smallest |p_c(z)| over all sequences c of length n-1.
inline double min_charpoly_residual(cplx z, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n - 1)); ++m) best = std::min(best, std::abs(horner(charpoly(m, n), z)));
  return best;
}

struct BruteMin {
  double value;
  std::uint64_t mask;  // smallest mask attaining the minimum within 1e-13
};

/// Minimum smallest singular value over all 2^(n-1) sequences.
inline BruteMin brute_force_S(cplx lambda, std::size_t n) {
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  std::vector<double> v(total);
  for (std::uint64_t m = 0; m < total; ++m) v[m] = n == 1 ? std::abs(lambda) : smin(hopping(m, n, lambda));
  const double best = *std::min_element(v.begin(), v.end());
  for (std::uint64_t m = 0; m < total; ++m)
    if (v[m] <= best + 1e-13) return {best, m};
  return {best, 0};
}

/// theta_n by Newton's method in long double, started from the right end of
/// the bracket, where the equation 2 cos((n+1) t) = cos((n-1) t) is concave.
inline double eps_n(std::size_t n) {
  const long double m = static_cast<long double>(n);
  const long double pi = 3.141592653589793238462643383279502884L;
  long double t = pi / (2.0L * (m + 2.0L));
  for (int it = 0; it < 100; ++it) {
    const long double f = 2.0L * std::cos((m + 1.0L) * t) - std::cos((m - 1.0L) * t);
    const long double df = -2.0L * (m + 1.0L) * std::sin((m + 1.0L) * t) + (m - 1.0L) * std::sin((m - 1.0L) * t);
    const long double step = f / df;
    t -= step;
    if (std::abs(step) < 1e-19L) break;
  }
  return static_cast<double>(4.0L * std::sin(t));
}

}  // namespace oracle
