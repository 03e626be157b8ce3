#pragma once

// Dense and tridiagonal complex kernels: eigenvalues, smallest singular
// values, resolvent norms and extreme eigenvalues of Hermitian parts.
//
// Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace hop {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Complex tridiagonal matrix: sub[i] = T(i+1, i), super[i] = T(i, i+1).
struct TridiagC {
  std::vector<cplx> sub;
  std::vector<cplx> diag;
  std::vector<cplx> super;

  TridiagC() = default;
  TridiagC(std::vector<cplx> sub_, std::vector<cplx> diag_, std::vector<cplx> super_);

  std::size_t order() const { return diag.size(); }
  CMatrix dense() const;
  TridiagC adjoint() const;
  /// Throws InvalidArgument when lengths are inconsistent or an entry is not finite.
  void validate() const;
};

/// Eigenvalues with algebraic multiplicity (Hessenberg reduction followed by
/// shifted QR on the Schur form). Throws NumericFailure if the QR sweep does
/// not converge within 100*n iterations.
std::vector<cplx> eig_dense(const CMatrix& m);

/// Smallest singular value, computed from a two-sided Jacobi SVD.
double smin_dense(const CMatrix& m);

/// Largest singular value (spectral norm).
double norm2_dense(const CMatrix& m);

struct SminTridiagResult {
  double value = 0.0;
  int iterations = 0;
  bool fell_back = false;  // dense SVD was used after slow convergence
};

struct SminTridiagOptions {
  double rel_tol = 1e-10;
  int max_iterations = 200;
};

/// Smallest singular value of a tridiagonal matrix by Lanczos iteration on
/// (T^*T)^{-1}. T is factored once (LU with partial pivoting); each step
/// applies T^{-*} and T^{-1} in O(n). If the Ritz residual bound is not met
/// within max_iterations the dense route is used and the result is flagged.
SminTridiagResult smin_tridiag_ex(const TridiagC& t, const SminTridiagOptions& opts = {});
double smin_tridiag(const TridiagC& t);

enum class NormP { one, two, inf };

enum class ResolventStatus { regular, singular, numerically_singular };

struct ResolventNorm {
  double value = 0.0;  // +infinity unless status == regular
  ResolventStatus status = ResolventStatus::regular;
};

/// ||(m - lambda I)^{-1}||_p for p in {1, 2, inf}.
ResolventNorm resolvent_norm(const CMatrix& m, cplx lambda, NormP p);

/// Singularity cutoff used by resolvent_norm: smin < kSingularRelTol * (1 + ||m||_2).
inline constexpr double kSingularRelTol = 1e-12;

/// Largest eigenvalue of a dense Hermitian matrix (only the lower triangle is read).
double hermitian_max_eig(const CMatrix& h);

/// Largest eigenvalue of the real symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal magnitudes `off` (Sturm-count bisection, O(n) per step).
double symtridiag_max_eig(const std::vector<double>& diag, const std::vector<double>& off);

/// Largest eigenvalue of the Hermitian tridiagonal matrix with real diagonal
/// `diag` and sub-diagonal `sub` (super-diagonal is conj(sub)).
double hermitian_tridiag_max_eig(const std::vector<double>& diag, const std::vector<cplx>& sub);

}  // namespace hop
