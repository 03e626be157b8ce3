#include "hopping/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hopping/errors.hpp"

namespace hop {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("matrix is not square");
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!finite(m(i, j))) throw InvalidArgument("matrix has a non-finite entry");
}

// |re| + |im|, the pivoting magnitude used by LAPACK's complex gttrf.
double cabs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// LU factorisation of a tridiagonal matrix with partial pivoting. U has two
// super-diagonals (du, du2); L is unit lower bidiagonal with multipliers dl and
// the row interchanges recorded in `swapped`.
struct TridiagLU {
  std::vector<cplx> dl, d, du, du2;
  std::vector<cplx> dinv, dinv_conj;
  std::vector<char> swapped;
  bool singular = false;

  explicit TridiagLU(const TridiagC& t)
      : dl(t.sub), d(t.diag), du(t.super), du2(t.order() > 2 ? t.order() - 2 : 0), swapped(t.order(), 0) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (cabs1(d[i]) >= cabs1(dl[i])) {
        if (d[i] != cplx(0.0)) {
          const cplx fact = dl[i] / d[i];
          dl[i] = fact;
          d[i + 1] -= fact * du[i];
        }
        if (i + 2 < n) du2[i] = 0.0;
      } else {
        const cplx fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const cplx temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    dinv.resize(n);
    dinv_conj.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] == cplx(0.0)) {
        singular = true;
        continue;
      }
      dinv[i] = 1.0 / d[i];
      dinv_conj[i] = std::conj(dinv[i]);
    }
  }

  // b <- T^{-1} b
  void solve(std::vector<cplx>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const cplx temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] *= dinv[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) * dinv[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      const std::size_t i = k - 2;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) * dinv[i];
    }
  }

  // b <- T^{-*} b
  void solve_adjoint(std::vector<cplx>& b) const {
    const std::size_t n = d.size();
    b[0] *= dinv_conj[0];
    if (n > 1) b[1] = (b[1] - std::conj(du[0]) * b[0]) * dinv_conj[1];
    for (std::size_t i = 2; i < n; ++i)
      b[i] = (b[i] - std::conj(du[i - 1]) * b[i - 1] - std::conj(du2[i - 2]) * b[i - 2]) * dinv_conj[i];
    for (std::size_t k = n - 1; k-- > 0;) {
      if (!swapped[k]) {
        b[k] -= std::conj(dl[k]) * b[k + 1];
      } else {
        const cplx temp = b[k + 1];
        b[k + 1] = b[k] - std::conj(dl[k]) * temp;
        b[k] = temp;
      }
    }
  }
};

double norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Deterministic start vector (splitmix64 stream with a fixed seed).
std::vector<cplx> start_vector(std::size_t n) {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&state]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
  };
  std::vector<cplx> x(n);
  for (auto& v : x) {
    const double re = next();
    v = cplx(re, next());
  }
  const double s = norm(x);
  for (auto& v : x) v /= s;
  return x;
}

}  // namespace

TridiagC::TridiagC(std::vector<cplx> sub_, std::vector<cplx> diag_, std::vector<cplx> super_)
    : sub(std::move(sub_)), diag(std::move(diag_)), super(std::move(super_)) {}

void TridiagC::validate() const {
  const std::size_t n = diag.size();
  if (n == 0) throw InvalidArgument("tridiagonal matrix of order 0");
  if (sub.size() != n - 1 || super.size() != n - 1)
    throw InvalidArgument("tridiagonal band lengths inconsistent with order");
  for (const auto* band : {&sub, &diag, &super})
    for (const cplx& z : *band)
      if (!finite(z)) throw InvalidArgument("tridiagonal matrix has a non-finite entry");
}

CMatrix TridiagC::dense() const {
  const auto n = static_cast<Eigen::Index>(order());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i + 1, i) = sub[static_cast<std::size_t>(i)];
    m(i, i + 1) = super[static_cast<std::size_t>(i)];
  }
  return m;
}

TridiagC TridiagC::adjoint() const {
  TridiagC a;
  a.diag.reserve(diag.size());
  for (const cplx& z : diag) a.diag.push_back(std::conj(z));
  for (const cplx& z : super) a.sub.push_back(std::conj(z));
  for (const cplx& z : sub) a.super.push_back(std::conj(z));
  return a;
}

std::vector<cplx> eig_dense(const CMatrix& m) {
  require_finite(m);
  const Eigen::Index n = m.rows();
  if (n == 0) return {};
  if (n == 1) return {m(0, 0)};
  Eigen::ComplexEigenSolver<CMatrix> solver;
  solver.setMaxIterations(100 * n);
  solver.compute(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigenvalue iteration did not converge within " << 100 * n << " sweeps for the " << n << "x" << n
       << " matrix\n"
       << m;
    throw NumericFailure(os.str());
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double smin_dense(const CMatrix& m) {
  require_finite(m);
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(m.rows() - 1);
}

double norm2_dense(const CMatrix& m) {
  require_finite(m);
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

struct RitzTop {
  double theta = 0.0;
  double last_sq = 1.0;  // squared last component of the normalised Ritz vector
};

// Largest eigenvalue of the symmetric tridiagonal Lanczos matrix by Newton's
// method from above on its characteristic polynomial, evaluated through the
// ratio recurrence q_j = (a_j - x) - b_{j-1}^2 / q_{j-1}. Above the largest
// root every q_j is negative and the iterates decrease monotonically. At the
// root, the last eigenvector component satisfies s_k^2 = -1 / q_k'(theta).
RitzTop lanczos_top_ritz(const std::vector<double>& a, const std::vector<double>& b, double upper) {
  const std::size_t k = a.size();
  double x = upper;
  double last_sq = 1.0;
  for (int it = 0; it < 200; ++it) {
    double q = a[0] - x;
    double dq = -1.0;
    double logderiv = dq / q;
    bool ok = q < 0.0;
    std::size_t j = 1;
    for (; j < k && ok; ++j) {
      const double bb = b[j - 1] * b[j - 1];
      const double dqn = -1.0 + bb * dq / (q * q);
      q = (a[j] - x) - bb / q;
      dq = dqn;
      ok = q < 0.0;
      logderiv += dq / q;
    }
    if (j == k && dq < 0.0) last_sq = std::min(1.0, -1.0 / dq);
    if (!ok) {
      // Rounding put x at (or a hair below) the top root.
      if (it > 0) return {x, last_sq};
      break;
    }
    const double step = 1.0 / logderiv;
    if (!(step > 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x))) return {x - step, last_sq};
    x -= step;
  }
  return {symtridiag_max_eig(a, b), 1.0};
}

}  // namespace

SminTridiagResult smin_tridiag_ex(const TridiagC& t, const SminTridiagOptions& opts) {
  t.validate();
  const std::size_t n = t.order();
  if (n == 1) return {std::abs(t.diag[0]), 0, false};

  const TridiagLU lu(t);
  if (lu.singular) return {0.0, 0, false};

  // Lanczos with full reorthogonalisation on M = (T^* T)^{-1}; the largest
  // Ritz value approximates 1/smin^2 from below.
  const std::size_t kmax = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opts.max_iterations, 1)));
  std::vector<cplx> basis(n * (kmax + 1));
  {
    const std::vector<cplx> x0 = start_vector(n);
    std::copy(x0.begin(), x0.end(), basis.begin());
  }
  std::vector<double> alpha;
  std::vector<double> beta;
  alpha.reserve(kmax);
  beta.reserve(kmax);
  std::vector<cplx> w(n);
  double theta_prev = 0.0;
  double gersh = 0.0;  // running Gershgorin bound of the Lanczos matrix
  const double eps = std::numeric_limits<double>::epsilon();

  auto orthogonalise = [&](std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      const cplx* qj = basis.data() + j * n;
      cplx h(0.0);
      for (std::size_t i = 0; i < n; ++i) h += std::conj(qj[i]) * w[i];
      for (std::size_t i = 0; i < n; ++i) w[i] -= h * qj[i];
    }
  };

  for (std::size_t k = 0; k < kmax; ++k) {
    const cplx* q = basis.data() + k * n;
    std::copy(q, q + n, w.begin());
    lu.solve_adjoint(w);
    lu.solve(w);
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += (std::conj(q[i]) * w[i]).real();
    if (!std::isfinite(a)) break;
    alpha.push_back(a);

    const double before = norm(w);
    orthogonalise(k + 1);
    double b = norm(w);
    if (b < 0.7 * before) {
      orthogonalise(k + 1);
      b = norm(w);
    }
    if (!std::isfinite(b)) break;

    const double bprev = k > 0 ? beta[k - 1] : 0.0;
    gersh = std::max(gersh, a + bprev + b);
    const RitzTop top = lanczos_top_ritz(alpha, beta, gersh);
    const double theta = top.theta;
    const bool invariant = b <= eps * theta || k + 1 == n;
    if (invariant || theta - theta_prev <= 1e-3 * opts.rel_tol * theta) {
      // Ritz residual ||M y - theta y|| = b |s_k|; the eigenvalue error is
      // quadratic in it once the top Ritz value has separated.
      const double residual = b * std::sqrt(top.last_sq);
      if (theta > 0.0 && (residual <= std::sqrt(opts.rel_tol) * theta || invariant))
        return {1.0 / std::sqrt(theta), static_cast<int>(k + 1), false};
    }
    theta_prev = theta;
    beta.push_back(b);
    cplx* next = basis.data() + (k + 1) * n;
    for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
  }
  return {smin_dense(t.dense()), static_cast<int>(alpha.size()), true};
}

double smin_tridiag(const TridiagC& t) { return smin_tridiag_ex(t).value; }

ResolventNorm resolvent_norm(const CMatrix& m, cplx lambda, NormP p) {
  require_finite(m);
  const Eigen::Index n = m.rows();
  if (n == 0) throw InvalidArgument("resolvent of an empty matrix");
  CMatrix shifted = m;
  shifted.diagonal().array() -= lambda;

  double smax = 0.0;
  double smin = 0.0;
  if (n == 1) {
    smax = smin = std::abs(shifted(0, 0));
  } else {
    Eigen::JacobiSVD<CMatrix> svd(shifted);
    smax = svd.singularValues()(0);
    smin = svd.singularValues()(n - 1);
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (smin == 0.0) return {inf, ResolventStatus::singular};
  const double mnorm = norm2_dense(m);
  if (smin < kSingularRelTol * (1.0 + mnorm) || smax / smin > 1.0 / std::numeric_limits<double>::epsilon())
    return {inf, ResolventStatus::numerically_singular};

  if (p == NormP::two) return {1.0 / smin, ResolventStatus::regular};

  const CMatrix inv = shifted.fullPivLu().inverse();
  double best = 0.0;
  if (p == NormP::one) {
    for (Eigen::Index j = 0; j < n; ++j) best = std::max(best, inv.col(j).cwiseAbs().sum());
  } else {
    for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, inv.row(i).cwiseAbs().sum());
  }
  return {best, ResolventStatus::regular};
}

double hermitian_max_eig(const CMatrix& h) {
  if (h.rows() == 0) throw InvalidArgument("empty Hermitian matrix");
  if (h.rows() == 1) return h(0, 0).real();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericFailure("Hermitian eigensolver did not converge");
  return solver.eigenvalues()(h.rows() - 1);
}

double symtridiag_max_eig(const std::vector<double>& diag, const std::vector<double>& off) {
  const std::size_t n = diag.size();
  if (n == 0) throw InvalidArgument("empty tridiagonal matrix");
  if (off.size() + 1 != n) throw InvalidArgument("off-diagonal length must be order - 1");
  if (n == 1) return diag[0];

  // Gershgorin interval.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
    scale = std::max({scale, std::abs(diag[i]), std::abs(i + 1 < n ? off[i] : 0.0)});
  }
  if (scale == 0.0) return 0.0;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale * scale);

  // Number of eigenvalues strictly less than x (Sylvester inertia of T - xI).
  auto count_below = [&](double x) {
    std::size_t count = 0;
    double q = diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
      q = diag[i] - x - off[i - 1] * off[i - 1] / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      if (q < 0) ++count;
    }
    return count;
  };

  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin || mid == lo || mid == hi) break;
    if (count_below(mid) == n)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double hermitian_tridiag_max_eig(const std::vector<double>& diag, const std::vector<cplx>& sub) {
  // Diagonal unitary similarity makes the off-diagonal real and non-negative.
  std::vector<double> off(sub.size());
  std::transform(sub.begin(), sub.end(), off.begin(), [](cplx z) { return std::abs(z); });
  return symtridiag_max_eig(diag, off);
}

}  // namespace hop
