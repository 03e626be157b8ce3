#include "hopping/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hopping/errors.hpp"
#include "hopping/io.hpp"

namespace hop {

double support_function(const CMatrix& m, double theta) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("support function needs a non-empty square matrix");
  const cplx r = std::polar(1.0, -theta);
  const CMatrix h = (r * m + std::conj(r) * m.adjoint()) * 0.5;
  return hermitian_max_eig(h);
}

double support_function(const TridiagC& t, double theta) {
  t.validate();
  const cplx r = std::polar(1.0, -theta);
  const std::size_t n = t.order();
  std::vector<double> diag(n);
  std::vector<cplx> sub(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = (r * t.diag[i]).real();
  for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = 0.5 * (r * t.sub[i] + std::conj(r) * std::conj(t.super[i]));
  return hermitian_tridiag_max_eig(diag, sub);
}

double support_delta(double theta) { return 2.0 * std::max(std::abs(std::cos(theta)), std::abs(std::sin(theta))); }

namespace {

template <class H>
SupportCurve build_curve(std::size_t m, H&& hfun) {
  if (m < 8) throw InvalidArgument("angle_count must be at least 8");
  SupportCurve c;
  c.angles.resize(m);
  c.h.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    c.angles[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    c.h[k] = hfun(c.angles[k]);
  }
  const double det = std::sin(2.0 * std::numbers::pi / static_cast<double>(m));
  c.boundary.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t k1 = (k + 1) % m;
    const double t0 = c.angles[k], t1 = k1 ? c.angles[k1] : 2.0 * std::numbers::pi;
    const double x = (c.h[k] * std::sin(t1) - c.h[k1] * std::sin(t0)) / det;
    const double y = (std::cos(t0) * c.h[k1] - std::cos(t1) * c.h[k]) / det;
    c.boundary[k] = cplx(x, y);
  }

  double scale = 0.0;
  for (double v : c.h) scale = std::max(scale, std::abs(v));
  double min_width = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double opposite = m % 2 == 0 ? c.h[(k + m / 2) % m] : hfun(c.angles[k] + std::numbers::pi);
    const double w = c.h[k] + opposite;
    if (w < min_width) {
      min_width = w;
      arg = c.angles[k];
    }
  }
  if (min_width < kDegenerateWidth * (1.0 + scale)) {
    c.degenerate = true;
    const double phi = arg + 0.5 * std::numbers::pi;
    const cplx base = hfun(arg) * std::polar(1.0, arg);
    c.segment_a = base + hfun(phi) * std::polar(1.0, phi);
    c.segment_b = base - hfun(phi + std::numbers::pi) * std::polar(1.0, phi);
  }
  return c;
}

}  // namespace

SupportCurve nr_boundary(const CMatrix& m, std::size_t angle_count) {
  return build_curve(angle_count, [&](double t) { return support_function(m, t); });
}

SupportCurve nr_boundary(const TridiagC& t, std::size_t angle_count) {
  t.validate();
  return build_curve(angle_count, [&](double th) { return support_function(t, th); });
}

double delta_gap(const SupportCurve& curve) {
  double gap = 0.0;
  for (std::size_t k = 0; k < curve.angles.size(); ++k)
    gap = std::max(gap, support_delta(curve.angles[k]) - curve.h[k]);
  return gap;
}

std::string support_curve_csv(const SupportCurve& curve) {
  std::string s = "theta,h,bx,by\n";
  for (std::size_t k = 0; k < curve.angles.size(); ++k)
    s += fmt17(curve.angles[k]) + "," + fmt17(curve.h[k]) + "," + fmt17(curve.boundary[k].real()) + "," +
         fmt17(curve.boundary[k].imag()) + "\n";
  return s;
}

}  // namespace hop
