#pragma once

// Numerical range (field of values) of finite matrices through the support
// function h(theta) = lambda_max((e^{-i theta} m + e^{i theta} m^*) / 2).

#include <optional>
#include <string>
#include <vector>

#include "hopping/linalg.hpp"

namespace hop {

double support_function(const CMatrix& m, double theta);
/// O(n) per bisection step: the Hermitian part of a tridiagonal matrix is tridiagonal.
double support_function(const TridiagC& t, double theta);

/// Support function of the closed square |x| + |y| <= 2.
double support_delta(double theta);

struct SupportCurve {
  std::vector<double> angles;    // 2 pi k / m
  std::vector<double> h;         // support values
  std::vector<cplx> boundary;    // boundary[k]: intersection of support lines k and k+1
  bool degenerate = false;       // W is (numerically) a segment or a point
  cplx segment_a{}, segment_b{};  // endpoints when degenerate
};

inline constexpr std::size_t kDefaultAngleCount = 720;
/// Width below which the numerical range is reported as a segment.
inline constexpr double kDegenerateWidth = 1e-10;

SupportCurve nr_boundary(const CMatrix& m, std::size_t angle_count = kDefaultAngleCount);
SupportCurve nr_boundary(const TridiagC& t, std::size_t angle_count = kDefaultAngleCount);

/// max over the curve's angles of support_delta(theta) - h(theta).
double delta_gap(const SupportCurve& curve);

/// "theta,h,bx,by" lines.
std::string support_curve_csv(const SupportCurve& curve);

}  // namespace hop
