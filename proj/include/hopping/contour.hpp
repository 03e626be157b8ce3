#pragma once

// Level curves {S_n = eps} of a sampled S_n field (marching squares). For
// plotting only: nothing here is certified.

#include <string>
#include <vector>

#include "hopping/grid_sweep.hpp"

namespace hop {

struct Polyline {
  std::vector<cplx> points;
  bool closed = false;
};

struct ContourResult {
  std::vector<Polyline> lines;
  std::size_t resolution = 0;  // samples per side
  Box box;
  std::vector<double> values;  // row-major, values[j * resolution + i] at (re_i, im_j)
  double min_value = 0.0;
  double max_value = 0.0;
  /// True when eps lies outside [min_value, max_value]: no crossing exists.
  bool degenerate = false;
};

/// Marching squares on an already sampled field (row-major, side x side).
std::vector<Polyline> marching_squares(const std::vector<double>& values, std::size_t side, const Box& box,
                                       double level);

/// Samples S_n on a resolution x resolution lattice covering `box` (corners
/// included) and extracts the eps level set.
ContourResult sigma_eps_boundary(std::size_t n, double eps, std::size_t resolution, const Box& box = {},
                                 const SminConfig& config = {});

/// "curve,re,im" lines; closed curves repeat their first point at the end.
std::string contour_csv(const ContourResult& c);

}  // namespace hop
