#pragma once

// Classification of a rectangular region of the complex plane against the
// sublevel set {S_n < eps}, with quadtree refinement of undecided cells.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hopping/linalg.hpp"
#include "hopping/pseudospectra.hpp"

namespace hop {

struct Box {
  double re0 = -2.2, re1 = 2.2, im0 = -2.2, im1 = 2.2;
  void validate() const;
  /// Symmetric about both axes.
  bool symmetric() const { return re0 == -re1 && im0 == -im1; }
};

enum class CellClass : std::uint8_t { excluded, unknown, included_lower };
const char* to_string(CellClass c);
/// 0 = excluded, 128 = unknown, 255 = included_lower.
unsigned char pgm_level(CellClass c);

struct GridCell {
  cplx center{};
  double half_w = 0.0;
  double half_h = 0.0;
  int depth = 0;
  std::uint64_t ix = 0, iy = 0;  // index within the depth-level grid
  double s_value = 0.0;          // S_n(center); below eps only when included_lower
  bool s_exact = true;           // false when the enumeration stopped at a witness below eps
  CellClass cls = CellClass::unknown;

  double circumradius() const { return std::hypot(half_w, half_h); }
};

struct GridSweepConfig {
  std::size_t base_resolution = 64;  // cells per side at depth 0
  int max_depth = 0;
  unsigned threads = 0;
  /// Maximum number of S_n evaluations; 0 means unlimited.
  std::uint64_t max_evaluations = 0;
  /// Evaluate one quadrant and mirror when the box is symmetric about both
  /// axes and the base resolution is even.
  bool use_symmetry = true;
  SminConfig smin{};
};

struct GridRegion {
  Box box;
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t base_resolution = 0;
  int max_depth = 0;
  std::vector<GridCell> cells;  // leaves, sorted by (depth, iy, ix)
  std::uint64_t evaluations = 0;
  bool incomplete = false;
  bool symmetry_completed = false;

  std::size_t raster_side() const { return base_resolution << max_depth; }
};

/// S_n evaluations needed at depth 0 (upper bound for the whole sweep when max_depth = 0).
std::uint64_t sweep_base_cost(const Box& box, const GridSweepConfig& config);

GridRegion grid_sweep(const Box& box, std::size_t n, double eps, const GridSweepConfig& config = {});

/// Binary PGM (P5) at raster_side() x raster_side(); the first row is the top (largest Im).
std::string grid_pgm(const GridRegion& g);
/// One line per leaf cell: re,im,half_w,half_h,depth,s_value,s_exact,class
std::string grid_csv(const GridRegion& g);

}  // namespace hop
