#include "hopping/grid_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "hopping/errors.hpp"
#include "hopping/io.hpp"
#include "hopping/parallel.hpp"

namespace hop {

void Box::validate() const {
  for (double v : {re0, re1, im0, im1})
    if (!std::isfinite(v)) throw InvalidArgument("sweep box must be finite");
  if (!(re1 > re0) || !(im1 > im0)) throw InvalidArgument("sweep box must have positive width and height");
}

const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::excluded:
      return "EXCLUDED";
    case CellClass::unknown:
      return "UNKNOWN";
    case CellClass::included_lower:
      return "INCLUDED_LOWER";
  }
  return "?";
}

unsigned char pgm_level(CellClass c) {
  switch (c) {
    case CellClass::excluded:
      return 0;
    case CellClass::unknown:
      return 128;
    case CellClass::included_lower:
      return 255;
  }
  return 128;
}

namespace {

bool use_quadrant(const Box& box, const GridSweepConfig& cfg) {
  return cfg.use_symmetry && box.symmetric() && cfg.base_resolution % 2 == 0;
}

GridCell make_cell(const Box& box, std::size_t base, int depth, std::uint64_t ix, std::uint64_t iy) {
  const double side = static_cast<double>(base << depth);
  const double w = (box.re1 - box.re0) / side;
  const double h = (box.im1 - box.im0) / side;
  GridCell c;
  c.depth = depth;
  c.ix = ix;
  c.iy = iy;
  c.half_w = 0.5 * w;
  c.half_h = 0.5 * h;
  c.center = cplx(box.re0 + (static_cast<double>(ix) + 0.5) * w, box.im0 + (static_cast<double>(iy) + 0.5) * h);
  return c;
}

void classify(GridCell& c, std::size_t n, double eps, const SminConfig& base) {
  SminConfig cfg = base;
  cfg.threads = 1;
  cfg.checkpoint.reset();
  cfg.max_chunks.reset();
  cfg.early_cutoff = eps;
  const SminResult r = s_n(c.center, n, cfg);
  c.s_value = r.value;
  c.s_exact = !r.cutoff;
  if (r.value < eps)
    c.cls = CellClass::included_lower;
  else if (r.value - eps >= c.circumradius())
    c.cls = CellClass::excluded;
  else
    c.cls = CellClass::unknown;
}

}  // namespace

std::uint64_t sweep_base_cost(const Box& box, const GridSweepConfig& config) {
  const std::uint64_t side = config.base_resolution;
  const std::uint64_t cells = side * side;
  return use_quadrant(box, config) ? cells / 4 : cells;
}

GridRegion grid_sweep(const Box& box, std::size_t n, double eps, const GridSweepConfig& config) {
  box.validate();
  if (!(eps > 0.0)) throw InvalidArgument("sweep level eps must be positive");
  if (config.base_resolution < 1) throw InvalidArgument("base resolution must be at least 1");
  if (config.max_depth < 0 || config.max_depth > 16) throw InvalidArgument("max_depth must lie in [0, 16]");
  if ((config.base_resolution << config.max_depth) > 16384)
    throw ResourceCapExceeded("raster side base_resolution * 2^max_depth exceeds 16384",
                              static_cast<double>(config.base_resolution << config.max_depth));

  GridRegion g;
  g.box = box;
  g.n = n;
  g.eps = eps;
  g.base_resolution = config.base_resolution;
  g.max_depth = config.max_depth;
  const bool quadrant = use_quadrant(box, config);
  g.symmetry_completed = quadrant;

  const std::size_t N = config.base_resolution;
  std::vector<GridCell> level;
  const std::uint64_t first = quadrant ? N / 2 : 0;
  for (std::uint64_t iy = first; iy < N; ++iy)
    for (std::uint64_t ix = first; ix < N; ++ix) level.push_back(make_cell(box, N, 0, ix, iy));

  const unsigned threads = resolve_threads(config.threads);
  std::vector<GridCell> leaves;
  for (int depth = 0; !level.empty(); ++depth) {
    if (config.max_evaluations && g.evaluations + level.size() > config.max_evaluations) {
      g.incomplete = true;
      for (GridCell& c : level) {
        c.cls = CellClass::unknown;
        c.s_value = std::numeric_limits<double>::quiet_NaN();
        c.s_exact = false;
      }
      leaves.insert(leaves.end(), level.begin(), level.end());
      break;
    }
    parallel_for(level.size(), threads, [&](std::size_t i, unsigned) { classify(level[i], n, eps, config.smin); });
    g.evaluations += level.size();
    std::vector<GridCell> next;
    for (const GridCell& c : level) {
      if (c.cls == CellClass::unknown && depth < config.max_depth) {
        for (std::uint64_t dy = 0; dy < 2; ++dy)
          for (std::uint64_t dx = 0; dx < 2; ++dx)
            next.push_back(make_cell(box, N, depth + 1, 2 * c.ix + dx, 2 * c.iy + dy));
      } else {
        leaves.push_back(c);
      }
    }
    level = std::move(next);
  }

  if (quadrant) {
    const std::size_t count = leaves.size();
    for (std::size_t k = 0; k < count; ++k) {
      const GridCell c = leaves[k];
      const std::uint64_t side = static_cast<std::uint64_t>(N) << c.depth;
      GridCell m = c;
      m.ix = side - 1 - c.ix;
      m.center = -std::conj(c.center);
      leaves.push_back(m);
      m.iy = side - 1 - c.iy;
      m.center = -c.center;
      leaves.push_back(m);
      m.ix = c.ix;
      m.center = std::conj(c.center);
      leaves.push_back(m);
    }
  }
  std::sort(leaves.begin(), leaves.end(), [](const GridCell& a, const GridCell& b) {
    return std::tie(a.depth, a.iy, a.ix) < std::tie(b.depth, b.iy, b.ix);
  });
  g.cells = std::move(leaves);
  return g;
}

std::string grid_pgm(const GridRegion& g) {
  const std::size_t side = g.raster_side();
  std::vector<unsigned char> px(side * side, pgm_level(CellClass::unknown));
  for (const GridCell& c : g.cells) {
    const std::size_t scale = std::size_t{1} << (g.max_depth - c.depth);
    for (std::size_t dy = 0; dy < scale; ++dy) {
      const std::size_t y = c.iy * scale + dy;
      const std::size_t row = side - 1 - y;
      for (std::size_t dx = 0; dx < scale; ++dx) px[row * side + c.ix * scale + dx] = pgm_level(c.cls);
    }
  }
  std::string out = "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

std::string grid_csv(const GridRegion& g) {
  std::string out = "re,im,half_w,half_h,depth,s_value,s_exact,class\n";
  for (const GridCell& c : g.cells) {
    out += fmt17(c.center.real()) + "," + fmt17(c.center.imag()) + "," + fmt17(c.half_w) + "," + fmt17(c.half_h) + "," +
           std::to_string(c.depth) + "," + fmt17(c.s_value) + "," + (c.s_exact ? "1" : "0") + "," + to_string(c.cls) +
           "\n";
  }
  return out;
}

}  // namespace hop
