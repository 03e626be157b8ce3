#include "hopping/contour.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "hopping/errors.hpp"
#include "hopping/io.hpp"
#include "hopping/parallel.hpp"

namespace hop {

std::vector<Polyline> marching_squares(const std::vector<double>& f, std::size_t side, const Box& box, double level) {
  if (side < 2) throw InvalidArgument("contour grid needs at least 2 samples per side");
  if (f.size() != side * side) throw InvalidArgument("contour grid size mismatch");
  const double dx = (box.re1 - box.re0) / static_cast<double>(side - 1);
  const double dy = (box.im1 - box.im0) / static_cast<double>(side - 1);
  auto at = [&](std::size_t i, std::size_t j) { return f[j * side + i]; };
  auto inside = [&](double v) { return v < level; };
  auto hkey = [&](std::size_t i, std::size_t j) { return 2 * (j * side + i); };
  auto vkey = [&](std::size_t i, std::size_t j) { return 2 * (j * side + i) + 1; };

  std::map<std::size_t, cplx> point;
  auto crossing = [&](std::size_t key) {
    auto it = point.find(key);
    if (it != point.end()) return;
    const std::size_t v = key / 2;
    const std::size_t i = v % side, j = v / side;
    const bool horizontal = key % 2 == 0;
    const std::size_t i1 = horizontal ? i + 1 : i, j1 = horizontal ? j : j + 1;
    const double f0 = at(i, j), f1 = at(i1, j1);
    const double t = f1 != f0 ? std::clamp((level - f0) / (f1 - f0), 0.0, 1.0) : 0.5;
    const double x = box.re0 + (static_cast<double>(i) + (horizontal ? t : 0.0)) * dx;
    const double y = box.im0 + (static_cast<double>(j) + (horizontal ? 0.0 : t)) * dy;
    point.emplace(key, cplx(x, y));
  };

  std::vector<std::pair<std::size_t, std::size_t>> segs;
  for (std::size_t j = 0; j + 1 < side; ++j)
    for (std::size_t i = 0; i + 1 < side; ++i) {
      const bool a = inside(at(i, j)), b = inside(at(i + 1, j)), c = inside(at(i + 1, j + 1)), d = inside(at(i, j + 1));
      const std::size_t bottom = hkey(i, j), right = vkey(i + 1, j), top = hkey(i, j + 1), left = vkey(i, j);
      std::vector<std::size_t> cut;
      if (a != b) cut.push_back(bottom);
      if (b != c) cut.push_back(right);
      if (c != d) cut.push_back(top);
      if (d != a) cut.push_back(left);
      if (cut.size() == 2) {
        segs.emplace_back(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const double centre = 0.25 * (at(i, j) + at(i + 1, j) + at(i + 1, j + 1) + at(i, j + 1));
        if (inside(centre) == a) {
          segs.emplace_back(bottom, right);
          segs.emplace_back(top, left);
        } else {
          segs.emplace_back(bottom, left);
          segs.emplace_back(top, right);
        }
      }
    }
  for (const auto& [k1, k2] : segs) {
    crossing(k1);
    crossing(k2);
  }

  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    incident[segs[s].first].push_back(s);
    incident[segs[s].second].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto other_end = [&](std::size_t s, std::size_t key) { return segs[s].first == key ? segs[s].second : segs[s].first; };
  auto next_segment = [&](std::size_t key) -> std::size_t {
    for (std::size_t s : incident[key])
      if (!used[s]) return s;
    return segs.size();
  };

  std::vector<Polyline> lines;
  // Open chains start at keys with a single incident segment; remaining
  // segments form closed loops.
  std::vector<std::size_t> starts;
  for (const auto& [key, list] : incident)
    if (list.size() == 1) starts.push_back(key);
  for (const auto& [key, list] : incident) starts.push_back(key);
  for (std::size_t start : starts) {
    std::size_t s = next_segment(start);
    if (s == segs.size()) continue;
    Polyline pl;
    std::size_t key = start;
    pl.points.push_back(point.at(key));
    while (s != segs.size()) {
      used[s] = true;
      key = other_end(s, key);
      if (key == start) {
        pl.closed = true;
        break;
      }
      pl.points.push_back(point.at(key));
      s = next_segment(key);
    }
    lines.push_back(std::move(pl));
  }
  return lines;
}

ContourResult sigma_eps_boundary(std::size_t n, double eps, std::size_t resolution, const Box& box,
                                 const SminConfig& config) {
  box.validate();
  if (!(eps > 0.0)) throw InvalidArgument("contour level must be positive");
  if (resolution < 2) throw InvalidArgument("contour resolution must be at least 2");
  ContourResult out;
  out.resolution = resolution;
  out.box = box;
  out.values.resize(resolution * resolution);
  SminConfig cfg = config;
  cfg.threads = 1;
  cfg.early_cutoff.reset();
  cfg.checkpoint.reset();
  cfg.max_chunks.reset();
  const double dx = (box.re1 - box.re0) / static_cast<double>(resolution - 1);
  const double dy = (box.im1 - box.im0) / static_cast<double>(resolution - 1);
  parallel_for(out.values.size(), resolve_threads(config.threads), [&](std::size_t k, unsigned) {
    const std::size_t i = k % resolution, j = k / resolution;
    const cplx z(box.re0 + static_cast<double>(i) * dx, box.im0 + static_cast<double>(j) * dy);
    out.values[k] = s_n(z, n, cfg).value;
  });
  out.min_value = *std::min_element(out.values.begin(), out.values.end());
  out.max_value = *std::max_element(out.values.begin(), out.values.end());
  out.degenerate = !(out.min_value < eps && eps <= out.max_value);
  out.lines = marching_squares(out.values, resolution, box, eps);
  return out;
}

std::string contour_csv(const ContourResult& c) {
  std::string s = "curve,re,im\n";
  for (std::size_t k = 0; k < c.lines.size(); ++k) {
    const auto& pl = c.lines[k];
    auto emit = [&](cplx z) { s += std::to_string(k) + "," + fmt17(z.real()) + "," + fmt17(z.imag()) + "\n"; };
    for (const cplx& z : pl.points) emit(z);
    if (pl.closed && !pl.points.empty()) emit(pl.points.front());
  }
  return s;
}

}  // namespace hop
