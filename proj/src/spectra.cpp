#include "hopping/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "hopping/errors.hpp"
#include "hopping/model.hpp"
#include "hopping/parallel.hpp"

namespace hop {

namespace {

constexpr double kPi = std::numbers::pi;

bool point_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Uniform bucket grid over a point set, stored in CSR form.
struct BucketGrid {
  double x0 = 0.0, y0 = 0.0, h = 1.0;
  std::size_t nx = 1, ny = 1;
  std::vector<std::uint32_t> start, order;

  void build(const std::vector<cplx>& pts, double cell) {
    double x1 = -std::numeric_limits<double>::infinity(), y1 = x1;
    x0 = y0 = std::numeric_limits<double>::infinity();
    for (const cplx& p : pts) {
      x0 = std::min(x0, p.real());
      y0 = std::min(y0, p.imag());
      x1 = std::max(x1, p.real());
      y1 = std::max(y1, p.imag());
    }
    h = cell > 0.0 ? cell : 1.0;
    nx = static_cast<std::size_t>(std::floor((x1 - x0) / h)) + 1;
    ny = static_cast<std::size_t>(std::floor((y1 - y0) / h)) + 1;
    start.assign(nx * ny + 1, 0);
    std::vector<std::uint32_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = static_cast<std::uint32_t>(index(cx(pts[i].real()), cy(pts[i].imag())));
      ++start[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < nx * ny; ++c) start[c + 1] += start[c];
    order.resize(pts.size());
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) order[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }
  long cx(double x) const { return std::clamp(static_cast<long>(std::floor((x - x0) / h)), 0L, static_cast<long>(nx) - 1); }
  long cy(double y) const { return std::clamp(static_cast<long>(std::floor((y - y0) / h)), 0L, static_cast<long>(ny) - 1); }
  std::size_t index(long i, long j) const { return static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i); }
};

double dist_segment(cplx z, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const cplx w = (z - a) * std::conj(d);
  if (w.real() <= 0.0) return std::abs(z - a);
  if (w.real() >= len2) return std::abs(z - b);
  return std::abs(w.imag()) / std::sqrt(len2);
}

// Branch {x + iy : x = s*sqrt(1 + 3y^2), |y| <= 1/2} parametrised as
// (s cosh t, sinh t / sqrt 3), |t| <= asinh(sqrt(3)/2).
cplx hyperbola_point(double s, double t) { return {s * std::cosh(t), std::sinh(t) / std::sqrt(3.0)}; }

double hyperbola_tmax() { return std::asinh(std::sqrt(3.0) / 2.0); }

double dist_hyperbola_branch(cplx z, double s) {
  const double tmax = hyperbola_tmax();
  auto f = [&](double t) { return std::norm(z - hyperbola_point(s, t)); };
  constexpr int samples = 256;
  const double step = 2.0 * tmax / samples;
  int best = 0;
  double fbest = f(-tmax);
  for (int i = 1; i <= samples; ++i) {
    const double v = f(-tmax + i * step);
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  // Golden-section refinement of the squared distance around the best sample.
  double a = -tmax + std::max(best - 1, 0) * step;
  double b = -tmax + std::min(best + 1, samples) * step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  fbest = std::min({fbest, fc, fd, f(a), f(b)});
  return std::sqrt(fbest);
}

double dist_pi1(cplx z) {
  return std::min(dist_segment(z, {-2, 0}, {2, 0}), dist_segment(z, {0, -2}, {0, 2}));
}

double dist_tau2(cplx z) {
  return std::min(dist_segment(z, {-1, -1}, {1, 1}), dist_segment(z, {-1, 1}, {1, -1}));
}

double dist_tau3(cplx z) {
  return std::min({dist_segment(z, {0, -1}, {0, 1}), dist_hyperbola_branch(z, 1.0), dist_hyperbola_branch(z, -1.0)});
}

double dist_itau3(cplx z) { return dist_tau3(cplx(0, -1) * z); }

double dist_delta_square(cplx z) {
  if (std::abs(z.real()) + std::abs(z.imag()) <= 2.0) return 0.0;
  const cplx v[4] = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) best = std::min(best, dist_segment(z, v[i], v[(i + 1) % 4]));
  return best;
}

void append_segment(std::vector<cplx>& out, cplx a, cplx b, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.5;
    out.push_back(a + t * (b - a));
  }
}

void append_tau3(std::vector<cplx>& out, std::size_t count, cplx rot) {
  std::vector<cplx> piece;
  append_segment(piece, {0, -1}, {0, 1}, count);
  const double tmax = hyperbola_tmax();
  for (double s : {1.0, -1.0})
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count > 1 ? -tmax + 2.0 * tmax * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
      piece.push_back(hyperbola_point(s, t));
    }
  for (const cplx& p : piece) out.push_back(rot * p);
}

}  // namespace

std::string_view to_string(CloudSource s) {
  switch (s) {
    case CloudSource::sigma:
      return "sigma";
    case CloudSource::pi:
      return "pi";
    case CloudSource::chebyshev:
      return "chebyshev";
    case CloudSource::custom:
      break;
  }
  return "custom";
}

void PointCloud::sort() { std::sort(points.begin(), points.end(), point_less); }

PointCloud sigma_n(std::size_t n, const SpectraOptions& opts) {
  if (n < 1) throw InvalidArgument("sigma_n needs n >= 1");
  const std::size_t len = n - 1;
  const double reps = len < 64 ? static_cast<double>(reversal_class_count(len)) : std::ldexp(1.0, 63);
  const double required = reps * static_cast<double>(n);
  if (n > opts.sigma_max_n || required > static_cast<double>(opts.max_points))
    throw ResourceCapExceeded("sigma_n(" + std::to_string(n) + ") needs " + std::to_string(static_cast<long double>(required)) +
                                  " eigenvalues (caps: n <= " + std::to_string(opts.sigma_max_n) + ", " +
                                  std::to_string(opts.max_points) + " points)",
                              required);

  const std::vector<EnumCursor::Item> items = enumerate(len, true);
  std::vector<std::vector<cplx>> parts(items.size());
  parallel_for(items.size(), resolve_threads(opts.threads), [&](std::size_t i, unsigned) {
    const HoppingSpec spec = HoppingSpec::single(SignSeq::from_mask(items[i].mask, len));
    parts[i] = eig_dense(assemble(spec).dense());
  });
  PointCloud cloud;
  cloud.source = CloudSource::sigma;
  cloud.n = n;
  cloud.points.reserve(items.size() * n);
  for (const auto& p : parts) cloud.points.insert(cloud.points.end(), p.begin(), p.end());
  cloud.sort();
  return cloud;
}

std::size_t default_alpha_count(std::size_t n) { return std::max<std::size_t>(256, 32 * n); }

std::vector<PiWorkItem> pi_work_items(std::size_t n, std::size_t alpha_count) {
  if (n < 1) throw InvalidArgument("pi_n needs n >= 1");
  if (n > 28) throw InvalidArgument("pi_n supports periods up to 28");
  if (alpha_count < 4) throw InvalidArgument("alpha_count must be at least 4");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  auto rotate = [&](std::uint64_t m) { return ((m >> 1) | ((m & 1U) << (n - 1))) & full; };
  std::vector<PiWorkItem> items;
  for (std::uint64_t m = 0; m <= full; ++m) {
    // Keep the smallest rotation of each necklace.
    bool canonical = true;
    std::uint64_t r = m;
    for (std::size_t k = 1; k < n && canonical; ++k) {
      r = rotate(r);
      canonical = m <= r;
    }
    if (!canonical) continue;
    PiWorkItem item;
    item.mask = m;
    // The spectrum depends on alpha only through alpha + prod(b) / alpha.
    const bool plus = std::popcount(m) % 2 == 0;
    const std::size_t K = alpha_count;
    for (std::size_t k = 0; k < K; ++k) {
      std::size_t partner = k;
      if (plus)
        partner = (K - k) % K;
      else if (K % 2 == 0)
        partner = (K / 2 + K - k) % K;
      if (k <= partner) item.phases.push_back(k);
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::uint64_t pi_point_count(const std::vector<PiWorkItem>& items, std::size_t n) {
  std::uint64_t total = 0;
  for (const auto& it : items) total += it.phases.size() * n;
  return total;
}

namespace {

template <class Sink>
void pi_evaluate(std::size_t n, std::size_t alpha_count, const PiWorkItem& item, std::vector<cplx>& out, Sink&& sink) {
  const SignSeq b = SignSeq::from_mask(item.mask, n);
  for (std::size_t k : item.phases) {
    const cplx alpha = unit_phase(k, alpha_count);
    const std::vector<cplx> ev = eig_dense(assemble_periodized(PeriodizedSpec(b, alpha)));
    out.assign(ev.begin(), ev.end());
    sink(out);
  }
}

}  // namespace

PointCloud pi_n(std::size_t n, std::size_t alpha_count, const SpectraOptions& opts) {
  const std::vector<PiWorkItem> items = pi_work_items(n, alpha_count);
  const std::uint64_t required = pi_point_count(items, n);
  if (required > opts.max_points)
    throw ResourceCapExceeded("pi_n(" + std::to_string(n) + ", " + std::to_string(alpha_count) + ") needs " +
                                  std::to_string(required) + " eigenvalues (cap " + std::to_string(opts.max_points) + ")",
                              static_cast<double>(required));
  std::vector<std::vector<cplx>> parts(items.size());
  parallel_for(items.size(), resolve_threads(opts.threads), [&](std::size_t i, unsigned) {
    std::vector<cplx> buf;
    pi_evaluate(n, alpha_count, items[i], buf,
                [&](const std::vector<cplx>& ev) { parts[i].insert(parts[i].end(), ev.begin(), ev.end()); });
  });
  PointCloud cloud;
  cloud.source = CloudSource::pi;
  cloud.n = n;
  cloud.alpha_count = alpha_count;
  cloud.points.reserve(required);
  for (const auto& p : parts) cloud.points.insert(cloud.points.end(), p.begin(), p.end());
  cloud.sort();
  return cloud;
}

unsigned pi_n_workers(std::size_t n, const SpectraOptions& opts) {
  const std::size_t items = pi_work_items(n, 4).size();
  return static_cast<unsigned>(std::min<std::size_t>(resolve_threads(opts.threads), items));
}

void pi_n_visit(std::size_t n, std::size_t alpha_count, const SpectraOptions& opts,
                const std::function<void(unsigned, std::span<const cplx>)>& sink) {
  const std::vector<PiWorkItem> items = pi_work_items(n, alpha_count);
  parallel_for(items.size(), resolve_threads(opts.threads), [&](std::size_t i, unsigned worker) {
    std::vector<cplx> buf;
    pi_evaluate(n, alpha_count, items[i], buf, [&](const std::vector<cplx>& ev) { sink(worker, ev); });
  });
}

OracleSet parse_oracle_set(std::string_view name) {
  for (OracleSet s : {OracleSet::pi1, OracleSet::tau2, OracleSet::tau3, OracleSet::itau3, OracleSet::pi2,
                      OracleSet::pi3, OracleSet::disc, OracleSet::delta_square})
    if (to_string(s) == name) return s;
  throw InvalidArgument("unknown reference set \"" + std::string(name) + "\"");
}

std::string_view to_string(OracleSet s) {
  switch (s) {
    case OracleSet::pi1:
      return "pi1";
    case OracleSet::tau2:
      return "tau2";
    case OracleSet::tau3:
      return "tau3";
    case OracleSet::itau3:
      return "itau3";
    case OracleSet::pi2:
      return "pi2";
    case OracleSet::pi3:
      return "pi3";
    case OracleSet::disc:
      return "disc";
    case OracleSet::delta_square:
      return "delta_square";
  }
  return "?";
}

double oracle_membership(OracleSet set, cplx z) {
  switch (set) {
    case OracleSet::pi1:
      return dist_pi1(z);
    case OracleSet::tau2:
      return dist_tau2(z);
    case OracleSet::tau3:
      return dist_tau3(z);
    case OracleSet::itau3:
      return dist_itau3(z);
    case OracleSet::pi2:
      return std::min(dist_pi1(z), dist_tau2(z));
    case OracleSet::pi3:
      return std::min({dist_pi1(z), dist_tau3(z), dist_itau3(z)});
    case OracleSet::disc:
      return std::max(0.0, std::abs(z) - 1.0);
    case OracleSet::delta_square:
      return dist_delta_square(z);
  }
  throw InvalidArgument("unknown reference set");
}

std::vector<cplx> oracle_samples(OracleSet set, std::size_t count) {
  std::vector<cplx> out;
  switch (set) {
    case OracleSet::pi1:
      append_segment(out, {-2, 0}, {2, 0}, count);
      append_segment(out, {0, -2}, {0, 2}, count);
      break;
    case OracleSet::tau2:
      append_segment(out, {-1, -1}, {1, 1}, count);
      append_segment(out, {-1, 1}, {1, -1}, count);
      break;
    case OracleSet::tau3:
      append_tau3(out, count, 1.0);
      break;
    case OracleSet::itau3:
      append_tau3(out, count, cplx(0, 1));
      break;
    case OracleSet::pi2:
      out = oracle_samples(OracleSet::pi1, count);
      for (cplx z : oracle_samples(OracleSet::tau2, count)) out.push_back(z);
      break;
    case OracleSet::pi3:
      out = oracle_samples(OracleSet::pi1, count);
      append_tau3(out, count, 1.0);
      append_tau3(out, count, cplx(0, 1));
      break;
    case OracleSet::disc:
      for (std::size_t i = 0; i < count; ++i) out.push_back(std::polar(1.0, 2.0 * kPi * static_cast<double>(i) / count));
      break;
    case OracleSet::delta_square: {
      const cplx v[4] = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
      for (int i = 0; i < 4; ++i) append_segment(out, v[i], v[(i + 1) % 4], count);
      break;
    }
  }
  return out;
}

PointCloud chebyshev_cloud(std::size_t n) {
  if (n < 1) throw InvalidArgument("chebyshev_cloud needs n >= 1");
  PointCloud c;
  c.source = CloudSource::chebyshev;
  c.n = n;
  for (std::size_t j = 1; j <= n; ++j)
    c.points.emplace_back(2.0 * std::cos(static_cast<double>(j) * kPi / static_cast<double>(n + 1)), 0.0);
  return c;
}

PointIndex::PointIndex(std::vector<cplx> points) : pts_(std::move(points)) {
  if (pts_.empty()) throw InvalidArgument("point index over an empty set");
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const cplx& p : pts_) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) throw InvalidArgument("point set has a non-finite point");
    x0 = std::min(x0, p.real());
    y0 = std::min(y0, p.imag());
    x1 = std::max(x1, p.real());
    y1 = std::max(y1, p.imag());
  }
  const double extent = std::max(x1 - x0, y1 - y0);
  const double cell = extent > 0.0 ? extent / std::max(1.0, std::sqrt(static_cast<double>(pts_.size()) / 2.0)) : 1.0;
  BucketGrid g;
  g.build(pts_, cell);
  x0_ = g.x0;
  y0_ = g.y0;
  h_ = g.h;
  nx_ = g.nx;
  ny_ = g.ny;
  start_ = std::move(g.start);
  order_ = std::move(g.order);
}

double PointIndex::distance(cplx z, cplx* nearest) const {
  auto clampi = [](double v, std::size_t n) {
    return std::clamp(static_cast<long>(std::floor(v)), 0L, static_cast<long>(n) - 1);
  };
  const long ci = clampi((z.real() - x0_) / h_, nx_);
  const long cj = clampi((z.imag() - y0_) / h_, ny_);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  const long rmax = static_cast<long>(std::max(nx_, ny_));
  for (long r = 0; r <= rmax; ++r) {
    for (long j = cj - r; j <= cj + r; ++j) {
      if (j < 0 || j >= static_cast<long>(ny_)) continue;
      const bool edge_row = (j == cj - r || j == cj + r);
      for (long i = ci - r; i <= ci + r; i += (edge_row || r == 0) ? 1 : 2 * r) {
        if (i < 0 || i >= static_cast<long>(nx_)) continue;
        const std::size_t c = static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i);
        for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
          const double d = std::abs(z - pts_[order_[k]]);
          if (d < best || (d == best && order_[k] < best_idx)) {
            best = d;
            best_idx = order_[k];
          }
        }
      }
    }
    if (best <= static_cast<double>(r) * h_) break;
  }
  if (nearest) *nearest = pts_[best_idx];
  return best;
}

SetDistanceReport set_distance(const PointCloud& a, const PointCloud& b) {
  if (a.points.empty() || b.points.empty()) throw InvalidArgument("set distance of an empty cloud");
  SetDistanceReport rep;
  auto one_sided = [&](const PointCloud& from, const PointIndex& to) {
    for (const cplx& z : from.points) {
      const double d = to.distance(z);
      if (d > rep.hausdorff) {
        rep.hausdorff = d;
        rep.witness = z;
      }
    }
  };
  one_sided(a, PointIndex(b.points));
  one_sided(b, PointIndex(a.points));
  rep.max_violation = rep.hausdorff;
  return rep;
}

SetDistanceReport containment_report(const PointCloud& inner, const std::function<double(cplx)>& outer, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("containment tolerance must be positive");
  SetDistanceReport rep;
  bool first = true;
  for (const cplx& z : inner.points) {
    const double d = outer(z);
    if (first || d > rep.max_violation) {
      rep.max_violation = d;
      rep.witness = z;
      first = false;
    }
  }
  rep.hausdorff = rep.max_violation;
  rep.passed = rep.max_violation <= tol;
  return rep;
}

NearestTracker::NearestTracker(std::vector<cplx> tracked, double radius)
    : tracked_(std::move(tracked)), best_(tracked_.size(), std::numeric_limits<double>::infinity()), radius_(radius) {
  if (!(radius > 0.0)) throw InvalidArgument("tracker radius must be positive");
  if (tracked_.empty()) return;
  BucketGrid g;
  g.build(tracked_, radius);
  x0_ = g.x0;
  y0_ = g.y0;
  nx_ = g.nx;
  ny_ = g.ny;
  start_ = std::move(g.start);
  order_ = std::move(g.order);
}

void NearestTracker::offer(cplx z) {
  if (tracked_.empty()) return;
  const long ci = static_cast<long>(std::floor((z.real() - x0_) / radius_));
  const long cj = static_cast<long>(std::floor((z.imag() - y0_) / radius_));
  for (long j = std::max(cj - 1, 0L); j <= std::min(cj + 1, static_cast<long>(ny_) - 1); ++j)
    for (long i = std::max(ci - 1, 0L); i <= std::min(ci + 1, static_cast<long>(nx_) - 1); ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i);
      for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
        const std::uint32_t idx = order_[k];
        const double d = std::abs(z - tracked_[idx]);
        if (d < best_[idx]) best_[idx] = d;
      }
    }
}

void NearestTracker::merge(const NearestTracker& other) {
  if (other.best_.size() != best_.size()) throw InvalidArgument("merging trackers over different point sets");
  for (std::size_t i = 0; i < best_.size(); ++i) best_[i] = std::min(best_[i], other.best_[i]);
}

SetDistanceReport NearestTracker::report(double tol) const {
  SetDistanceReport rep;
  for (std::size_t i = 0; i < best_.size(); ++i)
    if (i == 0 || best_[i] > rep.max_violation) {
      rep.max_violation = best_[i];
      rep.witness = tracked_[i];
    }
  rep.hausdorff = rep.max_violation;
  rep.passed = rep.max_violation <= tol;
  return rep;
}

cplx unit_phase(std::size_t k, std::size_t count) {
  if (count == 0) throw InvalidArgument("unit_phase needs a positive count");
  const std::size_t r = 4 * (k % count);
  const std::size_t quadrant = r / count;
  const double t = 0.5 * kPi * static_cast<double>(r - quadrant * count) / static_cast<double>(count);
  const cplx base = t == 0.0 ? cplx(1.0, 0.0) : cplx(std::cos(t), std::sin(t));
  switch (quadrant) {
    case 0:
      return base;
    case 1:
      return {-base.imag(), base.real()};
    case 2:
      return -base;
    default:
      return {base.imag(), -base.real()};
  }
}

double alpha_resolution_tol(std::size_t alpha_count) {
  return 2.0 * kPi * 4.0 / static_cast<double>(alpha_count);
}

}  // namespace hop
