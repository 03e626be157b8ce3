#pragma once

// Eigenvalue unions over sign sequences (finite sections and periodized
// matrices), closed-form reference sets and set-distance reporting.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopping/linalg.hpp"

namespace hop {

enum class CloudSource { sigma, pi, chebyshev, custom };
std::string_view to_string(CloudSource s);

struct PointCloud {
  std::vector<cplx> points;
  CloudSource source = CloudSource::custom;
  std::size_t n = 0;
  std::size_t alpha_count = 0;  // only meaningful for CloudSource::pi

  /// Orders points by (Re, Im).
  void sort();
};

struct SpectraOptions {
  std::size_t sigma_max_n = 16;
  /// Refuse requests that would produce more points than this.
  std::uint64_t max_points = std::uint64_t{1} << 25;
  unsigned threads = 0;  // 0: resolve_threads default
};

/// Union of the eigenvalues of all order-n finite hopping matrices, one
/// matrix per reversal class. Throws ResourceCapExceeded above the caps.
PointCloud sigma_n(std::size_t n, const SpectraOptions& opts = {});

std::size_t default_alpha_count(std::size_t n);

/// The (sequence, phase) pairs actually evaluated for pi_n: one sequence per
/// necklace (cyclic rotation class) and, per sequence, one phase out of each
/// pair of phases that give the same characteristic polynomial.
struct PiWorkItem {
  std::uint64_t mask = 0;
  std::vector<std::size_t> phases;  // k in alpha = exp(2 pi i k / alpha_count)
};
std::vector<PiWorkItem> pi_work_items(std::size_t n, std::size_t alpha_count);
std::uint64_t pi_point_count(const std::vector<PiWorkItem>& items, std::size_t n);

/// Union of the spectra of all n-periodic operators, sampled at alpha_count
/// uniformly spaced corner phases.
PointCloud pi_n(std::size_t n, std::size_t alpha_count, const SpectraOptions& opts = {});

/// Streams the pi_n eigenvalues without storing them. `sink(worker, points)`
/// is called concurrently from up to `workers` threads (workers is
/// resolve_threads(opts.threads) capped by the work size; see pi_n_workers).
/// No point-count cap applies.
void pi_n_visit(std::size_t n, std::size_t alpha_count, const SpectraOptions& opts,
                const std::function<void(unsigned worker, std::span<const cplx> points)>& sink);
unsigned pi_n_workers(std::size_t n, const SpectraOptions& opts);

/// Closed reference sets.
///   pi1          [-2,2] u i[-2,2]
///   tau2         {x +- ix : |x| <= 1}
///   tau3         i[-1,1] u {x+iy : |y| <= 1/2, x^2 = 1 + 3y^2}
///   itau3        i * tau3
///   pi2          pi1 u tau2
///   pi3          pi1 u tau3 u itau3
///   disc         closed unit disc
///   delta_square closed square |x| + |y| <= 2
enum class OracleSet { pi1, tau2, tau3, itau3, pi2, pi3, disc, delta_square };
OracleSet parse_oracle_set(std::string_view name);
std::string_view to_string(OracleSet s);

/// Euclidean distance from z to the named set.
double oracle_membership(OracleSet set, cplx z);

/// Points spread along the named set (used to test the converse inclusion).
/// `count` is per piece; the disc and square are sampled on their boundary.
std::vector<cplx> oracle_samples(OracleSet set, std::size_t count);

/// The n points 2 cos(j pi / (n+1)), j = 1..n.
PointCloud chebyshev_cloud(std::size_t n);

struct SetDistanceReport {
  double hausdorff = 0.0;
  double max_violation = 0.0;
  cplx witness{};
  bool passed = true;  // containment_report only
};

/// Nearest-neighbour queries against a fixed point set (uniform bucket grid).
class PointIndex {
 public:
  explicit PointIndex(std::vector<cplx> points);
  /// Distance to (and location of) the closest point. Requires a non-empty set.
  double distance(cplx z, cplx* nearest = nullptr) const;
  std::size_t size() const { return pts_.size(); }

 private:
  std::vector<cplx> pts_;
  double x0_ = 0.0, y0_ = 0.0, h_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::uint32_t> start_;  // CSR offsets into order_
  std::vector<std::uint32_t> order_;
};

/// Symmetric Hausdorff distance; the witness is the point realising it.
SetDistanceReport set_distance(const PointCloud& a, const PointCloud& b);

/// max over inner points of outer(point); passes iff that maximum is <= tol.
SetDistanceReport containment_report(const PointCloud& inner, const std::function<double(cplx)>& outer, double tol);

/// Tracks, for each of a fixed set of points, the distance to the closest of
/// a stream of offered points. Offered points farther than `radius` from every
/// tracked point are ignored. Merging is exact (min), so the result does not
/// depend on how the stream was split between trackers.
class NearestTracker {
 public:
  NearestTracker(std::vector<cplx> tracked, double radius);
  void offer(cplx z);
  void merge(const NearestTracker& other);
  /// Distances (infinity if nothing within radius was offered).
  const std::vector<double>& distances() const { return best_; }
  SetDistanceReport report(double tol) const;

 private:
  std::vector<cplx> tracked_;
  std::vector<double> best_;
  double radius_;
  double x0_ = 0.0, y0_ = 0.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> order_;
};

/// exp(2 pi i k / count), exact at the quarter turns.
cplx unit_phase(std::size_t k, std::size_t count);

/// Containment tolerance for phase-sampled outer sets: 2 pi * 4 / alpha_count.
double alpha_resolution_tol(std::size_t alpha_count);

}  // namespace hop
