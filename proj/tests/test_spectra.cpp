#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>
#include <set>

#include "hopping/errors.hpp"
#include "hopping/model.hpp"
#include "hopping/spectra.hpp"
#include "oracles.hpp"

using namespace hop;

namespace {

// Every point of `a` has a partner in `b` within tol.
bool covered(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  for (cplx z : a) {
    double best = 1e300;
    for (cplx w : b) best = std::min(best, std::abs(z - w));
    if (best > tol) return false;
  }
  return true;
}

// Brute-force sigma_n: every sequence, LAPACK eigenvalues.
std::vector<cplx> brute_sigma(std::size_t n) {
  std::vector<cplx> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n - 1)); ++m)
    for (cplx z : oracle::eig(oracle::hopping(m, n))) out.push_back(z);
  return out;
}

}  // namespace

TEST_CASE("sigma_n small cases") {
  const PointCloud s1 = sigma_n(1);
  REQUIRE(s1.points.size() == 1);
  CHECK(std::abs(s1.points[0]) < 1e-15);

  const PointCloud s2 = sigma_n(2);
  CHECK(s2.points.size() == 4);
  CHECK(oracle::multiset_distance(s2.points, {1.0, -1.0, cplx(0, 1), cplx(0, -1)}) < 1e-14);

  // n=3: characteristic polynomials lambda^3 - 2 lambda (++), lambda^3 (+-, -+), lambda^3 + 2 lambda (--).
  // The quotient keeps one of the two mixed sequences.
  const PointCloud s3 = sigma_n(3);
  CHECK(s3.points.size() == 9);
  const double r2 = std::sqrt(2.0);
  CHECK(covered(s3.points, {0.0, r2, -r2, cplx(0, r2), cplx(0, -r2)}, 1e-5));
  CHECK(covered({0.0, r2, -r2, cplx(0, r2), cplx(0, -r2)}, s3.points, 1e-5));
  CHECK(s3.source == CloudSource::sigma);
}

TEST_CASE("sigma_n matches brute force") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const PointCloud s = sigma_n(n);
    CHECK(s.points.size() == n * reversal_class_count(n - 1));
    // Each point is a root of some characteristic polynomial (backward error),
    // and each distinct polynomial over all sequences is represented.
    for (cplx z : s.points) CHECK(oracle::min_charpoly_residual(z, n) < 1e-10 * std::pow(3.0, static_cast<double>(n)));
    std::set<std::vector<double>> all, reps;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n - 1)); ++m) {
      all.insert(oracle::charpoly(m, n));
      if (is_reversal_canonical(m, n - 1)) reps.insert(oracle::charpoly(m, n));
    }
    CHECK(all == reps);
    // Forward agreement is limited by defective roots (multiplicity up to n at 0).
    const auto brute = brute_sigma(n);
    CHECK(covered(s.points, brute, 0.05));
    CHECK(covered(brute, s.points, 0.05));
  }
}

TEST_CASE("sigma_n caps") {
  SpectraOptions o;
  o.sigma_max_n = 5;
  CHECK_THROWS_AS(sigma_n(6, o), ResourceCapExceeded);
  CHECK_THROWS_AS(sigma_n(0), InvalidArgument);
  try {
    sigma_n(6, o);
  } catch (const ResourceCapExceeded& e) {
    CHECK(e.required() > 0);
  }
}

TEST_CASE("pi_n small cases") {
  // b = +1: 2 cos(theta) at theta = 0, pi/2, pi, 3pi/2; b = -1: 2i sin(theta).
  const PointCloud p = pi_n(1, 4);
  const std::vector<cplx> expect{2.0, 0.0, -2.0, cplx(0, 2), cplx(0, -2)};
  CHECK(covered(p.points, expect, 1e-15));
  CHECK(covered(expect, p.points, 1e-15));
  CHECK(p.source == CloudSource::pi);
  CHECK(p.alpha_count == 4);
  CHECK_THROWS_AS(pi_n(1, 3), InvalidArgument);
}

TEST_CASE("pi_n agrees with the unreduced enumeration") {
  // Every sequence of length n and every phase, eigenvalues by LAPACK.
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::size_t K = 16;
    std::vector<cplx> brute;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
      for (std::size_t k = 0; k < K; ++k) {
        const cplx a = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / K);
        for (cplx z : oracle::eig(assemble_periodized(PeriodizedSpec(SignSeq::from_mask(m, n), a)))) brute.push_back(z);
      }
    const PointCloud p = pi_n(n, K);
    CHECK(covered(p.points, brute, 1e-6));
    CHECK(covered(brute, p.points, 1e-6));
    CHECK(p.points.size() == pi_point_count(pi_work_items(n, K), n));
  }
}

TEST_CASE("periodized spectra for b all ones are real") {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 0; k < 64; ++k) {
      const cplx a = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / 64.0);
      for (cplx z : eig_dense(assemble_periodized(PeriodizedSpec(SignSeq(n), a)))) {
        CHECK(std::abs(z.imag()) < 1e-12);
        CHECK(std::abs(z.real()) <= 2.0 + 1e-12);
      }
    }
}

TEST_CASE("cloud symmetries and the square bound") {
  const auto images = [](const PointCloud& c, auto f) {
    PointCloud out;
    for (cplx z : c.points) out.points.push_back(f(z));
    return out;
  };
  const auto conj = [](cplx z) { return std::conj(z); };
  const auto neg = [](cplx z) { return -z; };
  const auto rot = [](cplx z) { return cplx(0, 1) * z; };

  // Phases alpha = +-1 produce double eigenvalues (band edges), which are
  // only determined to about sqrt(u).
  const PointCloud p = pi_n(4, 64);
  for (cplx z : p.points) CHECK(std::abs(z.real()) + std::abs(z.imag()) <= 2.0 + 1e-8);
  CHECK(set_distance(p, images(p, conj)).hausdorff < 1e-7);
  CHECK(set_distance(p, images(p, neg)).hausdorff < 1e-7);
  CHECK(set_distance(p, images(p, rot)).hausdorff < 1e-7);
  // Away from those phases the 1e-9 agreement holds.
  const PointCloud q = pi_n(4, 62);
  PointCloud simple;
  for (cplx z : q.points)
    if (std::abs(std::abs(z.real()) - std::abs(z.imag())) > 1e-3 && std::abs(z.imag()) > 1e-3 && std::abs(z.real()) > 1e-3)
      simple.points.push_back(z);
  const PointIndex qi(q.points);
  double worst = 0.0;
  for (cplx z : simple.points) worst = std::max({worst, qi.distance(std::conj(z)), qi.distance(-z), qi.distance(cplx(0, 1) * z)});
  CHECK(worst < 1e-9);

  // sigma clouds contain defective eigenvalues whose computed positions
  // scatter at the u^(1/k) level; their images are checked as roots instead.
  const std::size_t n = 7;
  const PointCloud s = sigma_n(n);
  for (cplx z : s.points) {
    CHECK(std::abs(z.real()) + std::abs(z.imag()) <= 2.0 + 1e-8);
    for (cplx w : {std::conj(z), -z, cplx(0, 1) * z}) CHECK(oracle::min_charpoly_residual(w, n) < 1e-10 * std::pow(3.0, 7.0));
  }
  CHECK(set_distance(s, images(s, rot)).hausdorff < 0.05);
}

TEST_CASE("oracle membership") {
  CHECK(oracle_membership(OracleSet::pi1, 1.0) == 0.0);
  CHECK(oracle_membership(OracleSet::pi1, cplx(0, -1.5)) == 0.0);
  CHECK(oracle_membership(OracleSet::pi1, cplx(3, 0)) == doctest::Approx(1.0));
  // Closest point of the cross {x +- ix} to 2 is 1 +- i.
  CHECK(oracle_membership(OracleSet::tau2, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(oracle_membership(OracleSet::tau2, cplx(0.5, 0.5)) < 1e-15);
  CHECK(oracle_membership(OracleSet::delta_square, cplx(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(oracle_membership(OracleSet::delta_square, cplx(0.3, 0.2)) == 0.0);
  CHECK(oracle_membership(OracleSet::disc, cplx(3, 4)) == doctest::Approx(4.0));
  CHECK(oracle_membership(OracleSet::tau3, 1.0) < 1e-12);
  CHECK(oracle_membership(OracleSet::tau3, cplx(std::sqrt(1.75), 0.5)) < 1e-9);
  CHECK(oracle_membership(OracleSet::tau3, cplx(0, 0.7)) == 0.0);
  CHECK(oracle_membership(OracleSet::itau3, cplx(0, 1)) < 1e-12);
  CHECK(oracle_membership(OracleSet::pi3, cplx(0, 1.9)) == 0.0);
  CHECK_THROWS_AS(parse_oracle_set("nope"), InvalidArgument);
  CHECK(parse_oracle_set("tau2") == OracleSet::tau2);

  // tau3 branch distance against dense sampling of the hyperbola.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int t = 0; t < 200; ++t) {
    const cplx z(u(rng), u(rng));
    double best = std::hypot(z.real(), std::max(0.0, std::abs(z.imag()) - 1.0));
    for (int k = 0; k <= 200000; ++k) {
      const double y = -0.5 + static_cast<double>(k) / 200000.0;
      const double x = std::sqrt(1 + 3 * y * y);
      best = std::min({best, std::abs(z - cplx(x, y)), std::abs(z - cplx(-x, y))});
    }
    CHECK(oracle_membership(OracleSet::tau3, z) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("oracle samples lie on their sets") {
  for (OracleSet s : {OracleSet::pi1, OracleSet::tau2, OracleSet::tau3, OracleSet::itau3, OracleSet::pi2,
                      OracleSet::pi3, OracleSet::disc, OracleSet::delta_square}) {
    const auto pts = oracle_samples(s, 100);
    CHECK(!pts.empty());
    for (cplx z : pts) CHECK(oracle_membership(s, z) < 1e-12);
  }
}

TEST_CASE("chebyshev cloud") {
  CHECK(oracle::multiset_distance(chebyshev_cloud(1).points, {0.0}) < 1e-15);
  CHECK(oracle::multiset_distance(chebyshev_cloud(2).points, {1.0, -1.0}) < 1e-15);
  CHECK(oracle::multiset_distance(chebyshev_cloud(3).points, {std::sqrt(2.0), 0.0, -std::sqrt(2.0)}) < 1e-15);
  const auto report = containment_report(chebyshev_cloud(10), [](cplx z) { return oracle_membership(OracleSet::pi1, z); }, 1e-12);
  CHECK(report.passed);
  CHECK(report.max_violation == 0.0);
}

TEST_CASE("set distance") {
  const PointCloud a{{0.0}, CloudSource::custom}, b{{cplx(3, 4)}, CloudSource::custom};
  CHECK(set_distance(a, b).hausdorff == doctest::Approx(5.0));
  CHECK(set_distance(b, b).hausdorff == 0.0);
  const PointCloud s5 = sigma_n(5);
  CHECK(set_distance(s5, s5).hausdorff == 0.0);

  // One-sided distances differ: {0} vs {0, 10}.
  const PointCloud c{{0.0, 10.0}, CloudSource::custom};
  const auto r = set_distance(a, c);
  CHECK(r.hausdorff == doctest::Approx(10.0));
  CHECK(std::abs(r.witness - cplx(10.0)) < 1e-15);
  CHECK_THROWS_AS(set_distance(PointCloud{}, a), InvalidArgument);

  // Against a brute-force double loop.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    PointCloud x, y;
    for (int i = 0; i < 300; ++i) x.points.emplace_back(g(rng), g(rng));
    for (int i = 0; i < 200; ++i) y.points.emplace_back(2 * g(rng), 0.5 * g(rng));
    double h = 0.0;
    for (cplx p : x.points) {
      double m = 1e300;
      for (cplx q : y.points) m = std::min(m, std::abs(p - q));
      h = std::max(h, m);
    }
    for (cplx q : y.points) {
      double m = 1e300;
      for (cplx p : x.points) m = std::min(m, std::abs(p - q));
      h = std::max(h, m);
    }
    CHECK(set_distance(x, y).hausdorff == doctest::Approx(h).epsilon(1e-14));
  }
}

TEST_CASE("containment reports") {
  const auto sq = [](cplx z) { return oracle_membership(OracleSet::delta_square, z); };
  CHECK(containment_report(sigma_n(4), sq, 1e-9).max_violation == 0.0);

  const PointCloud p1 = pi_n(1, 256);
  const PointIndex idx(p1.points);
  const auto r = containment_report(sigma_n(2), [&](cplx z) { return idx.distance(z); }, alpha_resolution_tol(256));
  CHECK(r.passed);

  const PointCloud far{{cplx(5, 5)}, CloudSource::custom};
  const auto bad = containment_report(far, sq, 0.1);
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness == cplx(5, 5));
}

TEST_CASE("sigma_n within pi_{2n+2} for small n") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t K = 1024;
    const PointCloud outer = pi_n(2 * n + 2, K);
    const PointIndex idx(outer.points);
    const auto r = containment_report(sigma_n(n), [&](cplx z) { return idx.distance(z); }, alpha_resolution_tol(K));
    CHECK(r.passed);
  }
}

TEST_CASE("NearestTracker is split-independent") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<cplx> tracked, stream;
  for (int i = 0; i < 50; ++i) tracked.emplace_back(g(rng), g(rng));
  for (int i = 0; i < 5000; ++i) stream.emplace_back(g(rng), g(rng));
  NearestTracker whole(tracked, 0.5), a(tracked, 0.5), b(tracked, 0.5);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    whole.offer(stream[i]);
    (i % 3 ? a : b).offer(stream[i]);
  }
  a.merge(b);
  CHECK(a.distances() == whole.distances());
  for (std::size_t k = 0; k < tracked.size(); ++k) {
    double best = 1e300;
    for (cplx z : stream) best = std::min(best, std::abs(z - tracked[k]));
    if (best <= 0.5) {
      CHECK(whole.distances()[k] == best);
    } else {
      CHECK(whole.distances()[k] > 0.5);
    }
  }
}

TEST_CASE("PointIndex nearest neighbour") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  std::vector<cplx> pts;
  for (int i = 0; i < 2000; ++i) pts.emplace_back(g(rng), 3 * g(rng));
  const PointIndex idx(pts);
  for (int t = 0; t < 500; ++t) {
    const cplx z(4 * g(rng), 4 * g(rng));
    double best = 1e300;
    for (cplx p : pts) best = std::min(best, std::abs(p - z));
    CHECK(idx.distance(z) == best);
  }
}
