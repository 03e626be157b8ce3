#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "hopping/errors.hpp"
#include "hopping/linalg.hpp"
#include "hopping/model.hpp"
#include "oracles.hpp"

using namespace hop;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

TridiagC random_tridiag(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  TridiagC t;
  for (std::size_t i = 0; i < n; ++i) t.diag.emplace_back(g(rng), g(rng));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.sub.emplace_back(g(rng), g(rng));
    t.super.emplace_back(g(rng), g(rng));
  }
  return t;
}

}  // namespace

TEST_CASE("eig_dense on small analytic cases") {
  CMatrix rot(2, 2);
  rot << 0, 1, -1, 0;
  CHECK(oracle::multiset_distance(eig_dense(rot), {cplx(0, 1), cplx(0, -1)}) < 1e-14);

  const CMatrix ones = assemble(HoppingSpec::single(SignSeq(2))).dense();
  CHECK(oracle::multiset_distance(eig_dense(ones), {-std::sqrt(2.0), 0.0, std::sqrt(2.0)}) < 1e-14);
  for (std::size_t n = 1; n <= 50; ++n) {
    std::vector<cplx> cheb;
    for (std::size_t j = 1; j <= n; ++j) cheb.emplace_back(2.0 * std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n + 1)));
    CHECK(oracle::multiset_distance(eig_dense(assemble(HoppingSpec::single(SignSeq(n - 1))).dense()), cheb) < 1e-10);
  }

  // [[0,1,0],[1,0,1],[0,-1,0]] has characteristic polynomial lambda^3 (a
  // triple, defective root), so eigenvalues are only determined to about
  // u^(1/3); the backward-stable contract is checked through the polynomial.
  CMatrix m(3, 3);
  m << 0, 1, 0, 1, 0, 1, 0, -1, 0;
  for (cplx z : eig_dense(m)) CHECK(std::abs(z * z * z) < 1e-13);
  CHECK(oracle::multiset_distance(eig_dense(m), {0.0, 0.0, 0.0}) < 1e-4);
}

TEST_CASE("eig_dense agrees with LAPACK on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const CMatrix m = random_matrix(rng, 1 + trial % 12);
    CHECK(oracle::multiset_distance(eig_dense(m), oracle::eig(m)) < 1e-10);
  }
}

TEST_CASE("eig_dense rejects non-finite input") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eig_dense(m), InvalidArgument);
}

TEST_CASE("smin_dense basic values") {
  CHECK(smin_dense(CMatrix::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(smin_dense(assemble(HoppingSpec::single(SignSeq(1))).dense()) == doctest::Approx(1.0).epsilon(1e-14));
  const cplx lam(0.3, -1.7);
  CHECK(smin_dense(assemble(HoppingSpec::single(SignSeq()), lam).dense()) == doctest::Approx(std::abs(lam)));
}

TEST_CASE("smin_dense matches LAPACK and is transpose invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix m = random_matrix(rng, 2 + trial % 10);
    const double s = smin_dense(m);
    CHECK(s == doctest::Approx(oracle::smin(m)).epsilon(1e-10));
    CHECK(smin_dense(m.transpose()) == doctest::Approx(s).epsilon(1e-12));
    CHECK(smin_dense(m.adjoint()) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("smin is 1-Lipschitz in the shift") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const HoppingSpec spec = HoppingSpec::single(SignSeq::from_mask(rng() & ((1ULL << (n - 1)) - 1), n - 1));
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    const double sa = smin_dense(assemble(spec, a).dense());
    const double sb = smin_dense(assemble(spec, b).dense());
    CHECK(std::abs(sa - sb) <= std::abs(a - b) + 1e-12);
  }
}

TEST_CASE("smin_tridiag small cases") {
  TridiagC t({0, 0, 0, 0}, {2, 2, 2, 2, 2}, {0, 0, 0, 0});
  CHECK(smin_tridiag(t) == doctest::Approx(2.0).epsilon(1e-12));

  // A_2 with b = (-1), shift 1: [[-1, 1], [-1, -1]]. Both singular values are sqrt(2).
  const TridiagC s = assemble(HoppingSpec::single(SignSeq::parse("-")), 1.0);
  CHECK(smin_tridiag(s) == doctest::Approx(oracle::smin(s.dense())).epsilon(1e-12));
  CHECK(smin_tridiag(s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  TridiagC one({}, {cplx(3, 4)}, {});
  CHECK(smin_tridiag(one) == doctest::Approx(5.0));
}

TEST_CASE("smin_tridiag matches the dense route on random complex tridiagonals") {
  std::mt19937_64 rng(12);
  int fallbacks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const TridiagC t = random_tridiag(rng, 2 + trial % 39);
    const SminTridiagResult r = smin_tridiag_ex(t);
    fallbacks += r.fell_back;
    const double ref = oracle::smin(t.dense());
    CHECK(std::abs(r.value - ref) <= 1e-8 * ref + 1e-14);
  }
  MESSAGE("dense fallbacks: " << fallbacks);
}

TEST_CASE("smin_tridiag on a singular matrix returns 0") {
  TridiagC t({1.0}, {1.0, 1.0}, {1.0});  // [[1,1],[1,1]]
  CHECK(smin_tridiag(t) < 1e-14);
}

TEST_CASE("smin_tridiag flags the dense fallback when iterations are capped") {
  std::mt19937_64 rng(3);
  const TridiagC t = random_tridiag(rng, 30);
  SminTridiagOptions o;
  o.max_iterations = 1;
  const SminTridiagResult r = smin_tridiag_ex(t, o);
  CHECK(r.fell_back);
  CHECK(r.value == doctest::Approx(oracle::smin(t.dense())).epsilon(1e-10));
}

TEST_CASE("TridiagC validation") {
  CHECK_THROWS_AS(TridiagC({1.0}, {1.0}, {}).validate(), InvalidArgument);
  CHECK_THROWS_AS(TridiagC({}, {}, {}).validate(), InvalidArgument);
  CHECK_THROWS_AS(smin_tridiag(TridiagC({}, {cplx(std::numeric_limits<double>::infinity())}, {})), InvalidArgument);
}

TEST_CASE("resolvent norms") {
  CMatrix zero = CMatrix::Zero(1, 1);
  const ResolventNorm r2 = resolvent_norm(zero, 2.0, NormP::two);
  CHECK(r2.status == ResolventStatus::regular);
  CHECK(r2.value == doctest::Approx(0.5));

  // A_2 with b = (-1), lambda = 1: inverse (1/2)[[-1,-1],[1,-1]].
  const CMatrix a = assemble(HoppingSpec::single(SignSeq::parse("-"))).dense();
  CHECK(resolvent_norm(a, 1.0, NormP::one).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(resolvent_norm(a, 1.0, NormP::inf).value == doctest::Approx(1.0).epsilon(1e-14));

  const ResolventNorm sing = resolvent_norm(a, cplx(0, 1), NormP::two);
  CHECK(std::isinf(sing.value));
  CHECK(sing.status != ResolventStatus::regular);
}

TEST_CASE("resolvent norm ordering and 1-norm equals inf-norm on hopping matrices") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const CMatrix a =
        assemble(HoppingSpec::single(SignSeq::from_mask(n > 1 ? rng() & ((1ULL << (n - 1)) - 1) : 0, n - 1))).dense();
    const cplx lam(u(rng), u(rng));
    const ResolventNorm p1 = resolvent_norm(a, lam, NormP::one);
    const ResolventNorm pinf = resolvent_norm(a, lam, NormP::inf);
    const ResolventNorm p2 = resolvent_norm(a, lam, NormP::two);
    REQUIRE(p1.status == ResolventStatus::regular);
    CHECK(p1.value == doctest::Approx(pinf.value).epsilon(1e-10));
    CHECK(p2.value <= p1.value * (1 + 1e-12));
    CHECK(p2.value == doctest::Approx(1.0 / oracle::smin(a - lam * CMatrix::Identity(a.rows(), a.cols()))).epsilon(1e-10));
  }
}

TEST_CASE("Hermitian extreme eigenvalues") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 25;
    std::vector<double> d(n);
    std::vector<cplx> s(n - 1);
    for (auto& v : d) v = g(rng);
    for (auto& v : s) v = cplx(g(rng), g(rng));
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = s[i];
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = std::conj(s[i]);
    }
    double ref = -1e300;
    for (cplx z : oracle::eig(h)) ref = std::max(ref, z.real());
    CHECK(hermitian_max_eig(h) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(hermitian_tridiag_max_eig(d, s) == doctest::Approx(ref).epsilon(1e-12));
  }
}
