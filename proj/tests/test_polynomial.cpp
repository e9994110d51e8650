#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "walsh/errors.hpp"
#include "walsh/polynomial.hpp"

using walsh::cplx;
using walsh::Polynomial;

namespace {

// (z-2)(z^2-1/4) = z^3 - 2z^2 - z/4 + 1/2
Polynomial cubic_fixture() {
  return Polynomial({cplx(0.5), cplx(-0.25), cplx(-2.0), cplx(1.0)});
}

double residual_bound(const Polynomial& p, cplx r, double tol) {
  return tol * (1.0 + p.coeff_norm() * std::pow(1.0 + std::abs(r), p.degree()));
}

}  // namespace

TEST_CASE("horner evaluation against direct expansion") {
  const Polynomial p = cubic_fixture();
  // critical point (2 - sqrt(4.75))/3, value computed from the factored form
  const double zm = (2.0 - std::sqrt(4.75)) / 3.0;
  const cplx want = (cplx(zm) - 2.0) * (cplx(zm) * zm - 0.25);
  CHECK(std::abs(p(cplx(zm)) - want) < 1e-15);
  CHECK(std::abs(p(cplx(zm)).real() - 0.5075840734006741) < 1e-12);
  CHECK(p(cplx(2.0)) == cplx(0.0));
}

TEST_CASE("derivative coefficients and point values") {
  const Polynomial p = cubic_fixture();
  const Polynomial dp = p.derivative();
  REQUIRE(dp.degree() == 2);
  CHECK(dp.coeff(0) == cplx(-0.25));
  CHECK(dp.coeff(1) == cplx(-4.0));
  CHECK(dp.coeff(2) == cplx(3.0));

  // dual route: central finite differences at random points
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const cplx z(box(rng), box(rng));
    const double h = 1e-6 * (1.0 + std::abs(z));
    const cplx fd = (p(z + h) - p(z - h)) / (2.0 * h);
    const cplx an = p.deriv(z);
    CHECK(std::abs(fd - an) < 1e-6 * (1.0 + std::abs(an)));
    CHECK(std::abs(dp(z) - an) < 1e-13 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("derivative of a constant is refused") {
  CHECK_THROWS_AS(Polynomial({cplx(3.0)}).derivative(), walsh::DomainError);
}

TEST_CASE("roots of the two-component cubic") {
  const std::vector<cplx> r = walsh::roots(cubic_fixture());
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[0] - cplx(-0.5)) < 1e-12);
  CHECK(std::abs(r[1] - cplx(0.5)) < 1e-12);
  CHECK(std::abs(r[2] - cplx(2.0)) < 1e-12);
  for (cplx root : r) CHECK(std::abs(cubic_fixture()(root)) <= residual_bound(cubic_fixture(), root, 1e-12));
}

TEST_CASE("quintuple root collapses to one cluster") {
  // z^5: all five roots at the origin
  const Polynomial p({cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0)});
  const std::vector<cplx> r = walsh::roots(p);
  REQUIRE(r.size() == 5);
  for (cplx root : r) CHECK(std::abs(root) < 1e-10);
  const auto clusters = walsh::clustered_roots(p);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].multiplicity == 5);
  CHECK(std::abs(clusters[0].value) < 1e-10);
}

TEST_CASE("mixed multiplicities from factored input") {
  const std::vector<cplx> rts = {cplx(-2.0), cplx(-2.0), cplx(1.0, 2.0), cplx(1.0, 2.0),
                                 cplx(1.0, 2.0)};
  const Polynomial p = Polynomial::from_roots(cplx(0.5, 0.25), rts);
  const auto clusters = walsh::clustered_roots(p);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].multiplicity == 2);
  CHECK(std::abs(clusters[0].value - cplx(-2.0)) < 1e-9);
  CHECK(clusters[1].multiplicity == 3);
  CHECK(std::abs(clusters[1].value - cplx(1.0, 2.0)) < 1e-8);
}

TEST_CASE("critical points of the two-component cubic") {
  const auto cp = walsh::critical_points(cubic_fixture());
  REQUIRE(cp.size() == 2);
  CHECK(cp[0].multiplicity == 1);
  CHECK(cp[1].multiplicity == 1);
  CHECK(std::abs(cp[0].value - cplx(-0.05981649059011226)) < 1e-12);
  CHECK(std::abs(cp[1].value - cplx(1.3931498239234456)) < 1e-12);
}

TEST_CASE("critical points of a shifted pure power") {
  // (z-1)^5 + 0.3i has the single critical point 1 with multiplicity 4
  Polynomial p = Polynomial::from_roots(cplx(1.0), std::vector<cplx>(5, cplx(1.0)));
  p = p - cplx(0.0, -0.3);
  const auto cp = walsh::critical_points(p);
  REQUIRE(cp.size() == 1);
  CHECK(cp[0].multiplicity == 4);
  CHECK(std::abs(cp[0].value - cplx(1.0)) < 1e-9);
  CHECK(walsh::critical_points(Polynomial({cplx(1.0), cplx(2.0)})).empty());
}

TEST_CASE("root-set reconstruction on random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    std::vector<cplx> c(static_cast<size_t>(n) + 1);
    for (auto& ck : c) ck = cplx(box(rng), box(rng));
    // keep the leading coefficient away from zero so the degree is well
    // conditioned; a vanishing leader is a lower-degree instance
    while (std::abs(c.back()) < 0.2) c.back() = cplx(box(rng), box(rng));
    const Polynomial p(std::move(c));

    const std::vector<cplx> r = walsh::roots(p);
    REQUIRE(static_cast<int>(r.size()) == n);
    const Polynomial re = Polynomial::from_roots(p.leading(), r);
    double err = 0.0;
    for (int k = 0; k <= n; ++k) err = std::max(err, std::abs(re.coeff(k) - p.coeff(k)));
    CHECK(err < 1e-8 * p.coeff_norm());
  }
}

TEST_CASE("conjugation closure for real coefficients") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cplx> c(7);
    for (auto& ck : c) ck = cplx(box(rng), 0.0);
    while (std::abs(c.back()) < 0.2) c.back() = cplx(box(rng), 0.0);
    const Polynomial p(std::move(c));
    std::vector<cplx> r = walsh::roots(p);
    // every root's conjugate must appear in the set
    for (cplx root : r) {
      double best = 1e9;
      for (cplx other : r) best = std::min(best, std::abs(std::conj(root) - other));
      CHECK(best < 1e-7 * (1.0 + std::abs(root)));
    }
  }
}

TEST_CASE("warm start accepts and refines previous roots") {
  const Polynomial p = cubic_fixture();
  std::vector<cplx> seed = {cplx(-0.51), cplx(0.52), cplx(1.97)};
  const std::vector<cplx> r = walsh::roots(p, 1e-12, seed);
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[2] - cplx(2.0)) < 1e-12);
}
