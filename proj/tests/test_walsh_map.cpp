#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "walsh/errors.hpp"
#include "walsh/lemniscatic.hpp"
#include "walsh/preimage.hpp"
#include "walsh/walsh_map.hpp"

using walsh::cplx;
using walsh::Polynomial;

namespace {

Polynomial poly(std::initializer_list<cplx> ascending) {
  return Polynomial(std::vector<cplx>(ascending));
}

const Polynomial kStar = poly({0, 0, 0, 0, 0, 1});        // z^5, five-fold slit star
const Polynomial kCubic = poly({0.5, -0.25, -2.0, 1.0});  // two disk components
const Polynomial kTriple = poly({0, -4.0, 0, 1.0});       // z^3 - 4z, its own lemniscate

Polynomial quintic_ovals() {
  std::vector<cplx> ones(5, cplx(1.0));
  return Polynomial::from_roots(cplx(1.0), ones) - cplx(0.0, -0.3);  // (z-1)^5 + 0.3i
}

}  // namespace

TEST_CASE("fixed point: the map is the identity") {
  const auto omega = walsh::ModelSet::disk();
  const auto st = walsh::analyze(kTriple, omega);
  const auto sch = walsh::solve(kTriple, omega, st);
  REQUIRE(sch.provenance == walsh::Provenance::fixed_point);
  const cplx probes[] = {cplx(3.0, 0.5), cplx(-0.1, 2.2), cplx(0.4, -1.9), cplx(-2.8, 0.3)};
  for (cplx z : probes) {
    CHECK(std::abs(walsh::phi_track(kTriple, omega, sch, z) - z) < 1e-10);
    CHECK(std::abs(walsh::phi_closed_form(kTriple, omega, sch, z) - z) < 1e-12);
    const auto idr = walsh::check_identity(kTriple, omega, sch, z);
    CHECK(idr.map_equation < 1e-10);
    CHECK(idr.green_match < 1e-10);
  }
}

TEST_CASE("monomial star: both evaluation routes hit the frozen value") {
  const auto omega = walsh::ModelSet::segment();
  const auto sch = walsh::solve(kStar, omega);
  // (psi([-1,1] at 32) / 2)^(1/5), branch asymptotic to z
  const double frozen = 1.9999023103536926;
  CHECK(std::abs(walsh::phi_track(kStar, omega, sch, cplx(2.0)) - frozen) < 1e-9);
  CHECK(std::abs(walsh::phi_closed_form(kStar, omega, sch, cplx(2.0)) - frozen) < 1e-12);
  const cplx z(0.9, 0.9);
  CHECK(std::abs(walsh::phi_track(kStar, omega, sch, z) -
                 walsh::phi_closed_form(kStar, omega, sch, z)) < 1e-10);
}

TEST_CASE("degree one: explicit affine image") {
  const Polynomial P = poly({1.0, 2.0});  // 2z + 1
  const auto omega = walsh::ModelSet::segment();
  const auto sch = walsh::solve(P, omega);
  // -1/2 + psi(3)/4 with psi(3) = 3 + sqrt(8)
  const double frozen = 0.9571067811865475;
  CHECK(std::abs(walsh::phi_track(P, omega, sch, cplx(1.0)) - frozen) < 1e-12);
  CHECK(std::abs(walsh::phi_closed_form(P, omega, sch, cplx(1.0)) - frozen) < 1e-12);
}

TEST_CASE("real input: conjugation symmetry of the tracked map") {
  const auto omega = walsh::ModelSet::disk();
  const auto sch = walsh::solve(kCubic, omega);
  const cplx probes[] = {cplx(1.0, 1.2), cplx(-0.8, 0.6), cplx(2.4, 0.3), cplx(0.2, 2.0)};
  for (cplx z : probes) {
    const cplx up = walsh::phi_track(kCubic, omega, sch, z);
    const cplx dn = walsh::phi_track(kCubic, omega, sch, std::conj(z));
    CHECK(std::abs(dn - std::conj(up)) < 1e-10);
  }
}

TEST_CASE("warm continuation is path independent") {
  const auto omega = walsh::ModelSet::disk();
  const auto sch = walsh::solve(kCubic, omega);
  walsh::PhiTracker tracker(kCubic, omega, sch);
  for (int k = 0; k <= 60; ++k) {
    const cplx z(3.0 - 4.5 * k / 60.0, 0.9);
    const cplx warm = tracker.eval(z);
    const cplx fresh = walsh::phi_track(kCubic, omega, sch, z);
    CHECK(std::abs(warm - fresh) < 1e-10);
  }
}

TEST_CASE("boundary tours stay on the unit level of the scheme polynomial") {
  const auto disk = walsh::ModelSet::disk();
  const auto st = walsh::analyze(kCubic, disk);
  const auto sch = walsh::solve(kCubic, disk, st);
  for (int j = 0; j < 2; ++j) {
    const auto bm = walsh::phi_boundary(kCubic, disk, st, sch, j, 0);
    REQUIRE(bm.image.samples.size() == bm.domain.samples.size());
    CHECK(std::abs(bm.image.samples.front() - bm.image.samples.back()) < 1e-9);
    double worst = 0.0;
    for (const cplx& w : bm.image.samples) worst = std::max(worst, std::abs(std::abs(sch.q(w)) - 1.0));
    CHECK(worst < 1e-10);
  }

  const auto seg = walsh::ModelSet::segment();
  const auto st2 = walsh::analyze(kStar, seg);
  const auto sch2 = walsh::solve(kStar, seg, st2);
  const auto bm2 = walsh::phi_boundary(kStar, seg, st2, sch2, 0, 0);
  double worst = 0.0;
  for (const cplx& w : bm2.image.samples) worst = std::max(worst, std::abs(std::abs(sch2.q(w)) - 1.0));
  CHECK(worst < 1e-10);
}

TEST_CASE("integral reconstruction from boundary tours") {
  const auto disk = walsh::ModelSet::disk();
  const auto st = walsh::analyze(kCubic, disk);
  const auto sch = walsh::solve(kCubic, disk, st);
  std::vector<walsh::BoundaryMap> maps;
  maps.push_back(walsh::phi_boundary(kCubic, disk, st, sch, 0, 0));
  maps.push_back(walsh::phi_boundary(kCubic, disk, st, sch, 1, 0));
  const cplx probes[] = {cplx(0.9, 0.8), cplx(3.1, -0.4), cplx(-1.0, -1.0), cplx(1.5, 1.0)};
  for (cplx z : probes) {
    const cplx direct = walsh::phi_track(kCubic, disk, sch, z);
    const cplx integral = walsh::phi_cauchy(maps, z);
    CHECK(std::abs(direct - integral) < 1e-6);
  }

  const auto ell = walsh::ModelSet::ellipse(1.25);
  const Polynomial Q5 = quintic_ovals();
  const auto st5 = walsh::analyze(Q5, ell);
  const auto sch5 = walsh::solve(Q5, ell, st5);
  std::vector<walsh::BoundaryMap> maps5;
  for (int j = 0; j < 5; ++j) maps5.push_back(walsh::phi_boundary(Q5, ell, st5, sch5, j, 0));
  const cplx probes5[] = {cplx(1.0, 0.1), cplx(3.2, 0.4), cplx(1.0, -2.1)};
  for (cplx z : probes5) {
    const cplx direct = walsh::phi_track(Q5, ell, sch5, z);
    const cplx integral = walsh::phi_cauchy(maps5, z);
    CHECK(std::abs(direct - integral) < 1e-6);
  }
}

TEST_CASE("integral reconstruction over an enclosing tour for slit sets") {
  // slit boundaries sample too coarsely near their corners for one-shot
  // quadrature, but the integral may ride any smooth tour enclosing the set
  const auto seg = walsh::ModelSet::segment();
  const auto sch = walsh::solve(kStar, seg);
  walsh::BoundaryMap ring;
  ring.domain = walsh::circle_path(cplx(0.0), 2.0, 512, +1);
  walsh::PhiTracker tracker(kStar, seg, sch);
  ring.image.samples.reserve(ring.domain.samples.size());
  for (const cplx& z : ring.domain.samples) ring.image.samples.push_back(tracker.eval(z));
  std::vector<walsh::BoundaryMap> maps{ring};
  const cplx probes[] = {cplx(2.6, -1.1), cplx(-3.0, 2.2), cplx(0.0, 4.0)};
  for (cplx z : probes) {
    const cplx direct = walsh::phi_track(kStar, seg, sch, z);
    const cplx integral = walsh::phi_cauchy(maps, z);
    CHECK(std::abs(direct - integral) < 1e-8);
  }
}

TEST_CASE("joined components have no elementary form") {
  const auto omega = walsh::ModelSet::disk();
  const auto sch = walsh::solve(kCubic, omega);
  REQUIRE(sch.provenance == walsh::Provenance::two_components);
  CHECK_THROWS_AS(walsh::phi_closed_form(kCubic, omega, sch, cplx(2.5, 0.5)),
                  walsh::DispatchError);
}

TEST_CASE("interior points are rejected") {
  const auto seg = walsh::ModelSet::segment();
  const auto sch = walsh::solve(kStar, seg);
  CHECK_THROWS_AS(walsh::phi_track(kStar, seg, sch, cplx(0.2, 0.0)), walsh::DomainError);
  CHECK_THROWS_AS(walsh::phi_closed_form(kStar, seg, sch, cplx(0.2, 0.0)), walsh::DomainError);

  const auto disk = walsh::ModelSet::disk();
  const auto sch3 = walsh::solve(kCubic, disk);
  CHECK_THROWS_AS(walsh::phi_track(kCubic, disk, sch3, cplx(2.0, 0.0)), walsh::DomainError);
}

TEST_CASE("integral evaluation rejects near-boundary points") {
  const auto disk = walsh::ModelSet::disk();
  const auto st = walsh::analyze(kCubic, disk);
  const auto sch = walsh::solve(kCubic, disk, st);
  std::vector<walsh::BoundaryMap> maps;
  maps.push_back(walsh::phi_boundary(kCubic, disk, st, sch, 0, 0));
  maps.push_back(walsh::phi_boundary(kCubic, disk, st, sch, 1, 0));
  const cplx hug = maps[0].domain.samples[7] + cplx(1e-9, 1e-9);
  CHECK_THROWS_AS(walsh::phi_cauchy(maps, hug), walsh::AccuracyError);
}

TEST_CASE("map derivative matches finite differences") {
  const auto omega = walsh::ModelSet::disk();
  const auto sch = walsh::solve(kCubic, omega);
  walsh::PhiTracker tracker(kCubic, omega, sch);
  const cplx z(1.4, 0.9);
  const cplx w = tracker.eval(z);
  const cplx deriv = tracker.map_deriv(z, w);
  const double h = 1e-6;
  const cplx fd =
      (tracker.eval(z + cplx(h, 0.0)) - tracker.eval(z - cplx(h, 0.0))) / cplx(2.0 * h, 0.0);
  CHECK(std::abs(deriv - fd) < 1e-6 * (1.0 + std::abs(deriv)));
}
