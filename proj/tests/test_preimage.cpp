#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "walsh/errors.hpp"
#include "walsh/green_field.hpp"
#include "walsh/preimage.hpp"

using namespace walsh;

namespace {

Polynomial star_quintic() { return Polynomial({0.0, 0.0, 0.0, 0.0, 0.0, 1.0}); }

// (z - 2)(z^2 - 1/4)
Polynomial cubic_fixture() { return Polynomial({0.5, -0.25, -2.0, 1.0}); }

// (8 z^4 - 8 z^2 + 5) / 5, the degree-4 set with a connected segment pre-image
Polynomial quartic_connected() { return Polynomial({1.0, 0.0, -1.6, 0.0, 1.6}); }

// (z - 1)^5 + 0.3i
Polynomial shifted_quintic() {
  return Polynomial({cplx(-1.0, 0.3), cplx(5.0), cplx(-10.0), cplx(10.0), cplx(-5.0), cplx(1.0)});
}

}  // namespace

TEST_CASE("star pre-image is one five-fold component") {
  const PreimageStructure s = analyze(star_quintic(), ModelSet::segment());
  REQUIRE(s.component_count() == 1);
  CHECK(s.degrees[0] == 5);
  CHECK(s.level == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.exterior_critical.empty());
  CHECK(s.conjugation_symmetric);
  CHECK(s.component_symmetric[0]);
  REQUIRE(s.component_roots[0].size() == 5);
  for (cplx r : s.component_roots[0]) CHECK(std::abs(r) <= 1e-8);
  CHECK(winding_index(s.contours[0], cplx(0.0)) == 1);
}

TEST_CASE("two-cluster cubic over the disk") {
  const Polynomial p = cubic_fixture();
  const PreimageStructure s = analyze(p, ModelSet::disk());
  REQUIRE(s.component_count() == 2);
  // components are ordered by centroid: the root pair first, then the far root
  CHECK(s.degrees[0] == 2);
  CHECK(s.degrees[1] == 1);
  REQUIRE(s.component_roots[1].size() == 1);
  CHECK(std::abs(s.component_roots[1][0] - cplx(2.0)) <= 1e-10);
  CHECK(s.conjugation_symmetric);
  CHECK(s.component_symmetric[0]);
  CHECK(s.component_symmetric[1]);

  REQUIRE(s.exterior_critical.size() == 1);
  CHECK(std::abs(s.exterior_critical[0].point - cplx(1.3931498239234456)) <= 1e-9);
  CHECK(s.exterior_critical[0].multiplicity == 1);
  CHECK(s.exterior_critical[0].level ==
        doctest::Approx(std::log(1.0261025919191926) / 3.0).epsilon(1e-9));
  CHECK(s.level == doctest::Approx(0.5 * s.exterior_critical[0].level).epsilon(1e-12));

  // identity moments over each contour recover the enclosed root sums over n
  const GreenField field = GreenField::preimage(p, ModelSet::disk());
  auto identity = [](cplx z) { return z; };
  const cplx m0 = moment_refined(field, s.contours[0], identity);
  const cplx m1 = moment_refined(field, s.contours[1], identity);
  CHECK(std::abs(m0) <= 1e-7);
  CHECK(std::abs(m1 - cplx(2.0 / 3.0)) <= 1e-7);
}

TEST_CASE("lemniscate pair splits into unit-degree ovals") {
  const PreimageStructure s = analyze(Polynomial({-4.0, 0.0, 1.0}), ModelSet::disk());
  REQUIRE(s.component_count() == 2);
  CHECK(s.degrees[0] == 1);
  CHECK(s.degrees[1] == 1);
  CHECK(std::abs(s.component_roots[0][0] - cplx(-2.0)) <= 1e-10);
  CHECK(std::abs(s.component_roots[1][0] - cplx(2.0)) <= 1e-10);
  CHECK(s.component_symmetric[0]);
  CHECK(s.component_symmetric[1]);
  REQUIRE(s.exterior_critical.size() == 1);
  CHECK(std::abs(s.exterior_critical[0].point) <= 1e-10);
  CHECK(s.exterior_critical[0].level == doctest::Approx(0.5 * std::log(4.0)).epsilon(1e-12));
  CHECK(s.level == doctest::Approx(0.25 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("shifted pure power over the ellipse gives five ovals") {
  const PreimageStructure s = analyze(shifted_quintic(), ModelSet::ellipse(1.25));
  REQUIRE(s.component_count() == 5);
  for (int d : s.degrees) CHECK(d == 1);
  CHECK_FALSE(s.conjugation_symmetric);
  REQUIRE(s.exterior_critical.size() == 1);
  CHECK(std::abs(s.exterior_critical[0].point - cplx(1.0)) <= 1e-7);
  CHECK(s.exterior_critical[0].multiplicity == 4);
  CHECK(std::abs(s.exterior_critical[0].value - cplx(0.0, 0.3)) <= 1e-9);
  CHECK(s.exterior_critical[0].level ==
        doctest::Approx(std::log(1.0752245207128440) / 5.0).epsilon(1e-9));
  // the five roots sit on a circle of radius 0.3^(1/5) around 1
  const double rho = std::pow(0.3, 0.2);
  for (const auto& roots_j : s.component_roots) {
    REQUIRE(roots_j.size() == 1);
    CHECK(std::abs(std::abs(roots_j[0] - cplx(1.0)) - rho) <= 1e-10);
  }
}

TEST_CASE("connected quartic over the segment") {
  const PreimageStructure s = analyze(quartic_connected(), ModelSet::segment());
  REQUIRE(s.component_count() == 1);
  CHECK(s.degrees[0] == 4);
  CHECK(s.exterior_critical.empty());
  CHECK(s.level == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.conjugation_symmetric);
}

TEST_CASE("coarse grids that merge components are rejected") {
  const Polynomial p({-1.02, 0.0, 1.0});
  AnalyzeOptions coarse;
  coarse.min_grid = 9;
  coarse.max_grid = 17;
  CHECK_THROWS_AS(analyze(p, ModelSet::disk(), coarse), AccuracyError);

  const PreimageStructure s = analyze(p, ModelSet::disk());
  CHECK(s.component_count() == 2);
}

TEST_CASE("a critical value on the model-set boundary is degenerate") {
  // critical value 1 + 1e-10 sits just outside the disk
  CHECK_THROWS_AS(analyze(Polynomial({1.0 + 1e-10, 0.0, 1.0}), ModelSet::disk()),
                  DegenerateError);
}

TEST_CASE("star boundary trace") {
  const Polynomial p = star_quintic();
  const ModelSet seg = ModelSet::segment();
  const PreimageStructure s = analyze(p, seg);
  const ContourPath b = trace_boundary(p, seg, s, 0);

  const int spt = std::max(256, 64 * 5);
  REQUIRE(b.samples.size() == static_cast<size_t>(spt * 5 + 1));
  REQUIRE(b.tangents.size() == b.samples.size());
  CHECK(b.samples.front() == b.samples.back());
  CHECK(b.level == 0.0);

  double max_abs = 0.0;
  for (cplx z : b.samples) {
    const cplx u = p(z);
    CHECK(std::abs(u.imag()) <= 1e-7);
    CHECK(std::abs(u.real()) <= 1.0 + 1e-7);
    max_abs = std::max(max_abs, std::abs(z));
  }
  // the tips of the star are the fifth roots of +-1; samples land near but
  // not exactly on the turning parameters
  CHECK(max_abs == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(max_abs <= 1.0 + 1e-9);
  CHECK(winding_index(b, cplx(0.0)) == 1);

  // counterclockwise polygon
  double area = 0.0;
  for (size_t k = 0; k + 1 < b.samples.size(); ++k)
    area += b.samples[k].real() * b.samples[k + 1].imag() -
            b.samples[k + 1].real() * b.samples[k].imag();
  CHECK(area > 0.0);
}

TEST_CASE("boundary trace of a unit-degree disk component") {
  const Polynomial p({-4.0, 0.0, 1.0});
  const ModelSet disk = ModelSet::disk();
  const PreimageStructure s = analyze(p, disk);
  const ContourPath b = trace_boundary(p, disk, s, 0, 128);

  REQUIRE(b.samples.size() == 129);
  for (cplx z : b.samples) CHECK(std::abs(std::abs(p(z)) - 1.0) <= 1e-9);
  CHECK(winding_index(b, cplx(-2.0, 0.0)) == 1);
  CHECK(winding_index(b, cplx(2.0, 0.0)) == 0);
}

TEST_CASE("boundary trace through a fold at a segment tip") {
  // P(0) = 1 is critical and equals the right tip; the lift passes smoothly
  const Polynomial p = quartic_connected();
  const ModelSet seg = ModelSet::segment();
  const PreimageStructure s = analyze(p, seg);
  const ContourPath b = trace_boundary(p, seg, s, 0, 512);

  REQUIRE(b.samples.size() == static_cast<size_t>(512 * 4 + 1));
  for (cplx z : b.samples) {
    const cplx u = p(z);
    CHECK(std::abs(u.imag()) <= 1e-7);
    CHECK(std::abs(u.real()) <= 1.0 + 1e-7);
  }
}

TEST_CASE("component index is validated") {
  const Polynomial p = star_quintic();
  const ModelSet seg = ModelSet::segment();
  const PreimageStructure s = analyze(p, seg);
  CHECK_THROWS_AS(trace_boundary(p, seg, s, 1), DomainError);
  CHECK_THROWS_AS(trace_boundary(p, seg, s, -1), DomainError);
}
