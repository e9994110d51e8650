#include "walsh/preimage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "walsh/errors.hpp"
#include "walsh/green_field.hpp"

namespace walsh {

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct Grid {
  double x0, y0, dx, dy;
  int nx, ny;
  cplx point(int i, int j) const { return {x0 + dx * i, y0 + dy * j}; }
};

// horizontal edge (i,j)-(i+1,j) -> dir 0, vertical edge (i,j)-(i,j+1) -> dir 1
uint64_t edge_key(const Grid& g, int i, int j, int dir) {
  return (static_cast<uint64_t>(j) * static_cast<uint64_t>(g.nx) + static_cast<uint64_t>(i)) *
             2u +
         static_cast<uint64_t>(dir);
}

cplx edge_crossing(const Grid& g, const std::vector<double>& F, uint64_t key) {
  const int dir = static_cast<int>(key & 1u);
  const uint64_t idx = key >> 1;
  const int i = static_cast<int>(idx % static_cast<uint64_t>(g.nx));
  const int j = static_cast<int>(idx / static_cast<uint64_t>(g.nx));
  const double f0 = F[static_cast<size_t>(j) * g.nx + i];
  const double f1 = dir == 0 ? F[static_cast<size_t>(j) * g.nx + i + 1]
                             : F[(static_cast<size_t>(j) + 1) * g.nx + i];
  const double s = f0 / (f0 - f1);
  return dir == 0 ? cplx(g.x0 + g.dx * (i + s), g.y0 + g.dy * j)
                  : cplx(g.x0 + g.dx * i, g.y0 + g.dy * (j + s));
}

double shoelace(const std::vector<cplx>& pts) {
  double a = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k)
    a += pts[k].real() * pts[k + 1].imag() - pts[k + 1].real() * pts[k].imag();
  return 0.5 * a;
}

/// Level-curve loops of {F = 0} with F sampled on the grid. Sample signs give
/// the marching-squares case per cell; the two ambiguous cases are resolved by
/// the field value at the cell center. Requires F > 0 on the whole border.
std::vector<ContourPath> extract_loops(const Polynomial& P, const ModelSet& omega, const Grid& g,
                                       const std::vector<double>& F, double t) {
  auto val = [&](int i, int j) { return F[static_cast<size_t>(j) * g.nx + i]; };
  for (int i = 0; i < g.nx; ++i)
    if (val(i, 0) <= 0.0 || val(i, g.ny - 1) <= 0.0)
      throw AccuracyError("pre-image level curve touches the sampling box");
  for (int j = 0; j < g.ny; ++j)
    if (val(0, j) <= 0.0 || val(g.nx - 1, j) <= 0.0)
      throw AccuracyError("pre-image level curve touches the sampling box");

  std::vector<std::array<uint64_t, 2>> segs;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int mask = (val(i, j) < 0.0 ? 1 : 0) | (val(i + 1, j) < 0.0 ? 2 : 0) |
                       (val(i + 1, j + 1) < 0.0 ? 4 : 0) | (val(i, j + 1) < 0.0 ? 8 : 0);
      if (mask == 0 || mask == 15) continue;
      const uint64_t e0 = edge_key(g, i, j, 0);      // bottom
      const uint64_t e1 = edge_key(g, i + 1, j, 1);  // right
      const uint64_t e2 = edge_key(g, i, j + 1, 0);  // top
      const uint64_t e3 = edge_key(g, i, j, 1);      // left
      auto emit = [&](uint64_t a, uint64_t b) { segs.push_back({a, b}); };
      switch (mask) {
        case 1:
        case 14:
          emit(e3, e0);
          break;
        case 2:
        case 13:
          emit(e0, e1);
          break;
        case 4:
        case 11:
          emit(e1, e2);
          break;
        case 8:
        case 7:
          emit(e2, e3);
          break;
        case 3:
        case 12:
          emit(e3, e1);
          break;
        case 6:
        case 9:
          emit(e0, e2);
          break;
        case 5:
        case 10: {
          const cplx center(g.x0 + g.dx * (i + 0.5), g.y0 + g.dy * (j + 0.5));
          const bool center_in = green_E_extended(P, omega, center) - t < 0.0;
          const bool joins_main_diagonal = (mask == 5) == center_in;
          if (joins_main_diagonal) {
            emit(e0, e1);
            emit(e2, e3);
          } else {
            emit(e3, e0);
            emit(e1, e2);
          }
          break;
        }
        default:
          break;
      }
    }
  }
  if (segs.empty()) throw AccuracyError("no level curve found on the sampling grid");

  // each edge with a crossing is shared by exactly two cells
  std::unordered_map<uint64_t, std::array<int, 2>> incid;
  incid.reserve(segs.size() * 2);
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    for (uint64_t e : segs[static_cast<size_t>(s)]) {
      auto [it, fresh] = incid.try_emplace(e, std::array<int, 2>{-1, -1});
      if (it->second[0] < 0)
        it->second[0] = s;
      else if (it->second[1] < 0)
        it->second[1] = s;
      else
        throw AccuracyError("level-curve extraction produced an inconsistent crossing");
    }
  }
  for (const auto& [e, pair] : incid)
    if (pair[1] < 0) throw AccuracyError("level-curve extraction produced an open segment");

  std::vector<ContourPath> loops;
  std::vector<bool> used(segs.size(), false);
  for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
    if (used[static_cast<size_t>(s0)]) continue;
    ContourPath path;
    path.level = t;
    const uint64_t start_edge = segs[static_cast<size_t>(s0)][0];
    uint64_t edge = start_edge;
    int seg = s0;
    do {
      used[static_cast<size_t>(seg)] = true;
      path.samples.push_back(edge_crossing(g, F, edge));
      const auto& ends = segs[static_cast<size_t>(seg)];
      edge = ends[0] == edge ? ends[1] : ends[0];
      const auto& pair = incid[edge];
      seg = pair[0] == seg ? pair[1] : pair[0];
    } while (edge != start_edge);
    path.samples.push_back(path.samples.front());
    if (shoelace(path.samples) < 0.0)
      std::reverse(path.samples.begin(), path.samples.end());
    loops.push_back(std::move(path));
  }
  return loops;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double s = ((p - a) * std::conj(ab)).real() / len2;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

double point_polyline_distance(cplx p, const std::vector<cplx>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < poly.size(); ++k)
    best = std::min(best, point_segment_distance(p, poly[k], poly[k + 1]));
  return best;
}

bool loop_conjugation_symmetric(const ContourPath& loop, double tol) {
  const size_t stride = std::max<size_t>(1, loop.samples.size() / 256);
  for (size_t k = 0; k < loop.samples.size(); k += stride)
    if (point_polyline_distance(std::conj(loop.samples[k]), loop.samples) > tol) return false;
  return true;
}

bool border_clear(const Polynomial& P, const ModelSet& omega, double x0, double x1, double y0,
                  double y1, double t) {
  const int m = 1024;
  for (int k = 0; k <= m; ++k) {
    const double fx = x0 + (x1 - x0) * k / m;
    const double fy = y0 + (y1 - y0) * k / m;
    if (green_E_extended(P, omega, cplx(fx, y0)) <= 1.05 * t) return false;
    if (green_E_extended(P, omega, cplx(fx, y1)) <= 1.05 * t) return false;
    if (green_E_extended(P, omega, cplx(x0, fy)) <= 1.05 * t) return false;
    if (green_E_extended(P, omega, cplx(x1, fy)) <= 1.05 * t) return false;
  }
  return true;
}

struct Candidate {
  std::vector<ContourPath> contours;
  std::vector<int> degrees;
  std::vector<std::vector<cplx>> component_roots;
  std::vector<bool> component_symmetric;
};

/// Checks the loops against the algebra: the loop count must equal one plus
/// the number of critical points outside E counted with multiplicity (the
/// interior ones absorb exactly n - ell by the branched-cover count), every
/// root of P must fall inside exactly one loop, every loop must hold at least
/// one root, and the Green's-function period of each loop must equal its root
/// count over n. Throws AccuracyError on any mismatch.
Candidate audit_loops(const Polynomial& P, const ModelSet& omega, std::vector<ContourPath> loops,
                      const std::vector<cplx>& rts, int expected_ell, bool real_coeffs,
                      double scale) {
  const int n = P.degree();
  Candidate cand;
  cand.contours = std::move(loops);
  const size_t ell = cand.contours.size();
  if (static_cast<int>(ell) != expected_ell)
    throw AccuracyError("level-curve loop count does not match the critical structure");
  cand.degrees.assign(ell, 0);
  cand.component_roots.resize(ell);

  for (cplx r : rts) {
    int owner = -1;
    for (size_t j = 0; j < ell; ++j) {
      if (winding_index(cand.contours[j], r) == 0) continue;
      if (owner >= 0) throw AccuracyError("a root is enclosed by two level-curve loops");
      owner = static_cast<int>(j);
    }
    if (owner < 0) throw AccuracyError("a root escaped every level-curve loop");
    cand.degrees[static_cast<size_t>(owner)] += 1;
    cand.component_roots[static_cast<size_t>(owner)].push_back(r);
  }
  for (int d : cand.degrees)
    if (d < 1) throw AccuracyError("a level-curve loop encloses no root");

  const GreenField field = GreenField::preimage(P, omega);
  for (size_t j = 0; j < ell; ++j) {
    const double p = period_refined(field, cand.contours[j]);
    if (std::abs(n * p - cand.degrees[j]) > 0.01)
      throw AccuracyError("loop period does not match the enclosed root count");
  }

  for (size_t j = 0; j < ell; ++j)
    cand.component_symmetric.push_back(
        real_coeffs && loop_conjugation_symmetric(cand.contours[j], 1e-6 * scale));

  // deterministic ordering: centroid, real part first
  std::vector<size_t> order(ell);
  for (size_t j = 0; j < ell; ++j) order[j] = j;
  auto centroid = [&](size_t j) {
    cplx c(0.0);
    for (cplx z : cand.contours[j].samples) c += z;
    return c / static_cast<double>(cand.contours[j].samples.size());
  };
  std::vector<cplx> cents(ell);
  for (size_t j = 0; j < ell; ++j) cents[j] = centroid(j);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return cents[a].real() != cents[b].real() ? cents[a].real() < cents[b].real()
                                              : cents[a].imag() < cents[b].imag();
  });
  Candidate sorted;
  for (size_t j : order) {
    sorted.contours.push_back(std::move(cand.contours[j]));
    sorted.degrees.push_back(cand.degrees[j]);
    sorted.component_roots.push_back(std::move(cand.component_roots[j]));
    sorted.component_symmetric.push_back(cand.component_symmetric[j]);
  }
  return sorted;
}

}  // namespace

PreimageStructure analyze(const Polynomial& P, const ModelSet& omega,
                          const AnalyzeOptions& options) {
  const int n = P.degree();
  if (n < 1) throw DomainError("pre-image of a constant polynomial is not a compact set");

  const std::vector<cplx> rts = roots(P);
  double scale = 1.0;
  for (cplx r : rts) scale = std::max(scale, 1.0 + std::abs(r));

  PreimageStructure out;
  double min_level = std::numeric_limits<double>::infinity();
  for (const RootCluster& c : critical_points(P)) {
    const cplx v = P(c.value);
    if (omega.contains(v)) continue;
    const double lev = omega.green(v) / n;
    if (lev <= 1e-8)
      throw DegenerateError("a critical value lies on the boundary of the model set");
    out.exterior_critical.push_back({c.value, v, lev, c.multiplicity});
    min_level = std::min(min_level, lev);
  }
  std::sort(out.exterior_critical.begin(), out.exterior_critical.end(),
            [](const ExteriorCritical& a, const ExteriorCritical& b) {
              if (a.level != b.level) return a.level < b.level;
              if (a.point.real() != b.point.real()) return a.point.real() < b.point.real();
              return a.point.imag() < b.point.imag();
            });
  const double t = std::min(options.level_cap, 0.5 * min_level);
  out.level = t;
  int expected_ell = 1;
  for (const ExteriorCritical& c : out.exterior_critical) expected_ell += c.multiplicity;

  bool real_coeffs = true;
  for (cplx c : P.coeffs())
    if (std::abs(c.imag()) > 1e-14 * P.coeff_norm()) real_coeffs = false;
  out.conjugation_symmetric = real_coeffs;

  double xmin = rts[0].real(), xmax = rts[0].real();
  double ymin = rts[0].imag(), ymax = rts[0].imag();
  for (cplx r : rts) {
    xmin = std::min(xmin, r.real());
    xmax = std::max(xmax, r.real());
    ymin = std::min(ymin, r.imag());
    ymax = std::max(ymax, r.imag());
  }
  const double capE = std::pow(omega.laurent().capacity / std::abs(P.leading()), 1.0 / n);

  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  bool boxed = false;
  double pad = 0.75 + 1.5 * capE * std::exp(t);
  for (int tries = 0; tries < 8 && !boxed; ++tries, pad *= 1.5) {
    x0 = xmin - pad;
    x1 = xmax + pad;
    y1 = ymax + pad;
    y0 = ymin - pad;
    if (real_coeffs) {
      // a symmetric box keeps the sampled field exactly mirror-symmetric
      y1 = std::max(std::abs(y0), std::abs(y1));
      y0 = -y1;
    }
    boxed = border_clear(P, omega, x0, x1, y0, y1, t);
  }
  if (!boxed) throw AccuracyError("could not bound the pre-image inside a sampling box");

  Candidate prev;
  bool have_prev = false;
  for (int gsize = options.min_grid; gsize <= options.max_grid; gsize = gsize * 2 - 1) {
    Grid g{x0, y0, (x1 - x0) / (gsize - 1), (y1 - y0) / (gsize - 1), gsize, gsize};
    std::vector<double> F(static_cast<size_t>(g.nx) * static_cast<size_t>(g.ny));
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        F[static_cast<size_t>(j) * g.nx + i] = green_E_extended(P, omega, g.point(i, j)) - t;

    try {
      Candidate cand = audit_loops(P, omega, extract_loops(P, omega, g, F, t), rts, expected_ell,
                                   real_coeffs, scale);
      std::vector<int> sig = cand.degrees, prev_sig = prev.degrees;
      std::sort(sig.begin(), sig.end());
      std::sort(prev_sig.begin(), prev_sig.end());
      if (have_prev && sig == prev_sig) {
        out.contours = std::move(cand.contours);
        out.degrees = std::move(cand.degrees);
        out.component_roots = std::move(cand.component_roots);
        out.component_symmetric = std::move(cand.component_symmetric);
        return out;
      }
      prev = std::move(cand);
      have_prev = true;
    } catch (const AccuracyError&) {
      have_prev = false;  // this resolution is unusable; restart the agreement
    } catch (const DomainError&) {
      have_prev = false;  // a coarse polygon dipped into E; same treatment
    }
  }
  throw AccuracyError(
      "pre-image structure did not stabilize under grid refinement; "
      "components may be unresolved at this resolution");
}

namespace {

struct BoundaryParam {
  std::function<cplx(double)> at;
  std::function<cplx(double)> deriv;
};

BoundaryParam boundary_param(const ModelSet& omega) {
  switch (omega.kind()) {
    case ModelSet::Kind::disk:
      return {[](double t) { return cplx(std::cos(t), std::sin(t)); },
              [](double t) { return cplx(-std::sin(t), std::cos(t)); }};
    case ModelSet::Kind::segment:
      return {[](double t) { return cplx(std::cos(t), 0.0); },
              [](double t) { return cplx(-std::sin(t), 0.0); }};
    case ModelSet::Kind::ellipse: {
      const double R = omega.R();
      return {[R](double t) {
                const cplx e(std::cos(t), std::sin(t));
                return 0.5 * (R * e + std::conj(e) / R);
              },
              [R](double t) {
                const cplx e(std::cos(t), std::sin(t));
                return cplx(0.0, 0.5) * (R * e - std::conj(e) / R);
              }};
    }
  }
  return {};
}

std::optional<cplx> solve_fiber(const Polynomial& P, cplx target, cplx z) {
  for (int it = 0; it < 60; ++it) {
    const cplx d = P.deriv(z);
    if (std::abs(d) < 1e-300) return std::nullopt;
    const cplx step = (P(z) - target) / d;
    z -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) return z;
  }
  return std::nullopt;
}

/// One predictor-corrector step of the lift, splitting the parameter interval
/// whenever the corrector moves suspiciously far (a branch hop would land near
/// a different fiber point).
cplx advance_fiber(const Polynomial& P, const BoundaryParam& bp, double t0, cplx z0, double t1,
                   int depth, double scale) {
  const cplx dp = P.deriv(z0);
  cplx pred = z0;
  if (std::abs(dp) > 1e-300) pred += bp.deriv(t0) * (t1 - t0) / dp;
  if (const auto z1 = solve_fiber(P, bp.at(t1), pred)) {
    const double move = std::abs(*z1 - z0);
    const double pred_move = std::abs(pred - z0);
    if (move <= 2.0 * pred_move + 1e-6 * scale) return *z1;
  }
  if (depth >= 26) throw AccuracyError("boundary lift lost the fiber");
  const double tm = 0.5 * (t0 + t1);
  const cplx zm = advance_fiber(P, bp, t0, z0, tm, depth + 1, scale);
  return advance_fiber(P, bp, tm, zm, t1, depth + 1, scale);
}

struct Collision {
  double param;    // parameter in [0, 2pi) where the boundary hits the value
  cplx point;      // the critical point
  int order;       // branch order m >= 2
  cplx local_lead; // P^(m)(point) / m!
};

}  // namespace

ContourPath trace_boundary(const Polynomial& P, const ModelSet& omega,
                           const PreimageStructure& structure, int component,
                           int samples_per_turn) {
  const int n = P.degree();
  if (component < 0 || component >= structure.component_count())
    throw DomainError("component index out of range");
  const ContourPath& guide = structure.contours[static_cast<size_t>(component)];
  const int nj = structure.degrees[static_cast<size_t>(component)];
  const int spt = samples_per_turn > 0 ? samples_per_turn : std::max(256, 64 * n);

  double scale = 1.0;
  for (const auto& roots_j : structure.component_roots)
    for (cplx r : roots_j) scale = std::max(scale, 1.0 + std::abs(r));

  const BoundaryParam bp = boundary_param(omega);

  // The segment boundary runs through interior critical points of P: where
  // the parameter passes such a critical value, the incoming ray turns onto
  // the next one, rotated by pi over the branch order.
  std::vector<Collision> collisions;
  if (omega.kind() == ModelSet::Kind::segment) {
    for (const RootCluster& c : critical_points(P)) {
      const cplx v = P(c.value);
      if (std::abs(v.imag()) > 1e-12 || std::abs(v.real()) >= 1.0 - 1e-12) continue;
      if (winding_index(guide, c.value) != 1) continue;
      const int order = c.multiplicity + 1;
      Polynomial der = P.derivative();
      double fact = 1.0;
      for (int k = 2; k <= order; ++k) {
        der = der.derivative();
        fact *= k;
      }
      const cplx lead = der(c.value) / fact;
      const double tc = std::acos(std::clamp(v.real(), -1.0, 1.0));
      collisions.push_back({tc, c.value, order, lead});
      collisions.push_back({kTwoPi - tc, c.value, order, lead});
    }
  }

  // sample parameters must stay clear of the collision parameters
  const double dt = kTwoPi / spt;
  const double eps = 0.01 * dt;
  double t_start = 0.5 * dt;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double closest = std::numeric_limits<double>::infinity();
    for (const Collision& c : collisions) {
      const double d = std::abs(std::remainder(c.param - t_start, dt));
      closest = std::min(closest, d);
    }
    if (closest > 2.0 * eps) break;
    t_start += 3.0 * eps;
  }

  // starting fiber: the preimages of the start value enclosed by this component
  std::vector<cplx> shifted = P.coeffs();
  shifted[0] -= bp.at(t_start);
  std::vector<cplx> fiber;
  for (cplx z : roots(Polynomial(shifted)))
    if (winding_index(guide, z) == 1) fiber.push_back(z);
  if (static_cast<int>(fiber.size()) != nj)
    throw AccuracyError("starting fiber does not match the component degree");
  std::sort(fiber.begin(), fiber.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  const int total = spt * nj;
  ContourPath path;
  path.level = 0.0;
  path.param_start = t_start;
  path.param_step = dt;
  path.samples.reserve(static_cast<size_t>(total) + 1);
  path.tangents.reserve(static_cast<size_t>(total) + 1);

  cplx z = fiber[0];
  for (int k = 0; k < total; ++k) {
    const double tk = t_start + dt * k;
    path.samples.push_back(z);
    const cplx dp = P.deriv(z);
    path.tangents.push_back(std::abs(dp) > 1e-300 ? bp.deriv(tk) / dp : cplx(0.0));

    // collisions inside this step; several critical points can share one
    // parameter, so group by parameter and match the track against the group
    std::vector<std::pair<double, const Collision*>> hits;
    for (const Collision& c : collisions) {
      const double tc = c.param + kTwoPi * std::ceil((tk - c.param) / kTwoPi);
      if (tc > tk && tc <= tk + dt) hits.push_back({tc, &c});
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double t_cur = tk;
    for (size_t h = 0; h < hits.size();) {
      const double tc = hits[h].first;
      size_t h_end = h;
      while (h_end < hits.size() && hits[h_end].first <= tc + eps) ++h_end;

      z = advance_fiber(P, bp, t_cur, z, tc - eps, 0, scale);
      const Collision* match = nullptr;
      double match_dist = 0.0;
      for (size_t i = h; i < h_end; ++i) {
        const Collision* c = hits[i].second;
        const double r_model =
            std::pow(std::abs(eps * bp.deriv(tc) / c->local_lead), 1.0 / c->order);
        const double d = std::abs(z - c->point);
        if (d < std::min(5.0 * r_model, 0.25 * scale) && (!match || d < match_dist)) {
          match = c;
          match_dist = d;
        }
      }
      if (match) {
        // turn the position vector onto the next ray; the counterclockwise
        // rotation by pi over the branch order keeps the tour counterclockwise
        const cplx rotated =
            match->point + (z - match->point) * std::polar(1.0, 3.141592653589793 / match->order);
        const auto zc = solve_fiber(P, bp.at(tc + eps), rotated);
        if (!zc) throw AccuracyError("boundary lift failed at a corner of the pre-image");
        z = *zc;
      } else {
        z = advance_fiber(P, bp, tc - eps, z, tc + eps, 0, scale);
      }
      t_cur = tc + eps;
      h = h_end;
    }
    z = advance_fiber(P, bp, t_cur, z, tk + dt, 0, scale);
  }

  if (std::abs(z - path.samples.front()) > 1e-7 * scale)
    throw AccuracyError("boundary trace did not close after the expected number of turns");
  path.samples.push_back(path.samples.front());
  path.tangents.push_back(path.tangents.front());

  // The lift of a counterclockwise boundary parameterization through a
  // holomorphic cover is counterclockwise. For the segment the tour runs on a
  // zero-width tree and winding around on-tree points is indeterminate, so
  // the audit only applies when the component has interior.
  if (omega.kind() != ModelSet::Kind::segment) {
    const int w =
        winding_index(path, structure.component_roots[static_cast<size_t>(component)][0]);
    if (w != 1) throw AccuracyError("boundary trace does not wind once around its component");
  }
  return path;
}

}  // namespace walsh
