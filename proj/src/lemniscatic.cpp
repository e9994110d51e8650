#include "walsh/lemniscatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "walsh/errors.hpp"
#include "walsh/green_field.hpp"
#include "walsh/walsh_map.hpp"

namespace walsh {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::linear: return "linear";
    case Provenance::monomial_family: return "monomial_family";
    case Provenance::connected: return "connected";
    case Provenance::fixed_point: return "fixed_point";
    case Provenance::two_components: return "two_components";
    case Provenance::general_newton: return "general_newton";
  }
  return "unknown";
}

std::vector<double> LemniscaticScheme::weights() const {
  std::vector<double> w(exponents.size());
  for (size_t j = 0; j < w.size(); ++j) w[j] = exponents[j].value();
  return w;
}

double LemniscaticScheme::u_abs(cplx w) const {
  return capacity * std::pow(std::abs(q(w)), 1.0 / degree());
}

LemniscaticScheme make_scheme(std::vector<cplx> centers, const std::vector<int>& counts,
                              cplx lead, double capacity, Provenance provenance) {
  if (centers.size() != counts.size() || centers.empty())
    throw DomainError("centers and zero counts must align");
  int n = 0;
  for (int c : counts) {
    if (c < 1) throw DomainError("component zero counts must be positive");
    n += c;
  }
  std::vector<cplx> all_roots;
  all_roots.reserve(static_cast<size_t>(n));
  std::vector<Rational> exps;
  for (size_t j = 0; j < centers.size(); ++j) {
    for (int k = 0; k < counts[j]; ++k) all_roots.push_back(centers[j]);
    // kept unreduced so the common denominator stays visible
    Rational r;
    r.num = counts[j];
    r.den = n;
    exps.push_back(r);
  }
  LemniscaticScheme s;
  s.centers = std::move(centers);
  s.exponents = std::move(exps);
  s.capacity = capacity;
  s.q = Polynomial::from_roots(lead, all_roots);
  s.provenance = provenance;
  return s;
}

double capacity(const Polynomial& P, const ModelSet& omega) {
  const int n = P.degree();
  if (n < 1) throw DomainError("capacity requires a nonconstant polynomial");
  return std::pow(omega.laurent().capacity / std::abs(P.leading()), 1.0 / n);
}

double ValidationReport::worst() const {
  return std::max({constraint_residual, moment_residual, identity_residual});
}

namespace {

constexpr double kAcceptTol = 1e-6;

double center_scale(const LemniscaticScheme& scheme) {
  double m = 0.0;
  for (const cplx& a : scheme.centers) m = std::max(m, std::abs(a));
  return 1.0 + m;
}

// exterior probe: everything of E sits inside the level contours
cplx probe_point(const PreimageStructure& s) {
  double m = 0.0;
  for (const ContourPath& c : s.contours)
    for (const cplx& z : c.samples) m = std::max(m, std::abs(z));
  return std::polar(2.0 * m + 1.0, 0.37);
}

bool centers_in_components(const PreimageStructure& s, std::span<const cplx> centers) {
  if (centers.size() != s.contours.size()) return false;
  for (size_t j = 0; j < centers.size(); ++j) {
    try {
      if (winding_index(s.contours[j], centers[j]) != 1) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

// A center can sit outside the tight level oval of its own component, so
// containment in the z-plane cannot order the centers (a center may lie
// outside its own level oval). Radial continuation of the root branch from
// the far field, evaluated just beyond the outermost point of a component,
// lands next to the matching center: the approach ray stays outside every
// component because they share the same radial extent about the base point.
// The moment test run by the caller re-checks the full assignment.
std::vector<cplx> order_centers_by_image(const Polynomial& P, const ModelSet& omega,
                                         const PreimageStructure& structure,
                                         const std::vector<cplx>& cands, cplx lead,
                                         double capE, Provenance provenance) {
  // all component multiplicities are one here, so the scheme polynomial does
  // not depend on the candidate order
  const LemniscaticScheme probe =
      make_scheme(cands, structure.degrees, lead, capE, provenance);
  cplx beta(0.0);
  for (const cplx& a : cands) beta += a;
  beta /= static_cast<double>(cands.size());

  std::vector<cplx> ordered(cands.size());
  std::vector<bool> taken(cands.size(), false);
  for (size_t j = 0; j < cands.size(); ++j) {
    const ContourPath& loop = structure.contours[j];
    cplx z_far = loop.samples.front();
    for (const cplx& z : loop.samples)
      if (std::abs(z - beta) > std::abs(z_far - beta)) z_far = z;
    const cplx w = phi_closed_form(P, omega, probe, beta + 1.01 * (z_far - beta));

    size_t best = 0;
    double d_best = std::numeric_limits<double>::infinity();
    double d_second = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < cands.size(); ++k) {
      const double d = std::abs(w - cands[k]);
      if (d < d_best) {
        d_second = d_best;
        d_best = d;
        best = k;
      } else if (d < d_second) {
        d_second = d;
      }
    }
    if (taken[best] || d_best > 0.5 * d_second)
      throw AccuracyError("could not pair a center with its component");
    ordered[j] = cands[best];
    taken[best] = true;
  }
  return ordered;
}

}  // namespace

ValidationReport validate_scheme(const Polynomial& P, const ModelSet& omega,
                                 const PreimageStructure& structure,
                                 const LemniscaticScheme& scheme) {
  const int n = P.degree();
  if (scheme.degree() != n) throw DomainError("scheme degree does not match the polynomial");
  if (static_cast<int>(scheme.centers.size()) != structure.component_count())
    throw DomainError("scheme size does not match the component count");

  ValidationReport r;
  const double scale = center_scale(scheme);

  cplx weighted(0.0);
  for (size_t j = 0; j < scheme.centers.size(); ++j)
    weighted += static_cast<double>(scheme.exponents[j].num) * scheme.centers[j];
  r.constraint_residual =
      std::abs(weighted + P.coeff(n - 1) / P.leading()) / scale;

  for (int j = 0; j < structure.component_count(); ++j) {
    const double mj = scheme.exponents[static_cast<size_t>(j)].value();
    double res;
    try {
      // on the boundary tour the scheme polynomial runs around the unit
      // circle once per sheet, so the tour average of the image equals the
      // center; the average of an analytic periodic function converges
      // geometrically, with a rate set by how close the components come to
      // touching, so the sampling doubles until the half-grid value agrees
      int spt = std::max(256, 64 * P.degree());
      cplx mean(0.0);
      double settle = std::numeric_limits<double>::infinity();
      for (int pass = 0; pass < 4; ++pass, spt *= 2) {
        const auto bm = phi_boundary(P, omega, structure, scheme, j, spt);
        const size_t m = bm.domain.segment_count();
        cplx full(0.0);
        cplx coarse(0.0);
        for (size_t k = 0; k < m; ++k) {
          full += bm.image.samples[k];
          if (k % 2 == 0) coarse += bm.image.samples[k];
        }
        full /= static_cast<double>(m);
        coarse /= static_cast<double>((m + 1) / 2);
        mean = full;
        settle = std::abs(full - coarse);
        if (settle <= 1e-8 * (1.0 + std::abs(mean))) break;
      }
      if (settle > 1e-8 * (1.0 + std::abs(mean)))
        throw AccuracyError("boundary tour average did not settle");
      res = mj * std::abs(mean - scheme.centers[static_cast<size_t>(j)]) / scale;
    } catch (const Error&) {
      res = std::numeric_limits<double>::infinity();  // a failed tour disqualifies
    }
    r.moment_residual = std::max(r.moment_residual, res);
  }

  try {
    const auto idr = check_identity(P, omega, scheme, probe_point(structure));
    r.identity_residual = std::max(idr.map_equation, idr.green_match);
  } catch (const Error&) {
    r.identity_residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

namespace {

// ---- general position: Newton on the saddle values -------------------------

std::vector<cplx> solve_linear(std::vector<std::vector<cplx>> A, std::vector<cplx> b) {
  const size_t m = b.size();
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t row = col + 1; row < m; ++row)
      if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
    if (std::abs(A[piv][col]) < 1e-300)
      throw ConvergenceError("singular correction system in the saddle solve", b, 0.0);
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t row = col + 1; row < m; ++row) {
      const cplx f = A[row][col] / A[col][col];
      for (size_t cc = col; cc < m; ++cc) A[row][cc] -= f * A[col][cc];
      b[row] -= f * b[col];
    }
  }
  std::vector<cplx> x(m);
  for (size_t i = m; i-- > 0;) {
    cplx acc = b[i];
    for (size_t j = i + 1; j < m; ++j) acc -= A[i][j] * x[j];
    x[i] = acc / A[i][i];
  }
  return x;
}

struct SaddleSystem {
  cplx lead;                  // d1 * p_n
  std::vector<int> counts;    // n_j in component order
  std::vector<cplx> targets;  // psi of the exterior critical values (with multiplicity)
  cplx rhs;                   // -p_{n-1}/p_n

  // last matched saddle positions, one per target; keeps the pairing stable
  std::vector<cplx> paired;

  Polynomial q_of(const std::vector<cplx>& a) const {
    std::vector<cplx> rts;
    for (size_t j = 0; j < a.size(); ++j)
      for (int k = 0; k < counts[j]; ++k) rts.push_back(a[j]);
    return Polynomial::from_roots(lead, rts);
  }

  std::vector<cplx> residual(const std::vector<cplx>& a, bool update_pairing) {
    const size_t ell = a.size();
    Polynomial W;
    for (size_t k = 0; k < ell; ++k) {
      std::vector<cplx> rts;
      for (size_t j = 0; j < ell; ++j)
        if (j != k) rts.push_back(a[j]);
      W = W + Polynomial::from_roots(cplx(static_cast<double>(counts[k])), rts);
    }
    const std::vector<cplx> sad = roots(W, 1e-12);
    if (sad.size() != targets.size())
      throw ConvergenceError("saddle count degenerated during the solve", a, 0.0);

    const Polynomial q = q_of(a);
    std::vector<cplx> out(targets.size() + 1);
    std::vector<bool> used(sad.size(), false);
    std::vector<cplx> matched(targets.size());
    if (paired.empty()) {
      // first pass: greedy pairing by closeness of the saddle values
      std::vector<std::tuple<double, size_t, size_t>> edges;
      for (size_t i = 0; i < sad.size(); ++i)
        for (size_t k = 0; k < targets.size(); ++k)
          edges.emplace_back(std::abs(q(sad[i]) - targets[k]), i, k);
      std::sort(edges.begin(), edges.end(),
                [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
      std::vector<bool> taken(targets.size(), false);
      for (const auto& [d, i, k] : edges) {
        if (used[i] || taken[k]) continue;
        used[i] = true;
        taken[k] = true;
        matched[k] = sad[i];
      }
    } else {
      // later passes: nearest saddle to the previous position of each target
      for (size_t k = 0; k < targets.size(); ++k) {
        size_t best = sad.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < sad.size(); ++i) {
          if (used[i]) continue;
          const double d = std::abs(sad[i] - paired[k]);
          if (d < best_d) {
            best_d = d;
            best = i;
          }
        }
        used[best] = true;
        matched[k] = sad[best];
      }
    }
    if (update_pairing) paired = matched;

    for (size_t k = 0; k < targets.size(); ++k) out[k] = q(matched[k]) - targets[k];
    cplx weighted(0.0);
    for (size_t j = 0; j < ell; ++j) weighted += static_cast<double>(counts[j]) * a[j];
    out.back() = weighted - rhs;
    return out;
  }
};

double norm_inf(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<cplx> newton_centers(SaddleSystem& sys, std::vector<cplx> a) {
  double yscale = 1.0;
  for (const cplx& t : sys.targets) yscale = std::max(yscale, std::abs(t));
  const double tol = 1e-11 * yscale;

  std::vector<cplx> r = sys.residual(a, true);
  double rn = norm_inf(r);
  for (int iter = 0; iter < 80; ++iter) {
    if (rn <= tol) return a;
    const size_t m = a.size();
    std::vector<std::vector<cplx>> J(r.size(), std::vector<cplx>(m));
    for (size_t j = 0; j < m; ++j) {
      const double h = 1e-7 * (1.0 + std::abs(a[j]));
      std::vector<cplx> ap = a;
      ap[j] += h;
      const std::vector<cplx> rp = sys.residual(ap, false);
      for (size_t k = 0; k < r.size(); ++k) J[k][j] = (rp[k] - r[k]) / h;
    }
    const std::vector<cplx> step = solve_linear(std::move(J), r);

    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 10; ++half) {
      std::vector<cplx> a_try = a;
      for (size_t j = 0; j < m; ++j) a_try[j] -= lambda * step[j];
      std::vector<cplx> r_try;
      try {
        r_try = sys.residual(a_try, false);
      } catch (const Error&) {
        lambda *= 0.5;
        continue;
      }
      const double rt = norm_inf(r_try);
      if (rt < rn || rt <= tol) {
        a = std::move(a_try);
        r = sys.residual(a, true);
        rn = norm_inf(r);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  if (rn <= tol) return a;
  throw ConvergenceError("saddle-value equations did not converge", a, rn);
}

}  // namespace

LemniscaticScheme solve(const Polynomial& P, const ModelSet& omega,
                        const PreimageStructure& structure) {
  const int n = P.degree();
  if (n < 1) throw DomainError("degree must be at least one");
  const int ell = structure.component_count();
  const double d1 = omega.laurent().d1;
  const cplx lead = d1 * P.leading();
  const double capE = capacity(P, omega);

  const auto accept = [&](LemniscaticScheme scheme) -> LemniscaticScheme {
    const ValidationReport rep = validate_scheme(P, omega, structure, scheme);
    if (rep.worst() >= kAcceptTol)
      throw ConvergenceError("scheme failed independent validation",
                             scheme.centers, rep.worst());
    return scheme;
  };

  // degree one: the affine image of the model set
  if (n == 1) {
    const cplx a1 = -P.coeff(0) / P.coeff(1);
    return accept(make_scheme({a1}, {1}, lead, capE, Provenance::linear));
  }

  const cplx com = -P.coeff(n - 1) / (static_cast<double>(n) * P.leading());

  // monomial family P = alpha (z - beta)^n + gamma
  {
    const auto crit = critical_points(P);
    if (crit.size() == 1 && crit[0].multiplicity == n - 1) {
      const cplx beta = crit[0].value;
      const cplx gamma = P(beta);
      std::vector<cplx> rep_roots(static_cast<size_t>(n), beta);
      Polynomial model = Polynomial::from_roots(P.leading(), rep_roots) - (-gamma);
      double mismatch = 0.0;
      for (int k = 0; k <= n; ++k) mismatch = std::max(mismatch, std::abs(P.coeff(k) - model.coeff(k)));
      if (mismatch <= 1e-10 * P.coeff_norm()) {
        if (omega.contains(gamma) && ell == 1) {
          return accept(make_scheme({beta}, {n}, lead, capE, Provenance::monomial_family));
        }
        if (!omega.contains(gamma) && ell == n) {
          // (a - beta)^n = -psi(gamma) / (d1 alpha); one center per component
          const cplx pow_val = -omega.riemann_map(gamma) / lead;
          const double rad = std::pow(std::abs(pow_val), 1.0 / n);
          const double th = std::arg(pow_val) / n;
          std::vector<cplx> cands;
          for (int k = 0; k < n; ++k)
            cands.push_back(beta + std::polar(rad, th + 2.0 * 3.141592653589793 * k / n));
          auto centers = order_centers_by_image(P, omega, structure, cands, lead, capE,
                                                Provenance::monomial_family);
          return accept(make_scheme(std::move(centers), structure.degrees, lead, capE,
                                    Provenance::monomial_family));
        }
      }
    }
  }

  // one component: the single center comes from the linear relation
  if (ell == 1) {
    return accept(make_scheme({com}, {n}, lead, capE, Provenance::connected));
  }

  // disk target with one root cluster per component: E is its own lemniscate
  if (omega.kind() == ModelSet::Kind::disk) {
    const auto clusters = clustered_roots(P);
    if (static_cast<int>(clusters.size()) == ell) {
      std::vector<cplx> centers(static_cast<size_t>(ell));
      std::vector<bool> taken(clusters.size(), false);
      bool matched = true;
      for (int j = 0; j < ell && matched; ++j) {
        matched = false;
        for (size_t c = 0; c < clusters.size(); ++c) {
          if (taken[c] || clusters[c].multiplicity != structure.degrees[static_cast<size_t>(j)])
            continue;
          try {
            if (winding_index(structure.contours[static_cast<size_t>(j)], clusters[c].value) == 1) {
              centers[static_cast<size_t>(j)] = clusters[c].value;
              taken[c] = true;
              matched = true;
              break;
            }
          } catch (const Error&) {
          }
        }
      }
      if (matched) {
        try {
          return accept(make_scheme(std::move(centers), structure.degrees, lead, capE,
                                    Provenance::fixed_point));
        } catch (const ConvergenceError&) {
          // fall through: the root clusters are not the centers here
        }
      }
    }
  }

  // two components: the joining saddle gives the center gap up to an n-th root
  if (ell == 2 && structure.exterior_critical.size() == 1 &&
      structure.exterior_critical[0].multiplicity == 1) {
    const int n1 = structure.degrees[0];
    const int n2 = structure.degrees[1];
    const cplx psi_star = omega.riemann_map(structure.exterior_critical[0].value);
    // (a_2 - a_1)^n = psi* n^n (-1)^{n2} / (d1 p_n n1^{n1} n2^{n2})
    const cplx gap_pow = psi_star * std::pow(static_cast<double>(n), n) *
                         (n2 % 2 == 0 ? 1.0 : -1.0) /
                         (lead * std::pow(static_cast<double>(n1), n1) *
                          std::pow(static_cast<double>(n2), n2));

    std::vector<LemniscaticScheme> candidates;
    const auto push_candidate = [&](cplx gap) {
      const cplx a1 = com - (static_cast<double>(n2) / n) * gap;
      const cplx a2 = com + (static_cast<double>(n1) / n) * gap;
      candidates.push_back(
          make_scheme({a1, a2}, structure.degrees, lead, capE, Provenance::two_components));
    };

    const bool real_symmetric = structure.conjugation_symmetric &&
                                structure.component_symmetric[0] &&
                                structure.component_symmetric[1] &&
                                std::abs(gap_pow.imag()) <= 1e-10 * std::abs(gap_pow) &&
                                gap_pow.real() > 0.0;
    if (real_symmetric) {
      // mirror-symmetric components on the real line: the gap is the positive root
      push_candidate(std::pow(gap_pow.real(), 1.0 / n));
    } else {
      const double rad = std::pow(std::abs(gap_pow), 1.0 / n);
      const double th = std::arg(gap_pow) / n;
      for (int k = 0; k < n; ++k)
        push_candidate(std::polar(rad, th + 2.0 * 3.141592653589793 * k / n));
      // keep geometry-consistent candidates when any exist
      std::vector<LemniscaticScheme> filtered;
      for (const auto& c : candidates)
        if (centers_in_components(structure, c.centers)) filtered.push_back(c);
      if (!filtered.empty()) candidates = std::move(filtered);
    }

    std::vector<LemniscaticScheme> winners;
    double best = std::numeric_limits<double>::infinity();
    for (auto& c : candidates) {
      const ValidationReport rep = validate_scheme(P, omega, structure, c);
      best = std::min(best, rep.worst());
      if (rep.worst() < kAcceptTol) winners.push_back(c);
    }
    if (winners.size() == 1) return winners.front();
    if (winners.size() > 1)
      throw AmbiguityError("several branches of the joining-saddle equation validated");
    throw ConvergenceError("no branch of the joining-saddle equation validated",
                           candidates.empty() ? std::vector<cplx>{} : candidates[0].centers,
                           best);
  }

  // general position: Newton on the saddle values, anchored by the linear relation
  {
    SaddleSystem sys;
    sys.lead = lead;
    sys.counts = structure.degrees;
    sys.rhs = -P.coeff(n - 1) / P.leading();
    for (const ExteriorCritical& ec : structure.exterior_critical) {
      const cplx y = omega.riemann_map(ec.value);
      for (int k = 0; k < ec.multiplicity; ++k) sys.targets.push_back(y);
    }
    if (static_cast<int>(sys.targets.size()) != ell - 1)
      throw DegenerateError("exterior saddle count does not match the component count");

    std::vector<cplx> init(static_cast<size_t>(ell));
    for (int j = 0; j < ell; ++j) {
      cplx mean(0.0);
      const auto& rts = structure.component_roots[static_cast<size_t>(j)];
      for (const cplx& b : rts) mean += b;
      init[static_cast<size_t>(j)] = mean / static_cast<double>(rts.size());
    }
    const std::vector<cplx> centers = newton_centers(sys, std::move(init));
    return accept(
        make_scheme(centers, structure.degrees, lead, capE, Provenance::general_newton));
  }
}

LemniscaticScheme solve(const Polynomial& P, const ModelSet& omega) {
  return solve(P, omega, analyze(P, omega));
}

}  // namespace walsh
