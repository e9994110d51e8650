#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "walsh/polynomial.hpp"

namespace walsh {

/// Exact nonnegative rational, normalized with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  bool operator==(const Rational&) const = default;
};

/// How the centers were obtained.
enum class Provenance {
  linear,
  monomial_family,
  connected,
  fixed_point,
  two_components,
  general_newton,
};

const char* provenance_name(Provenance p);

/**
 * Lemniscatic data for E = P^{-1}(Omega): distinct centers a_j, exact
 * exponents m_j = n_j/n with sum 1, the capacity cap(E), and the degree-n
 * polynomial Q(w) = d1 p_n prod (w - a_j)^{n_j} whose sublevel set |Q| <= 1
 * is the lemniscatic domain L.
 */
struct LemniscaticScheme {
  std::vector<cplx> centers;
  std::vector<Rational> exponents;  // kept as n_j/n over the common denominator n
  double capacity = 0.0;
  Polynomial q;
  Provenance provenance = Provenance::general_newton;

  int degree() const { return q.degree(); }
  std::vector<double> weights() const;

  /// U(w) = prod (w-a_j)^{m_j} in modulus: capacity * |Q(w)|^{1/n}.
  double u_abs(cplx w) const;
};

/// Assembles the scheme: Q from the centers and counts, exponents n_j / n.
/// `lead` is d1 * p_n.
LemniscaticScheme make_scheme(std::vector<cplx> centers, const std::vector<int>& counts,
                              cplx lead, double capacity, Provenance provenance);

}  // namespace walsh
