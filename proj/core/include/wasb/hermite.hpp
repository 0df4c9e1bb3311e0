#pragma once

// Probabilists' Hermite polynomials and Hermite coefficients of a
// nonlinearity G under the standard Gaussian ν:
//   c_n(G) = (1/n!) E[G(U) H_n(U)],   U ~ N(0, 1).

#include <functional>
#include <span>
#include <vector>

#include "wasb/polynomial.hpp"

namespace wasb {

/// H_n(x) via H_{n+1} = x H_n - n H_{n-1}.
double hermite(int n, double x);

/// H_0(x) .. H_nmax(x) into out (size nmax + 1).
void hermite_values(int nmax, double x, std::span<double> out);

double factorial(int n);

/// Gauss–Hermite rule for the standard normal law: Σ w_i f(x_i) ≈ E[f(U)],
/// exact for polynomials of degree ≤ 2·order - 1. Weights sum to one.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; safe to call concurrently.
const GaussHermiteRule& gauss_hermite_rule(int order);

double gaussian_expectation(const std::function<double(double)>& f, int order);

struct HermiteSpectrum {
  std::vector<double> c;  // c_0 .. c_nmax
  int nmax = 0;
  int quad_order = 0;
  /// E[G(U)²] by quadrature.
  double second_moment = 0.0;
  /// E[G(U)²] - Σ_{n≤nmax} n! c_n², the estimated Σ_{n>nmax} n! c_n².
  double tail = 0.0;
  /// False when a refined quadrature moves some √(n!)·c_n by more than 1e-10
  /// relative to √E[G²]; the coefficients are then unreliable.
  bool converged = true;
  double refinement_change = 0.0;

  double operator[](int n) const noexcept {
    return n >= 0 && n < static_cast<int>(c.size()) ? c[n] : 0.0;
  }
};

/// Default quadrature order max(40, 2·nmax + 10).
int default_quad_order(int nmax);

/// Exact to rounding for polynomials of degree < 2·quad_order - nmax.
HermiteSpectrum hermite_coeffs(const Polynomial& g, int nmax, int quad_order = 0);

/// Pointwise nonlinearity hook; accuracy is whatever the quadrature achieves.
HermiteSpectrum hermite_coeffs(const std::function<double(double)>& g, int nmax,
                               int quad_order = 0);

/// Σ_{n≥1} n! c_n², the variance of G(U) carried by the spectrum.
double chaos_variance(const HermiteSpectrum& spectrum);

/// Σ_{n≥1} n · n! · c_n², which equals E[G'(U)²] for polynomial G.
double gradient_sum(const HermiteSpectrum& spectrum);

struct TiltCheck {
  int n = 0;
  double quadrature = 0.0;         // c_n from hermite_coeffs
  double finite_difference = 0.0;  // ψ_G^{(n)}(0) / n! by central differences
  double abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// ψ_G(λ) = E[G(λ + U)]; compares its n-th derivative at 0 (n ≤ 4) with c_n.
double tilt_function(const Polynomial& g, double lambda);
TiltCheck tilt_derivative_check(const Polynomial& g, int n, double tolerance = 1e-4);

}  // namespace wasb
