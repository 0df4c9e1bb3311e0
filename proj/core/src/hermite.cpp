#include "wasb/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace wasb {

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("Hermite order must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_values(int nmax, double x, std::span<double> out) {
  if (static_cast<int>(out.size()) < nmax + 1) {
    throw std::invalid_argument("hermite_values output too small");
  }
  out[0] = 1.0;
  if (nmax >= 1) out[1] = x;
  for (int k = 1; k < nmax; ++k) out[k + 1] = x * out[k] - k * out[k - 1];
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

namespace {

// Orthonormal recurrence p_{j+1} = (x p_j - √j p_{j-1}) / √(j+1).
void orthonormal_values(int n, double x, double& pn, double& pn1, double& sum_sq) {
  double prev = 0.0;
  double cur = 1.0;
  sum_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    sum_sq += cur * cur;
    const double next = (x * cur - std::sqrt(static_cast<double>(j)) * prev) /
                        std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  pn = cur;
  pn1 = prev;
}

GaussHermiteRule build_rule(int order) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 0; i + 1 < order; ++i) {
    jacobi(i, i + 1) = jacobi(i + 1, i) = std::sqrt(static_cast<double>(i + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 4; ++it) {
      double pn, pn1, s;
      orthonormal_values(order, x, pn, pn1, s);
      const double dp = std::sqrt(static_cast<double>(order)) * pn1;
      if (dp == 0.0) break;
      x -= pn / dp;
    }
    double pn, pn1, s;
    orthonormal_values(order, x, pn, pn1, s);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / s;
  }
  // Symmetrize: the rule is exact only if it is even.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

HermiteSpectrum project_onto_hermite(const std::function<double(double)>& g, int nmax,
                                     int quad_order) {
  const GaussHermiteRule& rule = gauss_hermite_rule(quad_order);
  HermiteSpectrum s;
  s.nmax = nmax;
  s.quad_order = quad_order;
  s.c.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  std::vector<double> h(static_cast<std::size_t>(nmax + 1));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double gx = g(x);
    hermite_values(nmax, x, h);
    const double wg = rule.weights[i] * gx;
    s.second_moment += wg * gx;
    for (int n = 0; n <= nmax; ++n) s.c[n] += wg * h[n];
  }
  double captured = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    const double nf = factorial(n);
    s.c[n] /= nf;
    captured += nf * s.c[n] * s.c[n];
  }
  s.tail = s.second_moment - captured;
  return s;
}

HermiteSpectrum checked_spectrum(const std::function<double(double)>& g, int nmax,
                                 int quad_order, bool polynomial_exact) {
  if (nmax < 0) throw std::invalid_argument("nmax must be >= 0");
  if (quad_order <= 0) quad_order = default_quad_order(nmax);
  HermiteSpectrum s = project_onto_hermite(g, nmax, quad_order);
  if (polynomial_exact) return s;
  const HermiteSpectrum refined = project_onto_hermite(g, nmax, quad_order + 20);
  const double scale = std::sqrt(std::max(refined.second_moment, 1e-300));
  double change = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    change = std::max(change, std::sqrt(factorial(n)) * std::abs(refined.c[n] - s.c[n]));
  }
  s.refinement_change = change / scale;
  s.converged = s.refinement_change <= 1e-10;
  return s;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int order) {
  if (order < 1 || order > 400) throw std::invalid_argument("Gauss–Hermite order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(build_rule(order));
  return *slot;
}

double gaussian_expectation(const std::function<double(double)>& f, int order) {
  const GaussHermiteRule& rule = gauss_hermite_rule(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

int default_quad_order(int nmax) { return std::max(40, 2 * nmax + 10); }

HermiteSpectrum hermite_coeffs(const Polynomial& g, int nmax, int quad_order) {
  if (quad_order <= 0) quad_order = default_quad_order(nmax);
  const bool exact = 2 * quad_order - 1 >= 2 * std::max(g.degree(), 0) &&
                     2 * quad_order - 1 >= g.degree() + nmax;
  HermiteSpectrum s =
      checked_spectrum([&g](double x) { return g(x); }, nmax, quad_order, exact);
  if (!exact) return s;
  // Replace the quadrature values by the closed-form change of basis
  //   x^m = Σ_j m! / (j! (m-2j)! 2^j) H_{m-2j}(x),
  // so structurally zero coefficients come out as exact zeros.
  std::fill(s.c.begin(), s.c.end(), 0.0);
  for (int m = 0; m <= g.degree(); ++m) {
    const double a = g.coefficient(m);
    if (a == 0.0) continue;
    for (int j = 0; 2 * j <= m; ++j) {
      const int n = m - 2 * j;
      if (n > nmax) continue;
      s.c[n] += a * factorial(m) / (factorial(j) * factorial(n) * std::ldexp(1.0, j));
    }
  }
  double captured = 0.0;
  for (int n = 0; n <= nmax; ++n) captured += factorial(n) * s.c[n] * s.c[n];
  s.tail = s.second_moment - captured;
  return s;
}

HermiteSpectrum hermite_coeffs(const std::function<double(double)>& g, int nmax,
                               int quad_order) {
  return checked_spectrum(g, nmax, quad_order, false);
}

double chaos_variance(const HermiteSpectrum& spectrum) {
  double v = 0.0;
  for (int n = 1; n <= spectrum.nmax; ++n) v += factorial(n) * spectrum.c[n] * spectrum.c[n];
  return v;
}

double gradient_sum(const HermiteSpectrum& spectrum) {
  double v = 0.0;
  for (int n = 1; n <= spectrum.nmax; ++n) {
    v += n * factorial(n) * spectrum.c[n] * spectrum.c[n];
  }
  return v;
}

double tilt_function(const Polynomial& g, double lambda) {
  const int order = std::max(40, g.degree() + 2);
  return gaussian_expectation([&](double x) { return g(lambda + x); }, order);
}

TiltCheck tilt_derivative_check(const Polynomial& g, int n, double tolerance) {
  if (n < 0 || n > 4) throw std::invalid_argument("tilt check supports 0 <= n <= 4");
  static constexpr double kStep[] = {0.0, 1e-5, 1e-4, 1e-3, 1e-2};
  static constexpr double kBinom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  TiltCheck t;
  t.n = n;
  t.tolerance = tolerance;
  t.quadrature = hermite_coeffs(g, std::max(n, 1))[n];
  if (n == 0) {
    t.finite_difference = tilt_function(g, 0.0);
  } else {
    // Central difference δ^n ψ(0) / h^n on the half-integer stencil.
    const double h = kStep[n];
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      acc += sign * kBinom[n][j] * tilt_function(g, (0.5 * n - j) * h);
    }
    t.finite_difference = acc / std::pow(h, n) / factorial(n);
  }
  t.abs_error = std::abs(t.finite_difference - t.quadrature);
  t.pass = t.abs_error <= tolerance;
  return t;
}

}  // namespace wasb
