#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

double fact(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<double> sample(const wasb::FourierField& u, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) out[static_cast<std::size_t>(j)] = eval_field(u, 2.0 * kPi * j / points);
  return out;
}
}  // namespace

double eval_field(const wasb::FourierField& u, double x) {
  cplx sum = 0.0;
  for (int k = -u.cutoff(); k <= u.cutoff(); ++k) {
    if (k == 0) continue;
    sum += u(k) * std::exp(cplx(0.0, k * x));
  }
  return sum.real() * kInvSqrt2Pi;
}

cplx coefficient(const std::vector<double>& samples, int k) {
  const int g = static_cast<int>(samples.size());
  cplx sum = 0.0;
  for (int j = 0; j < g; ++j) {
    const double x = 2.0 * kPi * j / g;
    sum += samples[static_cast<std::size_t>(j)] * std::exp(cplx(0.0, -k * x));
  }
  return sum * (2.0 * kPi / g) * kInvSqrt2Pi;
}

double hermite_explicit(int n, double x) {
  double sum = 0.0;
  for (int m = 0; 2 * m <= n; ++m) {
    const double sign = m % 2 == 0 ? 1.0 : -1.0;
    sum += sign * std::pow(x, n - 2 * m) / (fact(m) * fact(n - 2 * m) * std::pow(2.0, m));
  }
  return fact(n) * sum;
}

double gaussian_moment(int j) {
  if (j < 0 || j % 2 == 1) return 0.0;
  double r = 1.0;
  for (int i = j - 1; i > 1; i -= 2) r *= i;
  return r;
}

double hermite_coefficient(const wasb::Polynomial& g, int n) {
  double sum = 0.0;
  const auto& a = g.coefficients();
  for (int j = n; j < static_cast<int>(a.size()); ++j) {
    sum += a[static_cast<std::size_t>(j)] * fact(j) / fact(j - n) * gaussian_moment(j - n);
  }
  return sum / fact(n);
}

double gradient_moment(const wasb::Polynomial& g) {
  const auto& a = g.coefficients();
  double sum = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < a.size(); ++j) {
      sum += static_cast<double>(i * j) * a[i] * a[j] * gaussian_moment(static_cast<int>(i + j - 2));
    }
  }
  return sum;
}

cplx wick(const std::vector<int>& modes, const wasb::FourierField& eta) {
  if (modes.empty()) return 1.0;
  const int a = modes.front();
  std::vector<int> rest(modes.begin() + 1, modes.end());
  cplx value = eta(a) * wick(rest, eta);
  for (std::size_t j = 0; j < rest.size(); ++j) {
    if (a + rest[j] != 0) continue;
    std::vector<int> fewer = rest;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(j));
    value -= wick(fewer, eta);
  }
  return value;
}

cplx evaluate_functional(const wasb::ChaosFunctional& phi, const wasb::FourierField& eta) {
  cplx sum = 0.0;
  for (const auto& [alpha, c] : phi.terms()) sum += c * wick(alpha.expanded(), eta);
  return sum;
}

cplx projected_functional(const wasb::Polynomial& g, double c0, const wasb::FourierField& eta,
                          int ell) {
  const int n = eta.cutoff();
  const double eps = kPi / n;
  const int degree = std::max(g.degree(), 1);
  const int points = 2 * (degree * n + ell) + 2;
  std::vector<double> values = sample(eta, points);
  for (double& v : values) v = g(std::sqrt(eps) * v) - c0;
  return coefficient(values, ell);
}

wasb::FourierField drift(const wasb::FourierField& u, const wasb::Polynomial& f, double c1) {
  const int n = u.cutoff();
  const double eps = kPi / n;
  const wasb::Polynomial ft = f.minus_linear(c1);
  const int degree = std::max(ft.degree(), 1);
  const int points = 2 * (degree * n + n) + 2;
  std::vector<double> values = sample(u, points);
  for (double& v : values) v = ft(std::sqrt(eps) * v) / eps;
  wasb::FourierField out(n);
  for (int k = 1; k <= n; ++k) out.at(k) = cplx(0.0, k) * coefficient(values, k);
  return out;
}

cplx burgers(const wasb::FourierField& u, int M, int ell) {
  cplx sum = 0.0;
  for (int a = -M; a <= M; ++a) {
    for (int b = -M; b <= M; ++b) {
      if (a == 0 || b == 0 || a + b != ell) continue;
      sum += u(a) * u(b);
    }
  }
  return cplx(0.0, ell) * sum * kInvSqrt2Pi;
}

}  // namespace oracle
