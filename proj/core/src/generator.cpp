#include "wasb/generator.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace wasb {

ChaosFunctional apply_generator(const ChaosFunctional& phi) {
  ChaosFunctional out(phi.cutoff());
  for (const auto& [alpha, c] : phi.terms()) {
    if (alpha.empty()) continue;
    out.add(alpha, -static_cast<double>(alpha.mode_square_sum()) * c);
  }
  return out;
}

ChaosFunctional solve_poisson(const ChaosFunctional& phi) {
  if (phi.has_order_zero()) {
    throw std::domain_error("Poisson equation has no solution: right-hand side has a constant term");
  }
  ChaosFunctional out(phi.cutoff());
  for (const auto& [alpha, c] : phi.terms()) {
    out.add(alpha, c / -static_cast<double>(alpha.mode_square_sum()));
  }
  return out;
}

ChaosFunctional dk_derivative(const ChaosFunctional& phi, int k) {
  if (k == 0 || std::abs(k) > phi.cutoff()) {
    throw std::out_of_range("D_k needs 0 < |k| <= N, got k = " + std::to_string(k));
  }
  ChaosFunctional out(phi.cutoff());
  for (const auto& [alpha, c] : phi.terms()) {
    const int m = alpha.power_of(k);
    if (m > 0) out.add(alpha.lowered(k), static_cast<double>(m) * c);
  }
  return out;
}

cplx directional_derivative(const ChaosFunctional& phi, const FourierField& direction,
                            const FourierField& eta) {
  std::set<int> modes;
  for (const auto& [alpha, c] : phi.terms()) {
    for (const auto& part : alpha.parts()) modes.insert(part.mode);
  }
  cplx sum{};
  for (int k : modes) {
    const cplx v = direction(k);
    if (v == cplx{}) continue;
    sum += v * evaluate_complex(dk_derivative(phi, k), eta);
  }
  return sum;
}

EnergyReport energy(const ChaosFunctional& psi, double horizon) {
  std::set<int> modes;
  for (const auto& [alpha, c] : psi.terms()) {
    for (const auto& part : alpha.parts()) modes.insert(part.mode);
  }
  EnergyReport r;
  for (int k : modes) {
    r.expected_energy += static_cast<double>(k) * k * second_moment(dk_derivative(psi, k));
  }
  r.horizon = horizon;
  r.ito_bound = horizon * r.expected_energy;
  r.term_count = psi.size();
  return r;
}

}  // namespace wasb
