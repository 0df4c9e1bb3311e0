#pragma once

// The Ornstein–Uhlenbeck generator on Y_N, diagonal on Wick monomials:
//   L ⟦η_{k_1} ⋯ η_{k_n}⟧ = -(k_1² + ⋯ + k_n²) ⟦η_{k_1} ⋯ η_{k_n}⟧,
// its inverse on the centered chaoses, the Malliavin-type derivatives D_k and
// the energy form E(Ψ) = Σ_{0<|k|≤N} k² |D_k Ψ|².

#include <cstddef>

#include "wasb/chaos.hpp"

namespace wasb {

ChaosFunctional apply_generator(const ChaosFunctional& phi);

/// Ψ with L Ψ = Φ. Throws std::domain_error if Φ has an order-0 component,
/// which lies in the kernel of L and cannot be inverted.
ChaosFunctional solve_poisson(const ChaosFunctional& phi);

/// D_k ⟦η^α⟧ = m_k(α) ⟦η^{α - k}⟧, m_k the multiplicity of k in α.
/// Throws std::out_of_range unless 0 < |k| ≤ N.
ChaosFunctional dk_derivative(const ChaosFunctional& phi, int k);

/// d/dh Φ(η + h v) = Σ_{0<|k|≤N} v̂(k) (D_k Φ)(η) for a real direction v.
cplx directional_derivative(const ChaosFunctional& phi, const FourierField& direction,
                            const FourierField& eta);

struct EnergyReport {
  /// E[E(Ψ)] = Σ_k k² E|D_k Ψ|², exact.
  double expected_energy = 0.0;
  /// Right-hand side T^{p/2} E[E(Ψ)^{p/2}] of the Itô trick bound with p = 2.
  double ito_bound = 0.0;
  double horizon = 0.0;
  std::size_t term_count = 0;
};

EnergyReport energy(const ChaosFunctional& psi, double horizon);

}  // namespace wasb
