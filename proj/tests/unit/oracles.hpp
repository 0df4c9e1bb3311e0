#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain sums instead of FFTs, closed-form Gaussian moments
// instead of quadrature, recursive Wick products instead of the Hermite
// factorization.

#include <complex>
#include <vector>

#include "wasb/chaos.hpp"
#include "wasb/polynomial.hpp"
#include "wasb/spectral.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// u(x) = Σ_{0<|k|≤N} û(k) e^{ikx} / √(2π) by direct summation.
double eval_field(const wasb::FourierField& u, double x);

/// ∫ f(x) e^{-ikx} dx / √(2π) for samples f(2πj/G), by the G-point
/// trapezoid rule written out as a sum.
cplx coefficient(const std::vector<double>& samples, int k);

/// H_n(x) = n! Σ_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m).
double hermite_explicit(int n, double x);

/// E[U^j] for U ~ N(0, 1): (j-1)!! for even j, else 0.
double gaussian_moment(int j);

/// c_n(G) = (1/n!) Σ_j a_j E[U^j H_n(U)] with E[U^j H_n(U)] = j!/(j-n)! E[U^{j-n}].
double hermite_coefficient(const wasb::Polynomial& g, int n);

/// E[G'(U)²] from exact moments.
double gradient_moment(const wasb::Polynomial& g);

/// ⟦η_{k_1} ⋯ η_{k_n}⟧ by the recursion
///   ⟦η_a X⟧ = η_a ⟦X⟧ - Σ_{b ∈ X, a+b=0} ⟦X \ b⟧,
/// using E[η_a η_b] = δ_{a+b,0}.
cplx wick(const std::vector<int>& modes, const wasb::FourierField& eta);

/// Σ_α c_α ⟦η^α⟧ through wick().
cplx evaluate_functional(const wasb::ChaosFunctional& phi, const wasb::FourierField& eta);

/// ⟨G(ε^{1/2} u) - c0, e_{-ℓ}⟩ with u the field of η, by an exact-degree
/// trapezoid rule over direct sums.
cplx projected_functional(const wasb::Polynomial& g, double c0, const wasb::FourierField& eta,
                          int ell);

/// ε^{-1} ∂_x Π_0^N (F - c1·x)(ε^{1/2} u) with ε = π/N, by direct sums.
wasb::FourierField drift(const wasb::FourierField& u, const wasb::Polynomial& f, double c1);

/// ∂_x Π_0^N (Π_0^M u)² at mode ℓ by a double loop over mode pairs.
cplx burgers(const wasb::FourierField& u, int M, int ell);

}  // namespace oracle
