#pragma once

// Sparse Wiener-chaos functionals of the Fourier coordinates η_k = <η, e_{-k}>
// of truncated white noise. A term c·⟦η_{k_1} ⋯ η_{k_n}⟧ is keyed by the
// multiset {k_1, …, k_n} in canonical form (modes ascending, multiplicities
// merged).

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "wasb/hermite.hpp"
#include "wasb/rng.hpp"
#include "wasb/spectral.hpp"

namespace wasb {

struct ModePower {
  int mode = 0;   // 0 < |mode| ≤ N
  int power = 0;  // ≥ 1

  friend auto operator<=>(const ModePower&, const ModePower&) = default;
};

class MultiIndex {
 public:
  MultiIndex() = default;
  /// Canonicalizes an arbitrary list of modes (order irrelevant, repeats
  /// merged). Throws on a zero mode.
  static MultiIndex from_modes(std::span<const int> modes);
  static MultiIndex from_modes(std::initializer_list<int> modes);

  const std::vector<ModePower>& parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }

  int order() const noexcept;
  /// k_1 + ⋯ + k_n
  int mode_sum() const noexcept;
  /// k_1² + ⋯ + k_n², minus the generator eigenvalue.
  long long mode_square_sum() const noexcept;
  int max_abs_mode() const noexcept;
  int power_of(int mode) const noexcept;
  /// Π_j m_j!, the second moment of the monomial.
  double factorial_weight() const noexcept;

  /// {-k_1, …, -k_n}; the conjugate monomial.
  MultiIndex negated() const;
  /// Removes one copy of `mode` (which must be present).
  MultiIndex lowered(int mode) const;

  std::vector<int> expanded() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<ModePower> parts_;
};

/// Φ(η) = Σ_α c_α ⟦η^α⟧ with modes restricted to 0 < |k| ≤ N.
class ChaosFunctional {
 public:
  using TermMap = std::map<MultiIndex, cplx>;

  ChaosFunctional() = default;
  explicit ChaosFunctional(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Accumulates c into the coefficient of α; exact zeros are dropped.
  void add(const MultiIndex& alpha, cplx c);
  cplx coefficient(const MultiIndex& alpha) const;

  int max_order() const noexcept;
  bool has_order_zero() const noexcept;

  /// Coefficient of -α equals the conjugate of the coefficient of α, to the
  /// given relative tolerance.
  bool is_real(double tolerance = 1e-12) const;

  ChaosFunctional& operator+=(const ChaosFunctional& other);
  ChaosFunctional& operator*=(cplx s);

 private:
  int cutoff_ = 0;
  TermMap terms_;
};

ChaosFunctional operator+(ChaosFunctional a, const ChaosFunctional& b);
ChaosFunctional operator-(ChaosFunctional a, const ChaosFunctional& b);
ChaosFunctional operator*(cplx s, ChaosFunctional a);

/// Complex test function φ on T given by its Fourier coefficients φ̂(k)
/// (all k, including 0 and negative modes).
class TestFunction {
 public:
  /// e_m, so φ̂(k) = δ_{k,m}.
  static TestFunction monomial(int m);
  static TestFunction from_field(const FourierField& field);

  void set(int k, cplx value);
  cplx operator()(int k) const;
  const std::map<int, cplx>& coefficients() const noexcept { return hat_; }

 private:
  std::map<int, cplx> hat_;
};

struct ExpandOptions {
  std::size_t term_budget = 5'000'000;
};

/// Chaos expansion of η ↦ <G(ε^{1/2} Π_0^N η), φ>, ε = coupling_epsilon(N):
///   Σ_n c_n(G) ε^{n/2} Σ_{k_1..k_n} φ̂(-k_1-⋯-k_n) (2π)^{-(n-1)/2} ⟦η_{k_1}⋯η_{k_n}⟧
/// truncated at order nmax. Throws std::length_error past the term budget.
ChaosFunctional chaos_expand(const HermiteSpectrum& spectrum, int cutoff,
                             const TestFunction& phi, int nmax, ExpandOptions options = {});
ChaosFunctional chaos_expand(const Polynomial& g, int cutoff, const TestFunction& phi,
                             int nmax = -1, ExpandOptions options = {});

/// Evaluates Φ at a sample η ∈ Y_N after rewriting η_k = (g_k^c - i g_k^s)/√2
/// in independent standard real Gaussians, where Wick monomials factor into
/// products of univariate Hermite polynomials. Throws std::out_of_range if Φ
/// involves a mode above η's cutoff.
cplx evaluate_complex(const ChaosFunctional& phi, const FourierField& eta);

/// Real part of evaluate_complex; the imaginary part vanishes for real Φ.
double evaluate(const ChaosFunctional& phi, const FourierField& eta);

/// E|Φ|² = Σ_α |c_α|² Π m_j! by orthogonality of Wick monomials.
double second_moment(const ChaosFunctional& phi);

/// Random functional with `terms` monomials of order 1..max_order (an
/// order-0 term only when allow_constant). With `real` set, conjugate
/// partners are added so that Φ is real-valued.
ChaosFunctional random_functional(int cutoff, int max_order, int terms, CounterRng& rng,
                                  bool real = false, bool allow_constant = false);

}  // namespace wasb
