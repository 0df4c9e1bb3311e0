#pragma once

// Fourier representation of real fields on the torus T = R / 2πZ.
//
// Conventions used throughout the library:
//   e_k(x) = exp(ikx) / sqrt(2π),   û(k) = <u, e_{-k}>,
//   <f, g> = ∫ f g dx   (no complex conjugate),
// so that for a real field û(-k) = conj(û(k)) and <u, u> = Σ_{0<|k|≤N} |û(k)|².

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wasb {

using cplx = std::complex<double>;

/// Real field with Fourier modes 0 < |k| ≤ N. Only k = 1..N are stored; the
/// negative modes follow from reality and the zero mode is identically zero.
class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(int cutoff);
  FourierField(int cutoff, std::vector<cplx> positive_modes);

  /// Single Fourier monomial e_k + e_{-k} scaled so that û(k) = value.
  static FourierField mode(int cutoff, int k, cplx value = 1.0);

  int cutoff() const noexcept { return static_cast<int>(coeffs_.size()); }
  bool empty() const noexcept { return coeffs_.empty(); }

  /// û(k) for any integer k; zero outside 0 < |k| ≤ N.
  cplx operator()(int k) const noexcept {
    if (k > 0) return k <= cutoff() ? coeffs_[k - 1] : cplx{};
    if (k < 0) return -k <= cutoff() ? std::conj(coeffs_[-k - 1]) : cplx{};
    return {};
  }

  /// Mutable access to û(k), 1 ≤ k ≤ N.
  cplx& at(int k);
  const cplx& at(int k) const;

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::span<cplx> coeffs() noexcept { return coeffs_; }

  FourierField& operator+=(const FourierField& other);
  FourierField& operator-=(const FourierField& other);
  FourierField& operator*=(double s);

  friend bool operator==(const FourierField&, const FourierField&) = default;

 private:
  std::vector<cplx> coeffs_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(double s, FourierField a);

/// Real samples at x_j = 2πj/G.
struct GridField {
  std::vector<double> samples;

  int size() const noexcept { return static_cast<int>(samples.size()); }
  static double node(int j, int grid_size);
};

/// Smallest power of two ≥ n (n ≥ 1).
int next_pow2(int n);

/// Default grid for a cutoff N: power of two ≥ 4N.
int default_grid_size(int cutoff);

/// Grid size that evaluates polynomial nonlinearities of the given degree
/// without aliasing into the modes |k| ≤ N: power of two > (degree + 1)·N,
/// and never below default_grid_size(N).
int alias_free_grid_size(int cutoff, int degree);

/// Π_0^N: drop k = 0 and |k| > N. Idempotent.
FourierField project(const FourierField& field, int cutoff);
FourierField project(const GridField& grid, int cutoff);

/// û(k) ↦ ik û(k).
FourierField derivative(const FourierField& field);

/// <f, g> = Σ_k f̂(k) ĝ(-k) over the common modes (the smaller field is
/// zero-extended). Real for real fields.
cplx inner_product(const FourierField& f, const FourierField& g);

/// ‖u‖²_{L²} = Σ_{0<|k|≤N} |û(k)|².
double l2_norm_squared(const FourierField& field);

/// Sharp Littlewood–Paley block: q = -1 keeps |k| ≤ 1, q ≥ 0 keeps
/// 2^q < |k| ≤ 2^{q+1}, so the blocks partition the modes.
bool in_lp_block(int k, int q) noexcept;
FourierField lp_block(const FourierField& field, int q);

/// (Σ_{0<|k|≤N} |k|^{2s} |û(k)|²)^{1/2}, summing over both signs of k.
double sobolev_norm(const FourierField& field, double s);

/// Translation by a: û(k) ↦ e^{-ika} û(k), i.e. v(x) = u(x - a).
FourierField phase_shift(const FourierField& field, double shift);

/// Samples of the band-limited field on a grid of G points. Requires G a
/// power of two with G ≥ 2N + 2; throws std::invalid_argument otherwise.
GridField to_grid(const FourierField& field, int grid_size);

/// Fourier coefficients 0 < k ≤ N of grid samples (trapezoid rule, exact on
/// band-limited inputs). N defaults to G/2 - 1.
FourierField from_grid(const GridField& grid, int cutoff = -1);

/// Raw FFT access used by the pseudo-spectral kernels: samples → û(k) for
/// k = 0..G/2, scaled to the e_k convention.
void grid_to_spectrum(std::span<const double> samples, std::span<cplx> spectrum);

/// Inverse of grid_to_spectrum for a spectrum given on k = 0..G/2.
void spectrum_to_grid(std::span<const cplx> spectrum, std::span<double> samples);

}  // namespace wasb
