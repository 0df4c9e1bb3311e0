#pragma once

// The invariant measure μ^ε = law(Π_0^N η) of truncated space white noise and
// its covariance kernel.

#include "wasb/rng.hpp"
#include "wasb/spectral.hpp"

namespace wasb {

/// Coupling between the mode cutoff and the scaling parameter, fixed so that
/// ε^{1/2} Π_0^N η(x) is a standard Gaussian at every x: ε = π / N.
double coupling_epsilon(int cutoff);

/// η_k, 0 < k ≤ N, i.i.d. complex Gaussian with E|η_k|² = 1 (real and
/// imaginary parts independent N(0, 1/2)). Draws 2N normals from `rng`.
FourierField sample_mu_eps(int cutoff, CounterRng& rng);
FourierField sample_mu_eps(int cutoff, NoiseSeed seed);

/// Σ_{0<|k|≤M} e^{ikx} in closed form,
///   [cos(Mx) - cos((M+1)x)] / (1 - cos x) - 1,
/// evaluated in half-angle form, falling back to the direct sum when
/// |1 - cos x| < 1e-6.
double covariance_kernel(int modes, double x);

/// 2 Σ_{k=1}^{M} cos(kx).
double covariance_kernel_direct(int modes, double x);

struct KernelBoundReport {
  int modes = 0;
  /// sup_x |kernel(M, x)| / min{M, 1/|x|}, |x| the distance to 2πZ.
  double fitted_constant = 0.0;
  /// sup_x |kernel(M, x)| / (2M); never above one.
  double max_over_2m = 0.0;
  /// ∬_{T²} kernel(M, x - x')² dx dx' by quadrature, and its exact value (2π)²·2M.
  double double_integral = 0.0;
  double exact_double_integral = 0.0;
  /// ∬ kernel² / M, bounded in M.
  double integral_over_m = 0.0;
  bool pointwise_ok = false;
};

/// Checks |kernel| ≤ C·min{M, |x|^{-1}} on a uniform grid and integrates the
/// squared kernel by a quadrature that is exact for trigonometric polynomials
/// of degree ≤ 2M.
KernelBoundReport kernel_bound_check(int modes, int grid_points = 0);

}  // namespace wasb
