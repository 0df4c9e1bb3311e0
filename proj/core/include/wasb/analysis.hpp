#pragma once

// Ensemble statistics along simulated trajectories: stationarity of μ^ε,
// time averages, the Burgers nonlinearity ∂_x (Π_0^M u)², Boltzmann–Gibbs
// residual variances and their scaling, quadratic variations and the Itô
// trick constant.

#include <cstdint>
#include <optional>
#include <vector>

#include "wasb/chaos.hpp"
#include "wasb/hermite.hpp"
#include "wasb/simulator.hpp"
#include "wasb/stats.hpp"

namespace wasb {

// ---------------------------------------------------------------- snapshots

/// States of an ensemble at a common set of step indices.
struct Snapshots {
  int N = 0;
  std::vector<std::int64_t> steps;
  std::vector<double> times;
  /// samples[i][j]: trajectory i at steps[j].
  std::vector<std::vector<FourierField>> samples;
};

/// Runs `ensemble` trajectories (streams first_stream + i) and keeps every
/// `every`-th state, excluding the initial one.
Snapshots collect_snapshots(const SimConfig& config, std::size_t ensemble, std::int64_t every,
                            int threads = 0, std::uint64_t first_stream = 0);
Snapshots snapshots_from(const std::vector<Trajectory>& ensemble, std::int64_t every);

struct StationarityOptions {
  /// Modes to test; empty means 1..N.
  std::vector<int> modes;
  /// Sample times are split into this many consecutive groups, each tested
  /// separately.
  int time_groups = 4;
  double sigma = 4.0;
};

/// Per mode and time group: E[û_k] = 0 (real and imaginary parts),
/// E|û_k|² = 1, E|û_k|⁴ = 2, E[û_k²] = 0 and E[û_k û_{k+1}] = E[û_k û_{-(k+1)}] = 0,
/// all z-gated at a common Bonferroni threshold. Throws std::invalid_argument
/// for fewer than 100 trajectories.
std::vector<StatReport> stationarity_report(const Snapshots& snaps,
                                            const StationarityOptions& options = {});

/// E|û_k|² = 1 per mode, using each trajectory's time average as one sample.
std::vector<StatReport> second_moment_reports(const Snapshots& snaps, double sigma = 4.0);

/// Richardson extrapolation 2·m(dt/2) - m(dt) of the per-mode second moments
/// from independent ensembles at dt ("coarse") and dt/2 ("fine").
std::vector<StatReport> richardson_second_moments(const Snapshots& coarse, const Snapshots& fine,
                                                  double sigma = 4.0);

// ------------------------------------------------------------ time averages

struct TimeAverageResult {
  /// E sup_x |∫_0^t G(ε^{1/2} u_s(x)) ds - c_0(G) t| over the ensemble.
  StatReport sup_deviation;
  /// E ‖ε^{-1/2} (∫_0^t G(ε^{1/2} u_s) ds - c_0(G) t)‖_{H^s}, s = -1/2 - κ.
  StatReport scaled_sobolev;
};

TimeAverageResult time_average(const Polynomial& g, const SimConfig& config,
                               std::size_t ensemble, int threads = 0, double kappa = 0.1);

// ----------------------------------------------------------- Burgers terms

/// <∂_x (Π_0^M u)², e_{-ℓ}> = iℓ Σ_{k_1 + k_2 = ℓ, 0<|k_i|≤M} û(k_1) û(k_2) / √(2π).
/// Zero for |ℓ| > 2M. Throws std::invalid_argument if M exceeds u's cutoff.
cplx burgers_mode(const FourierField& u, int M, int ell);

/// ∂_x Π_0^N (Π_0^M u)² on an alias-free grid.
FourierField burgers_field(const FourierField& u, int M);

/// t_j ↦ ∫_0^{t_j} <∂_x (Π_0^M u_s)², e_{-ℓ}> ds by the trapezoid rule.
std::vector<cplx> burgers_integral(const Trajectory& traj, int M, int ell);

// -------------------------------------------------- Boltzmann–Gibbs residuals

enum class BgVariant { A, B };

/// r ↦ <ε^{-1} ∂_x Π_0^N F(ε^{1/2} u) - ε^{-1/2} c_1(F) ∂_x u
///      [- c_2 ∂_x (Π_0^M u)²], e_{-ℓ}>,
/// assembled from a recorded drift B(u) (which already removed c1_used·x)
/// and the state. c_2 defaults to c_2(F); override it only for negative
/// controls.
class BgResidual {
 public:
  BgResidual(const Polynomial& f, int cutoff, double c1_used, int ell, int M, BgVariant variant,
             std::optional<double> c2_override = std::nullopt);

  cplx operator()(const FourierField& u, const FourierField& recorded_drift) const;

  int ell() const noexcept { return ell_; }
  int M() const noexcept { return M_; }
  BgVariant variant() const noexcept { return variant_; }
  double c2() const noexcept { return c2_; }

 private:
  int ell_;
  int M_;
  BgVariant variant_;
  double linear_correction_;  // (c1_used - c_1(F)) ε^{-1/2}
  double c2_;
};

/// E|∫_s^t residual dr|² over stored trajectories (trapezoid rule on the
/// recorded steps). Requires 0 ≤ s < t ≤ s + 1, M ≤ N and drift records.
StatReport bg_residual_variance(const std::vector<Trajectory>& ensemble, int ell, double s,
                                double t, int M, BgVariant variant,
                                std::optional<double> c2_override = std::nullopt);

/// Right-hand sides of the two Boltzmann–Gibbs bounds, without constants:
///   A: |t-s|^{3/2} ℓ² ∫|F'|² dν,
///   B: |t-s| ℓ² (1/M + ε log² N) ∫|F'|² dν.
double bg_bound_a(const Polynomial& f, int ell, double separation);
double bg_bound_b(const Polynomial& f, int cutoff, int M, int ell, double separation);

/// Variant B bound resolved by chaos order as in its derivation:
///   |t-s| ℓ² (c_2²/M + ε log² N Σ_{n≥3} n·n!·c_n²).
double bg_bound_b_resolved(const Polynomial& f, int cutoff, int M, int ell, double separation);

struct BgPoint {
  BgVariant variant = BgVariant::A;
  int N = 0;
  int M = 0;
  int ell = 0;
  double separation = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  /// Chaos-resolved bound for variant B, the plain bound for variant A.
  double bound = 0.0;
  double plain_bound = 0.0;
  /// variance / bound
  double constant = 0.0;
  std::size_t ensemble = 0;
};

struct BgStudyOptions {
  Polynomial F = Polynomial({0.0, 0.0, 1.0});
  std::vector<int> cutoffs = {16, 32, 64};
  std::vector<int> ells = {1};
  std::vector<double> separations = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
  /// Variant B is run for every M ≤ N in this list; the M fit uses the
  /// largest cutoff and separation at ℓ = ells.front().
  std::vector<int> modes = {2, 4, 8, 16};
  /// Horizon; windows [s, s + |t-s|] tile [0, T].
  double T = 0.5;
  std::size_t ensemble = 200;
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<double> c2_override;
  double sigma = 4.0;
};

struct BgStudyResult {
  std::vector<BgPoint> points;
  /// Variant A variance against |t-s| at each cutoff, in cutoff order.
  std::vector<ScalingFit> time_fits;
  /// Variant B variance against M at the largest cutoff and separation.
  ScalingFit mode_fit;
  std::vector<StatReport> gates;
};

BgStudyResult bg_scaling_study(const BgStudyOptions& options);

// ------------------------------------------------------ quadratic variation

/// Realized Σ|X(t_{i+1}) - X(t_i)|² on meshes dt·2^j, j = 0 .. levels-1;
/// abscissae are the mesh sizes. Throws std::invalid_argument for fewer than
/// four levels or a path too short for the coarsest mesh.
ScalingFit quadratic_variation(const std::vector<cplx>& path, double dt, int levels);

struct QvStudyOptions {
  int N = 16;
  int ell = 1;
  double T = 1.0;
  double dt = 1e-4;
  int levels = 5;
  Polynomial F = Polynomial({0.0, 0.0, 1.0});
  std::uint64_t seed = 3;
};

struct QvStudyResult {
  ScalingFit martingale;
  ScalingFit antisymmetric;
  std::vector<StatReport> gates;
};

/// M-path quadratic variation against 2Tℓ² (5 %), and strict decrease of the
/// A-path quadratic variation as the mesh is refined.
QvStudyResult qv_study(const QvStudyOptions& options);

// ---------------------------------------------------------------- Itô trick

struct ItoTrickResult {
  int N = 0;
  int ell = 0;
  double T = 0.0;
  /// E sup_{t≤T} |∫_0^t Φ(u_s) ds|², Φ = <G(ε^{1/2} u) - c_0, e_{-ℓ}>.
  double sup_moment = 0.0;
  double std_error = 0.0;
  /// E[E(Ψ)] for Ψ solving LΨ = Φ.
  double energy = 0.0;
  /// sup_moment / (T · energy)
  double constant = 0.0;
};

/// Along stationary Ornstein–Uhlenbeck trajectories (F ≡ 0).
ItoTrickResult ito_trick_check(const Polynomial& g, int cutoff, int ell, double T,
                               std::size_t ensemble, std::uint64_t seed, int threads = 0);

// ------------------------------------------------------ chaos-side checks

/// -∫_0^∞ (P_t Φ)(η) dt for Φ(η) = <G(ε^{1/2} Π_0^N η) - c_0, e_{-ℓ}>, where
/// P_t is the Ornstein–Uhlenbeck semigroup, evaluated by Gauss–Legendre
/// quadrature (16 nodes per panel) in log-time over t ∈ [1e-9, 60]. Equals
/// solve_poisson(chaos_expand(G, N, e_{-ℓ})) at η.
cplx poisson_by_semigroup(const Polynomial& g, int cutoff, int ell, const FourierField& eta,
                          int panels = 8);

/// E ‖Δ_q (G(ε^{1/2} Π_0^N η) - c_0)‖²_{L²} from chaos second moments.
double lp_block_variance(const Polynomial& g, int cutoff, int q);

/// E[(B·DΦ) Ψ + Φ (B·DΨ)] for μ^ε-samples, with B the drift for F. Zero by
/// antisymmetry of B in L²(μ^ε).
StatReport antisymmetry_mc(const Polynomial& f, int cutoff, const ChaosFunctional& phi,
                           const ChaosFunctional& psi, std::size_t samples, std::uint64_t seed,
                           double sigma = 4.0);

}  // namespace wasb
