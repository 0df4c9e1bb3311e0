#pragma once

// Galerkin truncation of the weakly asymmetric stochastic Burgers equation,
//   du = Δu dt + B(u) dt + √2 ∂_x dW,   B(u) = ε^{-1} ∂_x Π_0^N F̃(ε^{1/2} u),
// with F̃ = F - c·x and c = c_1(F) in the co-moving frame. Integrated with an
// exponential Euler scheme that solves the Ornstein–Uhlenbeck part exactly.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wasb/polynomial.hpp"
#include "wasb/rng.hpp"
#include "wasb/spectral.hpp"

namespace wasb {

struct SimConfig {
  std::string name = "run";
  int N = 0;
  /// Time step; zero selects the default 1/(4N²).
  double dt = 0.0;
  double T = 0.0;
  Polynomial F;
  /// The alias-free grid is enlarged to at least next_pow2(oversample·N).
  int oversample = 4;
  std::uint64_t seed = 0;
  /// Trajectories per run; trajectory i draws from noise stream i.
  int ensemble = 1;
  bool record_drift = true;
  bool record_noise = true;
  double blowup_threshold = 1e6;
  /// Remove c_1(F)·x from F (co-moving frame). When false the linear
  /// transport term stays in the drift.
  bool subtract_c1 = true;
  /// Multiplies the noise variance; 1 for the model, other values only for
  /// negative controls.
  double noise_variance_scale = 1.0;
  /// Permit dt above 1/(2N²).
  bool allow_large_dt = false;
  /// Scaling parameter, kept redundantly and checked against π/N.
  double epsilon = 0.0;

  /// Fills dt and ε defaults and checks every invariant; throws
  /// std::invalid_argument listing the first violation.
  void finalize();
  double effective_dt() const;
  /// Number of time steps T/dt (T must be an integer multiple of dt).
  std::int64_t steps() const;
  /// c·x removed from F: c_1(F) when subtract_c1, else 0.
  double c1_used() const;
  /// One "key = value" line per field, in fixed order.
  std::string canonical_text() const;
};

class BlowupError : public std::runtime_error {
 public:
  BlowupError(std::int64_t step, double norm);
  std::int64_t step() const noexcept { return step_; }
  double norm() const noexcept { return norm_; }

 private:
  std::int64_t step_;
  double norm_;
};

/// Pseudo-spectral evaluation of B(u) on a reusable alias-free grid. Not
/// thread-safe; use one instance per worker.
class DriftEvaluator {
 public:
  DriftEvaluator(int cutoff, Polynomial f, double c1, int oversample = 4);

  /// Throws BlowupError(-1, …) if the grid values are not finite.
  void evaluate(const FourierField& u, FourierField& out);
  FourierField operator()(const FourierField& u);

  int grid_size() const noexcept { return grid_; }
  int cutoff() const noexcept { return cutoff_; }
  const Polynomial& nonlinearity() const noexcept { return f_tilde_; }

 private:
  int cutoff_;
  int grid_;
  double eps_;
  Polynomial f_tilde_;
  std::vector<cplx> spectrum_;
  std::vector<double> samples_;
};

/// B(u) = ε^{-1} ∂_x Π_0^N (F - c1·x)(ε^{1/2} u), ε = π/N.
FourierField drift(const FourierField& u, const Polynomial& f, double c1);

/// Exponential Euler coefficients for one time step.
class ExponentialEuler {
 public:
  ExponentialEuler(int cutoff, double dt, double noise_variance_scale = 1.0);

  /// u ← e^{-k²dt} u + (1 - e^{-k²dt})/k² B + ζ, returning ζ in `noise`
  /// when non-null.
  void advance(FourierField& u, const FourierField& drift, CounterRng& rng,
               FourierField* noise = nullptr) const;

  double decay(int k) const { return decay_[k - 1]; }
  double drift_weight(int k) const { return weight_[k - 1]; }
  /// Standard deviation of ζ_k, i.e. √((1 - e^{-2k²dt}) · scale).
  double noise_sd(int k) const { return sd_[k - 1]; }

 private:
  std::vector<double> decay_;
  std::vector<double> weight_;
  std::vector<double> sd_;
};

/// One integrator step from u under `config`, drawing noise from `rng`.
/// Throws BlowupError when the new L² norm exceeds the threshold.
FourierField step(const FourierField& u, const SimConfig& config, CounterRng& rng);

enum class TerminalState { completed, blowup };

struct Trajectory {
  SimConfig config;
  std::uint64_t stream = 0;
  std::string config_hash;
  /// u_0 .. u_S at t_j = j·dt.
  std::vector<FourierField> states;
  /// B(u_j) for j = 0 .. S when recorded.
  std::vector<FourierField> drifts;
  /// ζ_j producing u_{j+1} from u_j, j = 0 .. S-1, when recorded.
  std::vector<FourierField> noises;
  TerminalState terminal = TerminalState::completed;
  std::int64_t blowup_step = -1;
  /// Linear coefficient removed from F in the drift records.
  double c1 = 0.0;
  bool reversed = false;
  double galilean_shift = 0.0;

  double dt() const { return config.effective_dt(); }
  double time(std::size_t j) const { return static_cast<double>(j) * dt(); }
  std::int64_t steps() const { return static_cast<std::int64_t>(states.size()) - 1; }
  bool has_drift() const { return !drifts.empty(); }
  bool has_noise() const { return !noises.empty(); }
};

/// State handed to streaming observers: u_j, B(u_j) and the ζ_j that moves
/// u_j to u_{j+1} (null at the final index j = S).
struct StepView {
  std::int64_t index = 0;
  double time = 0.0;
  const FourierField* state = nullptr;
  const FourierField* drift = nullptr;
  const FourierField* noise = nullptr;
};

using StepObserver = std::function<void(const StepView&)>;

struct RunSummary {
  TerminalState terminal = TerminalState::completed;
  std::int64_t blowup_step = -1;
  std::int64_t steps = 0;
};

/// Runs one trajectory with u_0 ~ μ^ε drawn from stream `stream` of the
/// config seed, calling `observer` at j = 0 .. S without storing states.
RunSummary simulate_streaming(const SimConfig& config, std::uint64_t stream,
                              const StepObserver& observer,
                              std::optional<FourierField> initial = std::nullopt);

/// Stored trajectory; on blow-up the states up to the offending step are kept
/// and the terminal flag is set.
Trajectory simulate(const SimConfig& config, std::uint64_t stream = 0,
                    std::optional<FourierField> initial = std::nullopt);

/// Moves the records to the frame x ↦ x - ε^{-1/2} c1 t: every state,
/// drift and noise record at time t is phase shifted by a = ε^{-1/2} c1 t.
Trajectory galilean_shift(const Trajectory& traj, double c1, double epsilon);

/// v_j = u_{S-j}. Drift records become B^rev_j = -B_{S-1-j} (and -B_S at the
/// end) and noise records are the increments implied by the integrator, so
/// the reversed antisymmetric path satisfies Â_t = -(A_T - A_{T-t}).
Trajectory time_reverse(const Trajectory& traj);

/// û_t(ℓ) = û_0(ℓ) + S_t + A_t + M_t along the recorded steps:
///   S increments (e^{-ℓ²dt} - 1) û_j(ℓ),
///   A increments (1 - e^{-ℓ²dt})/ℓ² B̂_j(ℓ),
///   M increments ζ_j(ℓ) when noise is recorded, else the exact remainder.
struct Decomposition {
  int ell = 0;
  double dt = 0.0;
  std::vector<cplx> value;
  std::vector<cplx> S;
  std::vector<cplx> A;
  std::vector<cplx> M;
  /// max_j |û_j(ℓ) - û_0(ℓ) - S_j - A_j - M_j|
  double identity_residual = 0.0;
};

/// Throws std::invalid_argument without drift records or unless 0 < ℓ ≤ N.
Decomposition decompose(const Trajectory& traj, int ell);

struct AntisymmetryCheck {
  double pairing = 0.0;    // |<B(u), u>|
  double norm_sq = 0.0;    // ‖u‖²
  double ratio = 0.0;      // pairing / max(norm_sq, tiny)
};

AntisymmetryCheck antisymmetry_check(const FourierField& u, DriftEvaluator& drift);

struct DivergenceCheck {
  /// Σ over the 2N real coordinates of ∂_{a_i} <B(u), φ_i> by central differences.
  double divergence = 0.0;
  /// 1 + Σ_i |∂_{a_i} <B(u), φ_i>|.
  double scale = 0.0;
};

DivergenceCheck divergence_check(const FourierField& u, DriftEvaluator& drift, double h = 1e-5);

}  // namespace wasb
