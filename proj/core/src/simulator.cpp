#include "wasb/simulator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wasb/csv.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/hermite.hpp"
#include "wasb/manifest.hpp"

namespace wasb {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw std::invalid_argument("invalid simulation config: " + what);
}

}  // namespace

void SimConfig::finalize() {
  if (N < 1) invalid("N must be >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) invalid("T must be positive");
  if (dt == 0.0) dt = 1.0 / (4.0 * N * N);
  if (!(dt > 0.0) || !std::isfinite(dt)) invalid("dt must be positive");
  if (dt > 1.0 / (2.0 * N * N) && !allow_large_dt) {
    invalid("dt = " + format_double(dt) + " exceeds 1/(2N^2) = " +
            format_double(1.0 / (2.0 * N * N)) + "; set allow_large_dt to override");
  }
  const double expected = coupling_epsilon(N);
  if (epsilon == 0.0) epsilon = expected;
  if (std::abs(epsilon * N - std::numbers::pi) > 1e-12 * std::numbers::pi) {
    invalid("epsilon = " + format_double(epsilon) + " is not pi/N");
  }
  if (oversample < 1) invalid("oversample must be >= 1");
  if (ensemble < 1) invalid("ensemble must be >= 1");
  if (!(blowup_threshold > 0.0)) invalid("blowup_threshold must be positive");
  if (!(noise_variance_scale >= 0.0)) invalid("noise_variance_scale must be >= 0");
  steps();
}

double SimConfig::effective_dt() const { return dt == 0.0 ? 1.0 / (4.0 * N * N) : dt; }

std::int64_t SimConfig::steps() const {
  const double h = effective_dt();
  const double ratio = T / h;
  const auto n = static_cast<std::int64_t>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    invalid("T = " + format_double(T) + " is not an integer multiple of dt = " + format_double(h));
  }
  return n;
}

double SimConfig::c1_used() const {
  return subtract_c1 ? hermite_coeffs(F, std::max(F.degree(), 1))[1] : 0.0;
}

std::string SimConfig::canonical_text() const {
  std::ostringstream out;
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out << "name = " << name << '\n'
      << "N = " << N << '\n'
      << "F = " << F.to_string() << '\n'
      << "T = " << format_double(T) << "s\n"
      << "dt = " << format_double(effective_dt()) << "s\n"
      << "oversample = " << oversample << '\n'
      << "seed = " << seed << '\n'
      << "ensemble = " << ensemble << '\n'
      << "record_drift = " << flag(record_drift) << '\n'
      << "record_noise = " << flag(record_noise) << '\n'
      << "blowup_threshold = " << format_double(blowup_threshold) << '\n'
      << "subtract_c1 = " << flag(subtract_c1) << '\n'
      << "noise_variance_scale = " << format_double(noise_variance_scale) << '\n'
      << "allow_large_dt = " << flag(allow_large_dt) << '\n';
  return out.str();
}

BlowupError::BlowupError(std::int64_t step, double norm)
    : std::runtime_error("trajectory blew up at step " + std::to_string(step) +
                         " (L2 norm " + format_double(norm) + ")"),
      step_(step),
      norm_(norm) {}

DriftEvaluator::DriftEvaluator(int cutoff, Polynomial f, double c1, int oversample)
    : cutoff_(cutoff), eps_(coupling_epsilon(cutoff)), f_tilde_(f.minus_linear(c1)) {
  if (cutoff < 1) throw std::invalid_argument("drift needs N >= 1");
  grid_ = std::max(alias_free_grid_size(cutoff, std::max(f_tilde_.degree(), 1)),
                   next_pow2(std::max(oversample, 1) * cutoff));
  spectrum_.resize(static_cast<std::size_t>(grid_ / 2 + 1));
  samples_.resize(static_cast<std::size_t>(grid_));
}

void DriftEvaluator::evaluate(const FourierField& u, FourierField& out) {
  if (out.cutoff() != cutoff_) out = FourierField(cutoff_);
  if (f_tilde_.degree() < 1) {
    // Constants have no mode inside Π_0^N.
    for (auto& c : out.coeffs()) c = 0.0;
    return;
  }
  const double root_eps = std::sqrt(eps_);
  std::fill(spectrum_.begin(), spectrum_.end(), cplx{});
  const int common = std::min(cutoff_, u.cutoff());
  for (int k = 1; k <= common; ++k) spectrum_[k] = root_eps * u.at(k);
  spectrum_to_grid(spectrum_, samples_);
  const auto& a = f_tilde_.coefficients();
  const int deg = f_tilde_.degree();
  for (double& x : samples_) {
    double acc = a[deg];
    for (int i = deg - 1; i >= 0; --i) acc = acc * x + a[i];
    if (!std::isfinite(acc)) throw BlowupError(-1, std::abs(x));
    x = acc;
  }
  grid_to_spectrum(samples_, spectrum_);
  const double inv_eps = 1.0 / eps_;
  for (int k = 1; k <= cutoff_; ++k) out.at(k) = cplx(0.0, k * inv_eps) * spectrum_[k];
}

FourierField DriftEvaluator::operator()(const FourierField& u) {
  FourierField out(cutoff_);
  evaluate(u, out);
  return out;
}

FourierField drift(const FourierField& u, const Polynomial& f, double c1) {
  DriftEvaluator ev(u.cutoff(), f, c1);
  return ev(u);
}

ExponentialEuler::ExponentialEuler(int cutoff, double dt, double noise_variance_scale) {
  decay_.resize(static_cast<std::size_t>(cutoff));
  weight_.resize(decay_.size());
  sd_.resize(decay_.size());
  for (int k = 1; k <= cutoff; ++k) {
    const double rate = static_cast<double>(k) * k;
    decay_[k - 1] = std::exp(-rate * dt);
    weight_[k - 1] = -std::expm1(-rate * dt) / rate;
    sd_[k - 1] = std::sqrt(-std::expm1(-2.0 * rate * dt) * noise_variance_scale);
  }
}

void ExponentialEuler::advance(FourierField& u, const FourierField& drift, CounterRng& rng,
                               FourierField* noise) const {
  const int n = u.cutoff();
  if (noise != nullptr && noise->cutoff() != n) *noise = FourierField(n);
  for (int k = 1; k <= n; ++k) {
    const double s = sd_[k - 1] * std::numbers::sqrt2 * 0.5;
    const double re = rng.normal();
    const double im = rng.normal();
    const cplx z(s * re, s * im);
    u.at(k) = decay_[k - 1] * u.at(k) + weight_[k - 1] * drift.at(k) + z;
    if (noise != nullptr) noise->at(k) = z;
  }
}

FourierField step(const FourierField& u, const SimConfig& config, CounterRng& rng) {
  SimConfig cfg = config;
  cfg.finalize();
  DriftEvaluator ev(cfg.N, cfg.F, cfg.c1_used(), cfg.oversample);
  const ExponentialEuler euler(cfg.N, cfg.effective_dt(), cfg.noise_variance_scale);
  FourierField next = project(u, cfg.N);
  const FourierField b = ev(next);
  euler.advance(next, b, rng);
  const double norm = std::sqrt(l2_norm_squared(next));
  if (!(norm <= cfg.blowup_threshold)) throw BlowupError(1, norm);
  return next;
}

RunSummary simulate_streaming(const SimConfig& config, std::uint64_t stream,
                              const StepObserver& observer,
                              std::optional<FourierField> initial) {
  SimConfig cfg = config;
  cfg.finalize();
  CounterRng rng(cfg.seed, stream);
  FourierField u = initial ? project(*initial, cfg.N) : sample_mu_eps(cfg.N, rng);
  DriftEvaluator ev(cfg.N, cfg.F, cfg.c1_used(), cfg.oversample);
  const ExponentialEuler euler(cfg.N, cfg.effective_dt(), cfg.noise_variance_scale);
  const double dt = cfg.effective_dt();
  const std::int64_t total = cfg.steps();

  RunSummary summary;
  summary.steps = total;
  FourierField b(cfg.N);
  FourierField next(cfg.N);
  FourierField zeta(cfg.N);
  for (std::int64_t j = 0;; ++j) {
    StepView view;
    view.index = j;
    view.time = static_cast<double>(j) * dt;
    view.state = &u;
    try {
      ev.evaluate(u, b);
    } catch (const BlowupError&) {
      if (observer) observer(view);
      summary.terminal = TerminalState::blowup;
      summary.blowup_step = j;
      return summary;
    }
    view.drift = &b;
    if (j == total) {
      if (observer) observer(view);
      return summary;
    }
    next = u;
    euler.advance(next, b, rng, &zeta);
    view.noise = &zeta;
    if (observer) observer(view);
    std::swap(u, next);
    const double norm = std::sqrt(l2_norm_squared(u));
    if (!(norm <= cfg.blowup_threshold)) {
      StepView last;
      last.index = j + 1;
      last.time = static_cast<double>(j + 1) * dt;
      last.state = &u;
      if (observer) observer(last);
      summary.terminal = TerminalState::blowup;
      summary.blowup_step = j + 1;
      return summary;
    }
  }
}

Trajectory simulate(const SimConfig& config, std::uint64_t stream,
                    std::optional<FourierField> initial) {
  Trajectory traj;
  traj.config = config;
  traj.config.finalize();
  traj.stream = stream;
  traj.config_hash = sha256_hex(traj.config.canonical_text());
  traj.c1 = traj.config.c1_used();
  const auto steps = static_cast<std::size_t>(traj.config.steps());
  traj.states.reserve(steps + 1);
  if (traj.config.record_drift) traj.drifts.reserve(steps + 1);
  if (traj.config.record_noise) traj.noises.reserve(steps);
  const RunSummary summary = simulate_streaming(
      traj.config, stream,
      [&](const StepView& v) {
        traj.states.push_back(*v.state);
        if (traj.config.record_drift && v.drift != nullptr) traj.drifts.push_back(*v.drift);
        if (traj.config.record_noise && v.noise != nullptr) traj.noises.push_back(*v.noise);
      },
      std::move(initial));
  traj.terminal = summary.terminal;
  traj.blowup_step = summary.blowup_step;
  return traj;
}

Trajectory galilean_shift(const Trajectory& traj, double c1, double epsilon) {
  Trajectory out = traj;
  if (c1 == 0.0) return out;
  const double velocity = c1 / std::sqrt(epsilon);
  for (std::size_t j = 0; j < out.states.size(); ++j) {
    out.states[j] = phase_shift(traj.states[j], velocity * traj.time(j));
  }
  for (std::size_t j = 0; j < out.drifts.size(); ++j) {
    out.drifts[j] = phase_shift(traj.drifts[j], velocity * traj.time(j));
  }
  for (std::size_t j = 0; j < out.noises.size(); ++j) {
    out.noises[j] = phase_shift(traj.noises[j], velocity * traj.time(j + 1));
  }
  out.galilean_shift += velocity;
  return out;
}

Trajectory time_reverse(const Trajectory& traj) {
  if (traj.terminal != TerminalState::completed) {
    throw std::invalid_argument("time reversal needs a completed trajectory");
  }
  Trajectory out = traj;
  const std::size_t S = traj.states.size() - 1;
  for (std::size_t j = 0; j <= S; ++j) out.states[j] = traj.states[S - j];
  const bool full_drift = traj.drifts.size() == S + 1;
  if (full_drift) {
    for (std::size_t j = 0; j < S; ++j) out.drifts[j] = -1.0 * traj.drifts[S - 1 - j];
    out.drifts[S] = -1.0 * traj.drifts[S];
  } else {
    out.drifts.clear();
  }
  out.noises.clear();
  if (traj.has_noise() && full_drift) {
    const int n = traj.config.N;
    const ExponentialEuler euler(n, traj.dt());
    out.noises.assign(S, FourierField(n));
    for (std::size_t j = 0; j < S; ++j) {
      for (int k = 1; k <= n; ++k) {
        out.noises[j].at(k) = out.states[j + 1].at(k) - euler.decay(k) * out.states[j].at(k) -
                              euler.drift_weight(k) * out.drifts[j].at(k);
      }
    }
  }
  out.reversed = !traj.reversed;
  return out;
}

Decomposition decompose(const Trajectory& traj, int ell) {
  if (!traj.has_drift()) throw std::invalid_argument("decomposition needs recorded drift");
  const int n = traj.config.N;
  if (ell < 1 || ell > n) {
    throw std::invalid_argument("decomposition mode must satisfy 0 < l <= N");
  }
  const std::size_t S = traj.states.size() - 1;
  if (traj.drifts.size() < S) throw std::invalid_argument("drift records incomplete");
  const bool use_noise = traj.noises.size() >= S;
  const ExponentialEuler euler(n, traj.dt());
  const double e = euler.decay(ell);
  const double w = euler.drift_weight(ell);

  Decomposition d;
  d.ell = ell;
  d.dt = traj.dt();
  d.value.resize(S + 1);
  d.S.assign(S + 1, cplx{});
  d.A.assign(S + 1, cplx{});
  d.M.assign(S + 1, cplx{});
  for (std::size_t j = 0; j <= S; ++j) d.value[j] = traj.states[j].at(ell);
  const cplx x0 = d.value[0];
  for (std::size_t j = 0; j < S; ++j) {
    d.S[j + 1] = d.S[j] + (e - 1.0) * d.value[j];
    d.A[j + 1] = d.A[j] + w * traj.drifts[j].at(ell);
    d.M[j + 1] = use_noise ? d.M[j] + traj.noises[j].at(ell)
                           : d.value[j + 1] - x0 - d.S[j + 1] - d.A[j + 1];
  }
  for (std::size_t j = 0; j <= S; ++j) {
    d.identity_residual =
        std::max(d.identity_residual, std::abs(d.value[j] - x0 - d.S[j] - d.A[j] - d.M[j]));
  }
  return d;
}

AntisymmetryCheck antisymmetry_check(const FourierField& u, DriftEvaluator& drift) {
  AntisymmetryCheck c;
  const FourierField b = drift(u);
  c.pairing = std::abs(inner_product(b, u));
  c.norm_sq = l2_norm_squared(u);
  c.ratio = c.pairing / std::max(c.norm_sq, 1e-300);
  return c;
}

DivergenceCheck divergence_check(const FourierField& u, DriftEvaluator& drift, double h) {
  // Real coordinates for φ = cos(kx)/√π and sin(kx)/√π:
  //   a_k = √2 Re û(k),  b_k = -√2 Im û(k).
  DivergenceCheck c;
  const int n = u.cutoff();
  const double shift = h / std::numbers::sqrt2;
  double abs_sum = 0.0;
  FourierField probe = u;
  for (int k = 1; k <= n; ++k) {
    const cplx base = u.at(k);
    probe.at(k) = base + shift;
    const double plus_a = std::numbers::sqrt2 * drift(probe).at(k).real();
    probe.at(k) = base - shift;
    const double minus_a = std::numbers::sqrt2 * drift(probe).at(k).real();
    probe.at(k) = base - cplx(0.0, shift);
    const double plus_b = -std::numbers::sqrt2 * drift(probe).at(k).imag();
    probe.at(k) = base + cplx(0.0, shift);
    const double minus_b = -std::numbers::sqrt2 * drift(probe).at(k).imag();
    probe.at(k) = base;
    const double da = (plus_a - minus_a) / (2.0 * h);
    const double db = (plus_b - minus_b) / (2.0 * h);
    c.divergence += da + db;
    abs_sum += std::abs(da) + std::abs(db);
  }
  c.scale = 1.0 + abs_sum;
  return c;
}

}  // namespace wasb
