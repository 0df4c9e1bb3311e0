#include "wasb/analysis.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wasb/csv.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/generator.hpp"
#include "wasb/parallel.hpp"

namespace wasb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t step_index(double t, double dt, const char* what) {
  const double r = t / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw std::invalid_argument(std::string(what) + " is not a multiple of dt");
  }
  return static_cast<std::int64_t>(n);
}

std::string field(const char* key, double v) { return std::string(key) + "=" + format_double(v); }

void require_completed(const RunSummary& s, std::uint64_t stream) {
  if (s.terminal == TerminalState::blowup) {
    throw BlowupError(s.blowup_step, std::numeric_limits<double>::infinity());
  }
  (void)stream;
}

double ratio_spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (values.empty() || !(*lo > 0.0)) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

}  // namespace

// ---------------------------------------------------------------- snapshots

Snapshots collect_snapshots(const SimConfig& config, std::size_t ensemble, std::int64_t every,
                            int threads, std::uint64_t first_stream) {
  if (every < 1) throw std::invalid_argument("collect_snapshots: every must be positive");
  SimConfig cfg = config;
  cfg.finalize();
  Snapshots snaps;
  snaps.N = cfg.N;
  for (std::int64_t j = every; j <= cfg.steps(); j += every) {
    snaps.steps.push_back(j);
    snaps.times.push_back(static_cast<double>(j) * cfg.effective_dt());
  }
  snaps.samples = parallel_map(ensemble, threads, [&](std::size_t i) {
    std::vector<FourierField> out;
    out.reserve(snaps.steps.size());
    const auto summary = simulate_streaming(cfg, first_stream + i, [&](const StepView& v) {
      if (v.index > 0 && v.index % every == 0) out.push_back(*v.state);
    });
    require_completed(summary, first_stream + i);
    return out;
  });
  return snaps;
}

Snapshots snapshots_from(const std::vector<Trajectory>& ensemble, std::int64_t every) {
  if (every < 1) throw std::invalid_argument("snapshots_from: every must be positive");
  Snapshots snaps;
  if (ensemble.empty()) return snaps;
  snaps.N = ensemble.front().config.N;
  const std::int64_t steps = ensemble.front().steps();
  for (const auto& t : ensemble) {
    if (t.steps() != steps || t.config.N != snaps.N) {
      throw std::invalid_argument("snapshots_from: trajectories differ in length or cutoff");
    }
  }
  for (std::int64_t j = every; j <= steps; j += every) {
    snaps.steps.push_back(j);
    snaps.times.push_back(ensemble.front().time(static_cast<std::size_t>(j)));
  }
  for (const auto& t : ensemble) {
    std::vector<FourierField> row;
    for (auto j : snaps.steps) row.push_back(t.states[static_cast<std::size_t>(j)]);
    snaps.samples.push_back(std::move(row));
  }
  return snaps;
}

std::vector<StatReport> stationarity_report(const Snapshots& snaps,
                                            const StationarityOptions& options) {
  const std::size_t n = snaps.samples.size();
  if (n < 100) {
    throw std::invalid_argument("stationarity_report needs at least 100 trajectories, got " +
                                std::to_string(n));
  }
  const std::size_t times = snaps.steps.size();
  const int groups = std::max(1, std::min<int>(options.time_groups, static_cast<int>(times)));
  if (times == 0) throw std::invalid_argument("stationarity_report: no sample times");
  std::vector<int> modes = options.modes;
  if (modes.empty()) {
    for (int k = 1; k <= snaps.N; ++k) modes.push_back(k);
  }

  struct Check {
    std::string label;
    double target;
    std::function<double(const FourierField&, int)> value;
  };
  const std::vector<Check> single = {
      {"mean_re", 0.0, [](const FourierField& u, int k) { return u(k).real(); }},
      {"mean_im", 0.0, [](const FourierField& u, int k) { return u(k).imag(); }},
      {"second_moment", 1.0, [](const FourierField& u, int k) { return std::norm(u(k)); }},
      {"fourth_moment", 2.0,
       [](const FourierField& u, int k) { return std::norm(u(k)) * std::norm(u(k)); }},
      {"square_re", 0.0, [](const FourierField& u, int k) { return (u(k) * u(k)).real(); }},
      {"square_im", 0.0, [](const FourierField& u, int k) { return (u(k) * u(k)).imag(); }},
  };
  const std::vector<Check> paired = {
      {"cross_re", 0.0, [](const FourierField& u, int k) { return (u(k) * u(k + 1)).real(); }},
      {"cross_im", 0.0, [](const FourierField& u, int k) { return (u(k) * u(k + 1)).imag(); }},
      {"cross_conj_re", 0.0,
       [](const FourierField& u, int k) { return (u(k) * u(-k - 1)).real(); }},
      {"cross_conj_im", 0.0,
       [](const FourierField& u, int k) { return (u(k) * u(-k - 1)).imag(); }},
  };

  struct Cell {
    int group;
    int k;
    const Check* check;
  };
  std::vector<Cell> cells;
  for (int g = 0; g < groups; ++g) {
    for (int k : modes) {
      if (k < 1 || k > snaps.N) throw std::invalid_argument("stationarity_report: mode out of range");
      for (const auto& c : single) cells.push_back({g, k, &c});
      if (k + 1 <= snaps.N) {
        for (const auto& c : paired) cells.push_back({g, k, &c});
      }
    }
  }
  const double threshold = bonferroni_threshold(cells.size(), options.sigma);

  std::vector<StatReport> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) {
    const std::size_t begin = times * static_cast<std::size_t>(cell.group) / groups;
    const std::size_t end = times * static_cast<std::size_t>(cell.group + 1) / groups;
    RunningStats rs;
    for (const auto& row : snaps.samples) {
      double acc = 0.0;
      for (std::size_t j = begin; j < end; ++j) acc += cell.check->value(row[j], cell.k);
      rs.add(acc / static_cast<double>(end - begin));
    }
    std::ostringstream name;
    name << "stationarity k=" << cell.k << " group=" << cell.group << ' ' << cell.check->label;
    StatReport r = z_gate(name.str(), rs.mean(), rs.std_error(), cell.check->target, threshold);
    r.N = snaps.N;
    r.ell = cell.k;
    r.ensemble = n;
    r.detail = field("t_begin", snaps.times[begin]) + " " + field("t_end", snaps.times[end - 1]);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

RunningStats time_averaged_second_moment(const Snapshots& snaps, int k) {
  RunningStats rs;
  for (const auto& row : snaps.samples) {
    if (row.empty()) throw std::invalid_argument("time average over an empty sample row");
    double acc = 0.0;
    for (const auto& u : row) acc += std::norm(u(k));
    rs.add(acc / static_cast<double>(row.size()));
  }
  return rs;
}

}  // namespace

std::vector<StatReport> second_moment_reports(const Snapshots& snaps, double sigma) {
  if (snaps.samples.empty()) throw std::invalid_argument("second_moment_reports: empty ensemble");
  const double threshold = bonferroni_threshold(static_cast<std::size_t>(snaps.N), sigma);
  std::vector<StatReport> out;
  for (int k = 1; k <= snaps.N; ++k) {
    const RunningStats rs = time_averaged_second_moment(snaps, k);
    StatReport r = z_gate("second_moment k=" + std::to_string(k), rs.mean(), rs.std_error(), 1.0,
                          threshold);
    r.N = snaps.N;
    r.ell = k;
    r.ensemble = rs.count();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<StatReport> richardson_second_moments(const Snapshots& coarse, const Snapshots& fine,
                                                  double sigma) {
  if (coarse.N != fine.N) throw std::invalid_argument("richardson: cutoffs differ");
  if (coarse.samples.empty() || fine.samples.empty()) {
    throw std::invalid_argument("richardson: empty ensemble");
  }
  const double threshold = bonferroni_threshold(static_cast<std::size_t>(coarse.N), sigma);
  std::vector<StatReport> out;
  for (int k = 1; k <= coarse.N; ++k) {
    const RunningStats c = time_averaged_second_moment(coarse, k);
    const RunningStats f = time_averaged_second_moment(fine, k);
    const double estimate = 2.0 * f.mean() - c.mean();
    const double se = std::sqrt(4.0 * f.std_error() * f.std_error() + c.std_error() * c.std_error());
    StatReport r =
        z_gate("richardson second_moment k=" + std::to_string(k), estimate, se, 1.0, threshold);
    r.N = coarse.N;
    r.ell = k;
    r.ensemble = c.count() + f.count();
    r.detail = field("coarse", c.mean()) + " " + field("fine", f.mean());
    out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------------------ time averages

TimeAverageResult time_average(const Polynomial& g, const SimConfig& config, std::size_t ensemble,
                               int threads, double kappa) {
  SimConfig cfg = config;
  cfg.finalize();
  const int N = cfg.N;
  const double eps = coupling_epsilon(N);
  const double root_eps = std::sqrt(eps);
  const double dt = cfg.effective_dt();
  const double t = cfg.T;
  const int grid = alias_free_grid_size(N, std::max(g.degree(), 1));
  const double c0 = hermite_coeffs(g, 0).c[0];

  struct Sample {
    double sup = 0.0;
    double sobolev = 0.0;
  };
  const auto samples = parallel_map(ensemble, threads, [&](std::size_t i) {
    std::vector<double> integral(static_cast<std::size_t>(grid), 0.0);
    const std::int64_t S = cfg.steps();
    const auto summary = simulate_streaming(cfg, i, [&](const StepView& v) {
      const GridField values = to_grid(*v.state, grid);
      const double w = (v.index == 0 || v.index == S) ? 0.5 * dt : dt;
      for (int x = 0; x < grid; ++x) {
        integral[static_cast<std::size_t>(x)] += w * g(root_eps * values.samples[x]);
      }
    });
    require_completed(summary, i);
    GridField dev;
    dev.samples.resize(integral.size());
    Sample s;
    for (std::size_t x = 0; x < integral.size(); ++x) {
      dev.samples[x] = integral[x] - c0 * t;
      s.sup = std::max(s.sup, std::abs(dev.samples[x]));
    }
    s.sobolev = sobolev_norm(from_grid(dev), -0.5 - kappa) / root_eps;
    return s;
  });

  RunningStats sup, sob;
  for (const auto& s : samples) {
    sup.add(s.sup);
    sob.add(s.sobolev);
  }
  TimeAverageResult res;
  res.sup_deviation.name = "time_average sup deviation";
  res.sup_deviation.estimate = sup.mean();
  res.sup_deviation.std_error = sup.std_error();
  res.sup_deviation.N = N;
  res.sup_deviation.ensemble = ensemble;
  res.sup_deviation.pass = true;
  res.sup_deviation.detail = field("t", t) + " G=" + g.to_string();
  res.scaled_sobolev = res.sup_deviation;
  res.scaled_sobolev.name = "time_average scaled H^(-1/2-kappa) norm";
  res.scaled_sobolev.estimate = sob.mean();
  res.scaled_sobolev.std_error = sob.std_error();
  res.scaled_sobolev.detail += " " + field("kappa", kappa);
  return res;
}

// ----------------------------------------------------------- Burgers terms

cplx burgers_mode(const FourierField& u, int M, int ell) {
  if (M < 1 || M > u.cutoff()) {
    throw std::invalid_argument("burgers_mode: M = " + std::to_string(M) + " exceeds the cutoff " +
                                std::to_string(u.cutoff()));
  }
  if (std::abs(ell) > 2 * M || ell == 0) return {};
  cplx sum{};
  const int lo = std::max(-M, ell - M);
  const int hi = std::min(M, ell + M);
  for (int k1 = lo; k1 <= hi; ++k1) {
    const int k2 = ell - k1;
    if (k1 == 0 || k2 == 0) continue;
    sum += u(k1) * u(k2);
  }
  return cplx(0.0, static_cast<double>(ell)) * sum / std::sqrt(kTwoPi);
}

FourierField burgers_field(const FourierField& u, int M) {
  if (M < 1 || M > u.cutoff()) {
    throw std::invalid_argument("burgers_field: M exceeds the cutoff");
  }
  const int N = u.cutoff();
  GridField grid = to_grid(project(u, M), alias_free_grid_size(N, 2));
  for (auto& v : grid.samples) v *= v;
  return derivative(from_grid(grid, N));
}

std::vector<cplx> burgers_integral(const Trajectory& traj, int M, int ell) {
  if (M > traj.config.N) {
    throw std::invalid_argument("burgers_integral: M = " + std::to_string(M) +
                                " exceeds N = " + std::to_string(traj.config.N));
  }
  const double dt = traj.dt();
  std::vector<cplx> out(traj.states.size());
  cplx prev = traj.states.empty() ? cplx{} : burgers_mode(traj.states[0], M, ell);
  for (std::size_t j = 1; j < traj.states.size(); ++j) {
    const cplx cur = burgers_mode(traj.states[j], M, ell);
    out[j] = out[j - 1] + 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return out;
}

// -------------------------------------------------- Boltzmann–Gibbs residuals

BgResidual::BgResidual(const Polynomial& f, int cutoff, double c1_used, int ell, int M,
                       BgVariant variant, std::optional<double> c2_override)
    : ell_(ell), M_(M), variant_(variant) {
  if (M < 1 || M > cutoff) throw std::invalid_argument("BgResidual: need 1 ≤ M ≤ N");
  if (ell == 0 || std::abs(ell) > cutoff) throw std::invalid_argument("BgResidual: need 0 < |ℓ| ≤ N");
  const HermiteSpectrum hc = hermite_coeffs(f, 2);
  linear_correction_ = (c1_used - hc[1]) / std::sqrt(coupling_epsilon(cutoff));
  c2_ = c2_override.value_or(hc[2]);
}

cplx BgResidual::operator()(const FourierField& u, const FourierField& recorded_drift) const {
  cplx r = recorded_drift(ell_) + linear_correction_ * cplx(0.0, ell_) * u(ell_);
  if (variant_ == BgVariant::B) r -= c2_ * burgers_mode(u, M_, ell_);
  return r;
}

StatReport bg_residual_variance(const std::vector<Trajectory>& ensemble, int ell, double s,
                                double t, int M, BgVariant variant,
                                std::optional<double> c2_override) {
  if (ensemble.empty()) throw std::invalid_argument("bg_residual_variance: empty ensemble");
  if (!(s >= 0.0 && s < t && t <= s + 1.0)) {
    throw std::invalid_argument("bg_residual_variance: need 0 ≤ s < t ≤ s + 1");
  }
  const Trajectory& first = ensemble.front();
  const int N = first.config.N;
  if (M > N) throw std::invalid_argument("bg_residual_variance: M exceeds N");
  const double dt = first.dt();
  const std::int64_t i0 = step_index(s, dt, "s");
  const std::int64_t i1 = step_index(t, dt, "t");
  const BgResidual residual(first.config.F, N, first.c1, ell, M, variant, c2_override);

  RunningStats rs;
  for (const auto& traj : ensemble) {
    if (!traj.has_drift()) throw std::invalid_argument("bg_residual_variance: drift records missing");
    if (traj.config.N != N) throw std::invalid_argument("bg_residual_variance: mixed cutoffs");
    if (static_cast<std::int64_t>(traj.drifts.size()) <= i1 ||
        static_cast<std::int64_t>(traj.states.size()) <= i1) {
      throw std::invalid_argument("bg_residual_variance: trajectory shorter than t");
    }
    cplx integral{};
    for (std::int64_t j = i0; j <= i1; ++j) {
      const double w = (j == i0 || j == i1) ? 0.5 * dt : dt;
      integral += w * residual(traj.states[static_cast<std::size_t>(j)],
                               traj.drifts[static_cast<std::size_t>(j)]);
    }
    rs.add(std::norm(integral));
  }
  StatReport r;
  r.name = std::string("bg_variance_") + (variant == BgVariant::A ? "A" : "B");
  r.estimate = rs.mean();
  r.std_error = rs.std_error();
  r.pass = true;
  r.N = N;
  r.M = M;
  r.ell = ell;
  r.separation = t - s;
  r.ensemble = rs.count();
  return r;
}

namespace {

double gradient_moment(const Polynomial& f) {
  return gradient_sum(hermite_coeffs(f, std::max(f.degree(), 1)));
}

}  // namespace

double bg_bound_a(const Polynomial& f, int ell, double separation) {
  return std::pow(separation, 1.5) * ell * ell * gradient_moment(f);
}

double bg_bound_b(const Polynomial& f, int cutoff, int M, int ell, double separation) {
  const double logn = std::log(static_cast<double>(cutoff));
  return separation * ell * ell *
         (1.0 / M + coupling_epsilon(cutoff) * logn * logn) * gradient_moment(f);
}

double bg_bound_b_resolved(const Polynomial& f, int cutoff, int M, int ell, double separation) {
  const HermiteSpectrum hc = hermite_coeffs(f, std::max(f.degree(), 2));
  double high = 0.0;
  for (int n = 3; n <= hc.nmax; ++n) high += n * factorial(n) * hc[n] * hc[n];
  const double logn = std::log(static_cast<double>(cutoff));
  return separation * ell * ell *
         (hc[2] * hc[2] / M + coupling_epsilon(cutoff) * logn * logn * high);
}

BgStudyResult bg_scaling_study(const BgStudyOptions& options) {
  if (options.cutoffs.empty() || options.ells.empty() || options.separations.empty()) {
    throw std::invalid_argument("bg_scaling_study: empty grid");
  }
  const double min_sep = *std::min_element(options.separations.begin(), options.separations.end());
  BgStudyResult result;

  for (int N : options.cutoffs) {
    SimConfig cfg;
    cfg.name = "bg-scaling";
    cfg.N = N;
    cfg.F = options.F;
    cfg.T = options.T;
    cfg.seed = options.seed + static_cast<std::uint64_t>(N);
    cfg.record_noise = false;
    cfg.finalize();
    const double dt = cfg.effective_dt();
    const std::int64_t base = step_index(min_sep, dt, "separation");
    std::vector<std::int64_t> strides;
    for (double tau : options.separations) {
      const std::int64_t w = step_index(tau, dt, "separation");
      if (w % base != 0) throw std::invalid_argument("separations must be multiples of the smallest");
      if (w > cfg.steps()) throw std::invalid_argument("separation exceeds the horizon");
      strides.push_back(w / base);
    }

    std::vector<BgResidual> residuals;
    for (int ell : options.ells) {
      residuals.emplace_back(cfg.F, N, cfg.c1_used(), ell, N, BgVariant::A);
      for (int M : options.modes) {
        if (M > N) continue;
        residuals.emplace_back(cfg.F, N, cfg.c1_used(), ell, M, BgVariant::B,
                               options.c2_override);
      }
    }

    // Per trajectory: mean over non-overlapping windows of |∫ residual|²,
    // one value per (residual, separation).
    const auto per_traj = parallel_map(options.ensemble, options.threads, [&](std::size_t i) {
      const std::size_t R = residuals.size();
      std::vector<std::vector<cplx>> prefix(R);
      std::vector<cplx> running(R), last(R);
      const std::int64_t S = cfg.steps();
      const auto summary = simulate_streaming(cfg, i, [&](const StepView& v) {
        if (v.drift == nullptr) return;
        for (std::size_t r = 0; r < R; ++r) {
          const cplx cur = residuals[r](*v.state, *v.drift);
          if (v.index == 0) {
            prefix[r].push_back({});
          } else {
            running[r] += 0.5 * dt * (last[r] + cur);
          }
          last[r] = cur;
          if (v.index > 0 && v.index % base == 0) prefix[r].push_back(running[r]);
        }
      });
      require_completed(summary, i);
      (void)S;
      std::vector<double> values;
      values.reserve(R * strides.size());
      for (std::size_t r = 0; r < R; ++r) {
        const auto& p = prefix[r];
        for (std::int64_t w : strides) {
          double acc = 0.0;
          std::size_t windows = 0;
          for (std::size_t a = 0; a + static_cast<std::size_t>(w) < p.size();
               a += static_cast<std::size_t>(w)) {
            acc += std::norm(p[a + static_cast<std::size_t>(w)] - p[a]);
            ++windows;
          }
          values.push_back(acc / static_cast<double>(windows));
        }
      }
      return values;
    });

    std::size_t idx = 0;
    for (const auto& res : residuals) {
      for (double tau : options.separations) {
        RunningStats rs;
        for (const auto& row : per_traj) rs.add(row[idx]);
        ++idx;
        BgPoint p;
        p.variant = res.variant();
        p.N = N;
        p.M = res.M();
        p.ell = res.ell();
        p.separation = tau;
        p.variance = rs.mean();
        p.std_error = rs.std_error();
        if (p.variant == BgVariant::A) {
          p.bound = bg_bound_a(cfg.F, p.ell, tau);
          p.plain_bound = p.bound;
        } else {
          p.bound = bg_bound_b_resolved(cfg.F, N, p.M, p.ell, tau);
          p.plain_bound = bg_bound_b(cfg.F, N, p.M, p.ell, tau);
        }
        p.constant = p.bound > 0.0 ? p.variance / p.bound : std::numeric_limits<double>::infinity();
        p.ensemble = rs.count();
        result.points.push_back(p);
      }
    }
  }

  const int ell0 = options.ells.front();
  const int n_max = *std::max_element(options.cutoffs.begin(), options.cutoffs.end());
  const double sep_max = *std::max_element(options.separations.begin(), options.separations.end());
  auto describe = [](const ScalingFit& f) {
    return field("constant", f.constant) + " " + field("residual", f.residual);
  };

  for (int N : options.cutoffs) {
    std::vector<double> x, y;
    for (const auto& p : result.points) {
      if (p.variant == BgVariant::A && p.N == N && p.ell == ell0) {
        x.push_back(p.separation);
        y.push_back(p.variance);
      }
    }
    ScalingFit fit = fit_power_law(x, y);
    StatReport g = range_gate("bg A time exponent", fit.exponent, 1.4,
                              std::numeric_limits<double>::infinity());
    g.N = N;
    g.ell = ell0;
    g.ensemble = options.ensemble;
    g.detail = describe(fit);
    result.gates.push_back(std::move(g));
    result.time_fits.push_back(std::move(fit));
  }

  {
    std::vector<double> x, y;
    for (const auto& p : result.points) {
      if (p.variant == BgVariant::B && p.N == n_max && p.ell == ell0 && p.separation == sep_max) {
        x.push_back(p.M);
        y.push_back(p.variance);
      }
    }
    result.mode_fit = fit_power_law(x, y);
    StatReport g = range_gate("bg B mode exponent", result.mode_fit.exponent, -1.4, -0.6);
    g.N = n_max;
    g.ell = ell0;
    g.separation = sep_max;
    g.ensemble = options.ensemble;
    g.detail += " " + describe(result.mode_fit);
    result.gates.push_back(std::move(g));
  }

  // Variant B is compared where the window resolves the band M, i.e.
  // |t-s|·M² ≥ 1 (shorter windows sit in the ballistic regime), and below
  // M = N, where the F = x² residual vanishes identically.
  auto spread_cell = [](const BgPoint& p) {
    return p.variant == BgVariant::A || (p.M < p.N && p.separation * p.M * p.M >= 1.0);
  };
  for (BgVariant v : {BgVariant::A, BgVariant::B}) {
    std::vector<double> constants;
    for (const auto& p : result.points) {
      if (p.variant == v && spread_cell(p)) constants.push_back(p.constant);
    }
    StatReport g = upper_gate(std::string("bg ") + (v == BgVariant::A ? "A" : "B") +
                                  " constant spread",
                              ratio_spread(constants), 4.0);
    g.ensemble = options.ensemble;
    if (!constants.empty()) {
      const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
      g.detail = field("min", *lo) + " " + field("max", *hi) + " ";
    }
    g.detail += "cells=" + std::to_string(constants.size());
    result.gates.push_back(std::move(g));
  }

  // variance / bound should not grow from the smallest to the largest cutoff
  // beyond sigma standard errors, per (variant, ℓ, |t-s|, M) cell.
  const int n_min = *std::min_element(options.cutoffs.begin(), options.cutoffs.end());
  if (n_min != n_max) {
    for (const auto& lo : result.points) {
      if (lo.N != n_min || !spread_cell(lo)) continue;
      const int m_hi = lo.variant == BgVariant::A ? n_max : lo.M;
      for (const auto& hi : result.points) {
        if (hi.N != n_max || hi.variant != lo.variant || hi.ell != lo.ell || hi.M != m_hi ||
            hi.separation != lo.separation) {
          continue;
        }
        const double se = std::hypot(lo.std_error / lo.bound, hi.std_error / hi.bound);
        StatReport g = upper_gate(std::string("bg ") + (lo.variant == BgVariant::A ? "A" : "B") +
                                      " ratio trend in N",
                                  hi.constant - lo.constant, options.sigma * se);
        g.std_error = se;
        g.N = n_max;
        g.M = lo.variant == BgVariant::A ? 0 : lo.M;
        g.ell = lo.ell;
        g.separation = lo.separation;
        g.ensemble = options.ensemble;
        g.detail = field("ratio_at_min_N", lo.constant) + " " + field("ratio_at_max_N", hi.constant);
        result.gates.push_back(std::move(g));
      }
    }
  }
  return result;
}

// ------------------------------------------------------ quadratic variation

ScalingFit quadratic_variation(const std::vector<cplx>& path, double dt, int levels) {
  if (levels < 4) throw std::invalid_argument("quadratic_variation needs at least 4 mesh levels");
  const std::size_t coarsest = std::size_t{1} << (levels - 1);
  if (path.size() < 2 * coarsest + 1) {
    throw std::invalid_argument("quadratic_variation: path too short for the coarsest mesh");
  }
  std::vector<double> x, y;
  for (int j = 0; j < levels; ++j) {
    const std::size_t stride = std::size_t{1} << j;
    double qv = 0.0;
    for (std::size_t i = 0; i + stride < path.size(); i += stride) {
      qv += std::norm(path[i + stride] - path[i]);
    }
    x.push_back(dt * static_cast<double>(stride));
    y.push_back(qv);
  }
  // fit_power_law rejects a zero QV; report it without a fit.
  if (std::any_of(y.begin(), y.end(), [](double v) { return !(v > 0.0); })) {
    ScalingFit fit;
    fit.x = std::move(x);
    fit.y = std::move(y);
    fit.exponent = std::numeric_limits<double>::infinity();
    return fit;
  }
  return fit_power_law(std::move(x), std::move(y));
}

QvStudyResult qv_study(const QvStudyOptions& options) {
  SimConfig cfg;
  cfg.name = "qv";
  cfg.N = options.N;
  cfg.F = options.F;
  cfg.T = options.T;
  cfg.dt = options.dt;
  cfg.seed = options.seed;
  cfg.finalize();
  const Trajectory traj = simulate(cfg, 0);
  if (traj.terminal != TerminalState::completed) {
    throw BlowupError(traj.blowup_step, std::numeric_limits<double>::infinity());
  }
  const Decomposition d = decompose(traj, options.ell);

  QvStudyResult res;
  res.martingale = quadratic_variation(d.M, cfg.effective_dt(), options.levels);
  res.antisymmetric = quadratic_variation(d.A, cfg.effective_dt(), options.levels);

  const double target = 2.0 * cfg.T * options.ell * options.ell;
  StatReport m = tolerance_gate("qv martingale finest mesh", res.martingale.y.front(), target,
                                0.05 * target);
  m.N = cfg.N;
  m.ell = options.ell;
  m.separation = cfg.effective_dt();
  m.ensemble = 1;
  res.gates.push_back(std::move(m));

  bool decreasing = true;
  for (std::size_t j = 1; j < res.antisymmetric.y.size(); ++j) {
    decreasing = decreasing && res.antisymmetric.y[j - 1] < res.antisymmetric.y[j];
  }
  StatReport a;
  a.name = "qv antisymmetric decreasing under refinement";
  a.estimate = res.antisymmetric.exponent;
  a.pass = decreasing;
  a.N = cfg.N;
  a.ell = options.ell;
  a.ensemble = 1;
  std::string levels;
  for (double v : res.antisymmetric.y) levels += (levels.empty() ? "" : ";") + format_double(v);
  a.detail = "qv=" + levels;
  res.gates.push_back(std::move(a));
  return res;
}

// ---------------------------------------------------------------- Itô trick

ItoTrickResult ito_trick_check(const Polynomial& g, int cutoff, int ell, double T,
                               std::size_t ensemble, std::uint64_t seed, int threads) {
  SimConfig cfg;
  cfg.name = "ito-trick";
  cfg.N = cutoff;
  cfg.F = Polynomial({0.0});
  cfg.T = T;
  cfg.seed = seed;
  cfg.record_drift = false;
  cfg.record_noise = false;
  cfg.finalize();
  const double dt = cfg.effective_dt();
  const double root_eps = std::sqrt(coupling_epsilon(cutoff));
  const int grid = alias_free_grid_size(cutoff, std::max(g.degree(), 1));
  const double c0 = hermite_coeffs(g, 0).c[0];

  auto phi = [&](const FourierField& u) {
    GridField values = to_grid(u, grid);
    for (auto& v : values.samples) v = g(root_eps * v) - c0;
    return from_grid(values, grid / 2 - 1)(ell);
  };

  const auto sups = parallel_map(ensemble, threads, [&](std::size_t i) {
    cplx integral{};
    cplx prev{};
    double sup = 0.0;
    const auto summary = simulate_streaming(cfg, i, [&](const StepView& v) {
      const cplx cur = phi(*v.state);
      if (v.index > 0) {
        integral += 0.5 * dt * (prev + cur);
        sup = std::max(sup, std::norm(integral));
      }
      prev = cur;
    });
    require_completed(summary, i);
    return sup;
  });
  RunningStats rs;
  for (double s : sups) rs.add(s);

  const ChaosFunctional expansion = chaos_expand(g, cutoff, TestFunction::monomial(-ell));
  ChaosFunctional centered(cutoff);
  for (const auto& [alpha, c] : expansion.terms()) {
    if (!alpha.empty()) centered.add(alpha, c);
  }
  const EnergyReport e = energy(solve_poisson(centered), T);

  ItoTrickResult out;
  out.N = cutoff;
  out.ell = ell;
  out.T = T;
  out.sup_moment = rs.mean();
  out.std_error = rs.std_error();
  out.energy = e.expected_energy;
  out.constant = out.sup_moment / (T * out.energy);
  return out;
}

// ------------------------------------------------------ chaos-side checks

cplx poisson_by_semigroup(const Polynomial& g, int cutoff, int ell, const FourierField& eta,
                          int panels) {
  if (panels < 1) throw std::invalid_argument("poisson_by_semigroup: panels must be positive");
  const int N = cutoff;
  const double root_eps = std::sqrt(coupling_epsilon(N));
  const int grid = alias_free_grid_size(N, std::max(g.degree(), 1));
  const double c0 = hermite_coeffs(g, 0).c[0];
  const GaussHermiteRule& rule = gauss_hermite_rule(std::max(g.degree(), 1));
  const FourierField base = project(eta, N);
  GridField values;

  // (P_t Φ)(η) = <E[G(m_t + Z)] - c_0, e_{-ℓ}> with m_t = ε^{1/2} e^{tΔ} η and
  // Var Z = 1 - σ_t², σ_t² = N^{-1} Σ_{k=1}^{N} e^{-2k²t}.
  auto semigroup = [&](double t) {
    FourierField m = base;
    double sigma2 = 0.0;
    for (int k = 1; k <= N; ++k) {
      const double decay = std::exp(-static_cast<double>(k) * k * t);
      m.at(k) *= decay * root_eps;
      sigma2 += decay * decay;
    }
    sigma2 /= N;
    const double spread = std::sqrt(std::max(0.0, 1.0 - sigma2));
    values = to_grid(m, grid);
    for (auto& v : values.samples) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        acc += rule.weights[q] * g(v + spread * rule.nodes[q]);
      }
      v = acc - c0;
    }
    return from_grid(values, grid / 2 - 1)(ell);
  };

  constexpr double t0 = 1e-9;
  constexpr double t1 = 60.0;
  const double s0 = std::log(t0);
  const double width = (std::log(t1) - s0) / panels;
  cplx total = t0 * semigroup(0.0);
  for (int p = 0; p < panels; ++p) {
    const double a = s0 + p * width;
    auto integrand = [&](double s) {
      const double t = std::exp(s);
      return t * semigroup(t);
    };
    const auto re = boost::math::quadrature::gauss<double, 16>::integrate(
        [&](double s) { return integrand(s).real(); }, a, a + width);
    const auto im = boost::math::quadrature::gauss<double, 16>::integrate(
        [&](double s) { return integrand(s).imag(); }, a, a + width);
    total += cplx(re, im);
  }
  return -total;
}

double lp_block_variance(const Polynomial& g, int cutoff, int q) {
  const int top = std::max(g.degree(), 1) * cutoff;
  double total = 0.0;
  for (int k = 1; k <= top; ++k) {
    if (!in_lp_block(k, q)) continue;
    total += 2.0 * second_moment(chaos_expand(g, cutoff, TestFunction::monomial(-k)));
  }
  return total;
}

StatReport antisymmetry_mc(const Polynomial& f, int cutoff, const ChaosFunctional& phi,
                           const ChaosFunctional& psi, std::size_t samples, std::uint64_t seed,
                           double sigma) {
  DriftEvaluator ev(cutoff, f, hermite_coeffs(f, 1)[1]);
  RunningStats rs;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, i);
    const FourierField eta = sample_mu_eps(cutoff, rng);
    const FourierField b = ev(eta);
    const cplx value = directional_derivative(phi, b, eta) * evaluate_complex(psi, eta) +
                       evaluate_complex(phi, eta) * directional_derivative(psi, b, eta);
    rs.add(value.real());
  }
  StatReport r = z_gate("antisymmetry E[(B.D phi) psi + phi (B.D psi)]", rs.mean(),
                        rs.std_error(), 0.0, sigma);
  r.N = cutoff;
  r.ensemble = samples;
  return r;
}

}  // namespace wasb
