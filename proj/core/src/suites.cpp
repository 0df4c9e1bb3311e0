#include "wasb/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include "wasb/csv.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/generator.hpp"

namespace wasb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fixed stream offsets keep the suites' random draws disjoint.
constexpr std::uint64_t kPoissonStream = 1000;
constexpr std::uint64_t kAntisymStream = 2000;
constexpr std::uint64_t kKernelStream = 3000;

double max_coefficient_error(const ChaosFunctional& a, const ChaosFunctional& b) {
  std::set<MultiIndex> keys;
  for (const auto& [alpha, c] : a.terms()) keys.insert(alpha);
  for (const auto& [alpha, c] : b.terms()) keys.insert(alpha);
  double err = 0.0;
  for (const auto& alpha : keys) err = std::max(err, std::abs(a.coefficient(alpha) - b.coefficient(alpha)));
  return err;
}

StatReport runtime_gate(const std::string& what, double seconds, double budget) {
  StatReport r = upper_gate(what + " runtime seconds", seconds, budget);
  return r;
}

void append(std::vector<StatReport>& to, std::vector<StatReport> from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace

GridSize parse_grid(const std::string& text) {
  if (text == "small") return GridSize::small;
  if (text == "full") return GridSize::full;
  throw std::invalid_argument("grid must be 'small' or 'full', got '" + text + "'");
}

std::string to_string(GridSize grid) { return grid == GridSize::small ? "small" : "full"; }

bool SuiteResult::passed() const {
  auto ok = [](const StatReport& r) { return r.pass; };
  return std::all_of(reports.begin(), reports.end(), ok) &&
         std::all_of(timings.begin(), timings.end(), ok);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"poisson", "antisym",    "stationarity",
                                                 "qv",      "bg-scaling", "kernel"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "poisson") return poisson_suite(options);
  if (name == "antisym") return antisym_suite(options);
  if (name == "stationarity") return stationarity_suite(options);
  if (name == "qv") return qv_suite(options);
  if (name == "bg-scaling") return bg_scaling_suite(options);
  if (name == "kernel") return kernel_suite(options);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

// ------------------------------------------------------------------ poisson

SuiteResult poisson_suite(const SuiteOptions& options) {
  const auto start = Clock::now();
  SuiteResult res;
  res.suite = "poisson";
  CounterRng rng(options.seed, kPoissonStream);
  auto uniform_int = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  {
    const auto t0 = Clock::now();
    constexpr int kFunctionals = 1000;
    const int cutoffs[] = {4, 8, 16, 32};
    double worst = 0.0;
    for (int i = 0; i < kFunctionals; ++i) {
      const int N = cutoffs[i % 4];
      const ChaosFunctional phi = random_functional(N, 4, uniform_int(1, 16), rng);
      worst = std::max(worst, max_coefficient_error(apply_generator(solve_poisson(phi)), phi));
    }
    StatReport r = upper_gate("poisson round trip max coefficient error", worst, 1e-13);
    r.ensemble = kFunctionals;
    res.reports.push_back(std::move(r));
    res.timings.push_back(runtime_gate("poisson round trip", seconds_since(t0), 10.0));
  }

  {
    ChaosFunctional mono(3);
    const MultiIndex alpha = MultiIndex::from_modes({2, -3});
    mono.add(alpha, 1.0);
    const cplx eig = apply_generator(mono).coefficient(alpha);
    res.reports.push_back(tolerance_gate("generator eigenvalue of [eta_2 eta_-3]", eig.real(),
                                         -13.0, 0.0));

    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
      const int N = uniform_int(1, 32);
      std::vector<int> modes;
      const int n = uniform_int(1, 6);
      long long expected = 0;
      for (int j = 0; j < n; ++j) {
        int k = uniform_int(1, N);
        if (rng.next_u32() & 1u) k = -k;
        modes.push_back(k);
        expected -= static_cast<long long>(k) * k;
      }
      ChaosFunctional f(N);
      const MultiIndex a = MultiIndex::from_modes(std::span<const int>(modes));
      f.add(a, 1.0);
      const ChaosFunctional g = apply_generator(f);
      if (g.size() != 1 || g.coefficient(a) != cplx(static_cast<double>(expected), 0.0)) {
        ++mismatches;
      }
    }
    StatReport r = tolerance_gate("generator eigenvalues of random monomials (mismatches)",
                                  mismatches, 0.0, 0.0);
    r.ensemble = 100;
    res.reports.push_back(std::move(r));
  }

  {
    bool threw = false;
    ChaosFunctional constant(4);
    constant.add(MultiIndex{}, 1.0);
    try {
      (void)solve_poisson(constant);
    } catch (const std::domain_error&) {
      threw = true;
    }
    StatReport r;
    r.name = "poisson rejects an order-0 component";
    r.pass = threw;
    res.reports.push_back(std::move(r));
  }

  {
    const std::vector<Polynomial> gs = {Polynomial({0.0, 0.0, 1.0}), Polynomial({0.0, 0.0, 0.0, 1.0}),
                                        Polynomial({3.0, 0.0, -6.0, 0.0, 1.0})};
    const std::vector<int> cutoffs =
        options.grid == GridSize::small ? std::vector<int>{4, 8} : std::vector<int>{4, 8, 16};
    const int samples = options.grid == GridSize::small ? 5 : 20;
    for (const auto& g : gs) {
      for (int N : cutoffs) {
        for (int ell : {1, 2}) {
          const ChaosFunctional psi =
              solve_poisson(chaos_expand(g, N, TestFunction::monomial(-ell)));
          double worst = 0.0;
          for (int s = 0; s < samples; ++s) {
            const FourierField eta = sample_mu_eps(N, rng);
            const cplx a = evaluate_complex(psi, eta);
            const cplx b = poisson_by_semigroup(g, N, ell, eta);
            worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
          }
          StatReport r = upper_gate("poisson solution equals semigroup integral, G=" +
                                        g.to_string(),
                                    worst, 1e-9);
          r.N = N;
          r.ell = ell;
          r.ensemble = static_cast<std::size_t>(samples);
          res.reports.push_back(std::move(r));
        }
      }
    }
  }

  {
    const Polynomial h2({-1.0, 0.0, 1.0});
    const std::vector<int> cutoffs =
        options.grid == GridSize::small ? std::vector<int>{8, 16} : std::vector<int>{8, 16, 32};
    std::vector<double> constants;
    for (int N : cutoffs) {
      const ItoTrickResult it = ito_trick_check(h2, N, 1, 1.0, 200, options.seed + N, options.threads);
      StatReport r = upper_gate("ito trick constant", it.constant, 16.0);
      r.std_error = it.std_error / it.energy;
      r.N = N;
      r.ell = 1;
      r.ensemble = 200;
      r.detail = "sup_moment=" + format_double(it.sup_moment) + " energy=" + format_double(it.energy);
      constants.push_back(it.constant);
      res.reports.push_back(std::move(r));
    }
    const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
    res.reports.push_back(upper_gate("ito trick constant spread over N", *hi / *lo, 4.0));
  }

  res.seconds = seconds_since(start);
  return res;
}

// ------------------------------------------------------------------ antisym

SuiteResult antisym_suite(const SuiteOptions& options) {
  const auto start = Clock::now();
  SuiteResult res;
  res.suite = "antisym";
  const std::vector<Polynomial> fs = {Polynomial({0.0, 0.0, 1.0}), Polynomial({0.0, 0.0, 0.0, 1.0}),
                                      Polynomial({0.0, 0.0, -3.0, 0.0, 1.0})};
  const int divergence_samples = options.grid == GridSize::small ? 20 : 100;

  for (const auto& f : fs) {
    for (int N : {16, 64}) {
      CounterRng rng(options.seed, kAntisymStream + static_cast<std::uint64_t>(N));
      DriftEvaluator ev(N, f, hermite_coeffs(f, 1)[1]);
      double worst_ratio = 0.0;
      double worst_div = 0.0;
      for (int i = 0; i < 100; ++i) {
        FourierField u = sample_mu_eps(N, rng);
        u *= 0.25 + 2.0 * rng.uniform();
        worst_ratio = std::max(worst_ratio, antisymmetry_check(u, ev).ratio);
        if (i < divergence_samples) {
          const DivergenceCheck d = divergence_check(u, ev);
          worst_div = std::max(worst_div, std::abs(d.divergence) / d.scale);
        }
      }
      StatReport a = upper_gate("antisymmetry |<B(u),u>| / |u|^2, F=" + f.to_string(),
                                worst_ratio, 1e-9);
      a.N = N;
      a.ensemble = 100;
      res.reports.push_back(std::move(a));
      StatReport d = upper_gate("divergence / scale, F=" + f.to_string(), worst_div, 1e-5);
      d.N = N;
      d.ensemble = static_cast<std::size_t>(divergence_samples);
      res.reports.push_back(std::move(d));
    }
  }

  const std::size_t mc = options.grid == GridSize::small ? 4000 : 20000;
  for (const auto& f : {fs[0], fs[1]}) {
    CounterRng rng(options.seed, kAntisymStream + 7);
    const ChaosFunctional phi = random_functional(8, 2, 4, rng, true);
    const ChaosFunctional psi = random_functional(8, 2, 4, rng, true);
    StatReport r = antisymmetry_mc(f, 8, phi, psi, mc, options.seed + 11);
    r.detail = "F=" + f.to_string();
    res.reports.push_back(std::move(r));
  }

  res.seconds = seconds_since(start);
  res.timings.push_back(runtime_gate("antisym", res.seconds, 30.0));
  return res;
}

// ------------------------------------------------------------- stationarity

SuiteResult stationarity_suite(const SuiteOptions& options) {
  const auto start = Clock::now();
  SuiteResult res;
  res.suite = "stationarity";

  SimConfig base;
  base.name = "stationarity";
  base.N = 16;
  base.F = Polynomial({0.0, 0.0, 1.0});
  base.T = 0.5;
  base.seed = options.seed;
  if (options.config) {
    base.N = options.config->N;
    base.F = options.config->F;
    base.T = options.config->T;
    base.seed = options.config->seed;
  }
  base.record_drift = false;
  base.record_noise = false;
  base.noise_variance_scale = options.noise_variance_scale;
  base.dt = 0.0;
  constexpr std::size_t kEnsemble = 400;
  constexpr std::int64_t kSamples = 64;
  const double n2 = static_cast<double>(base.N) * base.N;

  SimConfig coarse = base;
  coarse.dt = 1.0 / (4.0 * n2);
  coarse.finalize();
  SimConfig fine = base;
  fine.dt = 1.0 / (8.0 * n2);
  fine.finalize();
  const Snapshots c = collect_snapshots(coarse, kEnsemble, std::max<std::int64_t>(1, coarse.steps() / kSamples),
                                        options.threads, 0);
  const Snapshots f = collect_snapshots(fine, kEnsemble, std::max<std::int64_t>(1, fine.steps() / kSamples),
                                        options.threads, kEnsemble);
  append(res.reports, richardson_second_moments(c, f));

  SimConfig ou = coarse;
  ou.F = Polynomial({0.0});
  ou.finalize();
  const Snapshots o = collect_snapshots(ou, kEnsemble, std::max<std::int64_t>(1, ou.steps() / kSamples),
                                        options.threads, 2 * kEnsemble);
  for (auto r : second_moment_reports(o)) {
    r.name = "ornstein-uhlenbeck " + r.name;
    res.reports.push_back(std::move(r));
  }
  StationarityOptions so;
  for (auto r : stationarity_report(o, so)) {
    r.name = "ornstein-uhlenbeck " + r.name;
    res.reports.push_back(std::move(r));
  }

  res.seconds = seconds_since(start);
  res.timings.push_back(runtime_gate("stationarity", res.seconds, 300.0));
  return res;
}

// ----------------------------------------------------------------------- qv

SuiteResult qv_suite(const SuiteOptions& options) {
  const auto start = Clock::now();
  SuiteResult res;
  res.suite = "qv";
  QvStudyOptions q;
  q.seed = options.seed;
  if (options.config) {
    q.N = options.config->N;
    q.F = options.config->F;
    q.T = options.config->T;
    q.dt = options.config->effective_dt();
    q.seed = options.config->seed;
  }
  QvStudyResult study = qv_study(q);
  res.reports = study.gates;
  res.qv = std::move(study);
  res.seconds = seconds_since(start);
  return res;
}

// --------------------------------------------------------------- bg-scaling

BgStudyOptions bg_study_options(GridSize grid, std::uint64_t seed, int threads) {
  BgStudyOptions o;
  o.seed = seed;
  o.threads = threads;
  o.T = 2.0;
  o.ensemble = 200;
  o.ells = grid == GridSize::small ? std::vector<int>{1} : std::vector<int>{1, 2};
  return o;
}

SuiteResult bg_scaling_suite(const SuiteOptions& options) {
  const auto start = Clock::now();
  SuiteResult res;
  res.suite = "bg-scaling";
  BgStudyOptions o = bg_study_options(options.grid, options.seed, options.threads);
  o.c2_override = options.c2_override;
  const BgStudyResult study = bg_scaling_study(o);
  res.reports = study.gates;
  res.bg_points = study.points;

  // For F = x² the variant B residual vanishes at M = N.
  if (o.F == Polynomial({0.0, 0.0, 1.0}) && !o.c2_override) {
    double worst = 0.0;
    for (const auto& p : study.points) {
      if (p.variant == BgVariant::B && p.M == p.N) worst = std::max(worst, p.constant);
    }
    res.reports.push_back(upper_gate("bg B residual at M = N, F=x^2 (variance / bound)", worst, 1e-20));
  }
  res.seconds = seconds_since(start);
  res.timings.push_back(runtime_gate("bg-scaling", res.seconds, 1200.0));
  return res;
}

// ------------------------------------------------------------------- kernel

SuiteResult kernel_suite(const SuiteOptions& options) {
  const auto start = Clock::now();
  SuiteResult res;
  res.suite = "kernel";
  CounterRng rng(options.seed, kKernelStream);
  for (int M = 16; M <= 512; M *= 2) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = 2.0 * std::numbers::pi * rng.uniform() - std::numbers::pi;
      worst = std::max(worst, std::abs(covariance_kernel(M, x) - covariance_kernel_direct(M, x)));
    }
    StatReport a = upper_gate("kernel closed form vs direct sum", worst, 1e-9);
    a.M = M;
    a.ensemble = 1000;
    res.reports.push_back(std::move(a));

    const KernelBoundReport k = kernel_bound_check(M);
    StatReport b = upper_gate("kernel double integral relative error",
                              std::abs(k.double_integral - k.exact_double_integral) /
                                  k.exact_double_integral,
                              1e-8);
    b.M = M;
    b.detail = "integral=" + format_double(k.double_integral) +
               " exact=" + format_double(k.exact_double_integral);
    res.reports.push_back(std::move(b));
    StatReport c = upper_gate("kernel sup |kernel| / 2M", k.max_over_2m, 1.0 + 1e-12);
    c.M = M;
    c.detail = "fitted_constant=" + format_double(k.fitted_constant);
    res.reports.push_back(std::move(c));
  }
  res.seconds = seconds_since(start);
  return res;
}

// ------------------------------------------------------------------- output

void write_bg_points(std::ostream& out, const std::vector<BgPoint>& points) {
  CsvWriter csv(out, {"variant", "N", "M", "ell", "separation", "variance", "std_error", "bound",
                      "plain_bound", "constant", "ensemble"});
  for (const auto& p : points) {
    csv.cell(std::string_view(p.variant == BgVariant::A ? "A" : "B"))
        .cell(p.N)
        .cell(p.M)
        .cell(p.ell)
        .cell(p.separation)
        .cell(p.variance)
        .cell(p.std_error)
        .cell(p.bound)
        .cell(p.plain_bound)
        .cell(p.constant)
        .cell(p.ensemble);
    csv.end_row();
  }
}

void write_qv_levels(std::ostream& out, const QvStudyResult& qv) {
  CsvWriter csv(out, {"level", "mesh", "qv_martingale", "qv_antisymmetric"});
  for (std::size_t j = 0; j < qv.martingale.x.size(); ++j) {
    csv.cell(j)
        .cell(qv.martingale.x[j])
        .cell(qv.martingale.y[j])
        .cell(j < qv.antisymmetric.y.size() ? qv.antisymmetric.y[j] : kNoTarget);
    csv.end_row();
  }
}

}  // namespace wasb
