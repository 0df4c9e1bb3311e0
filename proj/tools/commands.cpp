#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "wasb/config.hpp"
#include "wasb/csv.hpp"
#include "wasb/hermite.hpp"
#include "wasb/manifest.hpp"
#include "wasb/parallel.hpp"
#include "wasb/simulator.hpp"
#include "wasb/suites.hpp"
#include "wasb/trajectory_io.hpp"

namespace wasb::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << data;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

fs::path output_dir(const CommonOptions& common) {
  const fs::path dir = common.out.value_or(fs::path("."));
  fs::create_directories(dir);
  return dir;
}

std::string safe_name(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out.empty() ? "run" : out;
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw UsageError("manifest entry '" + key + "': expected a number, got '" + value + "'");
  }
  return v;
}

std::vector<Manifest::Entry> sim_entries(const SimConfig& cfg, const std::string& prefix) {
  std::vector<Manifest::Entry> out;
  for (auto [k, v] : parse_key_values(cfg.canonical_text())) out.emplace_back(prefix + k, v);
  return out;
}

void add_output(Manifest& m, const fs::path& dir, const std::string& file) {
  m.outputs.emplace_back(file, sha256_file(dir / file));
}

std::string join_args(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
  return s;
}

// Parameters of the verify-like commands, recoverable from their manifests.
struct Plan {
  std::string suite;
  SuiteOptions options;
};

Plan make_plan(const CommonOptions& common, const VerifyOptions& verify) {
  Plan plan;
  plan.suite = verify.suite;
  std::optional<std::string> grid;
  std::optional<std::uint64_t> seed;
  if (!common.config.empty()) {
    const std::string text = read_file(common.config);
    const bool manifest = is_manifest_text(text);
    const Manifest m = manifest ? Manifest::parse(text) : Manifest{};
    if (manifest && m.command != "simulate") {
      std::string sim_text;
      for (const auto& [k, v] : m.config) {
        if (k == "suite") {
          if (!plan.suite.empty() && plan.suite != v) {
            throw UsageError("manifest is for suite '" + v + "', not '" + plan.suite + "'");
          }
          plan.suite = v;
        } else if (k == "grid") {
          grid = v;
        } else if (k == "noise_variance_scale") {
          plan.options.noise_variance_scale = parse_double(k, v);
        } else if (k == "c2") {
          plan.options.c2_override = parse_double(k, v);
        } else if (k.starts_with("sim.")) {
          sim_text += k.substr(4) + " = " + v + "\n";
        } else {
          throw UsageError("unknown manifest config entry '" + k + "'");
        }
      }
      seed = m.seed;
      if (!sim_text.empty()) plan.options.config = parse_sim_config(sim_text);
    } else {
      plan.options.config = parse_sim_config(text);
    }
  }
  if (common.grid) grid = common.grid;
  if (common.seed) seed = common.seed;
  plan.options.grid = parse_grid(grid.value_or("small"));
  plan.options.seed = seed.value_or(1);
  plan.options.threads = common.threads;
  if (verify.noise_variance_scale) plan.options.noise_variance_scale = *verify.noise_variance_scale;
  if (verify.c2) plan.options.c2_override = verify.c2;
  if (!(plan.options.noise_variance_scale > 0.0)) {
    throw UsageError("noise variance scale must be positive");
  }
  return plan;
}

Manifest plan_manifest(const Plan& plan, const std::string& command) {
  Manifest m;
  m.name = plan.suite;
  m.command = command;
  m.version = std::string(code_version());
  m.seed = plan.options.seed;
  m.config.emplace_back("suite", plan.suite);
  m.config.emplace_back("grid", to_string(plan.options.grid));
  if (plan.options.noise_variance_scale != 1.0) {
    m.config.emplace_back("noise_variance_scale", format_double(plan.options.noise_variance_scale));
  }
  if (plan.options.c2_override) m.config.emplace_back("c2", format_double(*plan.options.c2_override));
  if (plan.options.config) {
    for (auto& e : sim_entries(*plan.options.config, "sim.")) m.config.push_back(std::move(e));
  }
  return m;
}

void print_summary(const SuiteResult& res, std::ostream& out) {
  for (const auto& r : res.reports) {
    if (!r.pass) {
      out << "FAIL " << r.name << " estimate=" << format_double(r.estimate)
          << " threshold=" << format_double(r.threshold);
      if (r.N) out << " N=" << r.N;
      if (r.M) out << " M=" << r.M;
      if (r.ell) out << " ell=" << r.ell;
      if (!std::isnan(r.separation)) out << " separation=" << format_double(r.separation);
      if (!r.detail.empty()) out << " (" << r.detail << ")";
      out << '\n';
    }
  }
  for (const auto& t : res.timings) {
    out << (t.pass ? "time " : "FAIL time ") << t.name << ' ' << format_double(t.estimate)
        << " budget " << format_double(t.threshold) << '\n';
  }
  const std::size_t total = res.reports.size() + res.timings.size();
  const std::size_t passed = count_passed(res.reports) + count_passed(res.timings);
  out << res.suite << ": " << passed << '/' << total << " gates passed\n";
}

std::string reports_csv(const std::vector<StatReport>& reports) {
  std::ostringstream s;
  write_reports(s, reports);
  return s.str();
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BlowupError& e) {
    err << "error: " << e.what() << '\n';
    return kBlowup;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace

// ----------------------------------------------------------------- simulate

int cmd_simulate(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (common.config.empty()) throw UsageError("simulate needs --config");
    const std::string text = read_file(common.config);
    SimConfig cfg = parse_sim_config(text);
    if (common.seed) {
      cfg.seed = *common.seed;
      cfg.finalize();
    }
    const fs::path dir = output_dir(common);
    const std::string stem = safe_name(cfg.name);

    struct Written {
      std::string file;
      TerminalState terminal;
      std::int64_t blowup_step;
    };
    const auto written = parallel_map(static_cast<std::size_t>(cfg.ensemble), common.threads,
                                      [&](std::size_t i) {
                                        const Trajectory traj = simulate(cfg, i);
                                        char suffix[32];
                                        std::snprintf(suffix, sizeof suffix, "_%04zu.wasb", i);
                                        const std::string file = stem + suffix;
                                        write_trajectory(dir / file, traj);
                                        return Written{file, traj.terminal, traj.blowup_step};
                                      });

    Manifest m;
    m.name = cfg.name;
    m.command = "simulate";
    m.version = std::string(code_version());
    m.seed = cfg.seed;
    m.config = parse_key_values(cfg.canonical_text());
    m.inputs.emplace_back(fs::path(common.config).filename().string(), sha256_hex(text));
    int blowups = 0;
    for (std::size_t i = 0; i < written.size(); ++i) {
      add_output(m, dir, written[i].file);
      if (written[i].terminal == TerminalState::blowup) {
        ++blowups;
        err << "trajectory " << i << ": blow-up at step " << written[i].blowup_step << '\n';
      }
    }
    const std::string manifest_file = stem + ".manifest";
    write_file(dir / manifest_file, m.to_text());
    out << "wrote " << written.size() << " trajectories and " << manifest_file << " to "
        << dir.string() << '\n';
    return blowups > 0 ? kBlowup : kOk;
  });
}

// ------------------------------------------------------------------ hermite

int cmd_hermite(const CommonOptions& common, const std::string& coefficients, int nmax,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Polynomial f = Polynomial::parse(coefficients);
    if (nmax < 0) throw UsageError("--nmax must be non-negative");
    const HermiteSpectrum hc = hermite_coeffs(f, nmax);
    std::ostringstream csv_text;
    CsvWriter csv(csv_text, {"n", "c_n"});
    for (int n = 0; n <= nmax; ++n) {
      csv.cell(n).cell(hc[n]);
      csv.end_row();
    }
    out << csv_text.str();
    if (common.out) {
      const fs::path dir = output_dir(common);
      write_file(dir / "hermite.csv", csv_text.str());
      Manifest m;
      m.name = "hermite";
      m.command = "hermite";
      m.version = std::string(code_version());
      m.config.emplace_back("F", f.to_string());
      m.config.emplace_back("nmax", std::to_string(nmax));
      add_output(m, dir, "hermite.csv");
      write_file(dir / "hermite.manifest", m.to_text());
    }
    if (!hc.converged) {
      err << "warning: Hermite coefficients did not converge under quadrature refinement\n";
    }
    return kOk;
  });
}

// ------------------------------------------------------------------- verify

int cmd_verify(const CommonOptions& common, const VerifyOptions& verify, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const Plan plan = make_plan(common, verify);
    if (plan.suite.empty()) {
      throw UsageError("verify needs a suite: " + join_args(suite_names()));
    }
    if (std::find(suite_names().begin(), suite_names().end(), plan.suite) == suite_names().end()) {
      throw UsageError("unknown suite '" + plan.suite + "'; expected one of " +
                       join_args(suite_names()));
    }
    const SuiteResult res = run_suite(plan.suite, plan.options);
    const fs::path dir = output_dir(common);
    Manifest m = plan_manifest(plan, "verify");
    const std::string csv_file = "verify_" + plan.suite + ".csv";
    write_file(dir / csv_file, reports_csv(res.reports));
    add_output(m, dir, csv_file);
    if (!res.bg_points.empty()) {
      std::ostringstream s;
      write_bg_points(s, res.bg_points);
      write_file(dir / "bg_points.csv", s.str());
      add_output(m, dir, "bg_points.csv");
    }
    if (res.qv) {
      std::ostringstream s;
      write_qv_levels(s, *res.qv);
      write_file(dir / "qv_levels.csv", s.str());
      add_output(m, dir, "qv_levels.csv");
    }
    write_file(dir / ("verify_" + plan.suite + ".manifest"), m.to_text());
    print_summary(res, out);
    return res.passed() ? kOk : kGateFailed;
  });
}

// ----------------------------------------------------------------------- qv

int cmd_qv(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    VerifyOptions v;
    v.suite = "qv";
    const Plan plan = make_plan(common, v);
    const SuiteResult res = qv_suite(plan.options);
    const fs::path dir = output_dir(common);
    Manifest m = plan_manifest(plan, "qv");
    std::ostringstream levels;
    write_qv_levels(levels, *res.qv);
    write_file(dir / "qv_levels.csv", levels.str());
    add_output(m, dir, "qv_levels.csv");
    write_file(dir / "qv_gates.csv", reports_csv(res.reports));
    add_output(m, dir, "qv_gates.csv");
    write_file(dir / "qv.manifest", m.to_text());
    out << levels.str();
    print_summary(res, out);
    return res.passed() ? kOk : kGateFailed;
  });
}

// --------------------------------------------------------------- bg-scaling

int cmd_bg_scaling(const CommonOptions& common, const VerifyOptions& verify, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    VerifyOptions v = verify;
    v.suite = "bg-scaling";
    const Plan plan = make_plan(common, v);
    const SuiteResult res = bg_scaling_suite(plan.options);
    const fs::path dir = output_dir(common);
    Manifest m = plan_manifest(plan, "bg-scaling");
    std::ostringstream points;
    write_bg_points(points, res.bg_points);
    write_file(dir / "bg_points.csv", points.str());
    add_output(m, dir, "bg_points.csv");
    write_file(dir / "bg_gates.csv", reports_csv(res.reports));
    add_output(m, dir, "bg_gates.csv");
    write_file(dir / "bg-scaling.manifest", m.to_text());
    print_summary(res, out);
    return res.passed() ? kOk : kGateFailed;
  });
}

// ------------------------------------------------------------------- report

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

}  // namespace

int cmd_report(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (files.empty()) throw UsageError("report needs at least one CSV file");
    std::size_t all_passed = 0, all_total = 0;
    for (const auto& file : files) {
      std::istringstream in(read_file(file));
      std::string line;
      if (!std::getline(in, line)) throw std::runtime_error("'" + file + "' is empty");
      const auto header = split_csv_line(line);
      const auto name_col = std::find(header.begin(), header.end(), "name");
      const auto pass_col = std::find(header.begin(), header.end(), "pass");
      if (name_col == header.end() || pass_col == header.end()) {
        throw std::runtime_error("'" + file + "' has no name/pass columns");
      }
      const auto ni = static_cast<std::size_t>(name_col - header.begin());
      const auto pi = static_cast<std::size_t>(pass_col - header.begin());
      std::size_t passed = 0, total = 0;
      std::vector<std::string> failed;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
          throw std::runtime_error("'" + file + "': row with " + std::to_string(cells.size()) +
                                   " cells, expected " + std::to_string(header.size()));
        }
        ++total;
        if (cells[pi] == "pass") {
          ++passed;
        } else {
          failed.push_back(cells[ni]);
        }
      }
      out << file << ": " << passed << '/' << total << " passed\n";
      for (const auto& f : failed) out << "  FAIL " << f << '\n';
      all_passed += passed;
      all_total += total;
    }
    out << "total: " << all_passed << '/' << all_total << " passed\n";
    return all_passed == all_total && all_total > 0 ? kOk : kGateFailed;
  });
}

}  // namespace wasb::cli
