#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "wasb/config.hpp"
#include "wasb/csv.hpp"
#include "wasb/manifest.hpp"
#include "wasb/simulator.hpp"
#include "wasb/stats.hpp"
#include "wasb/trajectory_io.hpp"

namespace {

wasb::Trajectory small_trajectory(bool drift) {
  wasb::SimConfig cfg;
  cfg.N = 8;
  cfg.F = wasb::Polynomial({0, 0, 1});
  cfg.T = 64.0 / (4.0 * 64);
  cfg.seed = 3;
  cfg.record_drift = drift;
  cfg.finalize();
  return wasb::simulate(cfg, 0);
}

bool has_problem(const wasb::ConfigError& e, const std::string& needle) {
  return std::any_of(e.problems().begin(), e.problems().end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

TEST(TrajectoryIo, RoundTripWithDrift) {
  const auto traj = small_trajectory(true);
  std::stringstream buf;
  wasb::write_trajectory(buf, traj);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.size(), wasb::trajectory_file_bytes(8, traj.states.size(), true));
  EXPECT_EQ(bytes.size(), 34u + 65u * 8u * 16u * 2u);
  EXPECT_EQ(bytes.substr(0, 5), "WASB1");

  std::stringstream in(bytes);
  const auto file = wasb::read_trajectory(in);
  EXPECT_EQ(file.N, 8);
  EXPECT_EQ(file.dt, traj.dt());
  EXPECT_EQ(file.seed, 3u);
  EXPECT_EQ(file.flags, wasb::kFlagDrift);
  ASSERT_EQ(file.states.size(), traj.states.size());
  for (std::size_t j = 0; j < file.states.size(); ++j) {
    EXPECT_EQ(file.states[j], traj.states[j]);
    EXPECT_EQ(file.drifts[j], traj.drifts[j]);
  }
}

TEST(TrajectoryIo, RoundTripWithoutDrift) {
  const auto traj = small_trajectory(false);
  std::stringstream buf;
  wasb::write_trajectory(buf, traj);
  EXPECT_EQ(buf.str().size(), 34u + 65u * 8u * 16u);
  const auto file = wasb::read_trajectory(buf);
  EXPECT_EQ(file.flags, 0u);
  EXPECT_TRUE(file.drifts.empty());
  EXPECT_EQ(file.states.back(), traj.states.back());
}

TEST(TrajectoryIo, RejectsCorruptFiles) {
  const auto traj = small_trajectory(true);
  std::stringstream buf;
  wasb::write_trajectory(buf, traj);
  const std::string bytes = buf.str();

  std::stringstream truncated(bytes.substr(0, bytes.size() - 7));
  EXPECT_THROW(wasb::read_trajectory(truncated), std::runtime_error);
  std::stringstream header_only(bytes.substr(0, 20));
  EXPECT_THROW(wasb::read_trajectory(header_only), std::runtime_error);
  std::string bad = bytes;
  bad[0] = 'X';
  std::stringstream bad_magic(bad);
  EXPECT_THROW(wasb::read_trajectory(bad_magic), std::runtime_error);
  std::stringstream trailing(bytes + "x");
  EXPECT_THROW(wasb::read_trajectory(trailing), std::runtime_error);
  EXPECT_THROW(wasb::read_trajectory(std::filesystem::path("/nonexistent/x.wasb")), std::runtime_error);
}

TEST(TrajectoryIo, BlowupFlag) {
  wasb::SimConfig cfg;
  cfg.N = 8;
  cfg.F = wasb::Polynomial({0, 0, 1});
  cfg.T = 16.0 / 256;
  cfg.blowup_threshold = 1.0;
  cfg.finalize();
  const auto traj = wasb::simulate(cfg, 0);
  std::stringstream buf;
  wasb::write_trajectory(buf, traj);
  const auto file = wasb::read_trajectory(buf);
  EXPECT_TRUE(file.flags & wasb::kFlagBlowup);
  EXPECT_EQ(file.states.size(), traj.states.size());
}

TEST(Manifest, Sha256KnownAnswers) {
  EXPECT_EQ(wasb::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(wasb::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Manifest, TextRoundTrip) {
  wasb::Manifest m;
  m.name = "run";
  m.command = "simulate";
  m.version = std::string(wasb::code_version());
  m.seed = 17;
  m.config = {{"N", "16"}, {"F", "0,0,1"}, {"T", "0.5s"}};
  m.inputs = {{"run.conf", wasb::sha256_hex("x")}};
  m.outputs = {{"run_0000.wasb", wasb::sha256_hex("y")}};
  const std::string text = m.to_text();
  EXPECT_TRUE(wasb::is_manifest_text(text));
  EXPECT_FALSE(wasb::is_manifest_text("N = 4\n"));
  const auto back = wasb::Manifest::parse(text);
  EXPECT_EQ(back.name, m.name);
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.inputs, m.inputs);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.to_text(), text);
  const auto cfg = wasb::parse_sim_config(text);
  EXPECT_EQ(cfg.N, 16);
  EXPECT_DOUBLE_EQ(cfg.T, 0.5);
}

TEST(Config, ParsesAllKeys) {
  const auto cfg = wasb::parse_sim_config(
      "# comment\n"
      "name = demo\n"
      "N = 16\n"
      "F = [0, 0, 1]\n"
      "T = 0.25s\n"
      "dt = auto\n"
      "seed = 7\n"
      "ensemble = 3\n"
      "record_noise = false\n"
      "scheme = exponential-euler\n");
  EXPECT_EQ(cfg.name, "demo");
  EXPECT_EQ(cfg.N, 16);
  EXPECT_EQ(cfg.F, wasb::Polynomial({0, 0, 1}));
  EXPECT_DOUBLE_EQ(cfg.T, 0.25);
  EXPECT_DOUBLE_EQ(cfg.effective_dt(), 1.0 / 1024);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.ensemble, 3);
  EXPECT_FALSE(cfg.record_noise);
  // canonical text parses back to the same configuration
  const auto again = wasb::parse_sim_config(cfg.canonical_text());
  EXPECT_EQ(again.canonical_text(), cfg.canonical_text());
}

TEST(Config, ReportsEveryProblem) {
  try {
    wasb::parse_sim_config("N = 8\nfoo = 1\nbar = 2\n");
    FAIL() << "expected ConfigError";
  } catch (const wasb::ConfigError& e) {
    EXPECT_TRUE(has_problem(e, "unknown key 'foo'"));
    EXPECT_TRUE(has_problem(e, "unknown key 'bar'"));
    EXPECT_TRUE(has_problem(e, "missing required key 'F'"));
    EXPECT_TRUE(has_problem(e, "missing required key 'T'"));
  }
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(wasb::parse_sim_config("N = 8\nF = 0,0,1\nT = 0.5\n"), wasb::ConfigError);
  EXPECT_THROW(wasb::parse_sim_config("N = eight\nF = 0,0,1\nT = 0.5s\n"), wasb::ConfigError);
  EXPECT_THROW(wasb::parse_sim_config("N = 8\nF = 0,q,1\nT = 0.5s\n"), wasb::ConfigError);
  EXPECT_THROW(wasb::parse_sim_config("N = 8\nF = 0,0,1\nT = 0.5s\nscheme = rk4\n"),
               wasb::ConfigError);
  EXPECT_THROW(wasb::parse_sim_config("N = 8\nF = 0,0,1\nT = 0.5s\nN = 9\n"), wasb::ConfigError);
  EXPECT_THROW(wasb::parse_sim_config("N = 8\nF = 0,0,1\nT = 0.5s\ndt = 0.1s\n"),
               wasb::ConfigError);
  EXPECT_THROW(wasb::parse_key_values("just a line\n"), wasb::ConfigError);
  EXPECT_THROW(wasb::parse_time("T", "1"), wasb::ConfigError);
  EXPECT_DOUBLE_EQ(wasb::parse_time("T", "1.5s"), 1.5);
  EXPECT_TRUE(wasb::parse_bool("x", "true"));
  EXPECT_THROW(wasb::parse_bool("x", "yes please"), wasb::ConfigError);
  EXPECT_THROW(wasb::load_sim_config("/nonexistent/config.conf"), std::exception);
}

TEST(Csv, QuotingAndNumbers) {
  std::ostringstream out;
  wasb::CsvWriter w(out, {"a", "b", "c"});
  w.cell(std::string_view("x,y")).cell(0.1).cell(7);
  w.end_row();
  w.cell(std::string_view("say \"hi\"")).cell(true).cell(-2.5e-300);
  w.end_row();
  EXPECT_EQ(out.str(), "a,b,c\n\"x,y\",0.1,7\n\"say \"\"hi\"\"\",pass,-2.5e-300\n");
  EXPECT_EQ(wasb::format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(std::stod(wasb::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, ReportColumns) {
  std::ostringstream out;
  wasb::write_reports(out, {wasb::upper_gate("g", 0.5, 1.0)});
  const std::string text = out.str();
  const std::string header = text.substr(0, text.find('\n'));
  std::size_t commas = std::count(header.begin(), header.end(), ',');
  EXPECT_EQ(commas + 1, wasb::report_columns().size());
  EXPECT_NE(text.find("pass"), std::string::npos);
}

}  // namespace
