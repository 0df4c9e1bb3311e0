#pragma once

// WASB1 trajectory files, little-endian:
//   "WASB1" | u32 N | f64 dt | u64 records | u64 seed | u8 flags      (34 bytes)
//   records × N × (f64 re, f64 im)                                     states u_0..u_S
//   records × N × (f64 re, f64 im)                                     drifts, if flag bit 0
// flags bit 1 marks a trajectory that stopped at a blow-up.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wasb/spectral.hpp"

namespace wasb {

struct Trajectory;

inline constexpr std::size_t kTrajectoryHeaderBytes = 34;
inline constexpr std::uint8_t kFlagDrift = 0x1;
inline constexpr std::uint8_t kFlagBlowup = 0x2;

struct TrajectoryFile {
  int N = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint8_t flags = 0;
  std::vector<FourierField> states;
  std::vector<FourierField> drifts;
};

/// Expected file size for the given shape.
std::uintmax_t trajectory_file_bytes(int N, std::uint64_t records, bool with_drift);

void write_trajectory(std::ostream& out, const Trajectory& traj);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);

/// Throws std::runtime_error on a bad magic, truncated data or a drift block
/// whose length does not mirror the state block.
TrajectoryFile read_trajectory(std::istream& in);
TrajectoryFile read_trajectory(const std::filesystem::path& path);

}  // namespace wasb
