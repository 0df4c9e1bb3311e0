#include "wasb/trajectory_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "wasb/simulator.hpp"

namespace wasb {

namespace {

static_assert(std::endian::native == std::endian::little,
              "trajectory files are written in host order, which must be little-endian");

constexpr char kMagic[5] = {'W', 'A', 'S', 'B', '1'};

template <class T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw std::runtime_error("truncated trajectory header");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void put_block(std::ostream& out, const std::vector<FourierField>& fields, int n) {
  std::vector<double> row(static_cast<std::size_t>(2 * n));
  for (const auto& f : fields) {
    for (int k = 1; k <= n; ++k) {
      row[2 * (k - 1)] = f.at(k).real();
      row[2 * (k - 1) + 1] = f.at(k).imag();
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
}

std::vector<FourierField> get_block(std::istream& in, int n, std::uint64_t records) {
  std::vector<FourierField> fields;
  fields.reserve(records);
  std::vector<double> row(static_cast<std::size_t>(2 * n));
  for (std::uint64_t r = 0; r < records; ++r) {
    if (!in.read(reinterpret_cast<char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(double)))) {
      throw std::runtime_error("truncated trajectory data at record " + std::to_string(r));
    }
    FourierField f(n);
    for (int k = 1; k <= n; ++k) f.at(k) = cplx(row[2 * (k - 1)], row[2 * (k - 1) + 1]);
    fields.push_back(std::move(f));
  }
  return fields;
}

}  // namespace

std::uintmax_t trajectory_file_bytes(int N, std::uint64_t records, bool with_drift) {
  const std::uintmax_t block = records * static_cast<std::uintmax_t>(N) * 2 * sizeof(double);
  return kTrajectoryHeaderBytes + block * (with_drift ? 2 : 1);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const int n = traj.config.N;
  const auto records = static_cast<std::uint64_t>(traj.states.size());
  const bool with_drift = traj.drifts.size() == traj.states.size() && records > 0;
  std::uint8_t flags = 0;
  if (with_drift) flags |= kFlagDrift;
  if (traj.terminal == TerminalState::blowup) flags |= kFlagBlowup;
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put<double>(out, traj.dt());
  put<std::uint64_t>(out, records);
  put<std::uint64_t>(out, traj.config.seed);
  put<std::uint8_t>(out, flags);
  put_block(out, traj.states, n);
  if (with_drift) put_block(out, traj.drifts, n);
  if (!out) throw std::runtime_error("failed writing trajectory");
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trajectory(out, traj);
}

TrajectoryFile read_trajectory(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a WASB1 trajectory file");
  }
  TrajectoryFile f;
  f.N = static_cast<int>(get<std::uint32_t>(in));
  f.dt = get<double>(in);
  const auto records = get<std::uint64_t>(in);
  f.seed = get<std::uint64_t>(in);
  f.flags = get<std::uint8_t>(in);
  if (f.N < 1) throw std::runtime_error("trajectory file has N < 1");
  f.states = get_block(in, f.N, records);
  if (f.flags & kFlagDrift) f.drifts = get_block(in, f.N, records);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("trailing bytes after trajectory data");
  }
  return f;
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trajectory(in);
}

}  // namespace wasb
