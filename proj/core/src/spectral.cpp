#include "wasb/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wasb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

// Per-size plans are created once (the FFTW planner is not thread-safe) and
// executed through the new-array interface on thread-local buffers.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::unique_ptr<double, FftwFree> real(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, FftwFree> freq(fftw_alloc_complex(n / 2 + 1));
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(n, real.get(), freq.get(), FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_1d(n, freq.get(), real.get(), FFTW_ESTIMATE);
    if (p.forward == nullptr || p.inverse == nullptr) {
      throw std::runtime_error("FFTW planning failed for size " + std::to_string(n));
    }
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

struct Workspace {
  int n = 0;
  std::unique_ptr<double, FftwFree> real;
  std::unique_ptr<fftw_complex, FftwFree> freq;
};

Workspace& workspace(int n) {
  thread_local std::map<int, Workspace> spaces;
  auto& ws = spaces[n];
  if (ws.n != n) {
    ws.n = n;
    ws.real.reset(fftw_alloc_real(n));
    ws.freq.reset(fftw_alloc_complex(n / 2 + 1));
  }
  return ws;
}

void check_grid(int grid_size) {
  if (grid_size < 2 || grid_size % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 2, got " +
                                std::to_string(grid_size));
  }
}

}  // namespace

FourierField::FourierField(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative Fourier cutoff");
  coeffs_.assign(static_cast<std::size_t>(cutoff), cplx{});
}

FourierField::FourierField(int cutoff, std::vector<cplx> positive_modes)
    : coeffs_(std::move(positive_modes)) {
  if (static_cast<int>(coeffs_.size()) != cutoff) {
    throw std::invalid_argument("coefficient count does not match cutoff");
  }
}

FourierField FourierField::mode(int cutoff, int k, cplx value) {
  FourierField f(cutoff);
  if (k == 0 || std::abs(k) > cutoff) return f;
  f.at(std::abs(k)) = k > 0 ? value : std::conj(value);
  return f;
}

cplx& FourierField::at(int k) {
  if (k < 1 || k > cutoff()) throw std::out_of_range("mode index outside 1..N");
  return coeffs_[static_cast<std::size_t>(k - 1)];
}

const cplx& FourierField::at(int k) const {
  if (k < 1 || k > cutoff()) throw std::out_of_range("mode index outside 1..N");
  return coeffs_[static_cast<std::size_t>(k - 1)];
}

FourierField& FourierField::operator+=(const FourierField& other) {
  if (other.cutoff() > cutoff()) coeffs_.resize(other.coeffs_.size());
  for (int k = 1; k <= other.cutoff(); ++k) coeffs_[k - 1] += other.coeffs_[k - 1];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
  if (other.cutoff() > cutoff()) coeffs_.resize(other.coeffs_.size());
  for (int k = 1; k <= other.cutoff(); ++k) coeffs_[k - 1] -= other.coeffs_[k - 1];
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(double s, FourierField a) { return a *= s; }

double GridField::node(int j, int grid_size) { return kTwoPi * j / grid_size; }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

int default_grid_size(int cutoff) { return next_pow2(std::max(4 * cutoff, 4)); }

int alias_free_grid_size(int cutoff, int degree) {
  const int needed = (std::max(degree, 1) + 1) * cutoff + 1;
  return std::max(next_pow2(needed), default_grid_size(cutoff));
}

FourierField project(const FourierField& field, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative Fourier cutoff");
  FourierField out(cutoff);
  const int common = std::min(cutoff, field.cutoff());
  for (int k = 1; k <= common; ++k) out.at(k) = field.at(k);
  return out;
}

FourierField project(const GridField& grid, int cutoff) {
  const int available = grid.size() / 2 - 1;
  FourierField full = from_grid(grid, std::min(cutoff, available));
  return project(full, cutoff);
}

FourierField derivative(const FourierField& field) {
  FourierField out(field.cutoff());
  for (int k = 1; k <= field.cutoff(); ++k) out.at(k) = cplx(0.0, k) * field.at(k);
  return out;
}

cplx inner_product(const FourierField& f, const FourierField& g) {
  const int common = std::min(f.cutoff(), g.cutoff());
  cplx sum{};
  for (int k = 1; k <= common; ++k) {
    sum += f(k) * g(-k) + f(-k) * g(k);
  }
  return sum;
}

double l2_norm_squared(const FourierField& field) {
  double sum = 0.0;
  for (const auto& c : field.coeffs()) sum += std::norm(c);
  return 2.0 * sum;
}

bool in_lp_block(int k, int q) noexcept {
  const int a = std::abs(k);
  if (q == -1) return a <= 1;
  if (q < 0 || q > 30) return false;
  return a > (1 << q) && a <= (1 << (q + 1));
}

FourierField lp_block(const FourierField& field, int q) {
  FourierField out(field.cutoff());
  for (int k = 1; k <= field.cutoff(); ++k) {
    if (in_lp_block(k, q)) out.at(k) = field.at(k);
  }
  return out;
}

double sobolev_norm(const FourierField& field, double s) {
  double sum = 0.0;
  for (int k = 1; k <= field.cutoff(); ++k) {
    sum += 2.0 * std::pow(static_cast<double>(k), 2.0 * s) * std::norm(field.at(k));
  }
  return std::sqrt(sum);
}

FourierField phase_shift(const FourierField& field, double shift) {
  FourierField out(field.cutoff());
  for (int k = 1; k <= field.cutoff(); ++k) {
    out.at(k) = std::polar(1.0, -k * shift) * field.at(k);
  }
  return out;
}

void grid_to_spectrum(std::span<const double> samples, std::span<cplx> spectrum) {
  const int n = static_cast<int>(samples.size());
  check_grid(n);
  if (static_cast<int>(spectrum.size()) != n / 2 + 1) {
    throw std::invalid_argument("spectrum buffer must hold G/2 + 1 entries");
  }
  const PlanPair plan = PlanCache::instance().get(n);
  Workspace& ws = workspace(n);
  std::copy(samples.begin(), samples.end(), ws.real.get());
  fftw_execute_dft_r2c(plan.forward, ws.real.get(), ws.freq.get());
  const double scale = std::sqrt(kTwoPi) / n;
  for (int k = 0; k <= n / 2; ++k) {
    spectrum[k] = cplx(ws.freq.get()[k][0], ws.freq.get()[k][1]) * scale;
  }
}

void spectrum_to_grid(std::span<const cplx> spectrum, std::span<double> samples) {
  const int n = static_cast<int>(samples.size());
  check_grid(n);
  if (static_cast<int>(spectrum.size()) != n / 2 + 1) {
    throw std::invalid_argument("spectrum buffer must hold G/2 + 1 entries");
  }
  const PlanPair plan = PlanCache::instance().get(n);
  Workspace& ws = workspace(n);
  const double scale = 1.0 / std::sqrt(kTwoPi);
  for (int k = 0; k <= n / 2; ++k) {
    ws.freq.get()[k][0] = spectrum[k].real() * scale;
    ws.freq.get()[k][1] = spectrum[k].imag() * scale;
  }
  fftw_execute_dft_c2r(plan.inverse, ws.freq.get(), ws.real.get());
  std::copy(ws.real.get(), ws.real.get() + n, samples.begin());
}

GridField to_grid(const FourierField& field, int grid_size) {
  if (!is_pow2(grid_size) || grid_size < 2 * field.cutoff() + 2) {
    throw std::invalid_argument("grid size " + std::to_string(grid_size) +
                                " must be a power of two >= 2N+2 = " +
                                std::to_string(2 * field.cutoff() + 2));
  }
  std::vector<cplx> spectrum(static_cast<std::size_t>(grid_size / 2 + 1));
  for (int k = 1; k <= field.cutoff(); ++k) spectrum[k] = field.at(k);
  GridField grid{std::vector<double>(static_cast<std::size_t>(grid_size))};
  spectrum_to_grid(spectrum, grid.samples);
  return grid;
}

FourierField from_grid(const GridField& grid, int cutoff) {
  const int n = grid.size();
  check_grid(n);
  if (cutoff < 0) cutoff = n / 2 - 1;
  if (2 * cutoff + 1 > n) {
    throw std::invalid_argument("cutoff " + std::to_string(cutoff) +
                                " not resolvable on a grid of " + std::to_string(n));
  }
  std::vector<cplx> spectrum(static_cast<std::size_t>(n / 2 + 1));
  grid_to_spectrum(grid.samples, spectrum);
  FourierField out(cutoff);
  for (int k = 1; k <= cutoff; ++k) out.at(k) = spectrum[k];
  return out;
}

}  // namespace wasb
