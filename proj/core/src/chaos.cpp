#include "wasb/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wasb/gaussian_field.hpp"

namespace wasb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Coefficients of (x - iy)^a (x + iy)^b / 2^{(a+b)/2} in x^p y^{a+b-p}.
std::vector<cplx> pair_expansion(int a, int b) {
  const int n = a + b;
  std::vector<cplx> out(static_cast<std::size_t>(n + 1), cplx{});
  static const cplx kPowI[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (int j = 0; j <= a; ++j) {
    // (-i)^j = i^{3j}
    const cplx left = binomial(a, j) * kPowI[(3 * j) % 4];
    for (int l = 0; l <= b; ++l) {
      const cplx right = binomial(b, l) * kPowI[l % 4];
      out[static_cast<std::size_t>(n - j - l)] += left * right;
    }
  }
  const double scale = std::pow(2.0, -0.5 * n);
  for (auto& c : out) c *= scale;
  return out;
}

constexpr int kTablePowers = 24;

class PairTable {
 public:
  PairTable() {
    table_.resize((kTablePowers + 1) * (kTablePowers + 1));
    for (int a = 0; a <= kTablePowers; ++a) {
      for (int b = 0; a + b <= kTablePowers; ++b) table_[index(a, b)] = pair_expansion(a, b);
    }
  }
  const std::vector<cplx>& get(int a, int b) const { return table_[index(a, b)]; }

 private:
  static std::size_t index(int a, int b) {
    return static_cast<std::size_t>(a * (kTablePowers + 1) + b);
  }
  std::vector<std::vector<cplx>> table_;
};

const PairTable& pair_table() {
  static const PairTable table;
  return table;
}

}  // namespace

MultiIndex MultiIndex::from_modes(std::span<const int> modes) {
  std::vector<int> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  MultiIndex idx;
  for (int k : sorted) {
    if (k == 0) throw std::invalid_argument("Wick monomial cannot contain the zero mode");
    if (!idx.parts_.empty() && idx.parts_.back().mode == k) {
      ++idx.parts_.back().power;
    } else {
      idx.parts_.push_back({k, 1});
    }
  }
  return idx;
}

MultiIndex MultiIndex::from_modes(std::initializer_list<int> modes) {
  return from_modes(std::span<const int>(modes.begin(), modes.size()));
}

int MultiIndex::order() const noexcept {
  int n = 0;
  for (const auto& p : parts_) n += p.power;
  return n;
}

int MultiIndex::mode_sum() const noexcept {
  int s = 0;
  for (const auto& p : parts_) s += p.mode * p.power;
  return s;
}

long long MultiIndex::mode_square_sum() const noexcept {
  long long s = 0;
  for (const auto& p : parts_) s += static_cast<long long>(p.mode) * p.mode * p.power;
  return s;
}

int MultiIndex::max_abs_mode() const noexcept {
  int m = 0;
  for (const auto& p : parts_) m = std::max(m, std::abs(p.mode));
  return m;
}

int MultiIndex::power_of(int mode) const noexcept {
  for (const auto& p : parts_) {
    if (p.mode == mode) return p.power;
  }
  return 0;
}

double MultiIndex::factorial_weight() const noexcept {
  double w = 1.0;
  for (const auto& p : parts_) w *= factorial(p.power);
  return w;
}

MultiIndex MultiIndex::negated() const {
  MultiIndex out;
  out.parts_.reserve(parts_.size());
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
    out.parts_.push_back({-it->mode, it->power});
  }
  return out;
}

MultiIndex MultiIndex::lowered(int mode) const {
  MultiIndex out = *this;
  for (auto it = out.parts_.begin(); it != out.parts_.end(); ++it) {
    if (it->mode == mode) {
      if (--it->power == 0) out.parts_.erase(it);
      return out;
    }
  }
  throw std::invalid_argument("mode " + std::to_string(mode) + " not in multi-index");
}

std::vector<int> MultiIndex::expanded() const {
  std::vector<int> out;
  for (const auto& p : parts_) out.insert(out.end(), static_cast<std::size_t>(p.power), p.mode);
  return out;
}

ChaosFunctional::ChaosFunctional(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative chaos cutoff");
}

void ChaosFunctional::add(const MultiIndex& alpha, cplx c) {
  if (alpha.max_abs_mode() > cutoff_) {
    throw std::out_of_range("multi-index mode exceeds cutoff " + std::to_string(cutoff_));
  }
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

cplx ChaosFunctional::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? cplx{} : it->second;
}

int ChaosFunctional::max_order() const noexcept {
  int n = 0;
  for (const auto& [alpha, c] : terms_) n = std::max(n, alpha.order());
  return n;
}

bool ChaosFunctional::has_order_zero() const noexcept {
  return terms_.contains(MultiIndex{});
}

bool ChaosFunctional::is_real(double tolerance) const {
  for (const auto& [alpha, c] : terms_) {
    const cplx partner = coefficient(alpha.negated());
    if (std::abs(partner - std::conj(c)) > tolerance * std::max(1.0, std::abs(c))) return false;
  }
  return true;
}

ChaosFunctional& ChaosFunctional::operator+=(const ChaosFunctional& other) {
  cutoff_ = std::max(cutoff_, other.cutoff_);
  for (const auto& [alpha, c] : other.terms_) add(alpha, c);
  return *this;
}

ChaosFunctional& ChaosFunctional::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, c] : terms_) c *= s;
  return *this;
}

ChaosFunctional operator+(ChaosFunctional a, const ChaosFunctional& b) { return a += b; }

ChaosFunctional operator-(ChaosFunctional a, const ChaosFunctional& b) {
  ChaosFunctional nb = b;
  nb *= -1.0;
  return a += nb;
}

ChaosFunctional operator*(cplx s, ChaosFunctional a) { return a *= s; }

TestFunction TestFunction::monomial(int m) {
  TestFunction t;
  t.set(m, 1.0);
  return t;
}

TestFunction TestFunction::from_field(const FourierField& field) {
  TestFunction t;
  for (int k = 1; k <= field.cutoff(); ++k) {
    t.set(k, field(k));
    t.set(-k, field(-k));
  }
  return t;
}

void TestFunction::set(int k, cplx value) {
  if (value == cplx{}) {
    hat_.erase(k);
  } else {
    hat_[k] = value;
  }
}

cplx TestFunction::operator()(int k) const {
  auto it = hat_.find(k);
  return it == hat_.end() ? cplx{} : it->second;
}

namespace {

// Enumerates nondecreasing mode sequences of fixed length whose sum lies in
// `targets` (sorted), pruning on the reachable sum interval.
class MultisetEnumerator {
 public:
  MultisetEnumerator(int cutoff, int order, const std::vector<int>& targets)
      : cutoff_(cutoff), order_(order), targets_(targets) {
    for (int k = -cutoff; k <= cutoff; ++k) {
      if (k != 0) modes_.push_back(k);
    }
    current_.reserve(static_cast<std::size_t>(order));
  }

  template <class Visit>
  void run(Visit&& visit) {
    if (order_ == 0 || modes_.empty()) return;
    recurse(0, 0, visit);
  }

 private:
  bool any_target_in(long long lo, long long hi) const {
    auto it = std::lower_bound(targets_.begin(), targets_.end(), lo);
    return it != targets_.end() && *it <= hi;
  }

  template <class Visit>
  void recurse(std::size_t first, long long partial, Visit& visit) {
    const int remaining = order_ - static_cast<int>(current_.size());
    const int lo_mode = modes_[first];
    if (remaining == 1) {
      auto it = std::lower_bound(targets_.begin(), targets_.end(), partial + lo_mode);
      for (; it != targets_.end() && *it - partial <= cutoff_; ++it) {
        const long long k = *it - partial;
        if (k == 0) continue;
        current_.push_back(static_cast<int>(k));
        visit(current_, static_cast<int>(*it));
        current_.pop_back();
      }
      return;
    }
    for (std::size_t i = first; i < modes_.size(); ++i) {
      const int k = modes_[i];
      const long long lo = partial + static_cast<long long>(remaining) * k;
      const long long hi = partial + k + static_cast<long long>(remaining - 1) * cutoff_;
      if (!any_target_in(lo, hi)) {
        if (lo > targets_.back()) return;
        continue;
      }
      current_.push_back(k);
      recurse(i, partial + k, visit);
      current_.pop_back();
    }
  }

  int cutoff_;
  int order_;
  const std::vector<int>& targets_;
  std::vector<int> modes_;
  std::vector<int> current_;
};

}  // namespace

ChaosFunctional chaos_expand(const HermiteSpectrum& spectrum, int cutoff,
                             const TestFunction& phi, int nmax, ExpandOptions options) {
  if (cutoff < 1) throw std::invalid_argument("chaos_expand requires N >= 1");
  nmax = std::min(nmax, spectrum.nmax);
  const double eps = coupling_epsilon(cutoff);
  ChaosFunctional out(cutoff);

  // K = k_1 + ⋯ + k_n contributes iff φ̂(-K) ≠ 0.
  std::vector<int> targets;
  for (const auto& [k, v] : phi.coefficients()) targets.push_back(-k);
  std::sort(targets.begin(), targets.end());
  if (targets.empty()) return out;

  if (spectrum[0] != 0.0) {
    const cplx zero_mode = phi(0);
    if (zero_mode != cplx{}) out.add(MultiIndex{}, spectrum[0] * std::sqrt(kTwoPi) * zero_mode);
  }
  for (int n = 1; n <= nmax; ++n) {
    const double cn = spectrum[n];
    if (cn == 0.0) continue;
    const double prefactor =
        cn * std::pow(eps, 0.5 * n) * factorial(n) * std::pow(kTwoPi, -0.5 * (n - 1));
    MultisetEnumerator walk(cutoff, n, targets);
    walk.run([&](const std::vector<int>& modes, int sum) {
      if (out.size() >= options.term_budget) {
        throw std::length_error("chaos expansion exceeds term budget of " +
                                std::to_string(options.term_budget));
      }
      const MultiIndex alpha = MultiIndex::from_modes(std::span<const int>(modes));
      out.add(alpha, prefactor / alpha.factorial_weight() * phi(-sum));
    });
  }
  return out;
}

ChaosFunctional chaos_expand(const Polynomial& g, int cutoff, const TestFunction& phi, int nmax,
                             ExpandOptions options) {
  if (nmax < 0) nmax = std::max(g.degree(), 0);
  return chaos_expand(hermite_coeffs(g, nmax), cutoff, phi, nmax, options);
}

cplx evaluate_complex(const ChaosFunctional& phi, const FourierField& eta) {
  int max_mode = 0;
  int max_power = 0;
  for (const auto& [alpha, c] : phi.terms()) {
    max_mode = std::max(max_mode, alpha.max_abs_mode());
    max_power = std::max(max_power, alpha.order());
  }
  if (max_mode > eta.cutoff()) {
    throw std::out_of_range("functional uses mode " + std::to_string(max_mode) +
                            " outside the sample cutoff " + std::to_string(eta.cutoff()));
  }
  // H_j(g^c_k) and H_j(g^s_k) with g^c = √2 Re η_k, g^s = -√2 Im η_k.
  const std::size_t stride = static_cast<std::size_t>(max_power + 1);
  std::vector<double> hc(stride * static_cast<std::size_t>(max_mode + 1));
  std::vector<double> hs(hc.size());
  for (int k = 1; k <= max_mode; ++k) {
    const cplx v = eta.at(k);
    const std::size_t off = stride * static_cast<std::size_t>(k);
    hermite_values(max_power, std::sqrt(2.0) * v.real(), std::span(hc).subspan(off, stride));
    hermite_values(max_power, -std::sqrt(2.0) * v.imag(), std::span(hs).subspan(off, stride));
  }

  const PairTable& table = pair_table();
  cplx total{};
  for (const auto& [alpha, c] : phi.terms()) {
    // Group ±k so each pair (a, b) = (power of η_k, power of η_{-k}) expands
    // into products H_p(g^c_k) H_q(g^s_k).
    struct Pair {
      int k, a, b;
    };
    Pair pairs[kTablePowers + 1];
    int npairs = 0;
    for (const auto& part : alpha.parts()) {
      const int k = std::abs(part.mode);
      int j = 0;
      while (j < npairs && pairs[j].k != k) ++j;
      if (j == npairs) {
        if (npairs == kTablePowers + 1) throw std::length_error("Wick monomial too long");
        pairs[npairs++] = {k, 0, 0};
      }
      (part.mode > 0 ? pairs[j].a : pairs[j].b) += part.power;
    }
    cplx value = 1.0;
    std::vector<cplx> scratch;
    for (int j = 0; j < npairs; ++j) {
      const auto [k, a, b] = pairs[j];
      const int n = a + b;
      const std::vector<cplx>* local = nullptr;
      if (n <= kTablePowers) {
        local = &table.get(a, b);
      } else {
        scratch = pair_expansion(a, b);
        local = &scratch;
      }
      const std::size_t off = stride * static_cast<std::size_t>(k);
      cplx factor{};
      for (int p = 0; p <= n; ++p) {
        const cplx w = (*local)[static_cast<std::size_t>(p)];
        if (w != cplx{}) factor += w * (hc[off + p] * hs[off + n - p]);
      }
      value *= factor;
    }
    total += c * value;
  }
  return total;
}

double evaluate(const ChaosFunctional& phi, const FourierField& eta) {
  return evaluate_complex(phi, eta).real();
}

double second_moment(const ChaosFunctional& phi) {
  double s = 0.0;
  for (const auto& [alpha, c] : phi.terms()) s += std::norm(c) * alpha.factorial_weight();
  return s;
}

ChaosFunctional random_functional(int cutoff, int max_order, int terms, CounterRng& rng,
                                  bool real, bool allow_constant) {
  if (cutoff < 1 || max_order < 1) throw std::invalid_argument("random_functional needs N, order >= 1");
  ChaosFunctional out(cutoff);
  auto uniform_int = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (int t = 0; t < terms; ++t) {
    const int n = uniform_int(allow_constant ? 0 : 1, max_order);
    std::vector<int> modes;
    for (int j = 0; j < n; ++j) {
      int k = uniform_int(1, cutoff);
      if (rng.next_u32() & 1u) k = -k;
      modes.push_back(k);
    }
    const MultiIndex alpha = MultiIndex::from_modes(std::span<const int>(modes));
    const cplx c(rng.normal(), rng.normal());
    if (real) {
      if (alpha.empty()) {
        out.add(alpha, c.real());
      } else {
        out.add(alpha, c);
        out.add(alpha.negated(), std::conj(c));
      }
    } else {
      out.add(alpha, c);
    }
  }
  return out;
}

}  // namespace wasb
