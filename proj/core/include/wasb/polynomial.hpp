#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wasb {

/// Real polynomial a_0 + a_1 x + ... + a_d x^d, the public form of the
/// nonlinearities F and G.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  /// Parses "0,0,1" or "[0, 0, 1]".
  static Polynomial parse(std::string_view text);

  double operator()(double x) const noexcept;

  /// Degree after trimming trailing zeros; -1 for the zero polynomial.
  int degree() const noexcept;
  const std::vector<double>& coefficients() const noexcept { return a_; }
  double coefficient(int i) const noexcept {
    return i >= 0 && i < static_cast<int>(a_.size()) ? a_[i] : 0.0;
  }

  Polynomial derivative() const;
  bool is_even() const noexcept;
  bool is_odd() const noexcept;

  /// this - c·x
  Polynomial minus_linear(double c) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> a_;
};

}  // namespace wasb
