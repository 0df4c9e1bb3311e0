#include "wasb/polynomial.hpp"

#include <charconv>
#include <stdexcept>

#include "wasb/csv.hpp"

namespace wasb {

Polynomial::Polynomial(std::vector<double> coefficients) : a_(std::move(coefficients)) {
  while (!a_.empty() && a_.back() == 0.0) a_.pop_back();
}

Polynomial Polynomial::parse(std::string_view text) {
  std::vector<double> coeffs;
  std::string token;
  auto flush = [&] {
    std::size_t b = token.find_first_not_of(" \t");
    std::size_t e = token.find_last_not_of(" \t");
    if (b == std::string::npos) {
      token.clear();
      return;
    }
    const std::string body = token.substr(b, e - b + 1);
    double value = 0.0;
    const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
    if (res.ec != std::errc{} || res.ptr != body.data() + body.size()) {
      throw std::invalid_argument("bad polynomial coefficient '" + body + "'");
    }
    coeffs.push_back(value);
    token.clear();
  };
  for (char ch : text) {
    if (ch == '[' || ch == ']') continue;
    if (ch == ',') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  if (coeffs.empty()) throw std::invalid_argument("empty polynomial");
  return Polynomial(std::move(coeffs));
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int Polynomial::degree() const noexcept { return static_cast<int>(a_.size()) - 1; }

Polynomial Polynomial::derivative() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < a_.size(); ++i) d.push_back(static_cast<double>(i) * a_[i]);
  return Polynomial(std::move(d));
}

bool Polynomial::is_even() const noexcept {
  for (std::size_t i = 1; i < a_.size(); i += 2) {
    if (a_[i] != 0.0) return false;
  }
  return true;
}

bool Polynomial::is_odd() const noexcept {
  for (std::size_t i = 0; i < a_.size(); i += 2) {
    if (a_[i] != 0.0) return false;
  }
  return true;
}

Polynomial Polynomial::minus_linear(double c) const {
  std::vector<double> b = a_;
  if (b.size() < 2) b.resize(2, 0.0);
  b[1] -= c;
  return Polynomial(std::move(b));
}

std::string Polynomial::to_string() const {
  if (a_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (i) out += ',';
    out += format_double(a_[i]);
  }
  return out;
}

}  // namespace wasb
