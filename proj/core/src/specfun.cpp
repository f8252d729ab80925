#include "hetnet/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hetnet::specfun {

namespace {

constexpr int kMaxSeriesTerms = 10'000;
constexpr double kSeriesTolerance = 1e-15;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

bool is_near_integer(double x) { return std::abs(x - std::nearbyint(x)) < 1e-9; }

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

// Gauss series sum_{k>=first} (a)_k (b)_k / ((c)_k k!) z^k for |z| < 1.
double gauss_series(double a, double b, double c, double z, bool skip_leading) {
  double term = 1.0;
  double sum = skip_leading ? 0.0 : 1.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= kSeriesTolerance * std::abs(sum) && std::abs(ratio) < 1.0) return sum;
  }
  throw EvaluationError("2F1 series did not converge within 10000 terms (a=" + std::to_string(a) +
                        ", b=" + std::to_string(b) + ", c=" + std::to_string(c) +
                        ", z=" + std::to_string(z) + ")");
}

void check_arguments(double c, double z) {
  if (is_nonpositive_integer(c)) throw std::domain_error("2F1: c must not be a non-positive integer");
  if (!(z <= 0.0)) throw std::domain_error("2F1: only z <= 0 is supported");
}

double pfaff(double a, double b, double c, double z) {
  const double w = z / (z - 1.0);
  return std::pow(1.0 - z, -b) * gauss_series(c - a, b, c, w, false);
}

double inverse_argument(double a, double b, double c, double z) {
  const double x = -z;
  const double iz = 1.0 / z;
  const double gc = std::tgamma(c);
  const double first = gc * std::tgamma(b - a) * reciprocal_gamma(b) * reciprocal_gamma(c - a) *
                       std::pow(x, -a) * gauss_series(a, a - c + 1.0, a - b + 1.0, iz, false);
  const double second = gc * std::tgamma(a - b) * reciprocal_gamma(a) * reciprocal_gamma(c - b) *
                        std::pow(x, -b) * gauss_series(b, b - c + 1.0, b - a + 1.0, iz, false);
  return first + second;
}

double evaluate(double a, double b, double c, double z) {
  if (z >= -0.5) return gauss_series(a, b, c, z, false);
  if (z >= -9.0 || is_near_integer(a - b)) return pfaff(a, b, c, z);
  return inverse_argument(a, b, c, z);
}

}  // namespace

double QuadratureRule::chebyshev_weight() const { return std::numbers::pi / order; }

double gauss_2f1(double a, double b, double c, double z) {
  check_arguments(c, z);
  if (z == 0.0) return 1.0;
  return evaluate(a, b, c, z);
}

double gauss_2f1_minus_one(double a, double b, double c, double z) {
  check_arguments(c, z);
  if (z == 0.0) return 0.0;
  if (z >= -0.5) return gauss_series(a, b, c, z, true);
  return evaluate(a, b, c, z) - 1.0;
}

double f_y(double y, int n_p) {
  return f_y_shifted(y, n_p) - 1.0 / y;
}

double f_y_shifted(double y, int n_p) {
  if (!(y > 0.0)) throw std::domain_error("f_y: y must be positive");
  if (n_p < 1) throw std::domain_error("f_y: Nakagami order must be >= 1");
  const double n = n_p;
  // (1 - (1+y)^-(N-1)) / y  ->  N - 1 as y -> 0
  double value = n * std::log1p(1.0 / y) - std::expm1(-(n - 1.0) * std::log1p(y)) / y;
  for (int m = 1; m < n_p; ++m) {
    value -= n / (std::pow(1.0 + y, n_p - m) * (n_p - m));
  }
  return value;
}

QuadratureRule chebyshev_rule(int u) {
  if (u < 1) throw std::domain_error("chebyshev_rule: order must be >= 1");
  QuadratureRule rule;
  rule.order = u;
  rule.nodes.reserve(u);
  rule.weights.reserve(u);
  const double step = std::numbers::pi / u;
  for (int k = 1; k <= u; ++k) {
    // cos((2k-1)pi/(2u)) written as a sine so the middle node is exactly 0
    const double angle = std::numbers::pi * (u - 2 * k + 1) / (2.0 * u);
    rule.nodes.push_back(std::sin(angle));
    rule.weights.push_back(step * std::cos(angle));
  }
  return rule;
}

double alzer_eta(int n_p) {
  if (n_p < 1) throw std::domain_error("alzer_eta: order must be >= 1");
  return n_p * std::exp(-std::lgamma(n_p + 1.0) / n_p);
}

double array_gain(double omega, int n_elem) {
  if (n_elem < 1) throw std::domain_error("array_gain: element count must be >= 1");
  const double s = std::sin(std::numbers::pi * omega);
  if (std::abs(s) < 1e-9) return 1.0;
  const double ratio = std::sin(std::numbers::pi * n_elem * omega) / (n_elem * s);
  return std::min(1.0, ratio * ratio);
}

}  // namespace hetnet::specfun
