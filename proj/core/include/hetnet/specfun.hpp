#pragma once

// Special functions and fixed-order quadrature used by the coverage
// formulas. Only the real, non-positive-argument regimes that the
// interference Laplace transforms need are supported.

#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet::specfun {

/// Raised when a series or iteration fails to converge within its cap.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss-Chebyshev rule of the first kind, with the Chebyshev weight folded
/// into the weights so that apply(g) approximates the plain integral of g
/// over [-1, 1].
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;    // cos((2k-1)pi/(2u)), strictly decreasing
  std::vector<double> weights;  // (pi/u) sqrt(1 - x_k^2)

  /// Weight of the underlying rule for integrals against 1/sqrt(1-x^2).
  double chebyshev_weight() const;

  template <class F>
  double apply(F&& g) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * g(nodes[k]);
    return sum;
  }
};

/// 2F1(a, b; c; z) for z <= 0, relative accuracy ~1e-10.
///
/// |z| <= 1/2 sums the Gauss series directly, -9 <= z < -1/2 goes through
/// the Pfaff transformation, and z < -9 uses the 1/z connection formula
/// (falling back to Pfaff when a - b is an integer).
double gauss_2f1(double a, double b, double c, double z);

/// 2F1(a, b; c; z) - 1 without cancellation for small |z|.
double gauss_2f1_minus_one(double a, double b, double c, double z);

/// The closed-form radial antiderivative used for alpha = 2 pico links:
///   N ln(1 + 1/y) - 1/(y (1+y)^(N-1)) - sum_{m=1}^{N-1} N / ((1+y)^(N-m) (N-m)).
/// Its derivative is (1+y)^(-N) / y^2, so it increases from -inf to 0.
double f_y(double y, int n_p);

/// f_y(y) + 1/y, evaluated stably as y -> 0.
double f_y_shifted(double y, int n_p);

QuadratureRule chebyshev_rule(int u);

/// n (n!)^(-1/n): the Alzer constant of the Gamma-CDF exponential bound.
/// This is the coefficient the pico-tier coverage sum calls eta_L.
double alzer_eta(int n_p);

/// Uniform linear array pattern sin^2(pi N w) / (N^2 sin^2(pi w)), in [0, 1].
double array_gain(double omega, int n_elem);

}  // namespace hetnet::specfun
