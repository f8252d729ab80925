#include "oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "hetnet/specfun.hpp"

namespace oracle {

namespace {

using boost::math::quadrature::gauss_kronrod;

template <class F>
double gk(F f, double lo, double hi, double tol = 1e-12, unsigned depth = 12) {
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, depth, tol);
}

}  // namespace

double hyp2f1_shifted_c(double a, double b, double z) {
  if (!(a > -1.0 && a < 0.0) || z > 0.0) throw std::domain_error("hyp2f1_shifted_c");
  if (z == 0.0) return 1.0;
  // t = w^(1/(1+a)) removes the t^(a-1) endpoint singularity.
  const double p = 1.0 / (1.0 + a);
  auto g = [&](double w) {
    if (w <= 0.0) return -b * z * p;
    const double t = std::pow(w, p);
    return p * -std::expm1(-b * std::log1p(-z * t)) / t;
  };
  // Split where z t ~ -1 so the knee in the integrand is resolved.
  const double knee = std::pow(std::min(1.0, 1.0 / -z), 1.0 + a);
  double integral = gk(g, 0.0, knee);
  if (knee < 1.0) integral += gk(g, knee, 1.0);
  return 1.0 + (-a) * integral;
}

double hyp2f1_euler(double a, double b, double c, double z) {
  if (!(c > b && b > 0.0) || z > 0.0) throw std::domain_error("hyp2f1_euler");
  boost::math::quadrature::tanh_sinh<double> ts;
  // Split at 1/2 and mirror the upper half so both singular endpoints sit at 0.
  auto lower = [&](double t) { return std::pow(t, b - 1) * std::pow(1 - t, c - b - 1) * std::pow(1 - z * t, -a); };
  auto upper = [&](double u) { return std::pow(1 - u, b - 1) * std::pow(u, c - b - 1) * std::pow(1 - z * (1 - u), -a); };
  const double integral = ts.integrate(lower, 0.0, 0.5, 1e-14) + ts.integrate(upper, 0.0, 0.5, 1e-14);
  return integral / boost::math::beta(b, c - b);
}

double laplace_tier2(int n, double s, double r, const hetnet::Scenario& scn) {
  const auto& pico = scn.tier(hetnet::Tier::pico);
  const double rl = scn.blockage().los_radius;
  if (!(r > 0.0 && r <= rl)) throw std::domain_error("oracle::laplace_tier2: r outside (0, R_L]");
  if (s == 0.0 || pico.density == 0.0 || r == rl) return 1.0;
  const int order = pico.nakagami_order;
  const double alpha = pico.pathloss_exp;
  const int elements = pico.n_antennas;
  const double half = scn.antenna_spacing_ratio();

  auto radial = [&](double omega) {
    const double gain = hetnet::specfun::array_gain(omega, elements);
    if (gain == 0.0) return 0.0;
    const double a = n * s * gain / order;
    auto integrand = [&](double v) {
      return -std::expm1(-order * std::log1p(a * std::pow(v, -alpha))) * v;
    };
    // Breakpoint where a v^-alpha = 1 separates the saturated and tail parts.
    const double knee = std::pow(a, 1.0 / alpha);
    if (knee > r && knee < rl) return gk(integrand, r, knee) + gk(integrand, knee, rl);
    return gk(integrand, r, rl);
  };

  // Even in omega; integrate [0, d/lambda] piecewise between nulls k / N.
  double angular = 0.0;
  double lo = 0.0;
  for (int k = 1; lo < half; ++k) {
    const double hi = std::min(half, static_cast<double>(k) / elements);
    angular += gk(radial, lo, hi, 1e-11, 10);
    lo = hi;
  }
  angular *= 2.0;
  return std::exp(-(std::numbers::pi * pico.density / half) * angular);
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace oracle
