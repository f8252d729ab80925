#pragma once

// Brute-force reference implementations used only by the tests.

#include <vector>

#include "hetnet/netmodel.hpp"

namespace oracle {

/// 2F1(a, b; a + 1; z) for -1 < a < 0, z <= 0, from
/// 1 - a * int_0^1 t^(a-1) ((1 - z t)^(-b) - 1) dt.
double hyp2f1_shifted_c(double a, double b, double z);

/// Euler integral for c > b > 0, z <= 0.
double hyp2f1_euler(double a, double b, double c, double z);

/// exp(-(pi lambda_2 / (d/lambda)) int_{-d/lambda}^{d/lambda} int_r^{R_L}
///   (1 - (1 + n s G(w) / (N v^alpha))^(-N)) v dv dw), integrated adaptively
/// in both variables with the angular range split at the array nulls.
double laplace_tier2(int n, double s, double r, const hetnet::Scenario& scn);

/// Asymptotic Kolmogorov-Smirnov p-value of a sample against a CDF.
template <class Cdf>
double ks_pvalue(std::vector<double> sample, Cdf cdf);

double kolmogorov_q(double lambda);

}  // namespace oracle

#include <algorithm>
#include <cmath>

template <class Cdf>
double oracle::ks_pvalue(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max({d, f - k / n, (k + 1) / n - f});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}
