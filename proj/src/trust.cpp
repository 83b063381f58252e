#include "argus/trust.hpp"

#include <cmath>
#include <string>

#include "argus/error.hpp"

namespace argus::trust {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

}  // namespace

double trust_of_probability(double p, const WeightingParams& params) {
  check_unit(p, "probability");
  check_gamma(params.gamma);
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double g = params.gamma;
  if (g == 1.0) return p;
  const double a = std::pow(p, g);
  const double b = std::pow(1.0 - p, g);
  return a / std::pow(a + b, 1.0 / g);
}

double trust_derivative(double p, const WeightingParams& params) {
  check_gamma(params.gamma);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("derivative is defined on (0, 1) only");
  const double g = params.gamma;
  const double a = std::pow(p, g);
  const double b = std::pow(1.0 - p, g);
  const double s = a + b;
  // d/dp log tau = g/p - (p^(g-1) - (1-p)^(g-1)) / s
  const double dlog = g / p - (a / p - b / (1.0 - p)) / s;
  return trust_of_probability(p, params) * dlog;
}

double probability_of_trust(double tau, const WeightingParams& params) {
  check_unit(tau, "trust");
  check_gamma(params.gamma);
  if (params.gamma < kMinInvertibleGamma) {
    throw NonMonotoneGamma(params.gamma, kMinInvertibleGamma);
  }
  if (tau == 0.0) return 0.0;
  if (tau == 1.0) return 1.0;
  if (params.gamma == 1.0) return tau;

  // g(p) = trust(p) - tau is negative at 0 and positive at 1.
  double lo = 0.0;
  double hi = 1.0;
  double p = tau;
  double best = p;
  double best_residual = 1.0;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const double residual = trust_of_probability(p, params) - tau;
    if (std::abs(residual) < best_residual) {
      best_residual = std::abs(residual);
      best = p;
    }
    if (std::abs(residual) <= params.tolerance) return p;
    if (residual < 0.0) {
      lo = p;
    } else {
      hi = p;
    }
    const double slope = trust_derivative(p, params);
    double next = p - residual / slope;
    if (!(std::abs(slope) >= 1e-12) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == p) break;
    p = next;
  }
  if (best_residual <= params.tolerance) return best;
  throw ConvergenceFailure("trust inversion did not converge for tau=" + std::to_string(tau) +
                           ", gamma=" + std::to_string(params.gamma));
}

}  // namespace argus::trust
