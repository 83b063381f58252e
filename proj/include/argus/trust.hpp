#pragma once

// Prospect-theory probability weighting between an argument's objective
// probability p and the trust value tau a human reports for it:
//
//   tau(p) = p^g / (p^g + (1 - p)^g)^(1/g)
//
// g = 1 is the identity; smaller g bends the curve further from the diagonal.

namespace argus::trust {

// Below roughly 0.279 the weighting curve stops being monotone, so inversion
// is refused under this threshold.
inline constexpr double kMinInvertibleGamma = 0.3;

struct WeightingParams {
  double gamma = 1.0;
  // Residual |tau(p) - tau| accepted by the inversion.
  double tolerance = 1e-10;
  int max_iterations = 100;
};

// Throws DomainError for p outside [0, 1] or gamma outside (0, 1].
double trust_of_probability(double p, const WeightingParams& params);

// d tau / d p on the open interval (0, 1).
double trust_derivative(double p, const WeightingParams& params);

// Inverse of trust_of_probability: Newton-Raphson from p0 = tau, falling back
// to bisection whenever a step leaves the current bracket or the slope
// vanishes. Throws NonMonotoneGamma when gamma < kMinInvertibleGamma and
// ConvergenceFailure if the residual is still above tolerance when the
// iteration budget runs out.
double probability_of_trust(double tau, const WeightingParams& params);

}  // namespace argus::trust
