#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace argus::stats {

// Ranks 1..n; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Rank vector of an ordering: ordering[k] = i means item i has rank k + 1.
std::vector<double> ranks_from_ordering(std::span<const std::size_t> ordering);

// Spearman's rho as the Pearson correlation of average ranks, which stays
// exact in the presence of ties. Throws LengthMismatch for unequal or
// shorter-than-two inputs and DegenerateInput when either side is all ties.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// rho between two orderings of the same items.
double spearman_rho_orderings(std::span<const std::size_t> a, std::span<const std::size_t> b);

double pearson(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b), by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

enum class Alternative { kTwoSided, kGreater, kLess };

struct TTestResult {
  double t;
  double df;
  double p_value;
  double mean_difference;
};

// Paired Student's t-test on the differences after - before. kGreater tests
// for a positive mean difference. All-zero differences give t = 0, p = 1;
// constant non-zero differences throw DegenerateInput.
TTestResult paired_t_test(std::span<const double> before, std::span<const double> after,
                          Alternative alternative = Alternative::kTwoSided);

}  // namespace argus::stats
