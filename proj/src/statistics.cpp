#include "argus/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "argus/error.hpp"

namespace argus::stats {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> ranks_from_ordering(std::span<const std::size_t> ordering) {
  std::vector<double> ranks(ordering.size(), 0.0);
  for (std::size_t k = 0; k < ordering.size(); ++k) {
    if (ordering[k] >= ordering.size()) throw DomainError("ordering is not a permutation");
    ranks[ordering[k]] = static_cast<double>(k + 1);
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("spearman_rho inputs have lengths " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw LengthMismatch("spearman_rho needs at least two observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  auto all_tied = [](const std::vector<double>& r) {
    return std::all_of(r.begin(), r.end(), [&](double v) { return v == r.front(); });
  };
  if (all_tied(rx) || all_tied(ry)) throw DegenerateInput("all ranks tied");
  return std::clamp(pearson(rx, ry), -1.0, 1.0);
}

double spearman_rho_orderings(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw LengthMismatch("orderings differ in length");
  const auto ra = ranks_from_ordering(a);
  const auto rb = ranks_from_ordering(b);
  return spearman_rho(ra, rb);
}

namespace {

// Continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw ConvergenceFailure("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

namespace {

// P(|T| >= |t|)
double two_sided_tail(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return incomplete_beta(0.5 * df, 0.5, x);
}

}  // namespace

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw DomainError("degrees of freedom must be positive");
  const double tail = 0.5 * two_sided_tail(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(std::span<const double> before, std::span<const double> after,
                          Alternative alternative) {
  if (before.size() != after.size()) throw LengthMismatch("paired samples differ in length");
  const std::size_t n = before.size();
  if (n < 2) throw LengthMismatch("paired t-test needs at least two pairs");
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = after[i] - before[i];
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double df = static_cast<double>(n - 1);

  if (std::all_of(diff.begin(), diff.end(), [](double d) { return d == 0.0; })) {
    const double p = alternative == Alternative::kTwoSided ? 1.0 : 0.5;
    return {0.0, df, p, 0.0};
  }
  if (!(ss > 0.0)) throw DegenerateInput("differences have zero variance");

  const double se = std::sqrt(ss / df / static_cast<double>(n));
  const double t = mean / se;
  double p = 0.0;
  switch (alternative) {
    case Alternative::kTwoSided:
      p = two_sided_tail(t, df);
      break;
    case Alternative::kGreater:
      p = t > 0.0 ? 0.5 * two_sided_tail(t, df) : 1.0 - 0.5 * two_sided_tail(t, df);
      break;
    case Alternative::kLess:
      p = t < 0.0 ? 0.5 * two_sided_tail(t, df) : 1.0 - 0.5 * two_sided_tail(t, df);
      break;
  }
  return {t, df, p, mean};
}

}  // namespace argus::stats
