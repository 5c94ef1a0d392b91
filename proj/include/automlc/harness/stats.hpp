#ifndef AUTOMLC_HARNESS_STATS_HPP
#define AUTOMLC_HARNESS_STATS_HPP

#include <span>
#include <stdexcept>

namespace automlc {

struct SampleTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WelchResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

/// Regularized incomplete beta function I_x(a, b), |error| <= ~1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom; two-sided p. Both samples need >= 2 values. When both sample
/// variances are zero, p is 1 for equal means and 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double sample_mean(std::span<const double> v);
double sample_variance(std::span<const double> v);    // n-1 divisor
double population_stddev(std::span<const double> v);  // N divisor

}  // namespace automlc

#endif
