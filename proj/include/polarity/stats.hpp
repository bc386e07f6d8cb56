#ifndef POLARITY_STATS_HPP
#define POLARITY_STATS_HPP

#include <span>
#include <string>

namespace polarity {

enum class Sidedness { OneSided, TwoSided };

struct StatResult {
  std::string test;      // "pearson", "t_one_sample", "welch_two_sample"
  double statistic = 0;  // r or t
  double p_value = 1.0;
  std::size_t n = 0;
  double df = 0.0;
  Sidedness sidedness = Sidedness::TwoSided;
};

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (double precision, ~1e-14 accuracy).
double incomplete_beta(double a, double b, double x);

// Upper-tail probability P(T >= t) for Student's t with df degrees.
double student_t_sf(double t, double df);

// Sample Pearson correlation with a t-transform p-value (two-sided).
// Throws DegenerateStatError on zero variance, ArgumentError for n < 3.
StatResult pearson(std::span<const double> xs, std::span<const double> ys);

// One-sample t-test of mean(values) against mu0.
StatResult t_test_one_sample(std::span<const double> values, double mu0, Sidedness sidedness);

// Welch's unequal-variance two-sample test (one-sided: mean(xs) > mean(ys)).
StatResult t_test_welch(std::span<const double> xs, std::span<const double> ys,
                        Sidedness sidedness);

}  // namespace polarity

#endif  // POLARITY_STATS_HPP
