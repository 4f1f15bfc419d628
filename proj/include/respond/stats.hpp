#pragma once

namespace respond::stats {

inline constexpr double kDaysPerMonth = 30.4375;

inline double days_to_months(double days) { return days / kDaysPerMonth; }
inline double months_to_days(double months) { return months * kDaysPerMonth; }

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Quantile of the Beta(a,b) distribution by bisection on incomplete_beta.
double beta_quantile(double p, double a, double b);

// Standard normal quantile (Acklam's rational approximation + one Halley step).
double normal_quantile(double p);

struct Interval {
    double lower;
    double upper;
};

// Exact (Clopper-Pearson) two-sided CI for a binomial proportion.
Interval clopper_pearson(int successes, int n, double conf_level = 0.95);

}  // namespace respond::stats
