#pragma once

#include <cstdint>
#include <vector>

namespace stalloc {

struct Interval {
  double lo, hi;
};

// Wilson score interval for a binomial proportion (default 95%).
Interval wilson(long successes, long n, double z = 1.96);

// Two-parameter logistic curve p(x) = 1/(1+exp(-(a+b x))) fitted by maximum
// likelihood to binomial counts (Newton iterations on the score equations).
// `mid` is the x where the fitted curve crosses 1/2, with a delta-method
// confidence interval. `converged` is false when the iteration diverges or
// the data give no finite slope (e.g. perfectly separated counts).
struct LogisticFit {
  bool converged = false;
  double intercept = 0.0, slope = 0.0;
  double mid = 0.0, midLo = 0.0, midHi = 0.0;
};

LogisticFit fitLogistic(const std::vector<double>& x, const std::vector<long>& successes,
                        const std::vector<long>& trials);

// Sample covariance of two paired binary sequences with a plug-in standard
// error (sqrt of the estimated variance of the covariance estimator). Both
// are exactly zero for degenerate (constant) inputs.
struct CovarianceEstimate {
  double cov = 0.0, se = 0.0;
};

CovarianceEstimate covarianceWithSE(const std::vector<std::uint8_t>& xs,
                                    const std::vector<std::uint8_t>& ys);

}  // namespace stalloc
