#include "stalloc/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stalloc {

Interval wilson(long successes, long n, double z) {
  if (n <= 0 || successes < 0 || successes > n)
    throw std::invalid_argument("wilson: need 0 <= successes <= n, n > 0");
  double p = static_cast<double>(successes) / static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = p + z2 / (2.0 * n);
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  // Rounding can push the endpoints a hair outside [0,1] at the extremes;
  // a probability interval should never report that.
  return Interval{std::max(0.0, (center - half) / denom),
                  std::min(1.0, (center + half) / denom)};
}

LogisticFit fitLogistic(const std::vector<double>& x, const std::vector<long>& successes,
                        const std::vector<long>& trials) {
  const std::size_t m = x.size();
  if (successes.size() != m || trials.size() != m)
    throw std::invalid_argument("fitLogistic: mismatched input lengths");
  LogisticFit fit;
  if (m < 2) return fit;

  // Start from a least-squares line through the clamped empirical logits.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double p = (successes[i] + 0.5) / (trials[i] + 1.0);
    double logit = std::log(p / (1.0 - p));
    sx += x[i];
    sy += logit;
    sxx += x[i] * x[i];
    sxy += x[i] * logit;
  }
  double det = m * sxx - sx * sx;
  if (det == 0.0) return fit;
  double b = (m * sxy - sx * sy) / det;
  double a = (sy - b * sx) / m;

  double haa = 0, hab = 0, hbb = 0;  // keep the last information matrix
  bool ok = false;
  for (int iter = 0; iter < 60; ++iter) {
    double ga = 0, gb = 0;
    haa = hab = hbb = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double eta = a + b * x[i];
      double p = 1.0 / (1.0 + std::exp(-eta));
      double w = trials[i] * p * (1.0 - p);
      double r = successes[i] - trials[i] * p;
      ga += r;
      gb += r * x[i];
      haa += w;
      hab += w * x[i];
      hbb += w * x[i] * x[i];
    }
    double hdet = haa * hbb - hab * hab;
    if (!(hdet > 1e-12) || !std::isfinite(hdet)) return fit;
    double da = (hbb * ga - hab * gb) / hdet;
    double db = (haa * gb - hab * ga) / hdet;
    a += da;
    b += db;
    if (!std::isfinite(a) || !std::isfinite(b) || std::fabs(a) > 1e8 || std::fabs(b) > 1e8)
      return fit;
    if (std::fabs(da) < 1e-10 && std::fabs(db) < 1e-10) {
      ok = true;
      break;
    }
  }
  if (!ok || !(b > 0.0)) return fit;

  fit.converged = true;
  fit.intercept = a;
  fit.slope = b;
  fit.mid = -a / b;
  // Delta method on mid = -a/b with the inverse information as covariance.
  double hdet = haa * hbb - hab * hab;
  double vaa = hbb / hdet, vab = -hab / hdet, vbb = haa / hdet;
  double da = -1.0 / b, db = a / (b * b);
  double var = da * da * vaa + 2.0 * da * db * vab + db * db * vbb;
  double se = var > 0.0 ? std::sqrt(var) : 0.0;
  fit.midLo = fit.mid - 1.96 * se;
  fit.midHi = fit.mid + 1.96 * se;
  return fit;
}

CovarianceEstimate covarianceWithSE(const std::vector<std::uint8_t>& xs,
                                    const std::vector<std::uint8_t>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("covarianceWithSE: need equal-length nonempty sequences");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double cov = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) cov += (xs[i] - mx) * (ys[i] - my);
  cov /= n;
  // Variance of the per-pair products around the covariance.
  double v = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double t = (xs[i] - mx) * (ys[i] - my) - cov;
    v += t * t;
  }
  v /= n;
  return CovarianceEstimate{cov, std::sqrt(v / n)};
}

}  // namespace stalloc
