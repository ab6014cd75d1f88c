#include <cmath>
#include <vector>

#include <boost/math/distributions/beta.hpp>

#include "asa/error.hpp"
#include "asa/experiment.hpp"

namespace asa {

DecayFit decay_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidParameter("decay_fit: abscissa and series differ in length");
  }
  std::vector<double> xs;
  std::vector<double> logs;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) {
      xs.push_back(x[i]);
      logs.push_back(std::log(y[i]));
    }
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  if (n < 3) {
    throw InsufficientData("decay_fit needs at least 3 positive points, got " +
                           std::to_string(n));
  }

  Eigen::MatrixXd design(n, 2);
  design.col(0) = Eigen::Map<const Eigen::VectorXd>(xs.data(), n);
  design.col(1).setOnes();
  const Eigen::Map<const Eigen::VectorXd> target(logs.data(), n);
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);

  const double mean = target.mean();
  const double ss_tot = (target.array() - mean).square().sum();
  const double ss_res = (target - design * coef).squaredNorm();

  DecayFit fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  // A flat series has nothing to explain.
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.points = static_cast<int>(n);
  return fit;
}

DecayFit decay_fit(std::span<const double> y) {
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
  return decay_fit(x, y);
}

Interval binomial_interval(long successes, long trials, double confidence) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw InvalidParameter("binomial_interval: need 0 <= successes <= trials, trials > 0");
  }
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  Interval ci;
  ci.lo = successes == 0
              ? 0.0
              : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1),
                                      alpha / 2);
  ci.hi = successes == trials
              ? 1.0
              : boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k),
                                      1 - alpha / 2);
  return ci;
}

}  // namespace asa
