#pragma once

#include <vector>

namespace hmlab::analysis {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;  // standard error of the slope
  int count = 0;
};

// Ordinary least squares y = intercept + slope x. Needs two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| against log x, skipping zero entries.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct PowerFit {
  double coefficient = 0.0;
  double standard_error = 0.0;
  int count = 0;
};

// Least squares y = c x^p through the origin.
PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y, double p);

// Geometric ladder sigma0, sigma0/sqrt2, sigma0/2, ... with `count` entries,
// returned in increasing order.
std::vector<double> sigma_ladder(double sigma0, int count);

}  // namespace hmlab::analysis
