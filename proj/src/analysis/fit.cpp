#include "hmlab/analysis/fit.hpp"

#include <algorithm>
#include <cmath>

#include "hmlab/error.hpp"

namespace hmlab::analysis {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("fit arrays differ in length");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw InvalidArgument("line fit needs two points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  if (!(sxx > 0.0)) throw InvalidArgument("line fit needs distinct abscissae");
  LineFit fit;
  fit.count = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_error = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0.0 && y[i] != 0.0) lx.push_back(std::log(x[i])), ly.push_back(std::log(std::abs(y[i])));
  return fit_line(lx, ly);
}

PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y, double p) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("bad power fit input");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double b = std::pow(x[i], p);
    sxx += b * b, sxy += b * y[i];
  }
  if (!(sxx > 0.0)) throw InvalidArgument("degenerate power fit");
  PowerFit fit;
  fit.count = static_cast<int>(x.size());
  fit.coefficient = sxy / sxx;
  if (fit.count > 1) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - fit.coefficient * std::pow(x[i], p);
      rss += r * r;
    }
    fit.standard_error = std::sqrt(rss / (fit.count - 1) / sxx);
  }
  return fit;
}

std::vector<double> sigma_ladder(double sigma0, int count) {
  if (!(sigma0 > 0.0) || count < 1) throw InvalidArgument("bad sigma ladder");
  std::vector<double> out;
  for (int k = count - 1; k >= 0; --k) out.push_back(sigma0 * std::pow(2.0, -0.5 * k));
  return out;
}

}  // namespace hmlab::analysis
