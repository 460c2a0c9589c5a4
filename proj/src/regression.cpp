#include "rcslab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rcslab/params.hpp"

namespace rcs {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> y,
                        double window) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
  if (!(window > 0.0 && window <= 1.0))
    throw std::invalid_argument("fit_decay_rate: window must be in (0, 1]");
  const std::size_t n = t.size();
  std::size_t count = static_cast<std::size_t>(std::ceil(window * static_cast<double>(n)));
  if (count < 2) count = std::min<std::size_t>(2, n);
  const std::size_t first = n - count;
  std::vector<double> tt, ly;
  tt.reserve(count);
  ly.reserve(count);
  for (std::size_t i = first; i < n; ++i) {
    if (!(y[i] > 0.0)) throw DomainError("fit_decay_rate: log of nonpositive value");
    tt.push_back(t[i]);
    ly.push_back(std::log(y[i]));
  }
  const LineFit f = fit_line(tt, ly);
  return {-f.slope, f.r_squared};
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("fit_loglog: log of nonpositive value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace rcs
