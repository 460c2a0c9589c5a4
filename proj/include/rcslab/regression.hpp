#pragma once

#include <span>

namespace rcs {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 points with
/// distinct x. r_squared is 1 when y has zero variance.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct DecayFit {
  double rate = 0.0;       // -d log y / dt
  double r_squared = 1.0;
};

/// Least-squares slope of log y against t over the trailing `window` fraction
/// of the samples (window in (0, 1]); throws DomainError on y <= 0.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> y,
                        double window = 0.5);

/// Slope of log y against log x; every entry must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace rcs
