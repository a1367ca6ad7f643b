#pragma once

#include <span>

namespace bq {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // root-mean-square deviation of the fit
};

/// Least-squares line y = slope * x + intercept. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit of log y against log x. All values must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

} // namespace bq
