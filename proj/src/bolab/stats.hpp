#pragma once

#include <vector>

namespace bolab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Fit of log(y) against log(x); entries with y <= 0 are dropped.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bolab
