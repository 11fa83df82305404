#include "boxdim/special.hpp"

#include <cmath>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "boxdim/errors.hpp"

namespace boxdim {

double gamma_fn(double x) { return std::tgamma(x); }

double lower_incomplete_gamma(double a, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::tgamma_lower(a, x);
}

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw DomainError("E1 requires x > 0");
    if (x > 700.0) return 0.0;
    return boost::math::expint(1, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile requires 0 < p < 1");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace boxdim
