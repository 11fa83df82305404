#pragma once

namespace boxdim {

// Thin wrappers so every constant in the project comes from one place.
double gamma_fn(double x);
double lower_incomplete_gamma(double a, double x);  // γ(a, x), unnormalised
double exp_integral_e1(double x);

/// Standard normal CDF.
double normal_cdf(double x);
/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace boxdim
