#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace boxdim {

/// Compensated (Neumaier) running sum.
class NeumaierSum {
  public:
    void add(double x);
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased, n − 1 denominator
    double sd = 0.0;
    double se_mean = 0.0;
};
Summary summarize(const std::vector<double>& xs);

/// Mean of |x − center|^p.
double central_abs_moment(const std::vector<double>& xs, double center, double p);

/// sup_x |F_n(x) − Φ(x)| against the standard normal.
double ks_statistic(std::vector<double> sample);
/// Asymptotic 5% critical value, 1.36/√n.
double ks_critical_5pct(std::size_t n);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;
    double se_intercept = 0.0;
};
/// Weighted least squares y ≈ intercept + slope·x.  With weights
/// w_i = 1/σ_i² the standard errors are the model-based ones; with
/// empty weights ordinary least squares with residual variance is used.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& weights = {});

/// Bootstrap standard error of the unbiased sample variance.
double bootstrap_variance_se(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed);

/// Runs body(i) for i in [0, n) on `threads` workers.  Callers write into
/// preallocated slots, so results do not depend on scheduling.  The
/// exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace boxdim
