#include "boxdim/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "boxdim/errors.hpp"
#include "boxdim/rng.hpp"
#include "boxdim/special.hpp"

namespace boxdim {

void NeumaierSum::add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
}

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    NeumaierSum sum;
    for (double x : xs) sum.add(x);
    s.mean = sum.value() / static_cast<double>(s.n);
    if (s.n > 1) {
        NeumaierSum sq;
        for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
        s.variance = sq.value() / static_cast<double>(s.n - 1);
    }
    s.sd = std::sqrt(s.variance);
    s.se_mean = s.sd / std::sqrt(static_cast<double>(s.n));
    return s;
}

double central_abs_moment(const std::vector<double>& xs, double center, double p) {
    if (xs.empty()) return 0.0;
    NeumaierSum sum;
    for (double x : xs) sum.add(std::pow(std::abs(x - center), p));
    return sum.value() / static_cast<double>(xs.size());
}

double ks_statistic(std::vector<double> sample) {
    if (sample.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = normal_cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical_5pct(std::size_t n) { return 1.36 / std::sqrt(static_cast<double>(n)); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& weights) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw DomainError("linear_fit: need at least two paired points");
    const bool weighted = !weights.empty();
    if (weighted && weights.size() != n) throw DomainError("linear_fit: weight count mismatch");
    NeumaierSum sw, sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weighted ? weights[i] : 1.0;
        sw.add(w);
        sx.add(w * x[i]);
        sy.add(w * y[i]);
    }
    const double xm = sx.value() / sw.value();
    const double ym = sy.value() / sw.value();
    NeumaierSum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weighted ? weights[i] : 1.0;
        sxx.add(w * (x[i] - xm) * (x[i] - xm));
        sxy.add(w * (x[i] - xm) * (y[i] - ym));
    }
    if (!(sxx.value() > 0.0)) throw DomainError("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = ym - fit.slope * xm;
    double scale = 1.0;
    if (!weighted) {
        if (n < 3) {
            scale = 0.0;
        } else {
            NeumaierSum rss;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = y[i] - fit.intercept - fit.slope * x[i];
                rss.add(r * r);
            }
            scale = rss.value() / static_cast<double>(n - 2);
        }
    }
    fit.se_slope = std::sqrt(scale / sxx.value());
    fit.se_intercept = std::sqrt(scale * (1.0 / sw.value() + xm * xm / sxx.value()));
    return fit;
}

double bootstrap_variance_se(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed) {
    const std::size_t n = xs.size();
    if (n < 2 || resamples < 2) throw DomainError("bootstrap_variance_se: need n >= 2 and resamples >= 2");
    std::vector<double> stats(resamples);
    std::vector<double> draw(n);
    for (std::size_t b = 0; b < resamples; ++b) {
        CounterStream rng(seed, b, StreamRole::bootstrap);
        for (auto& v : draw) {
            auto k = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
            v = xs[std::min(k, n - 1)];
        }
        stats[b] = summarize(draw).variance;
    }
    return summarize(stats).sd;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace boxdim
