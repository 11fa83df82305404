#include "boxdim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "boxdim/errors.hpp"

namespace boxdim {
namespace {

constexpr double kMinLog = -744.0;
constexpr double kMaxLog = 709.0;
constexpr double kNegligible = 1e-17;
constexpr int kQuietPanels = 4;

double panel(const std::function<double(double)>& f, double a, double b,
             const QuadratureOptions& opts) {
    auto g = [&](double s) {
        const double x = std::exp(s);
        const double v = f(x);
        if (!std::isfinite(v)) throw ModelInvalidError("integrand is not finite at x = " + std::to_string(x));
        return v * x;
    };
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, a, b, 12, opts.rel_tol, &err);
    if (!std::isfinite(v)) throw ModelInvalidError("integral is not finite");
    return v;
}

// Walks panels from `start` in direction `dir` (+1 / -1) until `limit`.
// `open_end` marks a limit that is the image of 0 or +inf rather than a
// finite endpoint, in which case geometric tail extrapolation is allowed.
double sweep(const std::function<double(double)>& f, double start, double limit, int dir,
             bool open_end, double scale_hint, const QuadratureOptions& opts) {
    double sum = 0.0;
    double comp = 0.0;
    int quiet = 0;
    int visited = 0;
    double prev = 0.0;
    double last = 0.0;
    double s = start;
    while (dir > 0 ? s < limit : s > limit) {
        const double next = dir > 0 ? std::min(s + 1.0, limit) : std::max(s - 1.0, limit);
        const double p = dir > 0 ? panel(f, s, next, opts) : panel(f, next, s, opts);
        // Neumaier summation
        const double t = sum + p;
        comp += std::abs(sum) >= std::abs(p) ? (sum - t) + p : (p - t) + sum;
        sum = t;
        ++visited;
        prev = last;
        last = p;
        const double ref = std::max(std::abs(sum + comp), std::abs(scale_hint));
        if (std::abs(p) <= kNegligible * ref) {
            ++quiet;
        } else {
            quiet = 0;
        }
        if (visited >= opts.min_panels && quiet >= kQuietPanels) return sum + comp;
        s = next;
    }
    if (open_end && last != 0.0) {
        const double ref = std::max(std::abs(sum + comp), std::abs(scale_hint));
        if (std::abs(last) > 1e-12 * ref) {
            const double r = prev != 0.0 ? last / prev : 1.0;
            if (!(r > 0.0 && r < 0.999)) throw ModelInvalidError("integral diverges");
            comp += last * r / (1.0 - r);
        }
    }
    return sum + comp;
}

}  // namespace

double integrate_log_scale(const std::function<double(double)>& f, double lo, double hi,
                           double anchor, const QuadratureOptions& opts) {
    if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("integrate_log_scale: need 0 <= lo < hi");
    const bool open_lo = lo == 0.0;
    const bool open_hi = std::isinf(hi);
    const double s_lo = open_lo ? kMinLog : std::log(lo);
    const double s_hi = open_hi ? kMaxLog : std::log(hi);
    double s_a = std::log(anchor > 0.0 && std::isfinite(anchor) ? anchor : 1.0);
    s_a = std::clamp(s_a, s_lo, s_hi);
    const double up = sweep(f, s_a, s_hi, +1, open_hi, 0.0, opts);
    const double down = sweep(f, s_a, s_lo, -1, open_lo, up, opts);
    return up + down;
}

}  // namespace boxdim
