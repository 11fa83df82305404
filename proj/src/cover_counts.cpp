#include "boxdim/cover_counts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "boxdim/errors.hpp"

namespace boxdim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(const JumpSkeleton& skel, double delta) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (delta < skel.cutoff) throw PrecisionError("delta is below the skeleton cutoff");
}

// Number of m >= 1 with base + m·δ < c, evaluated with the same floating
// expression the comparisons use.
std::int64_t drift_passages(double base, double delta, double c) {
    if (!(c > base + delta)) return 0;
    const double q = std::ceil((c - base) / delta) - 1.0;
    auto m = static_cast<std::int64_t>(std::max(1.0, q));
    while (m > 1 && !(base + static_cast<double>(m) * delta < c)) --m;
    while (base + static_cast<double>(m + 1) * delta < c) ++m;
    return m;
}

std::int64_t greedy_cover(const JumpSkeleton& skel, double delta, bool drop_big) {
    check_delta(skel, delta);
    const double d = skel.effective_drift;
    double base = 0.0;
    double x = 0.0;
    double s = 0.0;
    std::int64_t count = 1;
    auto drift_to = [&](double end) {
        const double c = x + d * (end - s);
        const std::int64_t m = drift_passages(base, delta, c);
        if (m > 0) {
            count += m;
            base = base + static_cast<double>(m) * delta;
        }
        x = c;
        s = end;
    };
    for (const auto& e : skel.events) {
        drift_to(e.time);
        if (drop_big && e.size > delta) continue;
        x += e.size;
        if (x > base + delta) {
            ++count;
            base = x;
        }
    }
    drift_to(skel.horizon);
    return count;
}

// Lattice rows met by the closed value interval [lo, hi].
std::pair<double, double> cell_span(double lo, double hi, double delta) {
    const double k0 = std::floor(lo / delta);
    const double k1 = hi > lo ? std::max(k0, std::ceil(hi / delta) - 1.0) : k0;
    return {k0, k1};
}

}  // namespace

std::int64_t count_N(const JumpSkeleton& skel, double delta) { return greedy_cover(skel, delta, false); }

std::int64_t count_N_truncated(const JumpSkeleton& skel, double delta) {
    return greedy_cover(skel, delta, true);
}

std::int64_t count_M(const JumpSkeleton& skel, double delta) {
    check_delta(skel, delta);
    const double d = skel.effective_drift;
    double last = -kInf;
    double count = 0.0;
    auto segment = [&](double a, double c) {
        const auto [k0, k1] = cell_span(a, c, delta);
        const double start = std::max(k0, last + 1.0);
        if (k1 >= start) count += k1 - start + 1.0;
        last = std::max(last, k1);
    };
    double a = 0.0;
    double s = 0.0;
    for (const auto& e : skel.events) {
        const double c = a + d * (e.time - s);
        segment(a, c);
        a = c + e.size;
        s = e.time;
    }
    segment(a, a + d * (skel.horizon - s));
    return static_cast<std::int64_t>(count);
}

std::int64_t count_big_jumps(const JumpSkeleton& skel, double delta) {
    check_delta(skel, delta);
    return std::count_if(skel.events.begin(), skel.events.end(), [delta](const JumpEvent& e) { return e.size > delta; });
}

double l_stat(const JumpSkeleton& skel, double delta) {
    check_delta(skel, delta);
    return value_at(skel, skel.horizon, PathMode::shortened, delta) / delta;
}

GraphCounts graph_counts(const JumpSkeleton& skel, double delta) {
    check_delta(skel, delta);
    const double d = skel.effective_drift;
    const double t = skel.horizon;
    const double width = (d == 0.0 || d >= 1.0) ? delta : delta / d;
    // A passage is preferred over a timeout landing within this slack.
    const double tie = 1e-9 * width;

    double box_time = 0.0;
    double base = 0.0;
    double x = 0.0;
    double s = 0.0;
    std::int64_t boxes = 1;

    auto drift_to = [&](double end) {
        double seg_base = base;  // levels are seg_base + k·δ, matching count_N
        std::int64_t k = 0;
        while (true) {
            const double c = x + d * (end - s);
            const double level = seg_base + static_cast<double>(k + 1) * delta;
            const bool passes = c > level;
            const double tp = passes ? s + (level - x) / d : kInf;
            const double timeout = box_time + width;
            const bool times_out = timeout < end && timeout < t;
            if (passes && (!times_out || tp <= timeout + tie)) {
                ++k;
                ++boxes;
                base = level;
                box_time = tp;
                x = level;
                s = tp;
            } else if (times_out) {
                ++boxes;
                x = x + d * (timeout - s);
                s = timeout;
                base = x;
                box_time = timeout;
                seg_base = base;
                k = 0;
            } else {
                x = c;
                s = end;
                return;
            }
        }
    };
    for (const auto& e : skel.events) {
        drift_to(e.time);
        x += e.size;
        if (x > base + delta) {
            ++boxes;
            base = x;
            box_time = e.time;
        }
    }
    drift_to(t);

    const auto columns = static_cast<std::int64_t>(std::floor(t / delta));
    return {columns + count_M(skel, delta), boxes};
}

std::int64_t graph_mesh_direct(const JumpSkeleton& skel, double delta) {
    check_delta(skel, delta);
    const double d = skel.effective_drift;
    std::vector<std::pair<double, double>> cells;
    auto piece = [&](double s0, double s1, double a) {
        const double i0 = std::floor(s0 / delta);
        const double i1 = std::floor(s1 / delta);
        for (double i = i0; i <= i1; i += 1.0) {
            const double ts = std::max(s0, i * delta);
            const double te = std::min(s1, (i + 1.0) * delta);
            const auto [r0, r1] = cell_span(a + d * (ts - s0), a + d * (te - s0), delta);
            for (double r = r0; r <= r1; r += 1.0) cells.emplace_back(i, r);
        }
    };
    double a = 0.0;
    double s = 0.0;
    for (const auto& e : skel.events) {
        piece(s, e.time, a);
        a = a + d * (e.time - s) + e.size;
        s = e.time;
    }
    piece(s, skel.horizon, a);
    std::sort(cells.begin(), cells.end());
    return std::unique(cells.begin(), cells.end()) - cells.begin();
}

CoverResult cover_all(const JumpSkeleton& skel, double delta, bool with_graph) {
    CoverResult r;
    r.delta = delta;
    r.horizon = skel.horizon;
    r.N = count_N(skel, delta);
    r.M = count_M(skel, delta);
    r.L = l_stat(skel, delta);
    r.Y = count_big_jumps(skel, delta);
    if (with_graph) {
        const auto g = graph_counts(skel, delta);
        r.MG = g.MG;
        r.NG = g.NG;
    } else {
        r.MG = static_cast<std::int64_t>(std::floor(skel.horizon / delta)) + r.M;
    }
    return r;
}

std::int64_t brute_force_N(const JumpSkeleton& skel, double delta, std::int64_t grid_n) {
    if (grid_n < 1) throw DomainError("grid_n must be positive");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    const double d = skel.effective_drift;
    const double t = skel.horizon;
    std::vector<double> points;
    points.reserve(static_cast<std::size_t>(grid_n) + 1 + 2 * skel.events.size());
    double jumps = 0.0;
    std::size_t next = 0;
    for (std::int64_t j = 0; j <= grid_n; ++j) {
        const double s = t * static_cast<double>(j) / static_cast<double>(grid_n);
        while (next < skel.events.size() && skel.events[next].time <= s) {
            const auto& e = skel.events[next];
            points.push_back(d * e.time + jumps);  // left limit
            jumps += e.size;
            points.push_back(d * e.time + jumps);  // landing
            ++next;
        }
        points.push_back(d * s + jumps);
    }
    std::sort(points.begin(), points.end());
    double base = points.front();
    std::int64_t count = 1;
    for (double p : points) {
        if (p > base + delta) {
            ++count;
            base = p;
        }
    }
    return count;
}

}  // namespace boxdim
