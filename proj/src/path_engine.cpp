#include "boxdim/path_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/random/poisson_distribution.hpp>

#include "boxdim/errors.hpp"
#include "boxdim/rng.hpp"

namespace boxdim {

double resolve_cutoff(const LevyModel& model, double delta_min) {
    if (!(delta_min > 0.0)) throw ConfigError("delta_min must be positive");
    double eps = delta_min / 100.0;
    if (!model.has_jumps()) return eps;
    const double target = 1e-4 * std::pow(delta_min * v(model, delta_min), 2);
    if (truncated_moment(model, eps, 2) <= target) return eps;
    // bisection in log ε for the largest admissible cutoff
    double lo = eps * 1e-12;
    double hi = eps;
    if (truncated_moment(model, lo, 2) > target) throw ConfigError("cannot resolve an admissible cutoff");
    for (int i = 0; i < 80 && hi / lo > 1.0 + 1e-6; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (truncated_moment(model, mid, 2) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double effective_cutoff(const LevyModel& model, const SimConfig& cfg) {
    double eps;
    if (cfg.cutoff) {
        eps = *cfg.cutoff;
    } else {
        if (!cfg.delta_min) throw ConfigError("auto cutoff requires the consumer to declare delta_min");
        eps = resolve_cutoff(model, *cfg.delta_min);
    }
    eps *= cfg.cutoff_scale;
    if (!(eps > 0.0)) throw ConfigError("cutoff must be positive");
    return eps;
}

std::vector<JumpEvent> sample_events(const LevyModel& model, double cutoff, double start, double length,
                                     std::uint64_t seed, std::uint64_t replica, std::uint32_t chunk) {
    std::vector<JumpEvent> events;
    if (!model.has_jumps()) return events;
    const double rate = tail(model, cutoff);
    if (!std::isfinite(rate)) throw ConfigError("cutoff leaves infinitely many jumps");
    const double mean = rate * length;
    if (mean <= 0.0) return events;

    CounterStream count_stream(seed, replica, StreamRole::count, chunk);
    boost::random::poisson_distribution<std::int64_t, double> poisson(mean);
    const auto n = static_cast<std::size_t>(poisson(count_stream));

    CounterStream time_stream(seed, replica, StreamRole::times, chunk);
    std::vector<double> times(n);
    for (auto& t : times) t = start + length * time_stream.uniform_open_closed();
    std::sort(times.begin(), times.end());
    // coincident draws are nudged apart to keep times strictly increasing
    for (std::size_t i = 1; i < n; ++i) {
        if (times[i] <= times[i - 1]) times[i] = std::nextafter(times[i - 1], INFINITY);
    }

    CounterStream size_stream(seed, replica, StreamRole::sizes, chunk);
    events.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = rate * size_stream.uniform_open_closed();
        double size = p >= rate ? cutoff : tail_inverse(model, p);
        events.push_back({times[i], std::max(size, cutoff)});
    }
    return events;
}

JumpSkeleton sample_skeleton(const LevyModel& model, const SimConfig& cfg) {
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
    JumpSkeleton skel;
    skel.horizon = cfg.horizon;
    skel.cutoff = effective_cutoff(model, cfg);
    skel.effective_drift = model.drift() + (model.has_jumps() ? truncated_moment(model, skel.cutoff, 1) : 0.0);
    skel.events = sample_events(model, skel.cutoff, 0.0, cfg.horizon, cfg.seed, cfg.replica, 0);
    // times are in (0, t] by construction; clamp rounding at the right edge
    for (auto& e : skel.events) e.time = std::min(e.time, cfg.horizon);
    skel.poisson_count = skel.events.size();
    skel.provenance = {model.description(), cfg.seed, cfg.replica};
    return skel;
}

double value_at(const JumpSkeleton& skel, double s, PathMode mode, double delta) {
    if (!(s >= 0.0 && s <= skel.horizon)) throw DomainError("value_at: time outside [0, horizon]");
    if (mode != PathMode::raw && delta < skel.cutoff) {
        throw PrecisionError("value_at: delta below the skeleton cutoff");
    }
    double sum = skel.effective_drift * s;
    double comp = 0.0;
    for (const auto& e : skel.events) {
        if (e.time > s) break;
        double f = e.size;
        if (mode == PathMode::shortened) f = std::min(e.size, delta);
        if (mode == PathMode::truncated && e.size > delta) f = 0.0;
        const double t = sum + f;
        comp += std::abs(sum) >= std::abs(f) ? (sum - t) + f : (f - t) + sum;
        sum = t;
    }
    return sum + comp;
}

std::optional<double> first_passage_time(const JumpSkeleton& skel, double level) {
    const double d = skel.effective_drift;
    double x = 0.0;
    double s = 0.0;
    if (x > level) return 0.0;
    auto drift_to = [&](double end) -> std::optional<double> {
        const double c = x + d * (end - s);
        if (c > level) return s + (level - x) / d;
        x = c;
        s = end;
        return std::nullopt;
    };
    for (const auto& e : skel.events) {
        if (auto hit = drift_to(e.time)) return hit;
        x += e.size;
        if (x > level) return e.time;
    }
    if (auto hit = drift_to(skel.horizon)) return hit;
    return std::nullopt;
}

void write_skeleton_csv(const JumpSkeleton& skel, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write skeleton file: " + path.string());
    char buf[256];
    std::snprintf(buf, sizeof buf, "# t=%.17g,eps=%.17g,d_eff=%.17g,seed=%llu,replica=%llu\n", skel.horizon,
                  skel.cutoff, skel.effective_drift, static_cast<unsigned long long>(skel.provenance.seed),
                  static_cast<unsigned long long>(skel.provenance.replica));
    out << buf << "tau,size\n";
    for (const auto& e : skel.events) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", e.time, e.size);
        out << buf;
    }
}

JumpSkeleton read_skeleton_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open skeleton file: " + path.string());
    JumpSkeleton skel;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ConfigError("skeleton file: missing header");
    unsigned long long seed = 0, replica = 0;
    if (std::sscanf(line.c_str(), "# t=%lg,eps=%lg,d_eff=%lg,seed=%llu,replica=%llu", &skel.horizon, &skel.cutoff,
                    &skel.effective_drift, &seed, &replica) != 5) {
        throw ConfigError("skeleton file: malformed header");
    }
    skel.provenance.seed = seed;
    skel.provenance.replica = replica;
    if (!std::getline(in, line) || line != "tau,size") throw ConfigError("skeleton file: missing column header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        JumpEvent e{};
        if (std::sscanf(line.c_str(), "%lg,%lg", &e.time, &e.size) != 2) {
            throw ConfigError("skeleton file: malformed row '" + line + "'");
        }
        skel.events.push_back(e);
    }
    skel.poisson_count = skel.events.size();
    return skel;
}

}  // namespace boxdim
