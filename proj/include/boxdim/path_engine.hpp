#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "boxdim/levy_model.hpp"

namespace boxdim {

/// Simulation settings for one replica.
///
/// `cutoff` left empty means "auto": it is resolved from `delta_min`, the
/// smallest δ the consumer will query, by `resolve_cutoff`.
struct SimConfig {
    double horizon = 1.0;
    std::optional<double> cutoff;
    std::optional<double> delta_min;
    double cutoff_scale = 1.0;  // multiplies the auto cutoff (robustness reruns use 0.5)
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
};

/// Largest ε <= δ_min/100 such that ∫₀^ε x²Π(dx) <= 1e-4 (δ_min v(δ_min))².
double resolve_cutoff(const LevyModel& model, double delta_min);
/// Cutoff actually used for `cfg` (auto rule, explicit value, times scale).
double effective_cutoff(const LevyModel& model, const SimConfig& cfg);

struct JumpEvent {
    double time;
    double size;
};

struct Provenance {
    std::string model;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
};

/// One simulated path: jumps of size >= ε are kept exactly, the smaller
/// ones are replaced by their mean drift.
struct JumpSkeleton {
    double horizon = 1.0;
    double cutoff = 0.0;
    double effective_drift = 0.0;  // d + ∫₀^ε x Π(dx)
    std::vector<JumpEvent> events;  // strictly increasing times in (0, horizon]
    std::uint64_t poisson_count = 0;
    Provenance provenance;
};

JumpSkeleton sample_skeleton(const LevyModel& model, const SimConfig& cfg);

/// How jumps enter the reconstructed value.
enum class PathMode {
    raw,        // J
    shortened,  // J ∧ δ
    truncated,  // J 1{J <= δ}
};

/// Value at time s in [0, horizon].  For shortened/truncated modes δ must
/// be at least the skeleton cutoff (PrecisionError otherwise).
double value_at(const JumpSkeleton& skel, double s, PathMode mode = PathMode::raw, double delta = 0.0);

/// First time the raw path strictly exceeds `level`; nullopt if not by the horizon.
std::optional<double> first_passage_time(const JumpSkeleton& skel, double level);

/// CSV dump: a `# t=..,eps=..,d_eff=..,seed=..,replica=..` header line, then `tau,size` rows.
void write_skeleton_csv(const JumpSkeleton& skel, const std::filesystem::path& path);
JumpSkeleton read_skeleton_csv(const std::filesystem::path& path);

/// Building block shared with the renewal sampler: Poisson(rate·len) events
/// on (start, start+len], with times sorted and sizes from the tail inverse.
std::vector<JumpEvent> sample_events(const LevyModel& model, double cutoff, double start, double length,
                                     std::uint64_t seed, std::uint64_t replica, std::uint32_t chunk);

}  // namespace boxdim
