#pragma once

#include <cstdint>
#include <vector>

#include "boxdim/path_engine.hpp"

namespace boxdim {

/// Every box count for one (path, δ).
struct CoverResult {
    double delta = 0.0;
    double horizon = 0.0;
    std::int64_t N = 0;    // optimal cover of the range by length-δ intervals
    std::int64_t M = 0;    // δ-lattice cells met by the range
    double L = 0.0;        // X̃_t^δ / δ
    std::int64_t Y = 0;    // jumps larger than δ
    std::int64_t MG = 0;   // graph mesh count, ⌊t/δ⌋ + M
    std::int64_t NG = 0;   // graph cover by the sequential box construction
};

// Conventions shared by all counters:
//  * the range is the closure of {X_s} on each drift segment, so a segment
//    contributes the closed interval [landing, left limit at next jump];
//  * a closed cover interval [b, b+δ] is replaced only on strict exceedance;
//  * a range endpoint lying exactly on a lattice boundary does not open the
//    next cell.

/// Greedy optimal cover count by first passages.  O(events + N).
std::int64_t count_N(const JumpSkeleton& skel, double delta);
/// count_N of the path with all jumps larger than δ removed.
std::int64_t count_N_truncated(const JumpSkeleton& skel, double delta);
/// Lattice cells [kδ, (k+1)δ) met by the range.
std::int64_t count_M(const JumpSkeleton& skel, double delta);
std::int64_t count_big_jumps(const JumpSkeleton& skel, double delta);
/// L(t, δ) = (effective_drift·t + Σ (J ∧ δ)) / δ.
double l_stat(const JumpSkeleton& skel, double delta);

struct GraphCounts {
    std::int64_t MG;
    std::int64_t NG;
};
/// M_G from the mesh identity and N_G from the sequential box construction:
/// box width δ when the drift is 0 or >= 1, δ/d for drift d in (0,1).
GraphCounts graph_counts(const JumpSkeleton& skel, double delta);
/// Direct 2-D count of lattice squares met by the graph {(s, X_s)}.
/// Independent of the mesh identity; O(t/δ + M), meant for checks.
std::int64_t graph_mesh_direct(const JumpSkeleton& skel, double delta);

/// All counts; with `with_graph` false NG is left at 0 (it costs O(t/δ) when
/// the drift is small).
CoverResult cover_all(const JumpSkeleton& skel, double delta, bool with_graph = true);

/// Test oracle: range points on a uniform grid of `grid_n` steps plus both
/// sides of every jump, sorted, then textbook greedy interval covering.
std::int64_t brute_force_N(const JumpSkeleton& skel, double delta, std::int64_t grid_n);

}  // namespace boxdim
