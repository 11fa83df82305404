#pragma once

#include <functional>

namespace boxdim {

struct QuadratureOptions {
    double rel_tol = 1e-13;  // per panel
    double abs_tol = 1e-300;
    int min_panels = 40;     // panels visited past the anchor before stopping is allowed
};

/// Integrates f over (lo, hi), 0 <= lo < hi <= +inf, after the substitution
/// x = e^s.  The s-axis is cut into unit panels aligned at log(anchor) and
/// each panel is integrated by adaptive Gauss–Kronrod (G7/K15).  Panels are
/// added outwards until contributions are negligible, so integrable
/// power-law singularities at 0 and slowly decaying tails are handled.
/// `anchor` should sit near the scale where f·x carries its mass.
///
/// Throws ModelInvalidError if the integral diverges or f is non-finite.
double integrate_log_scale(const std::function<double(double)>& f, double lo, double hi,
                           double anchor, const QuadratureOptions& opts = {});

}  // namespace boxdim
