#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace boxdim {

/// Stable(α): Π(dx) = α/Γ(1−α) x^(−1−α) dx, so that Φ(λ) = λ^α.
struct StableFamily {
    double alpha;
};

/// Gamma subordinator: Π(dx) = shape · x^(−1) e^(−rate·x) dx.
struct GammaFamily {
    double rate;
    double shape;
};

/// Stable(α) Lévy measure restricted to jumps below `cut`.
struct TruncatedStableFamily {
    double alpha;
    double cut;
};

/// User-supplied tail Π̄.  The inverse is optional; bisection is used otherwise.
struct CustomFamily {
    std::string name;
    std::function<double(double)> tail;
    std::function<double(double)> tail_inverse;
};

/// Π ≡ 0 (pure drift).
struct NoJumpsFamily {};

using LevyFamily =
    std::variant<NoJumpsFamily, StableFamily, GammaFamily, TruncatedStableFamily, CustomFamily>;

/// A subordinator given by its drift d and Lévy measure Π.
///
/// Immutable after construction; every evaluation below is a pure function
/// of the model and its arguments.
class LevyModel {
  public:
    static LevyModel stable(double alpha, double drift = 0.0);
    static LevyModel gamma(double rate, double shape, double drift = 0.0);
    static LevyModel truncated_stable(double alpha, double cut, double drift = 0.0);
    static LevyModel custom(std::string name, std::function<double(double)> tail,
                            std::function<double(double)> tail_inverse = {}, double drift = 0.0);
    static LevyModel drift_only(double drift);

    double drift() const { return drift_; }
    const LevyFamily& family() const { return family_; }
    const std::string& description() const { return description_; }

    bool has_jumps() const { return !std::holds_alternative<NoJumpsFamily>(family_); }
    bool is_stable() const { return std::holds_alternative<StableFamily>(family_); }
    /// Stability index for Stable and TruncatedStable families.
    std::optional<double> stable_index() const;
    /// Π̄(0+) = ∞.
    bool infinite_measure() const;

    /// Lévy density where the family has one in closed form.
    std::optional<double> density(double x) const;
    bool has_density() const;
    /// Points where the tail is not smooth (e.g. a truncation cut).
    std::vector<double> breakpoints() const;

  private:
    LevyModel(double drift, LevyFamily family, std::string description);

    double drift_;
    LevyFamily family_;
    std::string description_;
};

/// Π̄(x) = Π((x, ∞)).  Throws DomainError for x <= 0.
double tail(const LevyModel& model, double x);
/// Π̄(0+); +inf for infinite measures.
double tail_at_zero(const LevyModel& model);
/// I(δ) = ∫₀^δ Π̄(x) dx.
double integrated_tail(const LevyModel& model, double delta);
/// μ(δ) = (d + I(δ)) / δ.
double mu(const LevyModel& model, double delta);

struct VScale {
    double value;
    bool degenerate;  // Π ≡ 0
};
/// v(δ) = δ^(−1) [∫ (x∧δ)² Π(dx)]^(1/2), flagged when Π ≡ 0.
VScale v_scale(const LevyModel& model, double delta);
inline double v(const LevyModel& model, double delta) { return v_scale(model, delta).value; }

/// Φ(λ) = dλ + ∫ (1 − e^(−λx)) Π(dx).
double laplace_exponent(const LevyModel& model, double lambda);
/// Φ̃^δ(u) = du + ∫₀^δ (1 − e^(−ux)) Π̃^δ(dx).
double shortened_exponent(const LevyModel& model, double delta, double u);
/// ∫_(0,δ] x^k Π(dx) for k in {1,2,3}; k = 1 is H(δ).
double truncated_moment(const LevyModel& model, double delta, int k);
/// inf{x : Π̄(x) <= p} for 0 < p < Π̄(0+).
double tail_inverse(const LevyModel& model, double p);

/// Π̃^δ(dx) = Π(dx)1{x<δ} + Π̄(δ)Δ_δ.
struct ShortenedModel {
    LevyModel base;
    double delta;

    double atom_mass() const { return tail(base, delta); }
    /// ∫₀^δ x^k Π̃^δ(dx) = ∫₀^δ x^k Π(dx) + δ^k Π̄(δ).
    double moment(int k) const;
    double exponent(double u) const { return shortened_exponent(base, delta, u); }
};

enum class GrowthFunction { integrated_tail, truncated_mean };

struct Condition2Row {
    double delta;
    double ratio;  // F(2δ)/F(δ)
};

struct Condition2Table {
    std::vector<Condition2Row> rows;
    bool applicable = true;      // false when F ≡ 0
    double liminf_estimate = 0;  // min over the smallest half of the grid
    bool holds() const { return applicable && liminf_estimate > 1.0; }
};

/// Probes liminf F(2δ)/F(δ) > 1 with F = I (default) or F = H.
/// `deltas` must be strictly decreasing and positive.
Condition2Table check_condition_2(const LevyModel& model, const std::vector<double>& deltas,
                                  GrowthFunction fn = GrowthFunction::integrated_tail);

/// Quadrature route: every functional derived from the tail alone.
/// Used for Custom models and as an independent check of closed forms.
namespace numeric {
double integrated_tail(const LevyModel& model, double delta);
double truncated_moment(const LevyModel& model, double delta, int k);
double laplace_exponent(const LevyModel& model, double lambda);
double shortened_exponent(const LevyModel& model, double delta, double u);
/// g(u) = d/du Φ̃^δ(u) integrated against the tail.
double shortened_slope(const LevyModel& model, double delta, double u);
/// R(u) = Φ̃^δ(u) − u g(u) = ∫₀^δ u² x e^(−ux) Π̄(x) dx.
double shortened_remainder(const LevyModel& model, double delta, double u);
double tail_inverse(const LevyModel& model, double p);
}  // namespace numeric

/// Named tails accepted by model files ("family": "custom").
std::vector<std::string> builtin_tail_names();
LevyModel builtin_custom_model(const std::string& name, double drift = 0.0);

}  // namespace boxdim
