#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/exponent.hpp"
#include "core/fit.hpp"
#include "core/grid.hpp"

namespace herzlab {

// Strictly positive samples on a grid. Cheap to copy (shared immutable state).
class Weight {
public:
    Weight(GridPtr grid, std::vector<double> values, std::string descriptor);

    // Presets: "const:<v>", "power:<a>" (|x|^a; midpoint nodes keep it finite),
    // "product:<w1>,<w2>" (w1 w2^{1-p(.)}; needs the exponent).
    static Weight parse_preset(const std::string& preset, const GridPtr& grid,
                               const VariableExponent* p = nullptr);

    const Grid& grid() const { return *state_->grid; }
    const GridPtr& grid_ptr() const { return state_->grid; }
    double at(uint32_t node) const { return state_->values[node]; }
    std::span<const double> values() const { return state_->values; }
    const std::string& descriptor() const { return state_->descriptor; }

private:
    struct State {
        GridPtr grid;
        std::vector<double> values;
        std::string descriptor;
    };
    std::shared_ptr<const State> state_;
};

// The "sup over balls" search space: a center subset and a sqrt(2)-ladder of
// radii from 2h up to 2^{k_max+1}.
struct BallFamily {
    std::vector<Point> centers;
    std::vector<double> radii;

    static BallFamily dyadic(const Grid& g, int center_stride = 8);
    static BallFamily origin_centered(const Grid& g);
    static std::vector<double> radius_ladder(const Grid& g);
};

double weighted_measure(const Weight& w, const Region& region);

// max over the family of (avg_B w) * (max_B 1/w); >= 1 always.
double a1_constant(const Weight& w, const BallFamily& family);

// max over the family of (avg_B w) * (avg_B w^{-1/(p0-1)})^{p0-1}, p0 > 1.
double ap_constant(const Weight& w, double p0, const BallFamily& family);

// max over the family of |B|^{-1} ||w^{1/p} chi_B||_{p(.)} ||w^{-1/p} chi_B||_{p'(.)}
double apvar_constant(const Weight& w, const VariableExponent& p, const BallFamily& family);

// max over the family of |B|^{-p_B} ||w chi_B||_1 ||w^{-1} chi_B||_{p'(.)/p(.)}
double atilde_constant(const Weight& w, const VariableExponent& p, const BallFamily& family);

// Pointwise w1 w2^{1-p(.)}.
Weight construct_weight(const Weight& w1, const Weight& w2, const VariableExponent& p);

// Upper-envelope fit of log(w(E)/w(B)) <= delta log(|E|/|B|) + log C over
// seeded (B, E subset B) pairs; delta is clamped into (0, 1] and reported raw.
FitReport a1_measure_comparison(const Weight& w, const BallFamily& family, int trials,
                                uint64_t seed);

// Re-evaluates an estimator across grid refinements (points_per_unit doubled
// `levels-1` times). "Divergent" means the value at least doubles over three
// successive halvings of h (and hence of the family's minimum radius 2h).
struct RefinementProbe {
    std::vector<double> values;
    double total_growth = 1.0;
    bool divergent = false;
};
RefinementProbe probe_refinement(const std::function<double(const GridPtr&)>& estimator,
                                 GridSpec base, int levels = 4);

}  // namespace herzlab
