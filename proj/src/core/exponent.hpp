#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "core/grid.hpp"

namespace herzlab {

// A variable exponent p(.) with 1 < p_- <= p_+ < infinity. The evaluator is
// coordinate-based so the same exponent can be sampled on any grid.
class VariableExponent {
public:
    VariableExponent(std::function<double(const Point&)> eval, double p_minus, double p_plus,
                     std::optional<double> p_infinity, std::string descriptor);

    // Presets: "const:<v>", "ramp:<a>,<b>" (a + min(1,|x|)(b-a)),
    // "rational:<a>,<b>" (a - b/(1+|x|^2)). p_infinity defaults to the
    // |x| -> infinity limit of the preset.
    static VariableExponent parse_preset(const std::string& preset, int dim);

    double operator()(const Point& x) const { return eval_(x); }
    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    const std::optional<double>& p_infinity() const { return p_infinity_; }
    const std::string& descriptor() const { return descriptor_; }
    int dim() const { return dim_; }

    std::vector<double> sample_on(const Grid& g) const;

private:
    std::function<double(const Point&)> eval_;
    double p_minus_, p_plus_;
    std::optional<double> p_infinity_;
    std::string descriptor_;
    int dim_ = 1;
};

// (min, max) over grid nodes; converges to (p_-, p_+) on the truncated domain.
std::pair<double, double> essential_bounds(const VariableExponent& p, const Grid& g);

// Pointwise p'(x) = p(x) / (p(x) - 1).
VariableExponent conjugate(const VariableExponent& p);

// Sampled log-Hoelder constants (lower estimates of the true suprema):
//   C_local = max over seeded node pairs with |x-y| <= 1/2 of |p(x)-p(y)| (-log|x-y|)
//   C_inf   = max over all nodes of |p(x)-p_inf| log(e+|x|)
// Budgets are prefix-nested, so the estimate is monotone in pair_budget.
std::pair<double, double> lh_constants(const VariableExponent& p, const Grid& g,
                                       int pair_budget, uint64_t seed = 0x1f2e3d4c5b6a79ull);

// The local constant alone; usable when p_infinity is not supplied.
double lh_local_constant(const VariableExponent& p, const Grid& g, int pair_budget,
                         uint64_t seed = 0x1f2e3d4c5b6a79ull);

// p_B = ( |B|^{-1} \int_B 1/p )^{-1}
double harmonic_average(const VariableExponent& p, const Region& ball, const Grid& g);

// Pointwise r p(x); requires r p_- > 1.
VariableExponent scale(const VariableExponent& p, double r);

}  // namespace herzlab
