#pragma once

#include <optional>
#include <span>

#include "core/exponent.hpp"
#include "core/grid.hpp"
#include "core/weights.hpp"

namespace herzlab {

// rho(f/lambda) = int |f/lambda|^{p(x)} w dx over the truncated grid.
double modular(const GridFunction& f, const VariableExponent& p, const Weight* w, double lambda);

// inf{ lambda > 0 : rho(f/lambda) <= 1 } by bracketing + bisection to 1e-10
// relative on lambda (64-iteration cap). Returns 0 for f == 0; at the result
// rho(f/lambda) lands in [1 - 1e-8, 1] whenever f != 0.
double luxemburg_norm(const GridFunction& f, const VariableExponent& p, const Weight* w = nullptr);

// || f ||_{L^{p(.)}(w)} = || f w^{1/p(.)} ||_{p(.)}, via the weighted modular.
double weighted_norm(const GridFunction& f, const VariableExponent& p, const Weight& w);

// Norm of the associate space of L^{p(.)}(w): || g w^{-1/p(.)} ||_{p'(.)}.
double associate_norm(const GridFunction& g, const VariableExponent& p, const Weight& w);

// int f g over the grid.
double pairing(const GridFunction& f, const GridFunction& g);

// Workhorse shared with the weight-class estimators: Luxemburg norm of the
// function with |values| at the given nodes, exponent samples p_vals, and
// weight samples w_vals (may be empty for w == 1). Exponents may lie in
// (0, inf); the modular stays strictly decreasing in lambda either way.
double luxemburg_norm_terms(std::span<const double> abs_vals, std::span<const double> p_vals,
                            std::span<const double> w_vals, double cell);

// Parameter bundle for the weighted Herz spaces; the admissibility window
// -n delta < alpha < n(1-r) is checked separately (validate_window), so
// out-of-window probes remain constructible.
struct HerzParams {
    double alpha;
    double q;
    VariableExponent p;
    Weight w;
    double r;
    double delta;

    HerzParams(double alpha, double q, VariableExponent p, Weight w, double r, double delta);
};

struct HerzNorm {
    double value = 0.0;
    std::vector<int> shell_index;       // k (homogeneous) or m (non-homogeneous)
    std::vector<double> shell_norms;    // || f chi ||_{L^{p(.)}(w)} per shell
    double boundary_mass_fraction = 0;  // q-sum mass in the two outermost shells
};

HerzNorm herz_norm_detailed(const GridFunction& f, const VariableExponent& p, const Weight& w,
                            double alpha, double q, bool homogeneous);
double herz_norm(const GridFunction& f, const HerzParams& params, bool homogeneous);

// Pairing-based lower estimate of the associate norm: max of |int f g| over a
// seeded family of trials g normalized in L^{p(.)}(w); g = f/||f|| is tried
// first so the self-dual case is tight at budget 1.
double dual_norm_estimate(const GridFunction& f, const VariableExponent& p, const Weight& w,
                          int trial_budget, uint64_t seed);

}  // namespace herzlab
