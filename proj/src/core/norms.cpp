#include "core/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/common.hpp"

namespace herzlab {

namespace {

constexpr double kTargetLevel = 1.0 - 1e-12;  // keeps rho(f/norm) <= 1 under path jitter
constexpr double kRelTol = 1e-10;
constexpr int kBisectionCap = 64;

struct ModularTerms {
    std::vector<double> a;      // |f_i|^{p_i} w_i * cell
    std::vector<double> neg_p;  // -p_i

    double rho(double lambda) const {
        double t = std::log(lambda);
        double acc = 0.0;
        for (size_t i = 0; i < a.size(); ++i) acc += a[i] * std::exp(neg_p[i] * t);
        return acc;
    }
};

double solve_luxemburg(const ModularTerms& terms) {
    if (terms.a.empty()) return 0.0;

    double hi = 1.0, lo = 1.0;
    if (terms.rho(1.0) <= kTargetLevel) {
        for (int i = 0; terms.rho(lo) <= kTargetLevel; ++i) {
            hi = lo;
            lo *= 0.5;
            if (i > 4000) return 0.0;  // all mass below representable range
        }
    } else {
        for (int i = 0; terms.rho(hi) > kTargetLevel; ++i) {
            lo = hi;
            hi *= 2.0;
            if (i > 4000) throw std::runtime_error("luxemburg norm: bracketing overflow");
        }
    }
    for (int i = 0; i < kBisectionCap && (hi - lo) > kRelTol * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (terms.rho(mid) <= kTargetLevel)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

double luxemburg_norm_terms(std::span<const double> abs_vals, std::span<const double> p_vals,
                            std::span<const double> w_vals, double cell) {
    ModularTerms terms;
    terms.a.reserve(abs_vals.size());
    terms.neg_p.reserve(abs_vals.size());
    for (size_t i = 0; i < abs_vals.size(); ++i) {
        double v = std::abs(abs_vals[i]);
        if (v == 0.0) continue;
        if (!std::isfinite(v)) throw std::invalid_argument("luxemburg norm: non-finite sample");
        double wi = w_vals.empty() ? 1.0 : w_vals[i];
        terms.a.push_back(std::pow(v, p_vals[i]) * wi * cell);
        terms.neg_p.push_back(-p_vals[i]);
    }
    return solve_luxemburg(terms);
}

double modular(const GridFunction& f, const VariableExponent& p, const Weight* w, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("modular: lambda must be positive");
    const Grid& g = *f.grid;
    double acc = 0.0;
    for (uint32_t i = 0; i < g.node_count(); ++i) {
        double v = std::abs(f.values[i]);
        if (v == 0.0) continue;
        double term = std::pow(v / lambda, p(g.coord(i)));
        acc += w ? term * w->at(i) : term;
    }
    return acc * g.cell_measure();
}

double luxemburg_norm(const GridFunction& f, const VariableExponent& p, const Weight* w) {
    f.check_finite();
    const Grid& g = *f.grid;
    if (w && &w->grid() != &g) throw std::invalid_argument("luxemburg norm: weight grid mismatch");

    ModularTerms terms;
    for (uint32_t i = 0; i < g.node_count(); ++i) {
        double v = std::abs(f.values[i]);
        if (v == 0.0) continue;
        double pi = p(g.coord(i));
        terms.a.push_back(std::pow(v, pi) * (w ? w->at(i) : 1.0) * g.cell_measure());
        terms.neg_p.push_back(-pi);
    }
    return solve_luxemburg(terms);
}

double weighted_norm(const GridFunction& f, const VariableExponent& p, const Weight& w) {
    return luxemburg_norm(f, p, &w);
}

double associate_norm(const GridFunction& g, const VariableExponent& p, const Weight& w) {
    const Grid& grid = *g.grid;
    if (&w.grid() != &grid) throw std::invalid_argument("associate norm: weight grid mismatch");
    ModularTerms terms;
    for (uint32_t i = 0; i < grid.node_count(); ++i) {
        double v = std::abs(g.values[i]);
        if (v == 0.0) continue;
        double pi = p(grid.coord(i));
        double pci = pi / (pi - 1.0);
        double scaled = v * std::pow(w.at(i), -1.0 / pi);
        terms.a.push_back(std::pow(scaled, pci) * grid.cell_measure());
        terms.neg_p.push_back(-pci);
    }
    return solve_luxemburg(terms);
}

double pairing(const GridFunction& f, const GridFunction& g) {
    if (f.grid != g.grid && f.grid->spec() != g.grid->spec())
        throw std::invalid_argument("pairing: functions on different grids");
    double acc = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * g.values[i];
    return acc * f.grid->cell_measure();
}

HerzParams::HerzParams(double alpha_, double q_, VariableExponent p_, Weight w_, double r_,
                       double delta_)
    : alpha(alpha_), q(q_), p(std::move(p_)), w(std::move(w_)), r(r_), delta(delta_) {
    if (!(q > 0.0)) throw std::invalid_argument("herz params: q must be positive");
    if (!(r * p.p_minus() > 1.0) || !(r < 1.0))
        throw std::invalid_argument("herz params: r outside the window 1/p_- < r < 1 (r = " +
                                    std::to_string(r) + ", p_- = " + std::to_string(p.p_minus()) + ")");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("herz params: delta must lie in (0, 1), got " +
                                    std::to_string(delta));
    if (!std::isfinite(alpha)) throw std::invalid_argument("herz params: alpha must be finite");
}

namespace {

double restricted_weighted_norm(const GridFunction& f, const VariableExponent& p, const Weight& w,
                                std::span<const uint32_t> nodes) {
    const Grid& g = *f.grid;
    std::vector<double> vals, pv, wv;
    vals.reserve(nodes.size());
    for (uint32_t i : nodes) {
        double v = f.values[i];
        if (v == 0.0) continue;
        vals.push_back(std::abs(v));
        pv.push_back(p(g.coord(i)));
        wv.push_back(w.at(i));
    }
    return luxemburg_norm_terms(vals, pv, wv, g.cell_measure());
}

}  // namespace

HerzNorm herz_norm_detailed(const GridFunction& f, const VariableExponent& p, const Weight& w,
                            double alpha, double q, bool homogeneous) {
    if (!(q > 0.0)) throw std::invalid_argument("herz norm: q must be positive");
    const Grid& g = *f.grid;
    const GridSpec& s = g.spec();
    HerzNorm out;

    if (homogeneous) {
        for (int k = s.k_min; k <= s.k_max; ++k) {
            out.shell_index.push_back(k);
            out.shell_norms.push_back(restricted_weighted_norm(f, p, w, g.shell_nodes(k)));
        }
    } else {
        if (s.k_max < 0) throw std::invalid_argument("herz norm: non-homogeneous needs k_max >= 0");
        for (int m = 0; m <= s.k_max; ++m) {
            out.shell_index.push_back(m);
            out.shell_norms.push_back(restricted_weighted_norm(
                f, p, w, m == 0 ? g.unit_ball_nodes() : g.shell_nodes(m)));
        }
    }

    double total = 0.0;
    std::vector<double> terms(out.shell_norms.size());
    for (size_t i = 0; i < out.shell_norms.size(); ++i) {
        double weight_pow = std::exp2(alpha * out.shell_index[i] * q);
        terms[i] = weight_pow * std::pow(out.shell_norms[i], q);
        total += terms[i];
    }
    out.value = std::pow(total, 1.0 / q);
    if (total > 0.0 && terms.size() >= 2)
        out.boundary_mass_fraction = (terms.front() + terms.back()) / total;
    return out;
}

double herz_norm(const GridFunction& f, const HerzParams& params, bool homogeneous) {
    return herz_norm_detailed(f, params.p, params.w, params.alpha, params.q, homogeneous).value;
}

double dual_norm_estimate(const GridFunction& f, const VariableExponent& p, const Weight& w,
                          int trial_budget, uint64_t seed) {
    if (trial_budget < 1) return 0.0;
    const GridPtr& g = f.grid;
    double fnorm = weighted_norm(f, p, w);
    if (fnorm == 0.0) return 0.0;

    Rng rng(seed);
    double best = 0.0;
    for (int t = 0; t < trial_budget; ++t) {
        GridFunction trial = GridFunction::zeros(g);
        if (t == 0) {
            trial = f;  // self-dual candidate first
        } else if (t % 3 == 1) {
            // random dyadic ball indicator
            double r = std::exp2(rng.uniform(std::log2(4.0 * g->h()), std::log2(g->radius())));
            Point c{};
            c.c[0] = rng.uniform(-g->radius() + r, g->radius() - r);
            if (g->dim() == 2) c.c[1] = rng.uniform(-g->radius() + r, g->radius() - r);
            for (uint32_t i : g->nodes_in(Region::ball(c, r))) trial.values[i] = 1.0;
        } else {
            // random smooth field: a few signed bumps
            int bumps = 2 + static_cast<int>(rng.below(4));
            for (int b = 0; b < bumps; ++b) {
                Point c{};
                c.c[0] = rng.uniform(-g->radius() * 0.9, g->radius() * 0.9);
                if (g->dim() == 2) c.c[1] = rng.uniform(-g->radius() * 0.9, g->radius() * 0.9);
                double width = rng.uniform(0.2, 0.25 * g->radius());
                double amp = rng.uniform(-2.0, 2.0);
                for (uint32_t i = 0; i < g->node_count(); ++i) {
                    Point x = g->coord(i);
                    double dx = x.c[0] - c.c[0], dy = x.c[1] - c.c[1];
                    double d2 = (dx * dx + (g->dim() == 2 ? dy * dy : 0.0)) / (width * width);
                    if (d2 < 1.0) trial.values[i] += amp * (1.0 - d2) * (1.0 - d2);
                }
            }
        }
        double tn = weighted_norm(trial, p, w);
        if (tn == 0.0) continue;
        best = std::max(best, std::abs(pairing(f, trial)) / tn);
    }
    return best;
}

}  // namespace herzlab
