#include "core/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace herzlab {

namespace {

// Upper concave hull of points sorted by u (Andrew monotone chain, top side).
std::vector<size_t> upper_hull(const std::vector<size_t>& order,
                               std::span<const double> u, std::span<const double> v) {
    std::vector<size_t> hull;
    for (size_t idx : order) {
        while (hull.size() >= 2) {
            size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            double cross = (u[b] - u[a]) * (v[idx] - v[a]) - (v[b] - v[a]) * (u[idx] - u[a]);
            if (cross >= 0.0)
                hull.pop_back();  // b below or on chord a->idx
            else
                break;
        }
        hull.push_back(idx);
    }
    return hull;
}

}  // namespace

FitReport fit_upper_envelope(std::span<const double> u, std::span<const double> v,
                             double delta_min, double delta_max) {
    if (u.size() != v.size()) throw std::invalid_argument("envelope fit: size mismatch");
    FitReport rep;
    rep.sample_count = static_cast<int>(u.size());
    if (u.size() < 2) throw std::invalid_argument("envelope fit: need at least 2 samples");

    std::vector<size_t> order(u.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return u[a] != u[b] ? u[a] < u[b] : v[a] < v[b];
    });

    auto hull = upper_hull(order, u, v);

    // Least squares through the hull vertices.
    double slope;
    double su = 0, sv = 0, suu = 0, suv = 0;
    for (size_t i : hull) {
        su += u[i];
        sv += v[i];
        suu += u[i] * u[i];
        suv += u[i] * v[i];
    }
    double n = static_cast<double>(hull.size());
    double den = suu - su * su / n;
    if (den <= 0.0) {
        // Degenerate spread: fall back to the steepest defensible slope.
        slope = delta_min;
        for (size_t i = 0; i < u.size(); ++i)
            if (u[i] < -1e-12) slope = std::max(slope, v[i] / u[i]);
    } else {
        slope = (suv - su * sv / n) / den;
    }

    rep.delta_raw = slope;
    rep.delta = std::clamp(slope, delta_min, delta_max);
    rep.delta_flagged = (slope != rep.delta) || !(slope > 0.0);

    // Lift the intercept so the envelope clears every sample.
    double logC = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < u.size(); ++i) logC = std::max(logC, v[i] - rep.delta * u[i]);
    rep.C = std::exp(logC);

    double slack2 = 0.0;
    int violations = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        double s = rep.delta * u[i] + logC - v[i];
        if (s < -1e-12) ++violations;
        slack2 += s * s;
    }
    rep.envelope_violations = violations;
    rep.residual = std::sqrt(slack2 / static_cast<double>(u.size()));
    return rep;
}

}  // namespace herzlab
