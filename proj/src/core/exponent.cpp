#include "core/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "core/common.hpp"

namespace herzlab {

VariableExponent::VariableExponent(std::function<double(const Point&)> eval, double p_minus,
                                   double p_plus, std::optional<double> p_infinity,
                                   std::string descriptor)
    : eval_(std::move(eval)),
      p_minus_(p_minus),
      p_plus_(p_plus),
      p_infinity_(p_infinity),
      descriptor_(std::move(descriptor)) {
    if (!(1.0 < p_minus_ && p_minus_ <= p_plus_) || !std::isfinite(p_plus_))
        throw std::invalid_argument("exponent '" + descriptor_ +
                                    "': needs 1 < p_- <= p_+ < inf (got p_-=" +
                                    std::to_string(p_minus_) + ", p_+=" + std::to_string(p_plus_) + ")");
}

namespace {

std::vector<double> parse_args(const std::string& body, size_t expected, const std::string& preset) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad number '" + tok + "' in preset " + preset);
        out.push_back(v);
    }
    if (out.size() != expected)
        throw std::invalid_argument("preset " + preset + ": expected " + std::to_string(expected) +
                                    " argument(s), got " + std::to_string(out.size()));
    return out;
}

}  // namespace

VariableExponent VariableExponent::parse_preset(const std::string& preset, int dim) {
    auto colon = preset.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("exponent preset '" + preset + "': expected '<name>:<args>'");
    std::string name = preset.substr(0, colon);
    std::string body = preset.substr(colon + 1);

    VariableExponent result = [&]() -> VariableExponent {
        if (name == "const") {
            double v = parse_args(body, 1, preset)[0];
            return VariableExponent([v](const Point&) { return v; }, v, v, v, preset);
        }
        if (name == "ramp") {
            auto a = parse_args(body, 2, preset);
            double lo = a[0], hi = a[1];
            auto f = [lo, hi, dim](const Point& x) {
                return lo + std::min(1.0, x.norm(dim)) * (hi - lo);
            };
            return VariableExponent(f, std::min(lo, hi), std::max(lo, hi), hi, preset);
        }
        if (name == "rational") {
            auto a = parse_args(body, 2, preset);
            double c = a[0], b = a[1];
            auto f = [c, b, dim](const Point& x) { return c - b / (1.0 + x.norm2(dim)); };
            double at0 = c - b, limit = c;
            return VariableExponent(f, std::min(at0, limit), std::max(at0, limit), limit, preset);
        }
        throw std::invalid_argument("unknown exponent preset '" + name + "'");
    }();
    result.dim_ = dim;
    return result;
}

std::vector<double> VariableExponent::sample_on(const Grid& g) const {
    std::vector<double> v(g.node_count());
    for (uint32_t i = 0; i < v.size(); ++i) v[i] = eval_(g.coord(i));
    return v;
}

std::pair<double, double> essential_bounds(const VariableExponent& p, const Grid& g) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (uint32_t i = 0; i < g.node_count(); ++i) {
        double v = p(g.coord(i));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

VariableExponent conjugate(const VariableExponent& p) {
    auto base = p;  // capture by value: exponents are immutable
    auto f = [base](const Point& x) {
        double v = base(x);
        return v / (v - 1.0);
    };
    std::optional<double> pinf;
    if (p.p_infinity()) pinf = *p.p_infinity() / (*p.p_infinity() - 1.0);
    return VariableExponent(f, p.p_plus() / (p.p_plus() - 1.0), p.p_minus() / (p.p_minus() - 1.0),
                            pinf, "conjugate(" + p.descriptor() + ")");
}

double lh_local_constant(const VariableExponent& p, const Grid& g, int pair_budget,
                         uint64_t seed) {
    if (pair_budget < 0) throw std::invalid_argument("lh_constants: pair_budget must be >= 0");

    // Seeded pairs with |x - y| <= 1/2. Each iteration consumes a fixed
    // number of draws, so budgets are prefix-nested.
    Rng rng(seed);
    double c_local = 0.0;
    int64_t n_axis = g.axis_points();
    int64_t half = std::max<int64_t>(1, g.spec().points_per_unit / 2);
    for (int t = 0; t < pair_budget; ++t) {
        uint32_t a = static_cast<uint32_t>(rng.below(g.node_count()));
        int64_t ai = a % n_axis, aj = a / n_axis;
        int64_t bi = ai + rng.uniform_int(-static_cast<int>(half), static_cast<int>(half));
        int64_t bj = aj;
        if (g.dim() == 2)
            bj = aj + rng.uniform_int(-static_cast<int>(half), static_cast<int>(half));
        if (bi < 0 || bi >= n_axis || bj < 0 || bj >= n_axis) continue;
        uint32_t b = static_cast<uint32_t>(bj * n_axis + bi);
        if (a == b) continue;
        Point xa = g.coord(a), xb = g.coord(b);
        double dx = xa.c[0] - xb.c[0], dy = xa.c[1] - xb.c[1];
        double d = std::sqrt(dx * dx + (g.dim() == 2 ? dy * dy : 0.0));
        if (d > 0.5 || d <= 0.0) continue;
        c_local = std::max(c_local, std::abs(p(xa) - p(xb)) * (-std::log(d)));
    }
    return c_local;
}

std::pair<double, double> lh_constants(const VariableExponent& p, const Grid& g,
                                       int pair_budget, uint64_t seed) {
    double c_local = lh_local_constant(p, g, pair_budget, seed);

    if (!p.p_infinity())
        throw std::invalid_argument("lh_constants: exponent '" + p.descriptor() +
                                    "' has no p_infinity; the decay constant needs it");
    double pinf = *p.p_infinity();
    double c_inf = 0.0;
    for (uint32_t i = 0; i < g.node_count(); ++i) {
        Point x = g.coord(i);
        c_inf = std::max(c_inf, std::abs(p(x) - pinf) * std::log(std::exp(1.0) + x.norm(g.dim())));
    }
    return {c_local, c_inf};
}

double harmonic_average(const VariableExponent& p, const Region& ball, const Grid& g) {
    double acc = 0.0;
    size_t n = 0;
    g.for_each_node_in(ball, [&](uint32_t i) {
        acc += 1.0 / p(g.coord(i));
        ++n;
    });
    if (n == 0) throw std::invalid_argument("harmonic_average: empty ball " + ball.describe());
    return static_cast<double>(n) / acc;
}

VariableExponent scale(const VariableExponent& p, double r) {
    if (!(r * p.p_minus() > 1.0)) {
        std::ostringstream os;
        os << "scale: r p_- = " << r * p.p_minus() << " <= 1 violates the window 1/p_- < r < 1";
        throw std::invalid_argument(os.str());
    }
    auto base = p;
    auto f = [base, r](const Point& x) { return r * base(x); };
    std::optional<double> pinf;
    if (p.p_infinity()) pinf = r * *p.p_infinity();
    std::ostringstream name;
    name << "scale(" << p.descriptor() << "," << r << ")";
    return VariableExponent(f, r * p.p_minus(), r * p.p_plus(), pinf, name.str());
}

}  // namespace herzlab
