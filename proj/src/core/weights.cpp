#include "core/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "core/common.hpp"
#include "core/norms.hpp"

namespace herzlab {

Weight::Weight(GridPtr grid, std::vector<double> values, std::string descriptor) {
    if (!grid) throw std::invalid_argument("weight: null grid");
    if (values.size() != grid->node_count())
        throw std::invalid_argument("weight '" + descriptor + "': sample count mismatch");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("weight '" + descriptor +
                                        "': values must be strictly positive and finite");
    auto st = std::make_shared<State>();
    st->grid = std::move(grid);
    st->values = std::move(values);
    st->descriptor = std::move(descriptor);
    state_ = std::move(st);
}

Weight Weight::parse_preset(const std::string& preset, const GridPtr& grid,
                            const VariableExponent* p) {
    auto colon = preset.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("weight preset '" + preset + "': expected '<name>:<args>'");
    std::string name = preset.substr(0, colon);
    std::string body = preset.substr(colon + 1);

    if (name == "const") {
        double v = std::stod(body);
        return Weight(grid, std::vector<double>(grid->node_count(), v), preset);
    }
    if (name == "power") {
        double a = std::stod(body);
        std::vector<double> vals(grid->node_count());
        for (uint32_t i = 0; i < vals.size(); ++i)
            vals[i] = std::pow(grid->coord(i).norm(grid->dim()), a);
        return Weight(grid, std::move(vals), preset);
    }
    if (name == "product") {
        // product:<w1>,<w2> -> w1 w2^{1-p(.)}; sub-presets are comma-free.
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("weight preset '" + preset + "': product needs two parts");
        if (!p)
            throw std::invalid_argument("weight preset '" + preset +
                                        "': product construction needs the exponent");
        Weight w1 = parse_preset(body.substr(0, comma), grid);
        Weight w2 = parse_preset(body.substr(comma + 1), grid);
        return construct_weight(w1, w2, *p);
    }
    throw std::invalid_argument("unknown weight preset '" + name + "'");
}

std::vector<double> BallFamily::radius_ladder(const Grid& g) {
    std::vector<double> radii;
    double r = 2.0 * g.h();
    double rmax = 2.0 * g.radius();  // 2^{k_max + 1}
    while (r <= rmax * (1.0 + 1e-12)) {
        radii.push_back(r);
        r *= std::sqrt(2.0);
    }
    return radii;
}

BallFamily BallFamily::dyadic(const Grid& g, int center_stride) {
    if (center_stride < 1) throw std::invalid_argument("ball family: stride must be >= 1");
    BallFamily fam;
    int64_t n = g.axis_points();
    for (int64_t j = 0; j < (g.dim() == 2 ? n : 1); j += (g.dim() == 2 ? center_stride : 1)) {
        for (int64_t i = 0; i < n; i += center_stride) {
            uint32_t node = static_cast<uint32_t>((g.dim() == 2 ? j * n : 0) + i);
            fam.centers.push_back(g.coord(node));
        }
    }
    fam.radii = radius_ladder(g);
    return fam;
}

BallFamily BallFamily::origin_centered(const Grid& g) {
    BallFamily fam;
    fam.centers.push_back(Point{});
    fam.radii = radius_ladder(g);
    return fam;
}

double weighted_measure(const Weight& w, const Region& region) {
    const Grid& g = w.grid();
    double acc = 0.0;
    size_t n = 0;
    g.for_each_node_in(region, [&](uint32_t i) {
        acc += w.at(i);
        ++n;
    });
    if (n == 0 && region.kind() != Region::Kind::Mask)
        throw std::invalid_argument("weighted_measure: region outside grid domain");
    return acc * g.cell_measure();
}

namespace {

// Applies fn(ball nodes) for every (center, radius) pair with at least one node.
void for_each_ball(const Grid& g, const BallFamily& fam,
                   const std::function<void(const std::vector<uint32_t>&)>& fn) {
    std::vector<uint32_t> nodes;
    for (const Point& c : fam.centers) {
        for (double r : fam.radii) {
            nodes.clear();
            int64_t i0, i1, j0, j1;
            if (!g.index_box_of_ball(c, r, i0, i1, j0, j1)) continue;
            double r2 = r * r;
            for (int64_t j = j0; j <= j1; ++j) {
                double dy = g.dim() == 2 ? g.axis_coord(j) - c.c[1] : 0.0;
                double dy2 = dy * dy;
                for (int64_t i = i0; i <= i1; ++i) {
                    double dx = g.axis_coord(i) - c.c[0];
                    if (dx * dx + dy2 <= r2)
                        nodes.push_back(static_cast<uint32_t>(j * g.axis_points() + i));
                }
            }
            if (!nodes.empty()) fn(nodes);
        }
    }
}

}  // namespace

double a1_constant(const Weight& w, const BallFamily& family) {
    const Grid& g = w.grid();
    double best = 0.0;
    for_each_ball(g, family, [&](const std::vector<uint32_t>& nodes) {
        double sum = 0.0, mn = std::numeric_limits<double>::infinity();
        for (uint32_t i : nodes) {
            sum += w.at(i);
            mn = std::min(mn, w.at(i));
        }
        best = std::max(best, sum / (static_cast<double>(nodes.size()) * mn));
    });
    return best;
}

double ap_constant(const Weight& w, double p0, const BallFamily& family) {
    if (!(p0 > 1.0)) throw std::invalid_argument("ap_constant: p0 must be > 1");
    const Grid& g = w.grid();
    double e = -1.0 / (p0 - 1.0);
    double best = 0.0;
    for_each_ball(g, family, [&](const std::vector<uint32_t>& nodes) {
        double s1 = 0.0, s2 = 0.0;
        for (uint32_t i : nodes) {
            s1 += w.at(i);
            s2 += std::pow(w.at(i), e);
        }
        double n = static_cast<double>(nodes.size());
        best = std::max(best, (s1 / n) * std::pow(s2 / n, p0 - 1.0));
    });
    return best;
}

double apvar_constant(const Weight& w, const VariableExponent& p, const BallFamily& family) {
    const Grid& g = w.grid();
    double cell = g.cell_measure();
    double best = 0.0;
    std::vector<double> v1, v2, p1, p2;
    for_each_ball(g, family, [&](const std::vector<uint32_t>& nodes) {
        v1.clear(); v2.clear(); p1.clear(); p2.clear();
        for (uint32_t i : nodes) {
            double pi = p(g.coord(i));
            double wi = w.at(i);
            v1.push_back(std::pow(wi, 1.0 / pi));
            p1.push_back(pi);
            v2.push_back(std::pow(wi, -1.0 / pi));
            p2.push_back(pi / (pi - 1.0));
        }
        double ball_measure = static_cast<double>(nodes.size()) * cell;
        double n1 = luxemburg_norm_terms(v1, p1, {}, cell);
        double n2 = luxemburg_norm_terms(v2, p2, {}, cell);
        best = std::max(best, n1 * n2 / ball_measure);
    });
    return best;
}

double atilde_constant(const Weight& w, const VariableExponent& p, const BallFamily& family) {
    const Grid& g = w.grid();
    double cell = g.cell_measure();
    double best = 0.0;
    std::vector<double> v, ps;
    for_each_ball(g, family, [&](const std::vector<uint32_t>& nodes) {
        v.clear(); ps.clear();
        double l1 = 0.0, inv_p_sum = 0.0;
        for (uint32_t i : nodes) {
            double pi = p(g.coord(i));
            double wi = w.at(i);
            l1 += wi;
            inv_p_sum += 1.0 / pi;
            v.push_back(1.0 / wi);
            ps.push_back((pi / (pi - 1.0)) / pi);  // p'(x)/p(x), may dip below 1
        }
        double n = static_cast<double>(nodes.size());
        double ball_measure = n * cell;
        double p_ball = n / inv_p_sum;  // harmonic average over the ball
        double dual = luxemburg_norm_terms(v, ps, {}, cell);
        best = std::max(best, std::pow(ball_measure, -p_ball) * (l1 * cell) * dual);
    });
    return best;
}

Weight construct_weight(const Weight& w1, const Weight& w2, const VariableExponent& p) {
    const Grid& g = w1.grid();
    if (&w2.grid() != &g) throw std::invalid_argument("construct_weight: grids differ");
    std::vector<double> vals(g.node_count());
    for (uint32_t i = 0; i < vals.size(); ++i)
        vals[i] = w1.at(i) * std::pow(w2.at(i), 1.0 - p(g.coord(i)));
    return Weight(w1.grid_ptr(), std::move(vals),
                  "product:" + w1.descriptor() + "," + w2.descriptor());
}

FitReport a1_measure_comparison(const Weight& w, const BallFamily& family, int trials,
                                uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("a1_measure_comparison: need at least 2 trials");
    const Grid& g = w.grid();
    Rng rng(seed);
    std::vector<double> u, v;

    auto push_pair = [&](const std::vector<uint32_t>& ball, const std::vector<uint32_t>& sub) {
        if (sub.empty()) return;  // degenerate sample skipped
        double wb = 0.0, we = 0.0;
        for (uint32_t i : ball) wb += w.at(i);
        for (uint32_t i : sub) we += w.at(i);
        u.push_back(std::log(static_cast<double>(sub.size()) / static_cast<double>(ball.size())));
        v.push_back(std::log(we / wb));
    };

    for (int t = 0; t < trials; ++t) {
        const Point& c = family.centers[rng.below(family.centers.size())];
        double r = family.radii[rng.below(family.radii.size())];
        double frac = rng.uniform(0.05, 1.0);
        int kind = static_cast<int>(rng.below(3));
        double theta = rng.uniform(0.05, 0.95);

        std::vector<uint32_t> ball;
        try {
            ball = g.nodes_in(Region::ball(c, r));
        } catch (const std::invalid_argument&) {
            continue;  // ball missed the grid
        }

        std::vector<uint32_t> sub;
        if (kind == 0) {
            // concentric sub-ball
            for (uint32_t i : ball) {
                Point x = g.coord(i);
                double dx = x.c[0] - c.c[0], dy = g.dim() == 2 ? x.c[1] - c.c[1] : 0.0;
                if (dx * dx + dy * dy <= frac * frac * r * r) sub.push_back(i);
            }
        } else if (kind == 1) {
            // random node subset with density theta
            for (uint32_t i : ball)
                if (rng.uniform() < theta) sub.push_back(i);
        } else {
            sub = ball;  // anchors the (1, 1) corner
        }
        push_pair(ball, sub);
    }
    if (u.size() < 2)
        throw std::runtime_error("a1_measure_comparison: too few usable samples");
    return fit_upper_envelope(u, v, 1e-9, 1.0);
}

RefinementProbe probe_refinement(const std::function<double(const GridPtr&)>& estimator,
                                 GridSpec base, int levels) {
    if (levels < 2) throw std::invalid_argument("probe_refinement: need at least 2 levels");
    RefinementProbe probe;
    for (int l = 0; l < levels; ++l) {
        GridSpec s = base;
        s.points_per_unit = base.points_per_unit << l;
        probe.values.push_back(estimator(Grid::build(s)));
    }
    double first = probe.values.front(), last = probe.values.back();
    probe.total_growth = first > 0.0 ? last / first : 1.0;
    // Divergence heuristic: the constant doubles (or worse) across the span
    // of three h-halvings. Finite grids cannot certify infinity; this flags
    // power-type blowup while letting log-slow tails through.
    probe.divergent = !std::isfinite(last) || probe.total_growth >= 2.0;
    return probe;
}

}  // namespace herzlab
