#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "core/common.hpp"

namespace herzlab {

double Point::norm(int dim) const { return std::sqrt(norm2(dim)); }

void GridSpec::validate() const {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("grid spec: dim must be 1 or 2, got " + std::to_string(dim));
    if (points_per_unit < 1)
        throw std::invalid_argument("grid spec: points_per_unit must be >= 1, got " +
                                    std::to_string(points_per_unit));
    if (k_min >= k_max)
        throw std::invalid_argument("grid spec: k_min must be < k_max (got k_min=" +
                                    std::to_string(k_min) + ", k_max=" + std::to_string(k_max) + ")");
    double h = spacing();
    if (std::ldexp(1.0, k_min) < 4.0 * h) {
        std::ostringstream os;
        os << "grid spec: 2^k_min = " << std::ldexp(1.0, k_min) << " < 4h = " << 4.0 * h
           << " -- innermost shell needs at least 4 samples per radius";
        throw std::invalid_argument(os.str());
    }
    if (total_points() > (int64_t(1) << 26))
        throw std::invalid_argument("grid spec: total sample count " +
                                    std::to_string(total_points()) + " exceeds 2^26");
}

Region Region::ball(Point center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("region: ball radius must be positive");
    Region r;
    r.kind_ = Kind::Ball;
    r.center_ = center;
    r.radius_ = radius;
    return r;
}

Region Region::ball_complement(Point center, double radius) {
    Region r = ball(center, radius);
    r.kind_ = Kind::Complement;
    return r;
}

Region Region::shell(int k) {
    Region r;
    r.kind_ = Kind::Shell;
    r.index_ = k;
    return r;
}

Region Region::nonhom_shell(int m) {
    if (m < 0) throw std::invalid_argument("region: non-homogeneous shell index must be >= 0");
    Region r;
    r.kind_ = Kind::NonhomShell;
    r.index_ = m;
    return r;
}

Region Region::mask(std::vector<uint32_t> nodes) {
    Region r;
    r.kind_ = Kind::Mask;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    r.mask_ = std::move(nodes);
    return r;
}

Region Region::everywhere() {
    Region r;
    r.kind_ = Kind::Ball;
    r.center_ = Point{};
    r.radius_ = -1.0;  // sentinel resolved against the grid
    return r;
}

std::string Region::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Ball:
            if (radius_ < 0) return "whole domain";
            os << "ball(center=(" << center_.c[0] << "," << center_.c[1] << "), r=" << radius_ << ")";
            break;
        case Kind::Complement:
            os << "complement of ball(r=" << radius_ << ")";
            break;
        case Kind::Shell: os << "shell D_" << index_; break;
        case Kind::NonhomShell: os << "shell C_" << index_; break;
        case Kind::Mask: os << "mask(" << mask_.size() << " nodes)"; break;
    }
    return os.str();
}

bool Region::contains(const Grid& g, uint32_t node) const {
    switch (kind_) {
        case Kind::Ball: {
            if (radius_ < 0) return true;
            Point p = g.coord(node);
            double dx = p.c[0] - center_.c[0];
            double dy = p.c[1] - center_.c[1];
            double d2 = dx * dx + (g.dim() == 2 ? dy * dy : 0.0);
            return d2 <= radius_ * radius_;
        }
        case Kind::Complement: {
            Point p = g.coord(node);
            double dx = p.c[0] - center_.c[0];
            double dy = p.c[1] - center_.c[1];
            double d2 = dx * dx + (g.dim() == 2 ? dy * dy : 0.0);
            return d2 > radius_ * radius_;
        }
        case Kind::Shell: return g.shell_of(node) == index_;
        case Kind::NonhomShell:
            if (index_ == 0) return g.shell_of(node) <= 0;
            return g.shell_of(node) == index_;
        case Kind::Mask:
            return std::binary_search(mask_.begin(), mask_.end(), node);
    }
    return false;
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    h_ = spec.spacing();
    cell_ = spec.dim == 2 ? h_ * h_ : h_;
    radius_ = spec.radius();
    n_axis_ = spec.axis_points();
    count_ = static_cast<size_t>(spec.total_points());
}

GridPtr Grid::build(const GridSpec& spec) {
    spec.validate();
    auto g = std::shared_ptr<Grid>(new Grid(spec));
    g->shell_k_.resize(g->count_);
    g->shells_.assign(spec.k_max - spec.k_min + 1, {});
    for (uint32_t i = 0; i < g->count_; ++i) {
        Point p = g->coord(i);
        double r = p.norm(spec.dim);
        // k with 2^{k-1} < |x| <= 2^k; midpoint nodes never hit the boundary.
        int k = static_cast<int>(std::ceil(std::log2(r)));
        g->shell_k_[i] = static_cast<int8_t>(std::clamp(k, -100, 100));
        if (k >= spec.k_min && k <= spec.k_max)
            g->shells_[k - spec.k_min].push_back(i);
        if (r <= 1.0) g->c0_.push_back(i);
    }
    return g;
}

std::span<const uint32_t> Grid::shell_nodes(int k) const {
    if (k < spec_.k_min || k > spec_.k_max)
        throw std::invalid_argument("shell index " + std::to_string(k) + " outside grid range [" +
                                    std::to_string(spec_.k_min) + ", " + std::to_string(spec_.k_max) + "]");
    return shells_[k - spec_.k_min];
}

bool Grid::index_box_of_ball(const Point& c, double r,
                             int64_t& i0, int64_t& i1, int64_t& j0, int64_t& j1) const {
    auto lo = [&](double x) {
        return std::max<int64_t>(0, static_cast<int64_t>(std::ceil((x + radius_) / h_ - 0.5)));
    };
    auto hi = [&](double x) {
        return std::min<int64_t>(n_axis_ - 1, static_cast<int64_t>(std::floor((x + radius_) / h_ - 0.5)));
    };
    i0 = lo(c.c[0] - r);
    i1 = hi(c.c[0] + r);
    if (spec_.dim == 2) {
        j0 = lo(c.c[1] - r);
        j1 = hi(c.c[1] + r);
    } else {
        j0 = j1 = 0;
    }
    return i0 <= i1 && j0 <= j1;
}

void Grid::for_each_node_in(const Region& r, const std::function<void(uint32_t)>& fn) const {
    switch (r.kind()) {
        case Region::Kind::Ball: {
            if (r.radius() < 0) {  // whole domain
                for (uint32_t i = 0; i < count_; ++i) fn(i);
                return;
            }
            int64_t i0, i1, j0, j1;
            if (!index_box_of_ball(r.center(), r.radius(), i0, i1, j0, j1)) return;
            double r2 = r.radius() * r.radius();
            for (int64_t j = j0; j <= j1; ++j) {
                double dy = spec_.dim == 2 ? axis_coord(j) - r.center().c[1] : 0.0;
                double dy2 = dy * dy;
                for (int64_t i = i0; i <= i1; ++i) {
                    double dx = axis_coord(i) - r.center().c[0];
                    if (dx * dx + dy2 <= r2) fn(static_cast<uint32_t>(j * n_axis_ + i));
                }
            }
            return;
        }
        case Region::Kind::Complement: {
            double r2 = r.radius() * r.radius();
            for (uint32_t i = 0; i < count_; ++i) {
                Point p = coord(i);
                double dx = p.c[0] - r.center().c[0];
                double dy = spec_.dim == 2 ? p.c[1] - r.center().c[1] : 0.0;
                if (dx * dx + dy * dy > r2) fn(i);
            }
            return;
        }
        case Region::Kind::Shell: {
            for (uint32_t i : shell_nodes(r.index())) fn(i);
            return;
        }
        case Region::Kind::NonhomShell: {
            if (r.index() > spec_.k_max)
                throw std::invalid_argument("shell C_" + std::to_string(r.index()) +
                                            " outside grid range (k_max = " + std::to_string(spec_.k_max) + ")");
            if (r.index() == 0) {
                for (uint32_t i : c0_) fn(i);
            } else {
                for (uint32_t i : shell_nodes(r.index())) fn(i);
            }
            return;
        }
        case Region::Kind::Mask: {
            for (uint32_t i : r.mask_nodes()) {
                if (i >= count_)
                    throw std::invalid_argument("mask node " + std::to_string(i) + " outside grid");
                fn(i);
            }
            return;
        }
    }
}

std::vector<uint32_t> Grid::nodes_in(const Region& r) const {
    std::vector<uint32_t> out;
    for_each_node_in(r, [&](uint32_t i) { out.push_back(i); });
    if (out.empty() && r.kind() != Region::Kind::Mask)
        throw std::invalid_argument("region " + r.describe() + " contains no grid nodes (outside domain?)");
    return out;
}

uint64_t Grid::fingerprint() const {
    uint64_t h = fnv1a(&spec_.dim, sizeof spec_.dim);
    h = fnv1a(&spec_.k_min, sizeof spec_.k_min, h);
    h = fnv1a(&spec_.k_max, sizeof spec_.k_max, h);
    h = fnv1a(&spec_.points_per_unit, sizeof spec_.points_per_unit, h);
    return h;
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw std::invalid_argument("grid function: null grid");
    if (values.size() != grid->node_count())
        throw std::invalid_argument("grid function: sample count " + std::to_string(values.size()) +
                                    " does not match grid (" + std::to_string(grid->node_count()) + ")");
    check_finite();
}

GridFunction GridFunction::zeros(GridPtr g) {
    std::vector<double> v(g->node_count(), 0.0);
    return GridFunction(std::move(g), std::move(v));
}

GridFunction GridFunction::sample(GridPtr g, const std::function<double(const Point&)>& f) {
    std::vector<double> v(g->node_count());
    for (uint32_t i = 0; i < v.size(); ++i) v[i] = f(g->coord(i));
    return GridFunction(std::move(g), std::move(v));
}

void GridFunction::check_finite() const {
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("grid function: non-finite sample");
}

double measure(const Region& region, const Grid& grid) {
    size_t n = 0;
    grid.for_each_node_in(region, [&](uint32_t) { ++n; });
    if (n == 0 && region.kind() != Region::Kind::Mask)
        throw std::invalid_argument("measure: region " + region.describe() + " outside grid domain");
    return static_cast<double>(n) * grid.cell_measure();
}

double integrate(const GridFunction& f, const Region& region) {
    const Grid& g = *f.grid;
    double acc = 0.0;
    size_t n = 0;
    g.for_each_node_in(region, [&](uint32_t i) {
        acc += f.values[i];
        ++n;
    });
    if (n == 0 && region.kind() != Region::Kind::Mask)
        throw std::invalid_argument("integrate: region " + region.describe() + " outside grid domain");
    return acc * g.cell_measure();
}

std::vector<GridFunction> shell_decompose(const GridFunction& f, bool homogeneous) {
    const Grid& g = *f.grid;
    const GridSpec& s = g.spec();
    std::vector<GridFunction> pieces;
    if (homogeneous) {
        for (int k = s.k_min; k <= s.k_max; ++k) {
            GridFunction piece = GridFunction::zeros(f.grid);
            for (uint32_t i : g.shell_nodes(k)) piece.values[i] = f.values[i];
            pieces.push_back(std::move(piece));
        }
    } else {
        if (s.k_max < 0)
            throw std::invalid_argument("shell_decompose: non-homogeneous split needs k_max >= 0");
        for (int m = 0; m <= s.k_max; ++m) {
            GridFunction piece = GridFunction::zeros(f.grid);
            if (m == 0) {
                for (uint32_t i : g.unit_ball_nodes()) piece.values[i] = f.values[i];
            } else {
                for (uint32_t i : g.shell_nodes(m)) piece.values[i] = f.values[i];
            }
            pieces.push_back(std::move(piece));
        }
    }
    return pieces;
}

}  // namespace herzlab
