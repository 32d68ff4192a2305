#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace herzlab {

// A point in the truncated domain. Only the first `dim` coordinates are used.
struct Point {
    std::array<double, 2> c{0.0, 0.0};

    double norm2(int dim) const {
        double s = c[0] * c[0];
        if (dim == 2) s += c[1] * c[1];
        return s;
    }
    double norm(int dim) const;
};

// Truncated uniform sampling of R^n (n = 1 or 2). Nodes sit at midpoints
// (i + 1/2) h - 2^{k_max} per axis, so no node ever lands on the origin or
// on a dyadic shell boundary.
struct GridSpec {
    int dim = 1;
    int k_min = 0;
    int k_max = 3;
    int points_per_unit = 16;

    double spacing() const { return 1.0 / points_per_unit; }
    double radius() const { return std::ldexp(1.0, k_max); }
    int64_t axis_points() const {
        return 2 * (int64_t(1) << std::max(k_max, 0)) * points_per_unit;
    }
    int64_t total_points() const {
        int64_t n = axis_points();
        return dim == 2 ? n * n : n;
    }

    // Throws std::invalid_argument naming the violated bound.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Region {
public:
    enum class Kind { Ball, Shell, NonhomShell, Mask, Complement };

    static Region ball(Point center, double radius);
    static Region shell(int k);          // D_k = B_k \ B_{k-1}
    static Region nonhom_shell(int m);   // C_m (C_0 = B_0)
    static Region mask(std::vector<uint32_t> nodes);   // empty mask allowed
    static Region everywhere();          // whole truncated domain
    static Region ball_complement(Point center, double radius);  // domain \ closed ball

    Kind kind() const { return kind_; }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    int index() const { return index_; }
    const std::vector<uint32_t>& mask_nodes() const { return mask_; }

    bool contains(const Grid& g, uint32_t node) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Ball;
    Point center_{};
    double radius_ = 0.0;
    int index_ = 0;
    std::vector<uint32_t> mask_;
};

// Immutable after construction; shared read-only across threads.
class Grid {
public:
    static GridPtr build(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }
    double h() const { return h_; }
    double cell_measure() const { return cell_; }  // h^dim
    double radius() const { return radius_; }
    int64_t axis_points() const { return n_axis_; }
    size_t node_count() const { return count_; }

    double axis_coord(int64_t i) const { return (i + 0.5) * h_ - radius_; }
    Point coord(uint32_t node) const {
        if (spec_.dim == 1) return Point{{axis_coord(node), 0.0}};
        return Point{{axis_coord(node % n_axis_), axis_coord(node / n_axis_)}};
    }

    // Dyadic shell index: the k with x in D_k, i.e. 2^{k-1} < |x| <= 2^k.
    int shell_of(uint32_t node) const { return shell_k_[node]; }

    // Nodes of D_k for k in [k_min, k_max].
    std::span<const uint32_t> shell_nodes(int k) const;
    // Nodes of B_0 clipped to the grid (the C_0 piece).
    std::span<const uint32_t> unit_ball_nodes() const { return c0_; }

    // Nodes in a region, clipped to the grid. Throws if the region has no
    // nodes and is not an explicitly empty mask.
    std::vector<uint32_t> nodes_in(const Region& r) const;
    void for_each_node_in(const Region& r, const std::function<void(uint32_t)>& fn) const;

    bool index_box_of_ball(const Point& c, double r,
                           int64_t& i0, int64_t& i1, int64_t& j0, int64_t& j1) const;

    uint64_t fingerprint() const;

private:
    explicit Grid(const GridSpec& spec);

    GridSpec spec_;
    double h_ = 0, cell_ = 0, radius_ = 0;
    int64_t n_axis_ = 0;
    size_t count_ = 0;
    std::vector<int8_t> shell_k_;                 // clamped to int8 range
    std::vector<std::vector<uint32_t>> shells_;   // per k in [k_min, k_max]
    std::vector<uint32_t> c0_;
};

// Real-valued samples on a grid. All samples must be finite.
struct GridFunction {
    GridPtr grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(GridPtr g, std::vector<double> v);
    static GridFunction zeros(GridPtr g);
    static GridFunction sample(GridPtr g, const std::function<double(const Point&)>& f);

    size_t size() const { return values.size(); }
    void check_finite() const;
};

double measure(const Region& region, const Grid& grid);
double integrate(const GridFunction& f, const Region& region);

// {f.chi_{D_k}} for k in [k_min, k_max], or {f.chi_{C_m}} for m in [0, k_max].
std::vector<GridFunction> shell_decompose(const GridFunction& f, bool homogeneous);

}  // namespace herzlab
