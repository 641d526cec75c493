#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "exvort/errors.hpp"

namespace exvort {

using Complex = std::complex<double>;

/// Constant-curvature background surface in a single stereographic/disk
/// coordinate patch.  The metric is ds^2 = Omega0 |dz|^2 with
///   Omega0(z) = 4 / (1 - lambda0 |z|^2)^2,
/// so the Gauss curvature is K0 = -lambda0.  For lambda0 = +1 this is the
/// Poincare disk (|z| < 1), for lambda0 = 0 the plane, for lambda0 = -1 the
/// unit sphere in one stereographic patch.
struct Surface {
    int lambda0 = 1;
    double radius_cutoff = 0.95;

    Surface() = default;

    explicit Surface(int lambda0_, double cutoff = -1.0) : lambda0(lambda0_) {
        if (lambda0 != -1 && lambda0 != 0 && lambda0 != 1)
            throw InvalidInputError("Surface: lambda0 must be -1, 0 or +1");
        radius_cutoff = cutoff > 0 ? cutoff : (lambda0 == 1 ? 0.95 : 4.0);
        if (radius_cutoff <= 0)
            throw InvalidInputError("Surface: radius_cutoff must be positive");
        if (lambda0 == 1 && radius_cutoff >= 1.0)
            throw InvalidInputError(
                "Surface: disk model requires radius_cutoff < 1");
    }

    bool in_domain(Complex z) const {
        return lambda0 != 1 || std::norm(z) < 1.0;
    }

    double conformal_factor(Complex z) const {
        if (!in_domain(z))
            throw InvalidInputError(
                "conformal_factor: point outside the model domain");
        const double d = 1.0 - lambda0 * std::norm(z);
        return 4.0 / (d * d);
    }
};

inline double conformal_factor(const Surface& s, Complex z) {
    return s.conformal_factor(z);
}

enum class NodeClass : unsigned char { Excluded = 0, Interior = 1, Boundary = 2 };

/// Uniform Cartesian lattice over [-R, R]^2 with nodes outside |z| <= R
/// excluded.  A retained node is interior when all four axis neighbours are
/// retained, boundary otherwise; boundary nodes therefore sit within one
/// spacing of the circle |z| = R.
class Grid {
public:
    Grid() = default;

    Grid(int n, double cutoff) : n_(n), cutoff_(cutoff), spacing_(cutoff / n) {
        const int m = 2 * n + 1;
        cls_.assign(static_cast<std::size_t>(m) * m, NodeClass::Excluded);
        const double r2 = cutoff * cutoff * (1.0 + 1e-14);
        auto inside = [&](int ix, int iy) {
            const double x = ix * spacing_, y = iy * spacing_;
            return x * x + y * y <= r2;
        };
        for (int iy = -n; iy <= n; ++iy)
            for (int ix = -n; ix <= n; ++ix) {
                if (!inside(ix, iy)) continue;
                const bool interior = ix > -n && ix < n && iy > -n && iy < n &&
                                      inside(ix + 1, iy) && inside(ix - 1, iy) &&
                                      inside(ix, iy + 1) && inside(ix, iy - 1);
                cls_[index(ix, iy)] =
                    interior ? NodeClass::Interior : NodeClass::Boundary;
            }
    }

    int n() const { return n_; }
    int side() const { return 2 * n_ + 1; }
    double spacing() const { return spacing_; }
    double cutoff() const { return cutoff_; }
    std::size_t size() const { return cls_.size(); }

    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy + n_) * side() + (ix + n_);
    }

    Complex point(int ix, int iy) const {
        return {ix * spacing_, iy * spacing_};
    }

    NodeClass node_class(int ix, int iy) const { return cls_[index(ix, iy)]; }
    NodeClass node_class(std::size_t flat) const { return cls_[flat]; }

    bool is_interior(int ix, int iy) const {
        return node_class(ix, iy) == NodeClass::Interior;
    }
    bool is_retained(int ix, int iy) const {
        return node_class(ix, iy) != NodeClass::Excluded;
    }

    template <class F>
    void for_each_node(F&& f) const {
        for (int iy = -n_; iy <= n_; ++iy)
            for (int ix = -n_; ix <= n_; ++ix) {
                const NodeClass c = node_class(ix, iy);
                if (c != NodeClass::Excluded) f(ix, iy, c);
            }
    }

private:
    int n_ = 0;
    double cutoff_ = 0;
    double spacing_ = 0;
    std::vector<NodeClass> cls_;
};

inline Grid build_grid(const Surface& s, int n) {
    if (n < 16) throw InvalidInputError("build_grid: n must be at least 16");
    return Grid(n, s.radius_cutoff);
}

/// Scalar field sampled on a Grid (same (2n+1)^2 flat layout).
struct GridField {
    int n = 0;
    std::vector<double> data;

    GridField() = default;
    explicit GridField(const Grid& g, double fill = 0.0)
        : n(g.n()), data(g.size(), fill) {}

    double& at(int ix, int iy) {
        return data[static_cast<std::size_t>(iy + n) * (2 * n + 1) + (ix + n)];
    }
    double at(int ix, int iy) const {
        return data[static_cast<std::size_t>(iy + n) * (2 * n + 1) + (ix + n)];
    }
    bool same_shape(const GridField& o) const { return n == o.n; }
};

}  // namespace exvort
