#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "exvort/charges.hpp"
#include "exvort/errors.hpp"
#include "exvort/surface.hpp"

namespace exvort {

/// Magnetic impurity sigma(x).  Delta impurities are absorbed into the
/// singular part of the fields with weight alpha_j; constant and sampled
/// impurities enter the equations as a continuous source.
struct ImpuritySpec {
    enum class Kind { None, Constant, Delta, Sampled };

    Kind kind = Kind::None;
    double constant = 0.0;
    std::vector<std::pair<Complex, double>> deltas;  // (position, alpha > 0)
    GridField sampled;

    static ImpuritySpec none() { return {}; }

    static ImpuritySpec constant_value(double c) {
        ImpuritySpec s;
        s.kind = Kind::Constant;
        s.constant = c;
        return s;
    }

    static ImpuritySpec delta(std::vector<std::pair<Complex, double>> ds) {
        ImpuritySpec s;
        s.kind = Kind::Delta;
        s.deltas = std::move(ds);
        for (auto& [pos, alpha] : s.deltas)
            if (alpha <= 0.0)
                throw InvalidInputError(
                    "ImpuritySpec: delta strengths must be positive");
        return s;
    }

    static ImpuritySpec sampled_field(GridField f) {
        ImpuritySpec s;
        s.kind = Kind::Sampled;
        s.sampled = std::move(f);
        return s;
    }
};

/// Dirichlet data at boundary nodes: either the vacuum solution or explicit
/// per-flavor values h_A(z).
struct BoundarySpec {
    enum class Kind { Vacuum, Explicit };

    Kind kind = Kind::Vacuum;
    std::function<double(int flavor, Complex z)> h_values;

    static BoundarySpec vacuum() { return {}; }

    static BoundarySpec explicit_values(
        std::function<double(int flavor, Complex z)> fn) {
        BoundarySpec b;
        b.kind = Kind::Explicit;
        b.h_values = std::move(fn);
        return b;
    }
};

/// Full problem statement for the coupled vortex equations
///   -(4/Omega0) d_z d_zbar h_A = lambda0 (Q r)_A
///        - lambda sum_B (Q Q^T)_{AB} e^{2 h_B} - q_A sigma
///        - (2 pi / Omega0) sum_r delta(z - Z_r^A).
struct ProblemSpec {
    Surface surface;
    int lambda = 1;
    ChargeData charges;
    std::vector<std::vector<Complex>> vortices;  // per flavor, multiplicity by repetition
    ImpuritySpec impurity;
    int grid_n = 128;
    BoundarySpec boundary;

    int flavors() const { return charges.flavors(); }

    void validate() const {
        if (lambda < -1 || lambda > 1)
            throw InvalidInputError("ProblemSpec: lambda must be -1, 0 or +1");
        if (static_cast<int>(vortices.size()) != flavors())
            throw InvalidInputError(
                "ProblemSpec: one vortex list per flavor required");
        for (const auto& list : vortices)
            for (Complex Z : list)
                if (std::abs(Z) >= surface.radius_cutoff)
                    throw InvalidInputError(
                        "ProblemSpec: vortex center outside the truncated "
                        "domain");
        if (impurity.kind != ImpuritySpec::Kind::None &&
            (flavors() != 1 || charges.gauge_groups() != 1))
            throw UnsupportedInputError(
                "ProblemSpec: impurities are supported for single-flavor, "
                "single-gauge-group problems only");
        for (auto& [pos, alpha] : impurity.deltas) {
            if (alpha <= 0.0)
                throw InvalidInputError(
                    "ProblemSpec: delta impurity strengths must be positive");
            if (std::abs(pos) >= surface.radius_cutoff)
                throw InvalidInputError(
                    "ProblemSpec: delta impurity outside the domain");
        }
        if (boundary.kind == BoundarySpec::Kind::Vacuum)
            vacuum_moduli(charges, surface.lambda0, lambda);  // throws if none
        if (boundary.kind == BoundarySpec::Kind::Explicit && !boundary.h_values)
            throw InvalidInputError(
                "ProblemSpec: explicit boundary requires a value function");
    }
};

struct SolveConfig {
    double tol = 1e-10;
    int max_iter = 60;
    double damping = 1.0;       // initial step scale, backtracked by halving
    double linear_tol = 1e-12;  // relative residual of the inner solves
    int linear_max_iter = 8000;
};

/// Converged (or partially converged) fields h_A = s_A + v_A on the grid,
/// with the singular parts s_A and solver metadata.
struct FieldSet {
    Grid grid;
    std::vector<GridField> h;
    std::vector<GridField> s;
    std::vector<GridField> v;
    std::vector<std::vector<Complex>> divisors;
    std::vector<std::pair<Complex, double>> impurity_deltas;

    int iterations = 0;
    bool converged = false;
    double final_residual = std::numeric_limits<double>::infinity();
    std::vector<double> residual_history;
    double boundary_mismatch = 0.0;

    int flavors() const { return static_cast<int>(h.size()); }
};

/// log of the singular factor for one vortex: a Blaschke factor on the disk
/// (vanishing on |z| = 1), a plain log elsewhere.
inline double singular_log(const Surface& s, Complex z, Complex Z) {
    if (s.lambda0 == 1)
        return std::log(std::abs((z - Z) / (1.0 - std::conj(Z) * z)));
    return std::log(std::abs(z - Z));
}

/// Per-flavor singular parts s_A carrying every delta source: the flavor's
/// vortices with unit weight each, plus (single-flavor specs) the delta
/// impurities with weight alpha_j.  Centers falling exactly on a grid node
/// are kept exact: s = -inf there, and only e^{2s} = 0 ever enters the
/// discrete equations.
inline std::vector<GridField> build_singular_part(const ProblemSpec& spec,
                                                  const Grid& grid) {
    std::vector<GridField> s;
    s.reserve(spec.flavors());
    for (int A = 0; A < spec.flavors(); ++A) {
        GridField sA(grid, 0.0);
        grid.for_each_node([&](int ix, int iy, NodeClass) {
            const Complex z = grid.point(ix, iy);
            double acc = 0.0;
            for (Complex Z : spec.vortices[A])
                acc += singular_log(spec.surface, z, Z);
            if (A == 0)
                for (auto& [pos, alpha] : spec.impurity.deltas)
                    acc += alpha * singular_log(spec.surface, z, pos);
            sA.at(ix, iy) = acc;
        });
        s.push_back(std::move(sA));
    }
    return s;
}

}  // namespace exvort
