#pragma once

#include <cmath>
#include <memory>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "exvort/errors.hpp"
#include "exvort/problem.hpp"

namespace exvort {

namespace detail {

/// Per-solve constants: grid geometry, conformal factor, singular parts,
/// constant source terms, and boundary values for the regular parts v_A.
struct SolveSetup {
    Grid grid;
    int nf = 1;
    Eigen::MatrixXd coupling;     // C = Q Q^T
    Eigen::VectorXd const_term;   // lambda0 (Q r)_A
    double charge_for_sigma = 1;  // q multiplying the continuous impurity
    std::vector<GridField> s;
    std::vector<GridField> v;       // boundary entries hold Dirichlet data
    GridField omega;                // conformal factor at retained nodes
    GridField sigma_cont;           // continuous impurity (constant/sampled)
    std::vector<std::size_t> interior;  // flat indices, fixed order
    std::vector<int> interior_ix, interior_iy;
};

inline SolveSetup prepare(const ProblemSpec& spec) {
    spec.validate();
    SolveSetup w;
    w.grid = build_grid(spec.surface, spec.grid_n);
    w.nf = spec.flavors();
    w.coupling = spec.charges.Q * spec.charges.Q.transpose();
    w.const_term = static_cast<double>(spec.surface.lambda0) *
                   (spec.charges.Q * spec.charges.r);
    w.charge_for_sigma = spec.charges.Q(0, 0);
    w.s = build_singular_part(spec, w.grid);

    w.omega = GridField(w.grid, 0.0);
    w.sigma_cont = GridField(w.grid, 0.0);
    w.grid.for_each_node([&](int ix, int iy, NodeClass c) {
        const Complex z = w.grid.point(ix, iy);
        w.omega.at(ix, iy) = spec.surface.conformal_factor(z);
        if (spec.impurity.kind == ImpuritySpec::Kind::Constant)
            w.sigma_cont.at(ix, iy) = spec.impurity.constant;
        else if (spec.impurity.kind == ImpuritySpec::Kind::Sampled) {
            if (spec.impurity.sampled.n != w.grid.n())
                throw GridMismatchError(
                    "sampled impurity does not match the grid");
            w.sigma_cont.at(ix, iy) = spec.impurity.sampled.at(ix, iy);
        }
        if (c == NodeClass::Interior) {
            w.interior.push_back(w.grid.index(ix, iy));
            w.interior_ix.push_back(ix);
            w.interior_iy.push_back(iy);
        }
    });

    // Dirichlet data for v = h - s at boundary nodes, and the initial guess
    // for the interior.  On the disk the field itself reaches the vacuum much
    // faster than the Blaschke logs decay, so the vacuum boundary value is
    // h = (1/2) log |phi_vac|^2 with no singular correction; on the plane and
    // the sphere the plain logs never settle and must be kept.
    Eigen::VectorXd half_log_vac(w.nf);
    if (spec.boundary.kind == BoundarySpec::Kind::Vacuum) {
        const Eigen::VectorXd vac =
            vacuum_moduli(spec.charges, spec.surface.lambda0, spec.lambda);
        for (int A = 0; A < w.nf; ++A) {
            if (vac(A) <= 0.0)
                throw NoVacuumError(
                    "newton_solve: vacuum boundary needs |phi|^2 > 0 in every "
                    "flavor");
            half_log_vac(A) = 0.5 * std::log(vac(A));
        }
    }

    for (int A = 0; A < w.nf; ++A) {
        GridField vA(w.grid, 0.0);
        std::vector<double> boundary_vals;
        w.grid.for_each_node([&](int ix, int iy, NodeClass c) {
            if (c != NodeClass::Boundary) return;
            const Complex z = w.grid.point(ix, iy);
            double hb;
            if (spec.boundary.kind == BoundarySpec::Kind::Vacuum)
                hb = half_log_vac(A) +
                     (spec.surface.lambda0 == 1 ? 0.0 : w.s[A].at(ix, iy));
            else
                hb = spec.boundary.h_values(A, z);
            vA.at(ix, iy) = hb - w.s[A].at(ix, iy);
            boundary_vals.push_back(vA.at(ix, iy));
        });
        double guess;
        if (spec.boundary.kind == BoundarySpec::Kind::Vacuum)
            guess = half_log_vac(A);
        else
            guess = boundary_vals.empty()
                        ? 0.0
                        : std::accumulate(boundary_vals.begin(),
                                          boundary_vals.end(), 0.0) /
                              static_cast<double>(boundary_vals.size());
        for (std::size_t p = 0; p < w.interior.size(); ++p)
            vA.data[w.interior[p]] = guess;
        w.v.push_back(std::move(vA));
    }
    return w;
}

/// Discrete residual of the regular-part equation at the interior nodes:
///   F_A = lap(v_A) + Omega0 [ lambda0 (Qr)_A
///         - lambda sum_B C_{AB} e^{2(s_B+v_B)} - q sigma ].
inline void eval_residual(const SolveSetup& w, int lambda,
                          std::vector<GridField>& out) {
    const int nf = w.nf;
    const int side = w.grid.side();
    const double inv_h2 = 1.0 / (w.grid.spacing() * w.grid.spacing());
    if (static_cast<int>(out.size()) != nf) {
        out.assign(nf, GridField(w.grid, 0.0));
    }
    std::vector<double> e2h(nf);
    for (std::size_t p = 0; p < w.interior.size(); ++p) {
        const std::size_t q = w.interior[p];
        const double om = w.omega.data[q];
        for (int B = 0; B < nf; ++B)
            e2h[B] = std::exp(2.0 * (w.s[B].data[q] + w.v[B].data[q]));
        for (int A = 0; A < nf; ++A) {
            const double lap =
                (w.v[A].data[q + 1] + w.v[A].data[q - 1] +
                 w.v[A].data[q + side] + w.v[A].data[q - side] -
                 4.0 * w.v[A].data[q]) *
                inv_h2;
            double bracket = w.const_term(A);
            for (int B = 0; B < nf; ++B)
                bracket -= lambda * w.coupling(A, B) * e2h[B];
            bracket -= w.charge_for_sigma * w.sigma_cont.data[q];
            out[A].data[q] = lap + om * bracket;
        }
    }
}

inline double max_abs_interior(const SolveSetup& w,
                               const std::vector<GridField>& f) {
    double m = 0.0;
    for (const auto& field : f)
        for (std::size_t q : w.interior)
            m = std::max(m, std::abs(field.data[q]));
    return m;
}

}  // namespace detail

/// Pointwise residual of the coupled equations for externally supplied
/// fields (FieldSet layout: h = s + v).  Interior nodes only; other nodes
/// are zero.
inline std::vector<GridField> residual(const ProblemSpec& spec,
                                       const FieldSet& fields) {
    detail::SolveSetup w = detail::prepare(spec);
    if (fields.grid.n() != w.grid.n())
        throw GridMismatchError("residual: fields do not match the problem grid");
    for (int A = 0; A < w.nf; ++A) w.v[A] = fields.v[A];
    std::vector<GridField> out;
    detail::eval_residual(w, spec.lambda, out);
    return out;
}

/// Damped Newton iteration for the coupled vortex equations.  Deterministic
/// for fixed inputs; the inner linear systems are solved with ILUT-
/// preconditioned BiCGSTAB to the configured relative residual.
inline FieldSet newton_solve(const ProblemSpec& spec, SolveConfig cfg = {}) {
    detail::SolveSetup w = detail::prepare(spec);
    const int nf = w.nf;
    const std::size_t ni = w.interior.size();
    const std::size_t nunk = ni * static_cast<std::size_t>(nf);
    const int side = w.grid.side();
    const double inv_h2 = 1.0 / (w.grid.spacing() * w.grid.spacing());

    // Interior flat index -> unknown block id.
    std::vector<int> unk_of(w.grid.size(), -1);
    for (std::size_t p = 0; p < ni; ++p)
        unk_of[w.interior[p]] = static_cast<int>(p);

    std::vector<GridField> res;
    detail::eval_residual(w, spec.lambda, res);
    double norm = detail::max_abs_interior(w, res);
    std::vector<double> history{norm};

    Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(nunk),
                                  static_cast<Eigen::Index>(nunk));
    Eigen::VectorXd rhs(nunk), delta(nunk);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(nunk * (4 + static_cast<std::size_t>(nf)));
    std::vector<double> e2h(nf);

    int iter = 0;
    while (norm >= cfg.tol) {
        if (iter >= cfg.max_iter)
            throw DivergenceError(
                "newton_solve: no convergence within max_iter", history);

        trips.clear();
        for (std::size_t p = 0; p < ni; ++p) {
            const std::size_t q = w.interior[p];
            const double om = w.omega.data[q];
            for (int B = 0; B < nf; ++B)
                e2h[B] = std::exp(2.0 * (w.s[B].data[q] + w.v[B].data[q]));
            const int row0 = static_cast<int>(p) * nf;
            for (int A = 0; A < nf; ++A) {
                const int row = row0 + A;
                rhs(row) = -res[A].data[q];
                for (int B = 0; B < nf; ++B) {
                    double val =
                        -2.0 * spec.lambda * om * w.coupling(A, B) * e2h[B];
                    if (A == B) val -= 4.0 * inv_h2;
                    trips.emplace_back(row, row0 + B, val);
                }
                for (std::ptrdiff_t off : {std::ptrdiff_t(1), std::ptrdiff_t(-1),
                                           std::ptrdiff_t(side),
                                           std::ptrdiff_t(-side)}) {
                    const int u = unk_of[q + off];
                    if (u >= 0) trips.emplace_back(row, u * nf + A, inv_h2);
                }
            }
        }
        J.setFromTriplets(trips.begin(), trips.end());

        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>,
                        Eigen::IncompleteLUT<double>>
            solver;
        solver.preconditioner().setDroptol(1e-4);
        solver.preconditioner().setFillfactor(10);
        solver.setTolerance(cfg.linear_tol);
        solver.setMaxIterations(cfg.linear_max_iter);
        solver.compute(J);
        delta = solver.solve(rhs);
        if (!delta.allFinite())
            throw DivergenceError("newton_solve: inner linear solve failed",
                                  history);

        // Backtracking: halve the step until the residual norm decreases.
        double alpha = cfg.damping;
        std::vector<GridField> v_base = w.v;
        double trial_norm;
        while (true) {
            for (int A = 0; A < nf; ++A)
                for (std::size_t p = 0; p < ni; ++p)
                    w.v[A].data[w.interior[p]] =
                        v_base[A].data[w.interior[p]] +
                        alpha * delta(static_cast<Eigen::Index>(p) * nf + A);
            detail::eval_residual(w, spec.lambda, res);
            trial_norm = detail::max_abs_interior(w, res);
            if (std::isfinite(trial_norm) && trial_norm < norm) break;
            alpha *= 0.5;
            if (alpha < 1e-10)
                throw DivergenceError(
                    "newton_solve: step rejected down to zero length (the "
                    "iteration diverged)",
                    history);
        }
        norm = trial_norm;
        history.push_back(norm);
        ++iter;
    }

    FieldSet out;
    out.grid = w.grid;
    out.s = w.s;
    out.v = w.v;
    out.h.reserve(nf);
    for (int A = 0; A < nf; ++A) {
        GridField hA(w.grid, 0.0);
        w.grid.for_each_node([&](int ix, int iy, NodeClass) {
            hA.at(ix, iy) = w.s[A].at(ix, iy) + w.v[A].at(ix, iy);
        });
        out.h.push_back(std::move(hA));
    }
    out.divisors = spec.vortices;
    out.impurity_deltas = spec.impurity.deltas;
    out.iterations = iter;
    out.converged = true;
    out.final_residual = norm;
    out.residual_history = std::move(history);

    // Truncation-quality report: how far the field still moves across the
    // last interior ring relative to the imposed boundary data.
    double mismatch = 0.0;
    for (int A = 0; A < nf; ++A)
        for (std::size_t p = 0; p < ni; ++p) {
            const std::size_t q = w.interior[p];
            for (std::ptrdiff_t off :
                 {std::ptrdiff_t(1), std::ptrdiff_t(-1), std::ptrdiff_t(side),
                  std::ptrdiff_t(-side)})
                if (w.grid.node_class(q + off) == NodeClass::Boundary)
                    mismatch = std::max(
                        mismatch, std::abs((out.h[A].data[q]) -
                                           (w.s[A].data[q + off] +
                                            w.v[A].data[q + off])));
        }
    out.boundary_mismatch = mismatch;
    return out;
}

/// Single-field solve with a magnetic impurity; delta impurities carry
/// weight alpha_j in the singular part, constant and sampled impurities act
/// as a continuous source.
inline FieldSet solve_single_with_impurity(const ProblemSpec& spec,
                                           SolveConfig cfg = {}) {
    if (spec.flavors() != 1 || spec.charges.gauge_groups() != 1)
        throw UnsupportedInputError(
            "solve_single_with_impurity: spec must have one flavor and one "
            "gauge group");
    return newton_solve(spec, cfg);
}

struct FreezeTransform {
    GridField sigma;
    ProblemSpec effective_spec;
};

/// Freeze the second species of a converged upper-triangular coupled solve:
/// computes F_12^2 / Omega0 = lambda0 r_2 - lambda sum_A |phi_A|^2 Q_{A2}
/// from the second Bogomol'nyi equation, forms
///   sigma = -Q_12 F_12^2 / (Q_11 Omega0),
/// and emits the equivalent single-flavor impurity problem for h_1 (charge
/// Q_11, constant r_1, boundary pinned to the coupled h_1).
inline FreezeTransform freeze_transform(const FieldSet& coupled,
                                        const ProblemSpec& spec) {
    if (spec.flavors() != 2 || spec.charges.gauge_groups() != 2)
        throw UnsupportedInputError(
            "freeze_transform: requires a 2-flavor, 2-group spec");
    if (spec.charges.Q(1, 0) != 0.0)
        throw UnsupportedInputError(
            "freeze_transform: charge matrix must be upper triangular "
            "(Q_21 = 0)");
    if (!coupled.converged)
        throw InvalidInputError("freeze_transform: coupled solve not converged");
    const Grid& grid = coupled.grid;
    const double lam = spec.lambda;
    const double l0 = spec.surface.lambda0;
    const double q11 = spec.charges.Q(0, 0), q12 = spec.charges.Q(0, 1);
    const double q22 = spec.charges.Q(1, 1);
    const double r2 = spec.charges.r(1);

    GridField sigma(grid, 0.0);
    grid.for_each_node([&](int ix, int iy, NodeClass) {
        const double e1 = std::exp(2.0 * coupled.h[0].at(ix, iy));
        const double e2 = std::exp(2.0 * coupled.h[1].at(ix, iy));
        const double flux_density = l0 * r2 - lam * (e1 * q12 + e2 * q22);
        sigma.at(ix, iy) = -q12 * flux_density / q11;
    });

    ProblemSpec eff;
    eff.surface = spec.surface;
    eff.lambda = spec.lambda;
    eff.charges = ChargeData((Eigen::MatrixXd(1, 1) << q11).finished(),
                             (Eigen::VectorXd(1) << spec.charges.r(0)).finished());
    eff.vortices = {spec.vortices[0]};
    eff.impurity = ImpuritySpec::sampled_field(sigma);
    eff.grid_n = spec.grid_n;
    auto h1 = std::make_shared<GridField>(coupled.h[0]);
    const double spacing = grid.spacing();
    eff.boundary = BoundarySpec::explicit_values(
        [h1, spacing](int, Complex z) {
            const int ix = static_cast<int>(std::lround(z.real() / spacing));
            const int iy = static_cast<int>(std::lround(z.imag() / spacing));
            return h1->at(ix, iy);
        });
    return {std::move(sigma), std::move(eff)};
}

}  // namespace exvort
