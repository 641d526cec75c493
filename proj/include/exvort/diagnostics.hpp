#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "exvort/errors.hpp"
#include "exvort/problem.hpp"

namespace exvort {

/// Magnetic fluxes and the Bogomol'nyi energy of a converged solve.
/// The flux sign follows the convention sum_a Q_{Aa} k^a = -N_A; reports
/// carry the signed contractions together with the inferred windings, and
/// callers that only care about vortex counts should compare magnitudes.
struct FluxReport {
    Eigen::VectorXd k;            // per gauge group (when Q is invertible)
    Eigen::VectorXd contracted;   // sum_a Q_{Aa} k^a, per flavor (signed)
    Eigen::VectorXd n_inferred;   // -contracted
    Eigen::VectorXd tail;         // per gauge group, disk truncation estimate
    double v_bps = 0.0;
    bool k_resolved = false;
};

inline double bogomolny_energy(int lambda0, const Eigen::VectorXd& r,
                               const Eigen::VectorXd& k) {
    if (r.size() != k.size())
        throw InvalidInputError("bogomolny_energy: size mismatch");
    return 2.0 * std::numbers::pi * lambda0 * r.dot(k);
}

/// Integrates F_12^a from the Bogomol'nyi density
///   F_12^a / Omega0 = lambda0 r_a - lambda sum_A |phi_A|^2 Q_{Aa} - sigma_a,
/// avoiding any reconstruction of gauge potentials.  Delta impurities
/// contribute their exact -alpha_j.
///
/// Truncation handling on the disk: the area integral runs over an interior
/// grid-aligned square (half-side ~0.6 R, clear of Dirichlet-truncation
/// noise), and the remainder out to |z| = 1 is the circulation of grad h_A
/// on that contour -- the field's own vacuum-approach rate.  The per-group
/// split of the correction needs an invertible Q; otherwise only the
/// per-flavor contractions are reported.  The correction is returned in
/// `tail` alongside the corrected fluxes.
inline FluxReport magnetic_flux(const ProblemSpec& spec,
                                const FieldSet& fields) {
    if (!fields.converged)
        throw InvalidInputError("magnetic_flux: fields are not converged");
    const Grid& grid = fields.grid;
    const int nf = spec.flavors();
    const int ng = spec.charges.gauge_groups();
    const double lam = spec.lambda, l0 = spec.surface.lambda0;
    const double h = grid.spacing();
    const double two_pi = 2.0 * std::numbers::pi;
    const bool disk = spec.surface.lambda0 == 1;

    // Integration region: interior square on the disk, whole grid otherwise.
    int m = grid.n();
    if (disk) {
        m = static_cast<int>(std::floor(0.6 * grid.cutoff() / h));
        auto clear_of_sources = [&](int half) {
            const double a = half * h;
            auto near_edge = [&](Complex p) {
                const double d = std::max(std::abs(p.real()), std::abs(p.imag()));
                return std::abs(d - a) < 3.0 * h;
            };
            for (const auto& list : fields.divisors)
                for (Complex p : list)
                    if (near_edge(p)) return false;
            for (const auto& [p, alpha] : fields.impurity_deltas)
                if (near_edge(p)) return false;
            return true;
        };
        while (m > grid.n() / 2 && !clear_of_sources(m)) --m;
    }

    Eigen::VectorXd raw = Eigen::VectorXd::Zero(ng);
    std::vector<double> e2h(nf);
    auto in_region = [&](int ix, int iy) {
        return !disk || (std::abs(ix) <= m && std::abs(iy) <= m);
    };
    grid.for_each_node([&](int ix, int iy, NodeClass) {
        if (!in_region(ix, iy)) return;
        const Complex z = grid.point(ix, iy);
        const double om = spec.surface.conformal_factor(z);
        for (int A = 0; A < nf; ++A)
            e2h[A] = std::exp(2.0 * fields.h[A].at(ix, iy));
        double sigma = 0.0;
        if (spec.impurity.kind == ImpuritySpec::Kind::Constant)
            sigma = spec.impurity.constant;
        else if (spec.impurity.kind == ImpuritySpec::Kind::Sampled)
            sigma = spec.impurity.sampled.at(ix, iy);
        double weight = 1.0;
        if (disk) {
            const bool ex = std::abs(ix) == m, ey = std::abs(iy) == m;
            weight = (ex && ey) ? 0.25 : (ex || ey) ? 0.5 : 1.0;
        }
        for (int a = 0; a < ng; ++a) {
            double density = l0 * spec.charges.r(a);
            for (int A = 0; A < nf; ++A)
                density -= lam * e2h[A] * spec.charges.Q(A, a);
            density -= sigma;  // single-gauge-group specs only (validated)
            raw(a) += weight * om * density * h * h;
        }
    });
    raw /= two_pi;

    // Per-flavor circulation of grad h on the square contour: the exact
    // remainder of the flux integral between the contour and |z| -> 1.
    Eigen::VectorXd circulation = Eigen::VectorXd::Zero(nf);
    if (disk) {
        for (int A = 0; A < nf; ++A) {
            double circ = 0.0;
            for (int t = -m; t < m; ++t) {
                circ += (fields.h[A].at(m + 1, t) - fields.h[A].at(m - 1, t)) / 2.0;
                circ -= (fields.h[A].at(-m + 1, t) - fields.h[A].at(-m - 1, t)) / 2.0;
                circ += (fields.h[A].at(t, m + 1) - fields.h[A].at(t, m - 1)) / 2.0;
                circ -= (fields.h[A].at(t, -m + 1) - fields.h[A].at(t, -m - 1)) / 2.0;
            }
            circulation(A) = circ / two_pi;
        }
    }

    // Delta impurities are point sources of flux with weight -alpha_j.
    double delta_flux = 0.0;
    for (auto& [pos, alpha] : spec.impurity.deltas) delta_flux -= alpha;

    FluxReport rep;
    rep.k_resolved =
        ng == nf && std::abs(spec.charges.Q.determinant()) > 1e-10;
    if (rep.k_resolved) {
        const Eigen::MatrixXd Qinv = spec.charges.Q.inverse();
        rep.tail = Qinv * circulation;
        rep.k = raw + rep.tail;
        if (!spec.impurity.deltas.empty())
            rep.k.array() += delta_flux;  // single gauge group (validated)
        rep.contracted = spec.charges.Q * rep.k;
        rep.v_bps = bogomolny_energy(spec.surface.lambda0, spec.charges.r,
                                     rep.k);
    } else {
        rep.tail = circulation;
        rep.contracted = spec.charges.Q * raw + circulation;
        if (!spec.impurity.deltas.empty())
            rep.contracted.array() += spec.charges.Q.col(0).array() * delta_flux;
        rep.k = Eigen::VectorXd();
    }
    rep.n_inferred = -rep.contracted;
    return rep;
}

/// Zeros of e^{2 h_A}: strict local minima over the eight neighbours, deep
/// enough below the field's interior maximum to be genuine cores.
inline std::vector<Complex> locate_zeros(const FieldSet& fields, int flavor,
                                         double depth_fraction = 0.25) {
    const Grid& grid = fields.grid;
    const GridField& h = fields.h[flavor];
    double max_e2h = 0.0;
    grid.for_each_node([&](int ix, int iy, NodeClass c) {
        if (c == NodeClass::Interior)
            max_e2h = std::max(max_e2h, std::exp(2.0 * h.at(ix, iy)));
    });
    std::vector<Complex> zeros;
    grid.for_each_node([&](int ix, int iy, NodeClass c) {
        if (c != NodeClass::Interior) return;
        const double val = std::exp(2.0 * h.at(ix, iy));
        if (val >= depth_fraction * max_e2h) return;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (!grid.is_retained(ix + dx, iy + dy)) return;
                if (std::exp(2.0 * h.at(ix + dx, iy + dy)) <= val) return;
            }
        zeros.push_back(grid.point(ix, iy));
    });
    return zeros;
}

struct FieldComparison {
    double l_inf = 0.0;
    double l2 = 0.0;
};

enum class CompareRegion { AllInterior, AnnulusExcludingCores };

/// L^inf and (area-weighted) L^2 distance between two grid fields over the
/// selected node set.  AnnulusExcludingCores drops nodes within core_radius
/// of any listed core, where the fields carry matching log singularities.
inline FieldComparison compare_fields(const Grid& grid, const GridField& a,
                                      const GridField& b, CompareRegion region,
                                      const std::vector<Complex>& cores = {},
                                      double core_radius = -1.0) {
    if (!a.same_shape(b) || a.n != grid.n())
        throw GridMismatchError("compare_fields: grid mismatch");
    if (core_radius < 0.0) core_radius = 3.0 * grid.spacing();
    FieldComparison out;
    const double h2 = grid.spacing() * grid.spacing();
    grid.for_each_node([&](int ix, int iy, NodeClass c) {
        if (c != NodeClass::Interior) return;
        const Complex z = grid.point(ix, iy);
        if (region == CompareRegion::AnnulusExcludingCores)
            for (Complex core : cores)
                if (std::abs(z - core) <= core_radius) return;
        const double d = std::abs(a.at(ix, iy) - b.at(ix, iy));
        out.l_inf = std::max(out.l_inf, d);
        out.l2 += d * d * h2;
    });
    out.l2 = std::sqrt(out.l2);
    return out;
}

}  // namespace exvort
