#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "exvort/closed_forms.hpp"
#include "exvort/diagnostics.hpp"
#include "exvort/io.hpp"
#include "exvort/laplace_probe.hpp"
#include "exvort/solver.hpp"
#include "exvort/toda.hpp"

namespace exvort {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitToleranceViolation = 4;

inline std::pair<int, int> family_signs(const std::string& family,
                                        const RunConfig& c) {
    if (family == "taubes") return {1, 1};
    if (family == "popov") return {-1, -1};
    if (family == "jackiw-pi") return {0, -1};
    if (family == "ambjorn-olesen") return {1, -1};
    if (family == "bradlow") return {1, 0};
    if (family == "single-field" || family == "impurity" || family == "toda")
        return {c.lambda0, c.lambda};
    throw ConfigError("unknown solution family: " + family);
}

inline HoloMap map_from_config(const std::vector<Complex>& num,
                               const std::vector<Complex>& den, double beta) {
    Poly p = num.empty() ? Poly({Complex(0.0), Complex(0.0), Complex(1.0)})
                         : Poly(num);
    Poly q = den.empty() ? Poly::one() : Poly(den);
    return HoloMap(std::move(p), std::move(q), beta);
}

inline ProblemSpec spec_from_config(const RunConfig& c) {
    ProblemSpec spec;
    spec.surface = Surface(c.lambda0, c.cutoff > 0 ? c.cutoff : -1.0);
    spec.lambda = c.lambda;
    if (c.q_rows.empty()) throw ConfigError("solve config needs q_row entries");
    const int nf = static_cast<int>(c.q_rows.size());
    const int ng = static_cast<int>(c.q_rows[0].size());
    Eigen::MatrixXd Q(nf, ng);
    for (int A = 0; A < nf; ++A) {
        if (static_cast<int>(c.q_rows[A].size()) != ng)
            throw ConfigError("ragged q_row entries");
        for (int a = 0; a < ng; ++a) Q(A, a) = c.q_rows[A][a];
    }
    if (static_cast<int>(c.r.size()) != ng)
        throw ConfigError("r must have one entry per gauge group");
    Eigen::VectorXd r(ng);
    for (int a = 0; a < ng; ++a) r(a) = c.r[a];
    spec.charges = ChargeData(std::move(Q), std::move(r));
    spec.vortices = c.vortices;
    spec.vortices.resize(nf);
    if (c.impurity == "none") spec.impurity = ImpuritySpec::none();
    else if (c.impurity == "constant")
        spec.impurity = ImpuritySpec::constant_value(c.impurity_constant);
    else if (c.impurity == "delta")
        spec.impurity = ImpuritySpec::delta(c.impurity_deltas);
    else throw ConfigError("unknown impurity kind: " + c.impurity);
    spec.grid_n = c.n;
    if (c.boundary == "vacuum") spec.boundary = BoundarySpec::vacuum();
    else if (c.boundary == "explicit") {
        if (static_cast<int>(c.boundary_values.size()) != nf)
            throw ConfigError(
                "explicit boundary needs one boundary_values entry per flavor");
        std::vector<double> vals = c.boundary_values;
        spec.boundary = BoundarySpec::explicit_values(
            [vals](int flavor, Complex) { return vals[flavor]; });
    } else throw ConfigError("unknown boundary kind: " + c.boundary);
    return spec;
}

/// Max |4 d dbar g - rhs| over interior grid nodes in the measurement
/// annulus 0.25 R <= |z| <= 0.7 R, skipping disks around the listed
/// singular points.  The Laplacian is the Richardson-extrapolated probe, so
/// the measurement is independent of the grid spacing.
inline double max_probe_residual(
    const std::function<double(Complex)>& g_fn,
    const std::function<double(Complex)>& rhs_fn, const Grid& grid,
    const std::vector<Complex>& exclude = {}, double exclude_radius = 0.15,
    const std::function<bool(Complex)>& admit = nullptr) {
    const double R = grid.cutoff();
    const double lo = 0.25 * R, hi = 0.7 * R;
    double worst = 0.0;
    grid.for_each_node([&](int ix, int iy, NodeClass c) {
        if (c != NodeClass::Interior) return;
        const Complex z = grid.point(ix, iy);
        const double rr = std::abs(z);
        if (rr < lo || rr > hi) return;
        for (Complex p : exclude)
            if (std::abs(z - p) < exclude_radius) return;
        if (admit && !admit(z)) return;
        const double lap = laplacian_probe(g_fn, z);
        worst = std::max(worst, std::abs(lap - rhs_fn(z)));
    });
    return worst;
}

namespace detail {

inline std::filesystem::path out_path(const std::string& out_dir,
                                      const std::string& name) {
    return out_dir.empty() ? std::filesystem::path(name)
                           : std::filesystem::path(out_dir) / name;
}

inline void write_json(const std::filesystem::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + p.string());
    out << j.dump(2) << "\n";
}

}  // namespace detail

namespace detail {

inline std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace detail

/// Flux report as JSON; both orientation conventions are in the literature,
/// so signed values are accompanied by their magnitudes.
inline json flux_json(const FluxReport& flux) {
    json j;
    j["contracted"] = detail::to_vec(flux.contracted);
    j["contracted_abs"] = detail::to_vec(flux.contracted.cwiseAbs());
    j["n_inferred"] = detail::to_vec(flux.n_inferred);
    j["n_inferred_abs"] = detail::to_vec(flux.n_inferred.cwiseAbs());
    if (flux.k_resolved) {
        j["k"] = detail::to_vec(flux.k);
        j["tail"] = detail::to_vec(flux.tail);
        j["v_bps"] = flux.v_bps;
    }
    return j;
}

/// Evaluate a closed-form solution family on a grid; writes the field CSV
/// and a JSON metadata file with a probe-residual summary.
inline int cmd_analytic(const RunConfig& c, const std::string& out_dir = "") {
    const auto [l0, lam] = family_signs(c.family, c);
    const Surface surface(l0, c.cutoff > 0 ? c.cutoff : -1.0);
    const Grid grid = build_grid(surface, c.n);
    json meta;
    meta["family"] = c.family;
    meta["lambda0"] = l0;
    meta["lambda"] = lam;
    meta["grid_n"] = c.n;
    meta["cutoff"] = surface.radius_cutoff;

    std::vector<GridField> h;
    double residual_max = 0.0;

    if (c.family == "toda") {
        if (lam != 1 && lam != -1)
            throw ConfigError("toda family requires lambda = +1 or -1");
        HoloMap f1 = map_from_config(c.f1_num, {}, 0.0);
        HoloMap f2 = map_from_config(c.f2_num, {}, 0.0);
        TodaSolution sol(f1, f2, lam);
        GridField g1(grid, 0.0), g2(grid, 0.0);
        const double neg_inf = -std::numeric_limits<double>::infinity();
        grid.for_each_node([&](int ix, int iy, NodeClass) {
            try {
                const auto [e1, e2] = sol.eval(grid.point(ix, iy));
                g1.at(ix, iy) = 0.5 * std::log(std::abs(e1));
                g2.at(ix, iy) = 0.5 * std::log(std::abs(e2));
            } catch (const SurfaceSingularityError&) {
                // exact determinant zero: a vortex point, fields -> -inf
                g1.at(ix, iy) = neg_inf;
                g2.at(ix, iy) = neg_inf;
            }
        });
        h = {std::move(g1), std::move(g2)};
        const Eigen::Matrix2d K = cartan_su3();
        std::vector<Complex> excl;
        for (auto& [p, m] : f1.ramification_divisor(surface.radius_cutoff))
            excl.push_back(p);
        for (auto& [p, m] : f2.ramification_divisor(surface.radius_cutoff))
            excl.push_back(p);
        auto admit = [&](Complex z) {
            const auto [d1, d2] = sol.dets(z);
            return std::abs(d1) > 0.1 && std::abs(d2) > 0.1;
        };
        for (int A = 0; A < 2; ++A) {
            auto gA = [&](Complex z) {
                const auto e = sol.eval(z);
                return 0.5 * std::log(std::abs(A == 0 ? e.first : e.second));
            };
            auto rhs = [&](Complex z) {
                const auto e = sol.eval(z);
                return lam * (K(A, 0) * e.first + K(A, 1) * e.second);
            };
            residual_max = std::max(
                residual_max,
                max_probe_residual(gA, rhs, grid, excl, 0.15, admit));
        }
        meta["fields"] = "h columns hold g_A; phi_sq columns hold exp(2 g_A)";
    } else if (c.family == "impurity") {
        HoloMap ftilde = map_from_config(
            c.f_num.empty() ? std::vector<Complex>{Complex(1.0)} : c.f_num,
            c.f_den, 0.0);
        GridField h1(grid, 0.0);
        grid.for_each_node([&](int ix, int iy, NodeClass) {
            const Complex z = grid.point(ix, iy);
            if (std::abs(z) == 0.0 && !is_nonneg_integer(c.alpha)) {
                // branch point of z^alpha; phi -> 0 there for alpha > 0
                h1.at(ix, iy) = -std::numeric_limits<double>::infinity();
                return;
            }
            const auto ev =
                eval_impurity_solution(surface, lam, c.alpha, ftilde, z);
            h1.at(ix, iy) = 0.5 * std::log(ev.phi_norm_sq);
        });
        h = {std::move(h1)};
        auto g_fn = [&](Complex z) {
            const auto ev = eval_impurity_solution(surface, lam, c.alpha,
                                                   ftilde, z);
            return 0.5 * std::log(ev.phi_norm_sq) -
                   std::log(0.5 * (1.0 - l0 * std::norm(z)));
        };
        auto rhs = [&](Complex z) {
            const auto ev = eval_impurity_solution(surface, lam, c.alpha,
                                                   ftilde, z);
            const double base = 0.5 * (1.0 - l0 * std::norm(z));
            return static_cast<double>(lam) * ev.phi_norm_sq / (base * base);
        };
        residual_max = max_probe_residual(g_fn, rhs, grid, {Complex(0.0)});
        meta["alpha"] = c.alpha;
    } else {
        HoloMap f = map_from_config(c.f_num, c.f_den, c.beta);
        SingleFieldSolution sol(surface, lam, f);
        GridField h1(grid, 0.0);
        grid.for_each_node([&](int ix, int iy, NodeClass) {
            h1.at(ix, iy) = sol.eval(grid.point(ix, iy)).h;
        });
        h = {std::move(h1)};
        std::vector<Complex> excl;
        if (f.beta() == 0.0 || is_nonneg_integer(f.beta()))
            for (auto& [p, m] : f.ramification_divisor(surface.radius_cutoff))
                excl.push_back(p);
        auto g_fn = [&](Complex z) { return sol.eval(z).g; };
        auto rhs = [&](Complex z) {
            return lam * std::exp(2.0 * sol.eval(z).g);
        };
        residual_max = max_probe_residual(g_fn, rhs, grid, excl);
    }

    meta["residual_max_annulus"] = residual_max;
    write_fields_csv(detail::out_path(out_dir, c.out_fields).string(), grid, h);
    detail::write_json(detail::out_path(out_dir, c.out_meta), meta);
    return kExitOk;
}

/// Solve a ProblemSpec config; writes fields, residual history, and a flux
/// report.  Divergence still writes the history and returns a nonzero code.
inline int cmd_solve(const RunConfig& c, const std::string& out_dir = "") {
    const ProblemSpec spec = spec_from_config(c);
    SolveConfig cfg;
    cfg.tol = c.tol;
    cfg.max_iter = c.max_iter;
    cfg.damping = c.damping;
    FieldSet fields;
    try {
        fields = newton_solve(spec, cfg);
    } catch (const DivergenceError& err) {
        std::ofstream hist(detail::out_path(out_dir, c.out_history));
        for (double r : err.residual_history) hist << fmt_double(r) << "\n";
        return kExitDivergence;
    }
    write_fields_csv(detail::out_path(out_dir, c.out_fields).string(),
                     fields.grid, fields.h);
    {
        std::ofstream hist(detail::out_path(out_dir, c.out_history));
        for (double r : fields.residual_history) hist << fmt_double(r) << "\n";
    }
    const FluxReport flux = magnetic_flux(spec, fields);
    json meta;
    meta["iterations"] = fields.iterations;
    meta["final_residual"] = fields.final_residual;
    meta["boundary_mismatch"] = fields.boundary_mismatch;
    meta["flux"] = flux_json(flux);
    for (int A = 0; A < fields.flavors(); ++A) {
        std::vector<std::vector<double>> zeros;
        for (Complex z : locate_zeros(fields, A))
            zeros.push_back({z.real(), z.imag()});
        meta["zeros"]["flavor" + std::to_string(A + 1)] = zeros;
    }
    detail::write_json(detail::out_path(out_dir, c.out_meta), meta);
    return kExitOk;
}

/// Re-ingest solver output and check it against the config: residual norms,
/// fluxes, inferred windings, V_BPS, zero locations.  Nonzero exit when the
/// declared residual tolerance is violated.
inline int cmd_verify(const RunConfig& c, const std::string& out_dir = "") {
    if (c.input_fields.empty())
        throw ConfigError("verify needs input_fields in the config");
    const ProblemSpec spec = spec_from_config(c);
    const Grid grid = build_grid(spec.surface, spec.grid_n);
    std::vector<GridField> h = read_fields_csv(c.input_fields, grid);
    if (static_cast<int>(h.size()) != spec.flavors())
        throw ConfigError("field file flavor count does not match config");

    FieldSet fields;
    fields.grid = grid;
    fields.h = h;
    fields.s = build_singular_part(spec, grid);
    // Nodes carrying a delta source have h = s = -inf in the export: the
    // regular part there is not recoverable from the file.  Rebuild it from
    // the neighbours (it is smooth) and leave those nodes out of the report.
    std::vector<std::vector<char>> masked(spec.flavors(),
                                          std::vector<char>(grid.size(), 0));
    for (int A = 0; A < spec.flavors(); ++A) {
        GridField vA(grid, 0.0);
        grid.for_each_node([&](int ix, int iy, NodeClass) {
            const double diff = h[A].at(ix, iy) - fields.s[A].at(ix, iy);
            if (std::isfinite(diff)) {
                vA.at(ix, iy) = diff;
            } else {
                masked[A][grid.index(ix, iy)] = 1;
            }
        });
        // v at a masked node is fixed by its own discrete equation (linear
        // there: the flavor's e^{2h} vanishes with the delta), which keeps
        // the neighbours' stencils accurate to the solver tolerance.
        const Eigen::MatrixXd coupling =
            spec.charges.Q * spec.charges.Q.transpose();
        const double const_term =
            spec.surface.lambda0 * (spec.charges.Q * spec.charges.r)(A);
        const double h2 = grid.spacing() * grid.spacing();
        grid.for_each_node([&](int ix, int iy, NodeClass cl) {
            if (!masked[A][grid.index(ix, iy)]) return;
            if (cl != NodeClass::Interior) return;
            const Complex z = grid.point(ix, iy);
            double bracket = const_term;
            for (int B = 0; B < spec.flavors(); ++B)
                bracket -= spec.lambda * coupling(A, B) *
                           std::exp(2.0 * h[B].at(ix, iy));
            if (spec.impurity.kind == ImpuritySpec::Kind::Constant)
                bracket -= spec.charges.Q(0, 0) * spec.impurity.constant;
            double nb = 0.0;
            for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                nb += h[A].at(ix + dx, iy + dy) -
                      fields.s[A].at(ix + dx, iy + dy);
            vA.at(ix, iy) =
                (nb + h2 * spec.surface.conformal_factor(z) * bracket) / 4.0;
        });
        fields.v.push_back(std::move(vA));
    }
    fields.divisors = spec.vortices;
    fields.impurity_deltas = spec.impurity.deltas;
    fields.converged = true;
    const std::vector<GridField> res = residual(spec, fields);
    double res_max = 0.0;
    for (int A = 0; A < spec.flavors(); ++A)
        grid.for_each_node([&](int ix, int iy, NodeClass cl) {
            if (cl == NodeClass::Interior && !masked[A][grid.index(ix, iy)])
                res_max = std::max(res_max, std::abs(res[A].at(ix, iy)));
        });

    const FluxReport flux = magnetic_flux(spec, fields);
    json rep;
    rep["residual_max"] = res_max;
    rep["residual_tolerance"] = c.tol;
    rep["flux"] = flux_json(flux);
    for (int A = 0; A < fields.flavors(); ++A) {
        std::vector<std::vector<double>> zeros;
        for (Complex z : locate_zeros(fields, A))
            zeros.push_back({z.real(), z.imag()});
        rep["zeros"]["flavor" + std::to_string(A + 1)] = zeros;
    }
    const bool ok = res_max <= c.tol;
    rep["pass"] = ok;
    detail::write_json(detail::out_path(out_dir, c.out_meta), rep);
    return ok ? kExitOk : kExitToleranceViolation;
}

/// Compare two field CSVs on the same grid.
inline int cmd_compare(const RunConfig& c, const std::string& out_dir = "") {
    if (c.compare_a.empty() || c.compare_b.empty())
        throw ConfigError("compare needs 'a' and 'b' field files");
    const Surface surface(c.lambda0, c.cutoff > 0 ? c.cutoff : -1.0);
    const Grid grid = build_grid(surface, c.n);
    const std::vector<GridField> ha = read_fields_csv(c.compare_a, grid);
    const std::vector<GridField> hb = read_fields_csv(c.compare_b, grid);
    if (ha.size() != hb.size())
        throw ConfigError("compare: flavor count mismatch");
    json rep;
    double worst = 0.0;
    for (std::size_t A = 0; A < ha.size(); ++A) {
        const FieldComparison cmp = compare_fields(
            grid, ha[A], hb[A], CompareRegion::AllInterior);
        rep["flavor" + std::to_string(A + 1)] = {{"l_inf", cmp.l_inf},
                                                 {"l2", cmp.l2}};
        worst = std::max(worst, cmp.l_inf);
    }
    rep["l_inf_max"] = worst;
    detail::write_json(detail::out_path(out_dir, c.out_meta), rep);
    if (c.compare_tol > 0.0 && worst > c.compare_tol)
        return kExitToleranceViolation;
    return kExitOk;
}

}  // namespace exvort
