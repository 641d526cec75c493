#pragma once

#include <cmath>
#include <complex>

#include "exvort/errors.hpp"
#include "exvort/holomorphic.hpp"
#include "exvort/surface.hpp"

namespace exvort {

struct SingleFieldEval {
    double g;
    double h;
    double phi_norm_sq;
};

/// Integrable single-field vortex built from a holomorphic map f between
/// constant-curvature surfaces: the Gauss curvature of the target is -lambda.
/// Pointwise,
///   g = -log((1 - lambda |f|^2)/2) + (1/2) log|df/dz|^2,
///   h = g + log((1 - lambda0 |z|^2)/2),
///   |phi|^2 = e^{2h} = ((1-lambda0|z|^2)^2 / (1-lambda|f|^2)^2) |df/dz|^2.
/// Zeros of phi sit at the ramification points of f.
class SingleFieldSolution {
public:
    SingleFieldSolution(Surface surface, int lambda, HoloMap f)
        : surface_(surface), lambda_(lambda), f_(std::move(f)) {
        if (lambda_ < -1 || lambda_ > 1)
            throw InvalidInputError("SingleFieldSolution: lambda in {-1,0,1}");
        f_.validate_no_poles_within(surface_.radius_cutoff);
    }

    const Surface& surface() const { return surface_; }
    const HoloMap& map() const { return f_; }
    int lambda() const { return lambda_; }

    /// 1 - lambda |f(z)|^2; must stay positive for the solution to exist.
    double target_factor(Complex z) const {
        return 1.0 - lambda_ * std::norm(f_.eval(z));
    }

    SingleFieldEval eval(Complex z) const {
        if (!surface_.in_domain(z))
            throw InvalidInputError("eval: point outside the surface domain");
        const double tf = target_factor(z);
        if (tf <= 0.0)
            throw SurfaceSingularityError(
                "eval: map leaves the target domain (1 - lambda|f|^2 <= 0)");
        const Complex df = f_.derivative(z);
        const double base = 1.0 - surface_.lambda0 * std::norm(z);
        SingleFieldEval out;
        out.g = -std::log(0.5 * tf) + std::log(std::abs(df));
        out.h = out.g + std::log(0.5 * base);
        const double jac = base / tf * std::abs(df);
        out.phi_norm_sq = jac * jac;
        return out;
    }

    /// Higgs field in the unitary gauge.
    Complex phi(Complex z) const {
        const double tf = target_factor(z);
        if (tf <= 0.0)
            throw SurfaceSingularityError("phi: map leaves the target domain");
        return (1.0 - surface_.lambda0 * std::norm(z)) / tf * f_.derivative(z);
    }

    /// A_zbar = -i d/dzbar log((1 - lambda0|z|^2) / (1 - lambda|f|^2)).
    Complex gauge_potential_zbar(Complex z) const {
        const double tf = target_factor(z);
        if (tf <= 0.0)
            throw SurfaceSingularityError(
                "gauge_potential_zbar: map leaves the target domain");
        const double base = 1.0 - surface_.lambda0 * std::norm(z);
        const Complex dzbar_base =
            -static_cast<double>(surface_.lambda0) * z / base;
        const Complex dzbar_target = -static_cast<double>(lambda_) *
                                     f_.eval(z) * std::conj(f_.derivative(z)) /
                                     tf;
        return Complex(0.0, -1.0) * (dzbar_base - dzbar_target);
    }

private:
    Surface surface_;
    int lambda_;
    HoloMap f_;
};

inline SingleFieldEval eval_single(const SingleFieldSolution& sol, Complex z) {
    return sol.eval(z);
}

struct ImpurityFieldEval {
    Complex phi;
    double phi_norm_sq;
};

/// Field of the delta-impurity solution obtained from f(z) = z^(alpha+1)
/// ftilde(z):
///   phi = (1 - lambda0|z|^2) / (1 - lambda |z|^(2alpha+2) |ftilde|^2)
///         * ((alpha+1) z^alpha ftilde + z^(alpha+1) ftilde').
/// The impurity sits at the origin with strength alpha > 0.
inline ImpurityFieldEval eval_impurity_solution(const Surface& surface,
                                                int lambda, double alpha,
                                                const HoloMap& ftilde,
                                                Complex z) {
    if (alpha <= 0.0)
        throw InvalidInputError("eval_impurity_solution: alpha must be > 0");
    if (!surface.in_domain(z))
        throw InvalidInputError(
            "eval_impurity_solution: point outside the surface domain");
    const bool integer_alpha = is_nonneg_integer(alpha);
    if (!integer_alpha && std::abs(z) == 0.0)
        throw InvalidInputError(
            "eval_impurity_solution: z = 0 with non-integer alpha");
    Complex za, za1;  // z^alpha, z^(alpha+1)
    if (integer_alpha) {
        const int a = static_cast<int>(std::round(alpha));
        za = Complex(1.0);
        for (int i = 0; i < a; ++i) za *= z;
        za1 = za * z;
    } else {
        za = std::pow(z, alpha);
        za1 = za * z;
    }
    const Complex ft = ftilde.eval(z);
    const double tf = 1.0 - lambda * std::norm(za1) * std::norm(ft);
    if (tf <= 0.0)
        throw SurfaceSingularityError(
            "eval_impurity_solution: map leaves the target domain");
    const Complex dft = ftilde.derivative(z);
    const double base = 1.0 - surface.lambda0 * std::norm(z);
    ImpurityFieldEval out;
    out.phi = base / tf * ((alpha + 1.0) * za * ft + za1 * dft);
    out.phi_norm_sq = std::norm(out.phi);
    return out;
}

/// Phase |z|^alpha / z^alpha = exp(-i alpha arg z) (principal branch) that
/// turns the alpha-impurity field into a single-valued N-vortex.
inline Complex singular_gauge_phase(double alpha, Complex z) {
    if (std::abs(z) == 0.0)
        throw InvalidInputError("singular_gauge_phase: z must be nonzero");
    return std::exp(Complex(0.0, -alpha * std::arg(z)));
}

/// lambda = 0 limit: e^{2g} with g = log 2 + log|df/dz|, harmonic away from
/// the ramification points of f.
inline double bradlow_eval(const Surface& surface, const HoloMap& f,
                           Complex z) {
    if (!surface.in_domain(z))
        throw InvalidInputError("bradlow_eval: point outside the domain");
    const double a = 2.0 * std::abs(f.derivative(z));
    return a * a;
}

}  // namespace exvort
