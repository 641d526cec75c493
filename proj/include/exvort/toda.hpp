#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "exvort/bipoly.hpp"
#include "exvort/charges.hpp"
#include "exvort/complex_poly.hpp"
#include "exvort/errors.hpp"
#include "exvort/holomorphic.hpp"

namespace exvort {

/// Closed-form solution of the SU(3) Toda vortex system
///   4 d_z d_zbar g_A = lambda sum_B K_{AB} exp(2 g_B)       (A = 1, 2)
/// for lambda = +-1, built from two holomorphic polynomials f1, f2 via the
/// Kostant-Leznov-Saveliev determinants generalized to both signs:
///   exp(2 g_A) = -(2/lambda) d_z d_zbar log det(M_A^dag W_A),
/// with u = (1, f1, f2)^T, v = (1, -lambda f1, -lambda f2)^T,
/// M_1 = u, M_2 = (u, u'), W_1 = v, W_2 = (v, v').  For lambda = -1 this is
/// the classical KLS solution (v = u).
///
/// The determinants are bivariate polynomials in (z, zbar); all derivatives
/// are taken exactly on their coefficients.  For lambda = +1 the right-hand
/// side can be negative: values are returned signed, and the solution is a
/// genuine pair of real fields only where both values are positive (the
/// dets() accessor exposes the determinant values for domain checks).
class TodaSolution {
public:
    TodaSolution(HoloMap f1, HoloMap f2, int lambda)
        : lambda_(lambda) {
        if (lambda != 1 && lambda != -1)
            throw InvalidInputError("TodaSolution: lambda must be +1 or -1");
        if (f1.has_prefactor() || f1.denominator().degree() != 0 ||
            f2.has_prefactor() || f2.denominator().degree() != 0)
            throw InvalidInputError(
                "TodaSolution: f1, f2 must be plain polynomials");
        const Complex q1 = f1.denominator().coeff(0);
        const Complex q2 = f2.denominator().coeff(0);
        f1_ = (Complex(1.0) / q1) * f1.numerator();
        f2_ = (Complex(1.0) / q2) * f2.numerator();

        const double lam = lambda_;
        const BiPoly one = BiPoly::constant(Complex(1.0));
        const BiPoly F1 = BiPoly::holo(f1_), F2 = BiPoly::holo(f2_);
        const BiPoly F1c = BiPoly::antiholo(f1_), F2c = BiPoly::antiholo(f2_);
        const BiPoly D1 = BiPoly::holo(f1_.derivative());
        const BiPoly D2 = BiPoly::holo(f2_.derivative());
        const BiPoly D1c = BiPoly::antiholo(f1_.derivative());
        const BiPoly D2c = BiPoly::antiholo(f2_.derivative());
        const Complex ml(-lam);

        // u^dag v and friends; dagger conjugates the left factor.
        const BiPoly uv = one + ml * (F1c * F1) + ml * (F2c * F2);
        const BiPoly uvp = ml * (F1c * D1) + ml * (F2c * D2);   // u^dag v'
        const BiPoly upv = ml * (D1c * F1) + ml * (D2c * F2);   // u'^dag v
        const BiPoly upvp = ml * (D1c * D1) + ml * (D2c * D2);  // u'^dag v'

        det_[0] = uv;
        det_[1] = uv * upvp - uvp * upv;
        for (int a = 0; a < 2; ++a) {
            if (det_[a].is_constant())
                throw DegenerateDataError(
                    "TodaSolution: det(M_A^dag W_A) is constant; the map data "
                    "is degenerate");
            // -(2/lambda) d_z d_zbar log P = -(2/lambda)
            //   (P_zzb * P - P_z * P_zb) / P^2, kept as exact polynomials.
            num_[a] = Complex(-2.0 / lam) *
                      (det_[a].dz().dzbar() * det_[a] -
                       det_[a].dz() * det_[a].dzbar());
        }
    }

    int lambda() const { return lambda_; }
    const Poly& f1() const { return f1_; }
    const Poly& f2() const { return f2_; }

    /// Determinant values det(M_1^dag W_1), det(M_2^dag W_2) at z.  Both are
    /// real for any polynomial data.
    std::pair<double, double> dets(Complex z) const {
        return {det_[0].eval(z).real(), det_[1].eval(z).real()};
    }

    /// Signed values of exp(2 g_1), exp(2 g_2) at z.
    std::pair<double, double> eval(Complex z) const {
        std::pair<double, double> out;
        const double d1 = det_[0].eval(z).real();
        const double d2 = det_[1].eval(z).real();
        if (d1 == 0.0 || d2 == 0.0)
            throw SurfaceSingularityError(
                "TodaSolution::eval: determinant vanishes at z");
        out.first = num_[0].eval(z).real() / (d1 * d1);
        out.second = num_[1].eval(z).real() / (d2 * d2);
        return out;
    }

private:
    int lambda_;
    Poly f1_, f2_;
    std::array<BiPoly, 2> det_;
    std::array<BiPoly, 2> num_;
};

inline std::pair<double, double> toda_eval(const TodaSolution& sol, Complex z) {
    return sol.eval(z);
}

/// Classical Kostant-Leznov-Saveliev formula (lambda = -1 Toda system):
///   exp(2 g_A) = (1/2) * 4 d_z d_zbar log det(M_A^dag M_A),
/// evaluated through its own determinant algebra.  Kept separate from
/// TodaSolution so the two routes can be compared against each other.
class KlsClassical {
public:
    KlsClassical(const Poly& f1, const Poly& f2) {
        const BiPoly one = BiPoly::constant(Complex(1.0));
        const BiPoly F1 = BiPoly::holo(f1), F2 = BiPoly::holo(f2);
        const BiPoly F1c = BiPoly::antiholo(f1), F2c = BiPoly::antiholo(f2);
        const BiPoly D1 = BiPoly::holo(f1.derivative());
        const BiPoly D2 = BiPoly::holo(f2.derivative());
        const BiPoly D1c = BiPoly::antiholo(f1.derivative());
        const BiPoly D2c = BiPoly::antiholo(f2.derivative());

        const BiPoly uu = one + F1c * F1 + F2c * F2;
        const BiPoly uup = F1c * D1 + F2c * D2;
        const BiPoly upu = D1c * F1 + D2c * F2;
        const BiPoly upup = D1c * D1 + D2c * D2;

        det_[0] = uu;
        det_[1] = uu * upup - uup * upu;
        for (int a = 0; a < 2; ++a)
            num_[a] = Complex(2.0) * (det_[a].dz().dzbar() * det_[a] -
                                      det_[a].dz() * det_[a].dzbar());
    }

    std::pair<double, double> eval(Complex z) const {
        const double d1 = det_[0].eval(z).real();
        const double d2 = det_[1].eval(z).real();
        if (d1 == 0.0 || d2 == 0.0)
            throw SurfaceSingularityError(
                "KlsClassical::eval: determinant vanishes at z");
        return {num_[0].eval(z).real() / (d1 * d1),
                num_[1].eval(z).real() / (d2 * d2)};
    }

private:
    std::array<BiPoly, 2> det_;
    std::array<BiPoly, 2> num_;
};

}  // namespace exvort
