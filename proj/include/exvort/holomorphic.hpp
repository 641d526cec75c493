#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "exvort/complex_poly.hpp"
#include "exvort/errors.hpp"
#include "exvort/surface.hpp"

namespace exvort {

inline bool is_nonneg_integer(double x, double tol = 1e-12) {
    return x >= -tol && std::abs(x - std::round(x)) <= tol;
}

/// Holomorphic map f(z) = z^beta P(z)/Q(z) with exact coefficient
/// differentiation.  beta >= 0 is a real power prefactor (principal branch
/// for non-integer beta); beta = 0 means plain rational.
class HoloMap {
public:
    HoloMap() : num_(Poly::one()), den_(Poly::one()) {}

    HoloMap(Poly numerator, Poly denominator = Poly::one(), double beta = 0.0)
        : num_(std::move(numerator)), den_(std::move(denominator)), beta_(beta) {
        if (den_.is_zero())
            throw InvalidInputError("HoloMap: denominator is identically zero");
        if (beta_ < 0.0)
            throw InvalidInputError("HoloMap: power prefactor must be >= 0");
    }

    static HoloMap polynomial(std::vector<Complex> coeffs) {
        return HoloMap(Poly(std::move(coeffs)));
    }

    /// Finite Blaschke product with the given zeros (all |a| < 1 required):
    /// f(z) = prod (z - a_i) / (1 - conj(a_i) z).
    static HoloMap blaschke(const std::vector<Complex>& zeros) {
        Poly num = Poly::one(), den = Poly::one();
        for (Complex a : zeros) {
            if (std::abs(a) >= 1.0)
                throw InvalidInputError(
                    "HoloMap::blaschke: zeros must lie inside the unit disk");
            num = num * Poly({-a, Complex(1.0)});
            den = den * Poly({Complex(1.0), -std::conj(a)});
        }
        return HoloMap(std::move(num), std::move(den));
    }

    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }
    double beta() const { return beta_; }
    bool has_prefactor() const { return beta_ != 0.0; }

    /// Throws if the denominator vanishes anywhere in |z| <= radius.
    void validate_no_poles_within(double radius) const {
        if (den_.degree() == 0) return;
        for (Complex r : poly_roots(den_))
            if (std::abs(r) <= radius)
                throw InvalidInputError(
                    "HoloMap: denominator zero inside the working domain");
    }

    Complex eval(Complex z) const {
        const Complex q = den_.eval(z);
        if (std::abs(q) == 0.0)
            throw PoleError("HoloMap::eval: evaluation at a pole");
        Complex val = num_.eval(z) / q;
        if (beta_ != 0.0) val *= power_prefactor(z);
        return val;
    }

    /// Exact d/dz of z^beta P/Q:
    ///   beta z^(beta-1) P/Q + z^beta (P'Q - PQ')/Q^2.
    Complex derivative(Complex z) const {
        const Complex q = den_.eval(z);
        if (std::abs(q) == 0.0)
            throw PoleError("HoloMap::derivative: evaluation at a pole");
        const Complex p = num_.eval(z);
        const Complex rat_deriv =
            (num_.derivative().eval(z) * q - p * den_.derivative().eval(z)) /
            (q * q);
        if (beta_ == 0.0) return rat_deriv;
        if (std::abs(z) == 0.0) {
            // z^beta and beta z^(beta-1) both vanish for beta > 1; exact
            // limits for beta = 1 as well.
            if (beta_ > 1.0) return Complex(0.0);
            if (beta_ == 1.0) return p / q;
            throw InvalidInputError(
                "HoloMap::derivative: z = 0 with fractional beta < 1");
        }
        const Complex zb = power_prefactor(z);
        return beta_ * zb / z * (p / q) + zb * rat_deriv;
    }

    /// Zeros of df/dz inside |z| < search_radius with multiplicities.
    /// Requires beta = 0 or a positive integer (single-valued f).
    std::vector<std::pair<Complex, int>> ramification_divisor(
        double search_radius, double cluster_radius = 1e-8) const {
        if (!is_nonneg_integer(beta_))
            throw UnsupportedInputError(
                "ramification_divisor: non-integer power prefactor");
        const int b = static_cast<int>(std::round(beta_));
        // Numerator of f': z^(b-1) [ b P Q + z (P'Q - P Q') ]  (b >= 1),
        // or P'Q - PQ' for b = 0.
        Poly core = num_.derivative() * den_ - num_ * den_.derivative();
        Poly numerator =
            b == 0 ? core
                   : (Complex(static_cast<double>(b)) * (num_ * den_) +
                      core.shifted(1))
                         .shifted(b - 1);
        if (numerator.is_zero())
            throw DegenerateDataError(
                "ramification_divisor: derivative vanishes identically");
        if (numerator.degree() == 0) return {};
        std::vector<std::pair<Complex, int>> out;
        for (auto& [pos, mult] : poly_roots_clustered(numerator, cluster_radius))
            if (std::abs(pos) < search_radius) out.emplace_back(pos, mult);
        return out;
    }

private:
    Complex power_prefactor(Complex z) const {
        if (is_nonneg_integer(beta_)) {
            const int b = static_cast<int>(std::round(beta_));
            Complex acc(1.0);
            for (int i = 0; i < b; ++i) acc *= z;
            return acc;
        }
        if (std::abs(z) == 0.0)
            throw InvalidInputError(
                "HoloMap: z = 0 is outside the branch domain for fractional "
                "beta");
        return std::pow(z, beta_);
    }

    Poly num_;
    Poly den_;
    double beta_ = 0.0;
};

/// Finite Blaschke product, |f| = 1 on |z| = 1.
struct BlaschkeProduct {
    std::vector<Complex> zeros;

    explicit BlaschkeProduct(std::vector<Complex> zeros_ = {})
        : zeros(std::move(zeros_)) {
        for (Complex a : zeros)
            if (std::abs(a) >= 1.0)
                throw InvalidInputError(
                    "BlaschkeProduct: zeros must lie inside the unit disk");
    }

    HoloMap map() const { return HoloMap::blaschke(zeros); }

    BlaschkeProduct operator*(const BlaschkeProduct& other) const {
        std::vector<Complex> all = zeros;
        all.insert(all.end(), other.zeros.begin(), other.zeros.end());
        return BlaschkeProduct(std::move(all));
    }
};

}  // namespace exvort
