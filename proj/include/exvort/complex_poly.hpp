#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "exvort/errors.hpp"
#include "exvort/surface.hpp"

namespace exvort {

/// Dense complex polynomial, coefficients in ascending order.
class Poly {
public:
    Poly() : c_{Complex(0.0)} {}
    Poly(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly one() { return Poly({Complex(1.0)}); }
    static Poly monomial(int k, Complex a = Complex(1.0)) {
        std::vector<Complex> c(static_cast<std::size_t>(k) + 1, Complex(0.0));
        c.back() = a;
        return Poly(std::move(c));
    }
    static Poly from_roots(const std::vector<Complex>& roots) {
        Poly p = one();
        for (Complex r : roots) p = p * Poly({-r, Complex(1.0)});
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == Complex(0.0); }
    const std::vector<Complex>& coeffs() const { return c_; }
    Complex coeff(int k) const {
        return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Complex(0.0);
    }

    Complex eval(Complex z) const {
        Complex acc = c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() == 1) return Poly();
        std::vector<Complex> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k)
            d[k - 1] = static_cast<double>(k) * c_[k];
        return Poly(std::move(d));
    }

    /// Multiply by z^k.
    Poly shifted(int k) const {
        if (is_zero()) return Poly();
        std::vector<Complex> c(c_.size() + k, Complex(0.0));
        std::copy(c_.begin(), c_.end(), c.begin() + k);
        return Poly(std::move(c));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Complex> c(a.c_.size() + b.c_.size() - 1, Complex(0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend Poly operator*(Complex s, const Poly& a) {
        std::vector<Complex> c = a.c_;
        for (auto& x : c) x *= s;
        return Poly(std::move(c));
    }

private:
    void trim() {
        while (c_.size() > 1 && std::abs(c_.back()) == 0.0) c_.pop_back();
        if (c_.empty()) c_.push_back(Complex(0.0));
    }

    std::vector<Complex> c_;
};

/// All roots of p via companion-matrix eigenvalues, each polished by one
/// Newton step.  Intended for the low degrees (<= ~10) used here.
inline std::vector<Complex> poly_roots(const Poly& p) {
    if (p.is_zero())
        throw InvalidInputError("poly_roots: zero polynomial");
    const int d = p.degree();
    if (d == 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    const Complex lead = p.coeff(d);
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.coeff(i) / lead;
    for (int i = 1; i < d; ++i) comp(i, i - 1) = Complex(1.0);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    const Poly dp = p.derivative();
    std::vector<Complex> roots(d);
    for (int i = 0; i < d; ++i) {
        Complex r = es.eigenvalues()(i);
        const Complex deriv = dp.eval(r);
        if (std::abs(deriv) > 1e-30) {
            const Complex step = p.eval(r) / deriv;
            if (std::abs(step) < 0.5 * (1.0 + std::abs(r))) r -= step;
        }
        roots[i] = r;
    }
    // Deterministic order (eigenvalue ordering is solver-defined).
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

/// Roots merged into (position, multiplicity) clusters of the given radius.
inline std::vector<std::pair<Complex, int>> poly_roots_clustered(
    const Poly& p, double cluster_radius = 1e-8) {
    std::vector<Complex> roots = poly_roots(p);
    std::vector<std::pair<Complex, int>> out;
    for (Complex r : roots) {
        bool merged = false;
        for (auto& [pos, mult] : out) {
            if (std::abs(r - pos) <= cluster_radius) {
                pos = (pos * static_cast<double>(mult) + r) /
                      static_cast<double>(mult + 1);
                ++mult;
                merged = true;
                break;
            }
        }
        if (!merged) out.emplace_back(r, 1);
    }
    return out;
}

}  // namespace exvort
