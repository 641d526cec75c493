#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "exvort/complex_poly.hpp"
#include "exvort/surface.hpp"

namespace exvort {

/// Polynomial in the two independent variables (z, zbar) with complex
/// coefficients, supporting the exact mixed derivatives needed for
/// determinant formulas.  Coefficient of z^j zbar^k is c[j][k].
class BiPoly {
public:
    BiPoly() : dz_(0), dzb_(0), c_(1, Complex(0.0)) {}

    static BiPoly constant(Complex a) {
        BiPoly p;
        p.c_[0] = a;
        return p;
    }

    /// Lift a holomorphic polynomial p(z).
    static BiPoly holo(const Poly& p) {
        BiPoly out;
        out.dz_ = p.degree();
        out.dzb_ = 0;
        out.c_ = p.coeffs();
        return out;
    }

    /// Lift the antiholomorphic conjugate: conj(p)(zbar) = sum conj(c_k) zbar^k.
    static BiPoly antiholo(const Poly& p) {
        BiPoly out;
        out.dz_ = 0;
        out.dzb_ = p.degree();
        out.c_.assign(p.coeffs().size(), Complex(0.0));
        for (std::size_t k = 0; k < p.coeffs().size(); ++k)
            out.c_[k] = std::conj(p.coeffs()[k]);
        return out;
    }

    int deg_z() const { return dz_; }
    int deg_zbar() const { return dzb_; }
    bool is_constant() const { return dz_ == 0 && dzb_ == 0; }
    bool is_zero() const { return is_constant() && c_[0] == Complex(0.0); }

    Complex coeff(int j, int k) const {
        if (j < 0 || j > dz_ || k < 0 || k > dzb_) return Complex(0.0);
        return c_[idx(j, k)];
    }

    Complex eval(Complex z) const {
        const Complex zb = std::conj(z);
        // Horner in z of Horner-in-zbar rows.
        Complex acc(0.0);
        for (int j = dz_; j >= 0; --j) {
            Complex row(0.0);
            for (int k = dzb_; k >= 0; --k) row = row * zb + c_[idx(j, k)];
            acc = acc * z + row;
        }
        return acc;
    }

    BiPoly dz() const {
        if (dz_ == 0) return BiPoly();
        BiPoly out;
        out.dz_ = dz_ - 1;
        out.dzb_ = dzb_;
        out.c_.assign(static_cast<std::size_t>(dz_) * (dzb_ + 1), Complex(0.0));
        for (int j = 1; j <= dz_; ++j)
            for (int k = 0; k <= dzb_; ++k)
                out.c_[out.idx(j - 1, k)] = static_cast<double>(j) * c_[idx(j, k)];
        return out;
    }

    BiPoly dzbar() const {
        if (dzb_ == 0) return BiPoly();
        BiPoly out;
        out.dz_ = dz_;
        out.dzb_ = dzb_ - 1;
        out.c_.assign(static_cast<std::size_t>(dz_ + 1) * dzb_, Complex(0.0));
        for (int j = 0; j <= dz_; ++j)
            for (int k = 1; k <= dzb_; ++k)
                out.c_[out.idx(j, k - 1)] = static_cast<double>(k) * c_[idx(j, k)];
        return out;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        BiPoly out;
        out.dz_ = std::max(a.dz_, b.dz_);
        out.dzb_ = std::max(a.dzb_, b.dzb_);
        out.c_.assign(static_cast<std::size_t>(out.dz_ + 1) * (out.dzb_ + 1),
                      Complex(0.0));
        for (int j = 0; j <= out.dz_; ++j)
            for (int k = 0; k <= out.dzb_; ++k)
                out.c_[out.idx(j, k)] = a.coeff(j, k) + b.coeff(j, k);
        out.trim();
        return out;
    }

    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
        BiPoly out;
        out.dz_ = std::max(a.dz_, b.dz_);
        out.dzb_ = std::max(a.dzb_, b.dzb_);
        out.c_.assign(static_cast<std::size_t>(out.dz_ + 1) * (out.dzb_ + 1),
                      Complex(0.0));
        for (int j = 0; j <= out.dz_; ++j)
            for (int k = 0; k <= out.dzb_; ++k)
                out.c_[out.idx(j, k)] = a.coeff(j, k) - b.coeff(j, k);
        out.trim();
        return out;
    }

    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly out;
        out.dz_ = a.dz_ + b.dz_;
        out.dzb_ = a.dzb_ + b.dzb_;
        out.c_.assign(static_cast<std::size_t>(out.dz_ + 1) * (out.dzb_ + 1),
                      Complex(0.0));
        for (int ja = 0; ja <= a.dz_; ++ja)
            for (int ka = 0; ka <= a.dzb_; ++ka) {
                const Complex ca = a.c_[a.idx(ja, ka)];
                if (ca == Complex(0.0)) continue;
                for (int jb = 0; jb <= b.dz_; ++jb)
                    for (int kb = 0; kb <= b.dzb_; ++kb)
                        out.c_[out.idx(ja + jb, ka + kb)] +=
                            ca * b.c_[b.idx(jb, kb)];
            }
        out.trim();
        return out;
    }

    friend BiPoly operator*(Complex s, const BiPoly& a) {
        BiPoly out = a;
        for (auto& x : out.c_) x *= s;
        return out;
    }

private:
    std::size_t idx(int j, int k) const {
        return static_cast<std::size_t>(j) * (dzb_ + 1) + k;
    }

    void trim() {
        auto row_zero = [&](int j) {
            for (int k = 0; k <= dzb_; ++k)
                if (c_[idx(j, k)] != Complex(0.0)) return false;
            return true;
        };
        int new_dz = dz_, new_dzb = dzb_;
        while (new_dz > 0 && row_zero(new_dz)) --new_dz;
        while (new_dzb > 0) {
            bool zero = true;
            for (int j = 0; j <= new_dz; ++j)
                if (c_[idx(j, new_dzb)] != Complex(0.0)) zero = false;
            if (!zero) break;
            --new_dzb;
        }
        if (new_dz == dz_ && new_dzb == dzb_) return;
        std::vector<Complex> nc(static_cast<std::size_t>(new_dz + 1) *
                                    (new_dzb + 1),
                                Complex(0.0));
        for (int j = 0; j <= new_dz; ++j)
            for (int k = 0; k <= new_dzb; ++k)
                nc[static_cast<std::size_t>(j) * (new_dzb + 1) + k] =
                    c_[idx(j, k)];
        dz_ = new_dz;
        dzb_ = new_dzb;
        c_ = std::move(nc);
    }

    int dz_;
    int dzb_;
    std::vector<Complex> c_;
};

}  // namespace exvort
