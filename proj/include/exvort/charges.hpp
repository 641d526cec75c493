#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "exvort/errors.hpp"

namespace exvort {

/// Charge matrix Q (rows = flavors, columns = gauge groups) together with the
/// Fayet-Iliopoulos vector r (one entry per gauge group).
struct ChargeData {
    Eigen::MatrixXd Q;
    Eigen::VectorXd r;

    ChargeData() = default;

    ChargeData(Eigen::MatrixXd Q_, Eigen::VectorXd r_)
        : Q(std::move(Q_)), r(std::move(r_)) {
        if (Q.cols() != r.size())
            throw InvalidInputError("ChargeData: Q columns must match r size");
        for (Eigen::Index a = 0; a < Q.rows(); ++a)
            if (Q.row(a).cwiseAbs().maxCoeff() == 0.0)
                throw InvalidInputError(
                    "ChargeData: flavor row of Q is identically zero");
    }

    int flavors() const { return static_cast<int>(Q.rows()); }
    int gauge_groups() const { return static_cast<int>(Q.cols()); }
};

inline Eigen::Matrix2d cartan_su3() {
    Eigen::Matrix2d K;
    K << 2.0, -1.0, -1.0, 2.0;
    return K;
}

/// One-parameter family of 2x2 charge matrices with Q Q^T equal to the SU(3)
/// Cartan matrix, |det Q| = sqrt(3), and FI vector solving Q r = (1,1)^T.
/// sign1 and sign2 are the two independent sign choices (+1 selects the upper
/// sign).
inline ChargeData toda_charge_family(double d, int sign1 = +1, int sign2 = +1) {
    const double rt2 = std::sqrt(2.0);
    if (std::abs(d) > rt2) {
        if (std::abs(d) > rt2 + 1e-12)
            throw InvalidInputError(
                "toda_charge_family: |d| must not exceed sqrt(2)");
        d = d > 0 ? rt2 : -rt2;  // endpoint rounding
    }
    if ((sign1 != 1 && sign1 != -1) || (sign2 != 1 && sign2 != -1))
        throw InvalidInputError("toda_charge_family: signs must be +1 or -1");
    const double s = sign1, sp = sign2;
    const double w = std::sqrt(std::max(0.0, 2.0 - d * d));
    const double rt3 = std::sqrt(3.0);
    Eigen::MatrixXd Q(2, 2);
    Q(0, 0) = -sp * 0.5 * (w + s * rt3 * d);
    Q(0, 1) = 0.5 * (-d + s * rt3 * w);
    Q(1, 0) = sp * w;
    Q(1, 1) = d;
    Eigen::VectorXd r(2);
    r(0) = sp * 0.5 * (w - s * rt3 * d);
    r(1) = 0.5 * (s * rt3 * w + d);
    return ChargeData(std::move(Q), std::move(r));
}

/// True iff Q r = (1, ..., 1)^T within tol, the condition that lets a single
/// background curvature absorb every constant term.
inline bool check_compatibility(const ChargeData& cd, double tol = 1e-12) {
    const Eigen::VectorXd lhs = cd.Q * cd.r;
    return (lhs.array() - 1.0).abs().maxCoeff() < tol;
}

/// Winding numbers from fluxes: N_A = -sum_a Q_{Aa} k^a.
inline Eigen::VectorXd winding_from_flux(const ChargeData& cd,
                                         const Eigen::VectorXd& k) {
    if (k.size() != cd.Q.cols())
        throw InvalidInputError("winding_from_flux: flux size mismatch");
    return -(cd.Q * k);
}

/// Constant field values |phi_A|^2 solving the vacuum equations
///   lambda * sum_A |phi_A|^2 Q_{Aa} = lambda0 * r_a  for every a.
/// Throws NoVacuumError when the system is inconsistent or any |phi_A|^2
/// would be negative (D-term breaking).  For lambda = 0 the condition
/// degenerates to r = 0 and the trivial vacuum is returned in that case.
inline Eigen::VectorXd vacuum_moduli(const ChargeData& cd, int lambda0,
                                     int lambda) {
    const int nf = cd.flavors();
    if (lambda == 0) {
        if (lambda0 != 0 && cd.r.cwiseAbs().maxCoeff() > 1e-14)
            throw NoVacuumError(
                "vacuum_moduli: lambda = 0 requires vanishing constant terms");
        return Eigen::VectorXd::Zero(nf);
    }
    const Eigen::MatrixXd A = static_cast<double>(lambda) * cd.Q.transpose();
    const Eigen::VectorXd b = static_cast<double>(lambda0) * cd.r;
    Eigen::VectorXd v =
        A.completeOrthogonalDecomposition().solve(b);
    if ((A * v - b).cwiseAbs().maxCoeff() > 1e-10)
        throw NoVacuumError("vacuum_moduli: vacuum equations are inconsistent");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) < -1e-12)
            throw NoVacuumError(
                "vacuum_moduli: negative |phi|^2 (D-term breaking)");
        if (v(i) < 0.0) v(i) = 0.0;
    }
    return v;
}

}  // namespace exvort
