#pragma once

// Minimal Gaussian purification of a covariance matrix. Every symplectic
// eigenvalue D_j > 1 needs one ancilla mode, coupled to the j-th Williamson
// mode through a two-mode squeezed block with off-diagonal f(D_j) in the
// Q_A-P_B / P_A-Q_B pattern; unit eigenvalues are already pure.

#include "gaussdil/matcore.hpp"

namespace gaussdil {

/// Two-mode squeezing coupling f(x) = -sqrt(x^2 - 1), clamped at x <= 1.
inline double squeeze_coupling(double x) { return -std::sqrt(std::max(x * x - 1.0, 0.0)); }

struct PurityReport {
    bool pure = false;
    std::vector<double> sympl_spectrum;  ///< descending
};

inline PurityReport purity_test(const Matrix& gamma, const Tolerance& tol = {}) {
    PurityReport rep;
    rep.sympl_spectrum = symplectic_eigenvalues(gamma, tol);
    rep.pure = std::all_of(rep.sympl_spectrum.begin(), rep.sympl_spectrum.end(),
                           [&](double d) { return std::abs(d - 1.0) <= tol.psd_abs; });
    return rep;
}

/// Purity with respect to an arbitrary nondegenerate form (e.g. a direct sum
/// of standard forms of different sizes).
inline PurityReport purity_test(const Matrix& gamma, const Matrix& sigma, const Tolerance& tol = {}) {
    if (gamma.rows() != sigma.rows()) {
        throw InvalidArgument("purity_test: covariance and form dimensions differ");
    }
    const Matrix t = standardizing_transform(sigma, tol);
    return purity_test(t * gamma * t.transpose(), tol);
}

struct Purification {
    Index q = 0;           ///< ancilla modes
    Matrix Gamma;          ///< (2n + 2q) square, system block first
    Matrix sigma;          ///< sigma_2n (+) sigma_2q, the form Gamma refers to
    Matrix S_back;         ///< Williamson symplectic: S gamma S^T = diag(D, D)
    Index unit_count = 0;  ///< number of unit symplectic eigenvalues
    std::vector<double> D;
};

inline Purification minimal_purification(const Matrix& gamma, const Tolerance& tol = {}) {
    const WilliamsonDecomposition w = williamson(gamma, tol);
    const Index n = gamma.rows() / 2;

    Purification out;
    out.D = w.D;
    out.S_back = w.S;
    for (double d : w.D) {
        if (d > 1.0 + tol.psd_abs) {
            ++out.q;
        }
    }
    out.unit_count = n - out.q;
    const Index q = out.q;
    const Index total = 2 * n + 2 * q;

    Matrix normal = Matrix::Zero(total, total);
    for (Index j = 0; j < n; ++j) {
        normal(j, j) = normal(n + j, n + j) = w.D[static_cast<std::size_t>(j)];
    }
    // ancillas follow the system, ordered by descending D_j
    for (Index j = 0; j < q; ++j) {
        const double d = w.D[static_cast<std::size_t>(j)];
        const double f = squeeze_coupling(d);
        const Index qa = j, pa = n + j, qb = 2 * n + j, pb = 2 * n + q + j;
        normal(qb, qb) = normal(pb, pb) = d;
        normal(qa, pb) = normal(pb, qa) = f;
        normal(pa, qb) = normal(qb, pa) = f;
    }

    const Matrix lift = block_diag(symplectic_inverse(w.S), Matrix::Identity(2 * q, 2 * q));
    out.Gamma = lift * normal * lift.transpose();
    out.Gamma = Matrix(0.5 * (out.Gamma + out.Gamma.transpose()));
    out.sigma = block_diag(symplectic_form(n), symplectic_form(q));

    const double marginal = max_abs(out.Gamma.topLeftCorner(2 * n, 2 * n) - gamma);
    if (marginal > tol.residual * (1.0 + max_abs(gamma))) {
        throw VerificationError("minimal_purification: marginal residual " + std::to_string(marginal));
    }
    return out;
}

/// Ancilla count from rank[gamma - sigma gamma^-1 sigma^T] / 2.
inline Index purification_modes_by_rank(const Matrix& gamma, const Tolerance& tol = {}) {
    const Index n = gamma.rows() / 2;
    if (n == 0) {
        return 0;
    }
    const Matrix sigma = symplectic_form(n);
    const Matrix defect = gamma - sigma * gamma.inverse() * sigma.transpose();
    const Index rank = numerical_rank(defect, tol, norm2(gamma));
    if (rank % 2 != 0) {
        throw ToleranceError("purification_modes_by_rank: odd rank " + std::to_string(rank));
    }
    return rank / 2;
}

}  // namespace gaussdil
