#pragma once

// Symplectic utilities: Williamson decomposition, symplectic eigenvalues,
// conversion of an arbitrary nondegenerate skew form to the standard one, and
// completion of a partial set of symplectic rows to a full symplectic matrix.

#include "gaussdil/skew.hpp"

namespace gaussdil {

/// Max-norm of S sigma S^T - sigma.
inline double symplectic_residual(const Matrix& s, const Matrix& sigma) {
    if (s.size() == 0) {
        return 0.0;
    }
    return max_abs(s * sigma * s.transpose() - sigma);
}

/// S^-1 = -sigma S^T sigma for S symplectic w.r.t. the standard form.
inline Matrix symplectic_inverse(const Matrix& s) {
    const Matrix sigma = symplectic_form(s.rows() / 2);
    return -sigma * s.transpose() * sigma;
}

struct WilliamsonDecomposition {
    /// Symplectic; S gamma S^T = diag(D, D).
    Matrix S;
    /// Symplectic eigenvalues, sorted descending.
    std::vector<double> D;
};

/// Williamson normal form of a covariance matrix gamma >= i sigma.
///
/// The skew matrix gamma^(-1/2) sigma gamma^(-1/2) is brought to canonical
/// form with values 1/D_j; rescaling the canonical basis by sqrt(D_j) and
/// composing with gamma^(-1/2) gives S.
inline WilliamsonDecomposition williamson(const Matrix& gamma, const Tolerance& tol = {}) {
    tol.validate();
    require_finite(gamma, "williamson");
    require_square(gamma, "williamson");
    if (gamma.rows() % 2 != 0) {
        throw InvalidArgument("williamson: dimension must be even");
    }
    const Index n = gamma.rows() / 2;
    WilliamsonDecomposition out;
    if (n == 0) {
        out.S = Matrix(0, 0);
        return out;
    }
    const Matrix sigma = symplectic_form(n);
    if (!hermitian_pair_psd(gamma, sigma, tol)) {
        throw PhysicalityError("williamson: covariance violates gamma >= i sigma");
    }
    const Matrix sym = 0.5 * (gamma + gamma.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.eigenvalues()(0) <= 0.0) {
        throw PhysicalityError("williamson: covariance is singular");
    }
    const Matrix& vecs = eig.eigenvectors();
    const Matrix inv_root = vecs * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();

    const Matrix scaled = inv_root * sigma * inv_root;
    const SkewCanonicalForm canon = skew_canonical(0.5 * (scaled - scaled.transpose()), tol);
    if (static_cast<Index>(canon.mu.size()) != n) {
        throw PhysicalityError("williamson: covariance is singular beyond tolerance");
    }

    out.S = Matrix(2 * n, 2 * n);
    out.D.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        // canonical values descend, so symplectic eigenvalues ascend; reverse
        const Index src = n - 1 - i;
        const double d = 1.0 / canon.mu[static_cast<std::size_t>(src)];
        if (d < 1.0 - tol.psd_abs) {
            throw PhysicalityError("williamson: symplectic eigenvalue below 1");
        }
        out.D[static_cast<std::size_t>(i)] = d;
        out.S.row(i) = std::sqrt(d) * canon.O.row(src) * inv_root;
        out.S.row(n + i) = std::sqrt(d) * canon.O.row(n + src) * inv_root;
    }
    return out;
}

/// Symplectic spectrum (descending) of gamma with respect to the standard form.
inline std::vector<double> symplectic_eigenvalues(const Matrix& gamma, const Tolerance& tol = {}) {
    return williamson(gamma, tol).D;
}

/// T with T sigma T^T equal to the standard form, for any nondegenerate skew
/// sigma. For direct sums of standard forms T is orthogonal.
inline Matrix standardizing_transform(const Matrix& sigma, const Tolerance& tol = {}) {
    require_square(sigma, "standardizing_transform");
    const Index dim = sigma.rows();
    if (dim % 2 != 0) {
        throw InvalidArgument("standardizing_transform: dimension must be even");
    }
    if (dim == 0) {
        return Matrix(0, 0);
    }
    const SkewCanonicalForm canon = skew_canonical(sigma, tol);
    const Index half = dim / 2;
    if (static_cast<Index>(canon.mu.size()) != half) {
        throw InvalidArgument("standardizing_transform: form is degenerate");
    }
    Vector scale(dim);
    for (Index j = 0; j < half; ++j) {
        scale(j) = scale(half + j) = 1.0 / std::sqrt(canon.mu[static_cast<std::size_t>(j)]);
    }
    return scale.asDiagonal() * canon.O;
}

/// Completes 2n rows R (R sigma_full R^T = sigma_2n) to a square matrix S with
/// S sigma_full S^T = sigma_full and the given rows on top.
///
/// sigma_full must be sigma_2n (+) sigma_E for some nondegenerate skew sigma_E.
/// The complement is found by symplectic Gram-Schmidt seeded with standard
/// basis vectors: the candidate with the largest sigma-orthogonal remainder is
/// accepted (ties to the lowest index), paired with its projected dual x sigma,
/// and normalized. The resulting standard-form rows are finally mapped onto
/// sigma_E.
inline Matrix symplectic_complete(const Matrix& top_rows, const Matrix& sigma_full, const Tolerance& tol = {}) {
    tol.validate();
    require_finite(top_rows, "symplectic_complete");
    require_finite(sigma_full, "symplectic_complete");
    require_square(sigma_full, "symplectic_complete");
    const Index total = sigma_full.rows();
    if (top_rows.cols() != total || top_rows.rows() % 2 != 0 || top_rows.rows() > total || total % 2 != 0) {
        throw InvalidArgument("symplectic_complete: inconsistent shapes");
    }
    const Index n = top_rows.rows() / 2;
    const Index env_dim = total - 2 * n;
    const Matrix sigma_sys = symplectic_form(n);
    if (max_abs(sigma_full.topLeftCorner(2 * n, 2 * n) - sigma_sys) != 0.0 ||
        max_abs(sigma_full.topRightCorner(2 * n, env_dim)) != 0.0 ||
        max_abs(sigma_full.bottomLeftCorner(env_dim, 2 * n)) != 0.0) {
        throw InvalidArgument("symplectic_complete: sigma_full must be sigma_2n (+) sigma_E");
    }
    const double row_scale = 1.0 + max_abs(top_rows) * max_abs(top_rows);
    if (max_abs(top_rows * sigma_full * top_rows.transpose() - sigma_sys) > tol.residual * row_scale) {
        throw InvalidArgument("symplectic_complete: rows violate R sigma R^T = sigma_2n");
    }
    if (env_dim == 0) {
        return top_rows;
    }

    std::vector<Vector> es;
    std::vector<Vector> fs;
    for (Index i = 0; i < n; ++i) {
        es.emplace_back(top_rows.row(i).transpose());
        fs.emplace_back(top_rows.row(n + i).transpose());
    }
    // x - (x s f) e + (x s e) f removes the components paired with (e, f).
    auto project = [&](Vector x) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < es.size(); ++j) {
                const double with_f = x.dot(sigma_full * fs[j]);
                const double with_e = x.dot(sigma_full * es[j]);
                x += -with_f * es[j] + with_e * fs[j];
            }
        }
        return x;
    };

    const Index env_modes = env_dim / 2;
    std::vector<bool> used(static_cast<std::size_t>(total), false);
    std::vector<Vector> new_e;
    std::vector<Vector> new_f;
    for (Index step = 0; step < env_modes; ++step) {
        Index best = -1;
        double best_norm = 0.0;
        Vector best_vec;
        for (Index c = 0; c < total; ++c) {
            if (used[static_cast<std::size_t>(c)]) {
                continue;
            }
            Vector cand = project(Vector::Unit(total, c));
            const double nrm = cand.norm();
            if (nrm > best_norm) {
                best = c;
                best_norm = nrm;
                best_vec = std::move(cand);
            }
        }
        if (best < 0 || best_norm <= tol.rank_rel) {
            throw ToleranceError("symplectic_complete: no candidate outside the accepted span");
        }
        used[static_cast<std::size_t>(best)] = true;
        const Vector x = best_vec / best_norm;
        const Vector y = project(sigma_full.transpose() * x);
        const double pairing = x.dot(sigma_full * y);
        if (pairing <= tol.rank_rel) {
            throw ToleranceError("symplectic_complete: candidate pairing below threshold");
        }
        const double s = std::sqrt(y.norm() / pairing);
        const Vector e = s * x;
        const Vector f = y / (pairing * s);
        es.push_back(e);
        fs.push_back(f);
        new_e.push_back(e);
        new_f.push_back(f);
    }

    Matrix standard_rows(env_dim, total);
    for (Index j = 0; j < env_modes; ++j) {
        standard_rows.row(j) = new_e[static_cast<std::size_t>(j)].transpose();
        standard_rows.row(env_modes + j) = new_f[static_cast<std::size_t>(j)].transpose();
    }
    const Matrix sigma_env = sigma_full.bottomRightCorner(env_dim, env_dim);
    const Matrix to_standard = standardizing_transform(sigma_env, tol);

    Matrix s(total, total);
    s.topRows(2 * n) = top_rows;
    s.bottomRows(env_dim) = to_standard.inverse() * standard_rows;
    return s;
}

}  // namespace gaussdil
