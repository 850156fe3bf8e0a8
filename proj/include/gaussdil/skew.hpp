#pragma once

// Orthogonal canonical form of skew-symmetric matrices, the congruence normal
// form of a pair (A symmetric PSD, B skew) with A >= iB, and the rank identity
// 2 rank[A - iB] = rank A + rank[A - B A^+ B^T] that follows from it.

#include "gaussdil/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace gaussdil {

struct SkewCanonicalForm {
    /// Orthogonal; O B O^T = [[0, diag(mu)], [-diag(mu), 0]] (+) 0.
    Matrix O;
    /// Strictly positive, sorted descending.
    std::vector<double> mu;
};

/// Canonical block form of a real skew-symmetric matrix under orthogonal
/// similarity.
///
/// Householder reduction gives B = Q T Q^T with T skew tridiagonal. Splitting
/// the coordinates into even and odd indices turns T into [[0, G], [-G^T, 0]]
/// with G bidiagonal, and the SVD G = P diag(s) R^T yields the pairs: row j of
/// the canonical basis is P's column j on the even coordinates, row half + j
/// is R's column j on the odd ones. Values s <= rank_rel * max(s_max, scale)
/// join the zero part.
inline SkewCanonicalForm skew_canonical(const Matrix& b, const Tolerance& tol = {}, double scale = 0.0) {
    require_finite(b, "skew_canonical");
    require_square(b, "skew_canonical");
    const Index dim = b.rows();
    if (max_abs(b + b.transpose()) > tol.residual * (1.0 + max_abs(b))) {
        throw InvalidArgument("skew_canonical: matrix is not skew-symmetric");
    }
    SkewCanonicalForm out;
    out.O = Matrix::Identity(dim, dim);
    if (dim == 0 || max_abs(b) == 0.0) {
        return out;
    }

    const Matrix skew = 0.5 * (b - b.transpose());
    Matrix q = Matrix::Identity(dim, dim);
    Matrix tri = skew;
    if (dim > 2) {
        Eigen::HessenbergDecomposition<Matrix> hess(skew);
        q = hess.matrixQ();
        tri = hess.matrixH();
    }
    const Index n_even = (dim + 1) / 2;
    const Index n_odd = dim / 2;
    Matrix g = Matrix::Zero(n_even, n_odd);
    for (Index i = 0; i + 1 < dim; ++i) {
        const double off = 0.5 * (tri(i, i + 1) - tri(i + 1, i));
        if (i % 2 == 0) {
            g(i / 2, i / 2) = off;  // T(2a, 2a+1)
        } else {
            g((i + 1) / 2, i / 2) = -off;  // T(2a, 2a-1) = -T(2a-1, 2a)
        }
    }
    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Matrix& left = svd.matrixU();
    const Matrix& right = svd.matrixV();

    const Index paired = std::min(n_even, n_odd);
    const double top = std::max(paired > 0 ? sv(0) : 0.0, scale);
    Index half = 0;
    while (half < paired && sv(half) > tol.rank_rel * top) {
        ++half;
    }

    auto even_vector = [&](Index col) {
        Vector v = Vector::Zero(dim);
        for (Index a = 0; a < n_even; ++a) v(2 * a) = left(a, col);
        return Vector(q * v);
    };
    auto odd_vector = [&](Index col) {
        Vector v = Vector::Zero(dim);
        for (Index a = 0; a < n_odd; ++a) v(2 * a + 1) = right(a, col);
        return Vector(q * v);
    };

    for (Index j = 0; j < half; ++j) {
        out.O.row(j) = even_vector(j).transpose();
        out.O.row(half + j) = odd_vector(j).transpose();
        out.mu.push_back(sv(j));
    }
    Index row = 2 * half;
    for (Index j = half; j < n_even; ++j) {
        out.O.row(row++) = even_vector(j).transpose();
    }
    for (Index j = half; j < n_odd; ++j) {
        out.O.row(row++) = odd_vector(j).transpose();
    }
    return out;
}

/// The block matrix [[0, diag(mu)], [-diag(mu), 0]] padded with zeros to `dim`.
inline Matrix skew_block_form(const std::vector<double>& mu, Index dim) {
    const Index half = static_cast<Index>(mu.size());
    Matrix out = Matrix::Zero(dim, dim);
    for (Index j = 0; j < half; ++j) {
        out(j, half + j) = mu[static_cast<std::size_t>(j)];
        out(half + j, j) = -mu[static_cast<std::size_t>(j)];
    }
    return out;
}

/// Congruence C with C A C^T = I_a (+) 0 and C B C^T = skew_block_form(mu).
///
/// C = [[O' A''^(-1/2), 0], [0, I]] O where O diagonalizes A (support first,
/// eigenvalues descending), A'' holds the a positive eigenvalues, and O'
/// brings the rescaled restriction B'' of B to canonical form. The factors
/// are kept so C^-1 = O^T [[A''^(1/2) O'^T, 0], [0, I]] is exact.
struct CongruenceNormalForm {
    Matrix C;
    Matrix C_inv;
    Index a = 0;
    Index b = 0;
    std::vector<double> mu;
    Index ones_count = 0;

    Matrix O;
    Vector support_eigenvalues;
    Matrix O_prime;
};

inline CongruenceNormalForm congruence_normal_form(const Matrix& a_in, const Matrix& b_in, const Tolerance& tol = {},
                                                   double scale = 0.0) {
    tol.validate();
    if (!hermitian_pair_psd(a_in, b_in, tol)) {
        throw PhysicalityError("congruence_normal_form: A >= iB does not hold");
    }
    const Index dim = a_in.rows();
    const Matrix a = 0.5 * (a_in + a_in.transpose());
    const Matrix b = 0.5 * (b_in - b_in.transpose());

    CongruenceNormalForm nf;
    if (dim == 0) {
        nf.C = nf.C_inv = nf.O = nf.O_prime = Matrix(0, 0);
        nf.support_eigenvalues = Vector(0);
        return nf;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    std::vector<Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return eig.eigenvalues()(x) > eig.eigenvalues()(y); });
    const double top = std::max(std::abs(eig.eigenvalues()(order.front())), scale);
    nf.O = Matrix(dim, dim);
    Index support = 0;
    for (Index i = 0; i < dim; ++i) {
        const Index src = order[static_cast<std::size_t>(i)];
        nf.O.row(i) = eig.eigenvectors().col(src).transpose();
        if (top > 0.0 && eig.eigenvalues()(src) > tol.rank_rel * top) {
            ++support;
        }
    }
    nf.a = support;
    nf.support_eigenvalues = Vector(support);
    for (Index i = 0; i < support; ++i) {
        nf.support_eigenvalues(i) = eig.eigenvalues()(order[static_cast<std::size_t>(i)]);
    }

    const Matrix rotated = nf.O * b * nf.O.transpose();
    if (support < dim) {
        const double leak = max_abs(rotated.bottomRows(dim - support));
        if (leak > tol.residual * (1.0 + max_abs(b))) {
            throw PhysicalityError("congruence_normal_form: support of B is not contained in support of A");
        }
    }

    const Vector inv_sqrt = nf.support_eigenvalues.cwiseSqrt().cwiseInverse();
    const Matrix reduced =
        inv_sqrt.asDiagonal() * rotated.topLeftCorner(support, support) * inv_sqrt.asDiagonal();
    // A' = I, so the natural magnitude for mu is 1.
    SkewCanonicalForm canon = skew_canonical(0.5 * (reduced - reduced.transpose()), tol, 1.0);
    nf.O_prime = std::move(canon.O);
    for (double m : canon.mu) {
        if (m > 1.0 + tol.psd_abs) {
            throw PhysicalityError("congruence_normal_form: canonical value " + std::to_string(m) + " exceeds 1");
        }
        nf.mu.push_back(std::min(m, 1.0));
        if (std::abs(m - 1.0) <= tol.psd_abs) {
            ++nf.ones_count;
        }
    }
    nf.b = 2 * static_cast<Index>(nf.mu.size());

    Matrix left = Matrix::Identity(dim, dim);
    left.topLeftCorner(support, support) = nf.O_prime * inv_sqrt.asDiagonal();
    nf.C = left * nf.O;
    Matrix right = Matrix::Identity(dim, dim);
    right.topLeftCorner(support, support) = nf.support_eigenvalues.cwiseSqrt().asDiagonal() * nf.O_prime.transpose();
    nf.C_inv = nf.O.transpose() * right;
    return nf;
}

/// The normal form of A: I_a (+) 0.
inline Matrix congruence_target_a(const CongruenceNormalForm& nf, Index dim) {
    Matrix out = Matrix::Zero(dim, dim);
    out.topLeftCorner(nf.a, nf.a).setIdentity();
    return out;
}

struct LemmaReport {
    Index lhs = 0;         ///< 2 rank[A - iB]
    Index rhs = 0;         ///< rank A + rank[A - B A^+ B^T]
    Index ones_count = 0;  ///< unit entries of mu
    bool ineq_ok = false;  ///< rank A >= rank B >= rank A - rank[A - B A^+ B^T] >= 0
    Index rank_a = 0;
    Index rank_b = 0;
    Index rank_schur = 0;  ///< rank[A - B A^+ B^T]
};

inline LemmaReport lemma_report(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
    const CongruenceNormalForm nf = congruence_normal_form(a, b, tol);
    const double scale = norm2(a);
    LemmaReport rep;
    rep.lhs = 2 * hermitian_pair_rank(a, b, tol, scale);
    rep.rank_a = numerical_rank(a, tol);
    rep.rank_b = numerical_rank(b, tol, scale);
    const Matrix schur = a - b * mp_inverse(a, tol) * b.transpose();
    rep.rank_schur = numerical_rank(schur, tol, scale);
    rep.rhs = rep.rank_a + rep.rank_schur;
    rep.ones_count = nf.ones_count;
    rep.ineq_ok = rep.rank_a >= rep.rank_b && rep.rank_b >= rep.rank_a - rep.rank_schur &&
                  rep.rank_a - rep.rank_schur >= 0;
    return rep;
}

}  // namespace gaussdil
