#pragma once

// Dense real linear-algebra kernel: matrix aliases, tolerances, error types,
// numerical rank, Moore-Penrose inverse and Hermitian-pair checks carried out
// on the real symmetric embedding [[A, B], [-B, A]] of A - iB.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaussdil {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shape, non-finite entries, broken symmetry.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// A channel or covariance violates its positivity condition.
class PhysicalityError : public Error {
  public:
    using Error::Error;
};

/// Two numerical routes that must agree on an integer did not.
class ToleranceError : public Error {
  public:
    using Error::Error;
};

/// A constructed object failed its own post-condition check.
class VerificationError : public Error {
  public:
    using Error::Error;
};

/// Numerical cutoffs. All three must be strictly positive.
struct Tolerance {
    double rank_rel = 1e-9;  ///< relative singular-value cutoff
    double psd_abs = 1e-9;   ///< absolute eigenvalue floor / unit window
    double residual = 1e-8;  ///< verification residual ceiling

    void validate() const {
        if (!(rank_rel > 0.0) || !(psd_abs > 0.0) || !(residual > 0.0) || !std::isfinite(rank_rel) ||
            !std::isfinite(psd_abs) || !std::isfinite(residual)) {
            throw InvalidArgument("tolerances must be finite and strictly positive");
        }
    }
};

inline bool is_finite(const Matrix& m) { return m.size() == 0 || m.allFinite(); }

inline void require_finite(const Matrix& m, const char* what) {
    if (!is_finite(m)) {
        throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument(std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()));
    }
}

/// Largest absolute entry; zero for empty matrices.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Spectral norm; zero for empty matrices.
inline double norm2(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

/// Standard symplectic form [[0, I], [-I, 0]] on `modes` modes, qqpp ordering.
inline Matrix symplectic_form(Index modes) {
    Matrix s = Matrix::Zero(2 * modes, 2 * modes);
    s.topRightCorner(modes, modes).setIdentity();
    s.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
    return s;
}

/// The block exchange [[0, I], [I, 0]].
inline Matrix exchange_form(Index modes) {
    Matrix s = Matrix::Zero(2 * modes, 2 * modes);
    s.topRightCorner(modes, modes).setIdentity();
    s.bottomLeftCorner(modes, modes).setIdentity();
    return s;
}

/// Number of singular values strictly above rank_rel * max(sigma_max, scale).
///
/// `scale` lets callers supply the magnitude of the operands a matrix was
/// computed from, so that cancellation noise in a numerically-zero result is
/// not mistaken for full rank.
inline Index numerical_rank(const Matrix& m, const Tolerance& tol, double scale = 0.0) {
    require_finite(m, "numerical_rank");
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double top = std::max(sv(0), scale);
    if (top == 0.0) {
        return 0;
    }
    const double cut = tol.rank_rel * top;
    Index count = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) {
            ++count;
        }
    }
    return count;
}

/// Orthogonal projector onto the numerical range of a symmetric matrix.
inline Matrix range_projector(const Matrix& m, const Tolerance& tol, double scale = 0.0) {
    const Index dim = m.rows();
    if (dim == 0) {
        return Matrix(0, 0);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    const auto& vals = eig.eigenvalues();
    const double top = std::max(vals.cwiseAbs().maxCoeff(), scale);
    Matrix proj = Matrix::Zero(dim, dim);
    if (top == 0.0) {
        return proj;
    }
    for (Index i = 0; i < dim; ++i) {
        if (std::abs(vals(i)) > tol.rank_rel * top) {
            proj += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose();
        }
    }
    return proj;
}

/// Moore-Penrose inverse.
///
/// Symmetric input takes the constructive route Pi (M + (I - Pi))^-1 Pi with Pi
/// the projector onto the numerical range; other square input falls back to
/// a thresholded SVD.
inline Matrix mp_inverse(const Matrix& m, const Tolerance& tol = {}) {
    require_finite(m, "mp_inverse");
    require_square(m, "mp_inverse");
    const Index dim = m.rows();
    if (dim == 0) {
        return Matrix(0, 0);
    }
    if (max_abs(m - m.transpose()) <= tol.residual * (1.0 + max_abs(m))) {
        const Matrix sym = 0.5 * (m + m.transpose());
        const Matrix proj = range_projector(sym, tol);
        const Matrix completed = sym + (Matrix::Identity(dim, dim) - proj);
        return proj * completed.inverse() * proj;
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Vector inv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol.rank_rel * sv(0)) {
            inv(i) = 1.0 / sv(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Real symmetric embedding of the Hermitian matrix A - iB.
inline Matrix hermitian_embedding(const Matrix& a, const Matrix& b) {
    const Index m = a.rows();
    Matrix e(2 * m, 2 * m);
    e << a, b, -b, a;
    return e;
}

namespace detail {

inline void check_pair(const Matrix& a, const Matrix& b, const Tolerance& tol, const char* what) {
    require_finite(a, what);
    require_finite(b, what);
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch between A and B");
    }
    const double scale = 1.0 + std::max(max_abs(a), max_abs(b));
    if (max_abs(a - a.transpose()) > tol.residual * scale) {
        throw InvalidArgument(std::string(what) + ": A is not symmetric");
    }
    if (max_abs(b + b.transpose()) > tol.residual * scale) {
        throw InvalidArgument(std::string(what) + ": B is not skew-symmetric");
    }
}

}  // namespace detail

/// Smallest eigenvalue of the embedding of A - iB (0 for empty input).
inline double hermitian_pair_min_eig(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
    detail::check_pair(a, b, tol, "hermitian_pair_min_eig");
    if (a.rows() == 0) {
        return 0.0;
    }
    const Matrix e = hermitian_embedding(0.5 * (a + a.transpose()), 0.5 * (b - b.transpose()));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

/// A >= iB, with the floor -psd_abs * (1 + ||E||_2) on the embedding spectrum.
inline bool hermitian_pair_psd(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
    detail::check_pair(a, b, tol, "hermitian_pair_psd");
    if (a.rows() == 0) {
        return true;
    }
    const Matrix e = hermitian_embedding(0.5 * (a + a.transpose()), 0.5 * (b - b.transpose()));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e, Eigen::EigenvaluesOnly);
    const auto& vals = eig.eigenvalues();
    const double spectral = vals.cwiseAbs().maxCoeff();
    return vals(0) >= -tol.psd_abs * (1.0 + spectral);
}

/// Complex rank of A - iB: half the numerical rank of its real embedding.
inline Index hermitian_pair_rank(const Matrix& a, const Matrix& b, const Tolerance& tol = {}, double scale = 0.0) {
    detail::check_pair(a, b, tol, "hermitian_pair_rank");
    const Index embedded = numerical_rank(hermitian_embedding(a, b), tol, scale);
    if (embedded % 2 != 0) {
        throw ToleranceError("hermitian_pair_rank: embedding rank " + std::to_string(embedded) +
                             " is odd; candidates " + std::to_string(embedded / 2) + " and " +
                             std::to_string(embedded / 2 + 1));
    }
    return embedded / 2;
}

/// Symmetric square root of a PSD matrix (negative round-off clipped).
inline Matrix psd_sqrt(const Matrix& m) {
    if (m.rows() == 0) {
        return Matrix(0, 0);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace gaussdil
