#pragma once

// Bosonic Gaussian channels (X, Y, v) acting on covariance matrices as
// gamma -> X^T gamma X + Y, mean -> X^T mean + v, with complete positivity
// Y >= i Sigma, Sigma = sigma - X^T sigma X.

#include "gaussdil/matcore.hpp"
#include "gaussdil/random.hpp"

#include <cstdint>
#include <string>

namespace gaussdil {

class GaussianChannel {
  public:
    /// Y is symmetrized when its asymmetry is within `tol.residual`, rejected
    /// otherwise. An empty `v` means zero displacement.
    GaussianChannel(Matrix x, Matrix y, Vector v = Vector(), const Tolerance& tol = {})
        : x_(std::move(x)), y_(std::move(y)), v_(std::move(v)) {
        require_finite(x_, "GaussianChannel X");
        require_finite(y_, "GaussianChannel Y");
        require_square(x_, "GaussianChannel X");
        require_square(y_, "GaussianChannel Y");
        if (x_.rows() % 2 != 0 || y_.rows() != x_.rows()) {
            throw InvalidArgument("GaussianChannel: X and Y must both be 2n x 2n");
        }
        if (v_.size() == 0) {
            v_ = Vector::Zero(x_.rows());
        }
        if (v_.size() != x_.rows() || !v_.allFinite()) {
            throw InvalidArgument("GaussianChannel: v must be a finite vector of length 2n");
        }
        if (max_abs(y_ - y_.transpose()) > tol.residual * (1.0 + max_abs(y_))) {
            throw InvalidArgument("GaussianChannel: Y is not symmetric");
        }
        y_ = Matrix(0.5 * (y_ + y_.transpose()));
    }

    Index n() const { return x_.rows() / 2; }
    const Matrix& X() const { return x_; }
    const Matrix& Y() const { return y_; }
    const Vector& v() const { return v_; }

  private:
    Matrix x_;
    Matrix y_;
    Vector v_;
};

class GaussianState {
  public:
    GaussianState(Vector mean, Matrix cov, const Tolerance& tol = {}) : mean_(std::move(mean)), cov_(std::move(cov)) {
        require_finite(cov_, "GaussianState cov");
        require_square(cov_, "GaussianState cov");
        if (cov_.rows() % 2 != 0 || mean_.size() != cov_.rows() || !mean_.allFinite()) {
            throw InvalidArgument("GaussianState: mean must have length 2n and cov be 2n x 2n");
        }
        if (max_abs(cov_ - cov_.transpose()) > tol.residual * (1.0 + max_abs(cov_))) {
            throw InvalidArgument("GaussianState: covariance is not symmetric");
        }
        cov_ = Matrix(0.5 * (cov_ + cov_.transpose()));
    }

    static GaussianState vacuum(Index n) { return {Vector::Zero(2 * n), Matrix::Identity(2 * n, 2 * n)}; }

    Index n() const { return cov_.rows() / 2; }
    const Vector& mean() const { return mean_; }
    const Matrix& cov() const { return cov_; }

    /// cov >= i sigma within psd tolerance.
    bool physical(const Tolerance& tol = {}) const { return hermitian_pair_psd(cov_, symplectic_form(n()), tol); }

  private:
    Vector mean_;
    Matrix cov_;
};

/// Magnitude used as the rank floor for every channel-derived matrix: Sigma is
/// formed by cancellation between sigma and X^T sigma X, so its noise scales
/// with 1 + ||X||^2.
inline double channel_scale(const GaussianChannel& ch) {
    const double x = norm2(ch.X());
    return std::max(norm2(ch.Y()), 1.0 + x * x);
}

/// Sigma = sigma_2n - X^T sigma_2n X.
inline Matrix sigma_of(const GaussianChannel& ch, const Tolerance& tol = {}) {
    const Matrix sigma = symplectic_form(ch.n());
    const Matrix out = sigma - ch.X().transpose() * sigma * ch.X();
    if (max_abs(out + out.transpose()) > tol.residual * (1.0 + max_abs(out))) {
        throw VerificationError("sigma_of: Sigma is not skew-symmetric");
    }
    return 0.5 * (out - out.transpose());
}

enum class CpStatus { valid, boundary, invalid };

inline const char* to_string(CpStatus s) {
    switch (s) {
    case CpStatus::valid:
        return "valid";
    case CpStatus::boundary:
        return "boundary";
    case CpStatus::invalid:
        return "invalid";
    }
    return "invalid";
}

struct CpReport {
    bool valid = false;
    double min_eig = 0.0;
    CpStatus status = CpStatus::invalid;
};

/// Complete positivity Y >= i Sigma. Channels on the boundary (within
/// psd_abs * (1 + ||E||) of a zero eigenvalue) are valid.
inline CpReport validate_cp(const GaussianChannel& ch, const Tolerance& tol = {}) {
    tol.validate();
    const Matrix sig = sigma_of(ch, tol);
    CpReport rep;
    const Matrix e = hermitian_embedding(ch.Y(), sig);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e, Eigen::EigenvaluesOnly);
    const auto& vals = eig.eigenvalues();
    rep.min_eig = vals(0);
    const double floor = tol.psd_abs * (1.0 + vals.cwiseAbs().maxCoeff());
    if (rep.min_eig < -floor) {
        rep.status = CpStatus::invalid;
    } else if (rep.min_eig <= floor) {
        rep.status = CpStatus::boundary;
    } else {
        rep.status = CpStatus::valid;
    }
    rep.valid = rep.status != CpStatus::invalid;
    return rep;
}

struct KernelReport {
    bool inclusions_ok = false;
    bool ker_y_in_ker_sigma = false;  ///< ker Y within ker Sigma
    bool ker_y_in_ker_pair = false;   ///< ker Y within ker(Y - i Sigma)
    bool meet_in_ker_y = false;       ///< ker Sigma meet ker(Y - i Sigma) within ker Y
    bool kernel_identity = false;     ///< ker Y = ker Sigma meet ker(Y - i Sigma)
};

namespace detail {

inline Matrix vstack(std::initializer_list<const Matrix*> parts) {
    Index rows = 0;
    const Index cols = (*parts.begin())->cols();
    for (const Matrix* p : parts) {
        rows += p->rows();
    }
    Matrix out(rows, cols);
    Index at = 0;
    for (const Matrix* p : parts) {
        out.middleRows(at, p->rows()) = *p;
        at += p->rows();
    }
    return out;
}

}  // namespace detail

/// Kernel relations between Y, Sigma and Y - i Sigma, tested as stacked-rank
/// equalities: ker M within ker N iff rank[M; N] = rank M. Complex kernels are
/// handled through the real embedding, where a real matrix M becomes M (+) M.
inline KernelReport kernel_checks(const Matrix& y, const Matrix& sig, const Tolerance& tol = {}, double scale = 0.0) {
    tol.validate();
    const double s = std::max({scale, norm2(y), norm2(sig)});
    auto rank = [&](const Matrix& m) { return numerical_rank(m, tol, s); };
    const Matrix y2 = block_diag(y, y);
    const Matrix sig2 = block_diag(sig, sig);
    const Matrix pair = hermitian_embedding(y, sig);

    KernelReport rep;
    rep.ker_y_in_ker_sigma = rank(detail::vstack({&y, &sig})) == rank(y);
    rep.ker_y_in_ker_pair = rank(detail::vstack({&y2, &pair})) == rank(y2);
    rep.meet_in_ker_y = rank(detail::vstack({&sig2, &pair, &y2})) == rank(detail::vstack({&sig2, &pair}));
    rep.kernel_identity = rep.ker_y_in_ker_sigma && rep.ker_y_in_ker_pair && rep.meet_in_ker_y;
    rep.inclusions_ok = rep.kernel_identity;
    return rep;
}

inline KernelReport kernel_checks(const GaussianChannel& ch, const Tolerance& tol = {}) {
    return kernel_checks(ch.Y(), sigma_of(ch, tol), tol, channel_scale(ch));
}

/// Output state of the channel: (X^T mean + v, X^T cov X + Y).
inline GaussianState apply(const GaussianChannel& ch, const GaussianState& st) {
    if (st.n() != ch.n()) {
        throw InvalidArgument("apply: state and channel mode counts differ");
    }
    Matrix cov = ch.X().transpose() * st.cov() * ch.X() + ch.Y();
    cov = Matrix(0.5 * (cov + cov.transpose()));
    return {ch.X().transpose() * st.mean() + ch.v(), std::move(cov)};
}

struct ModeCountReport {
    Index k = 0;        ///< rank Y
    Index r = 0;        ///< rank Sigma
    Index r_prime = 0;  ///< rank Y - rank[Y - Sigma Y^+ Sigma^T]
    Index ell_pure = 0; ///< rank[Y - i Sigma]
    Index ell_mix = 0;  ///< k - r/2
    Tolerance tol_used;
};

/// Ranks governing the environment size of pure and mixed dilations.
///
/// r' is obtained twice: from the Schur complement Y - Sigma Y^+ Sigma^T and
/// as 2n - rank[I - Sigma' Sigma'^T] with Sigma' the congruence normal form of
/// Sigma. Any disagreement between the integer routes raises ToleranceError.
inline ModeCountReport mode_counts(const GaussianChannel& ch, const Tolerance& tol = {}) {
    tol.validate();
    const Matrix sig = sigma_of(ch, tol);
    const double scale = channel_scale(ch);
    const Index dim = 2 * ch.n();

    const CongruenceNormalForm nf = congruence_normal_form(ch.Y(), sig, tol, scale);

    ModeCountReport rep;
    rep.tol_used = tol;
    rep.k = numerical_rank(ch.Y(), tol, scale);
    rep.r = numerical_rank(sig, tol, scale);
    const Matrix schur = ch.Y() - sig * mp_inverse(ch.Y(), tol) * sig.transpose();
    rep.r_prime = rep.k - numerical_rank(schur, tol, scale);
    rep.ell_pure = hermitian_pair_rank(ch.Y(), sig, tol, scale);
    rep.ell_mix = rep.k - rep.r / 2;

    const Matrix sig_nf = nf.C * sig * nf.C.transpose();
    const Matrix defect = Matrix::Identity(dim, dim) - sig_nf * sig_nf.transpose();
    const Index r_prime_nf = dim - numerical_rank(defect, tol, 1.0);

    if (rep.r % 2 != 0 || rep.r_prime % 2 != 0) {
        throw ToleranceError("mode_counts: odd rank of a skew quantity (r = " + std::to_string(rep.r) +
                             ", r' = " + std::to_string(rep.r_prime) + ")");
    }
    if (rep.r_prime != r_prime_nf || rep.r_prime != 2 * nf.ones_count) {
        throw ToleranceError("mode_counts: r' routes disagree (" + std::to_string(rep.r_prime) + " vs " +
                             std::to_string(r_prime_nf) + " vs 2*" + std::to_string(nf.ones_count) + ")");
    }
    if (nf.a != rep.k || nf.b != rep.r) {
        throw ToleranceError("mode_counts: normal form ranks (" + std::to_string(nf.a) + ", " +
                             std::to_string(nf.b) + ") disagree with (k, r) = (" + std::to_string(rep.k) + ", " +
                             std::to_string(rep.r) + ")");
    }
    if (rep.ell_pure != rep.k - rep.r_prime / 2) {
        throw ToleranceError("mode_counts: rank[Y - i Sigma] = " + std::to_string(rep.ell_pure) +
                             " but k - r'/2 = " + std::to_string(rep.k - rep.r_prime / 2));
    }
    return rep;
}

/// Block (system first) form of a symplectic matrix on n + m modes given in
/// global qqpp ordering.
inline Matrix to_block_order(const Matrix& global, Index n, Index m) {
    const Index total = n + m;
    std::vector<Index> perm;
    for (Index i = 0; i < n; ++i) perm.push_back(i);
    for (Index i = 0; i < n; ++i) perm.push_back(total + i);
    for (Index i = n; i < total; ++i) perm.push_back(i);
    for (Index i = n; i < total; ++i) perm.push_back(total + i);
    Matrix out(2 * total, 2 * total);
    for (Index i = 0; i < 2 * total; ++i) {
        for (Index j = 0; j < 2 * total; ++j) {
            out(i, j) = global(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

/// Channel obtained by tracing out a random environment of `env_modes` modes
/// after a random symplectic interaction: X = s1^T, Y = s2 gamma_E s2^T.
/// CP by construction and deterministic in `seed`.
inline GaussianChannel random_channel(Index n, Index env_modes, bool env_pure, std::uint64_t seed) {
    if (n < 1 || env_modes < 0) {
        throw InvalidArgument("random_channel: need n >= 1 and env_modes >= 0");
    }
    SplitMix64 rng(seed);
    const Matrix s = to_block_order(random_symplectic(n + env_modes, rng), n, env_modes);
    const Matrix x = s.topLeftCorner(2 * n, 2 * n).transpose();
    if (env_modes == 0) {
        return {x, Matrix::Zero(2 * n, 2 * n)};
    }
    const Matrix gamma_env = random_covariance(env_modes, env_pure, rng);
    const Matrix s2 = s.topRightCorner(2 * n, 2 * env_modes);
    Matrix y = s2 * gamma_env * s2.transpose();
    y = Matrix(0.5 * (y + y.transpose()));
    return {x, y};
}

/// Random physical state on n modes: mixed covariance, mean uniform in [-1, 1].
inline GaussianState random_state(Index n, SplitMix64& rng) {
    Vector mean(2 * n);
    for (Index i = 0; i < 2 * n; ++i) {
        mean(i) = rng.uniform(-1.0, 1.0);
    }
    return {mean, random_covariance(n, false, rng)};
}

}  // namespace gaussdil
