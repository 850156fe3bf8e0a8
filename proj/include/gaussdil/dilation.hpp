#pragma once

// Gaussian unitary dilations of a channel: the environment covariance gamma_E
// on a form sigma_E and a symplectic S = [[X^T, s2], [s3, s4]] with
//     s2 sigma_E s2^T = Sigma,    s2 gamma_E s2^T = Y.
// The pure (Stinespring) dilation uses rank[Y - i Sigma] modes, the mixed one
// rank Y - rank Sigma / 2. Both are built in the congruence frame C where
// C Y C^T = I_k (+) 0 and C Sigma C^T is in skew canonical form, then mapped
// back with the exact factored inverse of C.

#include "gaussdil/channel.hpp"
#include "gaussdil/purify.hpp"

#include <optional>

namespace gaussdil {

struct ChoiConstruction {
    double theta = 0.0;
    Matrix gamma_prime;  ///< 4n x 4n, channel acting on the A half
    Matrix sigma_AB;     ///< sigma_2n (+) sigma_2n
};

/// Covariance of the channel applied to one half of n two-mode squeezed
/// states with thermal parameter theta:
///   [[theta X^T X + Y, f X^T s_x], [f s_x X, theta I]],  f = -sqrt(theta^2 - 1).
inline ChoiConstruction choi_covariance(const GaussianChannel& ch, double theta, const Tolerance& tol = {}) {
    if (!std::isfinite(theta) || !(theta > 1.0)) {
        throw InvalidArgument("choi_covariance: theta must exceed 1");
    }
    if (!validate_cp(ch, tol).valid) {
        throw PhysicalityError("choi_covariance: channel is not completely positive");
    }
    const Index n = ch.n();
    const Matrix& x = ch.X();
    const Matrix sx = exchange_form(n);
    const double f = squeeze_coupling(theta);

    ChoiConstruction out;
    out.theta = theta;
    out.gamma_prime = Matrix::Zero(4 * n, 4 * n);
    out.gamma_prime.topLeftCorner(2 * n, 2 * n) = theta * x.transpose() * x + ch.Y();
    out.gamma_prime.topRightCorner(2 * n, 2 * n) = f * x.transpose() * sx;
    out.gamma_prime.bottomLeftCorner(2 * n, 2 * n) = f * sx * x;
    out.gamma_prime.bottomRightCorner(2 * n, 2 * n) = theta * Matrix::Identity(2 * n, 2 * n);
    const Matrix top = out.gamma_prime.topLeftCorner(2 * n, 2 * n);
    out.gamma_prime.topLeftCorner(2 * n, 2 * n) = 0.5 * (top + top.transpose());
    out.sigma_AB = block_diag(symplectic_form(n), symplectic_form(n));
    return out;
}

/// Minimal purification size of the Choi covariance: rank[gamma' - i sigma_AB] - 2n.
inline Index qmin_via_choi(const GaussianChannel& ch, double theta = 8.0, const Tolerance& tol = {}) {
    const ChoiConstruction choi = choi_covariance(ch, theta, tol);
    const Index q = hermitian_pair_rank(choi.gamma_prime, choi.sigma_AB, tol) - 2 * ch.n();
    if (q < 0) {
        throw ToleranceError("qmin_via_choi: negative mode count");
    }
    return q;
}

enum class DilationKind { pure, mixed };

inline const char* to_string(DilationKind k) { return k == DilationKind::pure ? "pure" : "mixed"; }

struct Dilation {
    DilationKind kind = DilationKind::pure;
    Index env_modes = 0;
    Matrix sigma_E;  ///< direct sum of standard forms, 2q x 2q
    Matrix s2;       ///< 2n x 2q
    Matrix S;        ///< (2n + 2q) square, symplectic w.r.t. sigma_2n (+) sigma_E
    Matrix gamma_E;  ///< 2q x 2q
    std::vector<double> mu;
    std::vector<double> mu_o;  ///< entries of mu strictly below 1
    Index k = 0;
    Index r = 0;
    Index r_prime = 0;
};

struct VerificationReport {
    double eq19_sigma = 0.0;  ///< max |s2 sigma_E s2^T - Sigma|
    double eq19_Y = 0.0;      ///< max |s2 gamma_E s2^T - Y|
    double symplectic = 0.0;  ///< max |S sigma S^T - sigma|
    double blocks = 0.0;      ///< max deviation of S's top blocks from [X^T | s2]
    bool uncertainty_ok = false;
    std::optional<bool> purity_ok;  ///< only for pure dilations
    double action_max_err = 0.0;
    bool passed = false;
};

/// Residuals of every dilation invariant plus the largest deviation between the
/// dilation-propagated reduced state and apply(ch, state) over `n_states`
/// seeded random inputs.
inline VerificationReport verify_dilation(const GaussianChannel& ch, const Dilation& d, Index n_states = 20,
                                          std::uint64_t seed = 0, const Tolerance& tol = {}) {
    tol.validate();
    const Index n = ch.n();
    const Index env_dim = 2 * d.env_modes;
    if (d.env_modes < 0 || d.sigma_E.rows() != env_dim || d.sigma_E.cols() != env_dim ||
        d.gamma_E.rows() != env_dim || d.gamma_E.cols() != env_dim || d.s2.rows() != 2 * n ||
        d.s2.cols() != env_dim || d.S.rows() != 2 * n + env_dim || d.S.cols() != 2 * n + env_dim) {
        throw InvalidArgument("verify_dilation: dilation dimensions are inconsistent with the channel");
    }
    const Matrix sig = sigma_of(ch, tol);
    const Matrix sigma_full = block_diag(symplectic_form(n), d.sigma_E);

    VerificationReport rep;
    rep.eq19_sigma = max_abs(d.s2 * d.sigma_E * d.s2.transpose() - sig);
    rep.eq19_Y = max_abs(d.s2 * d.gamma_E * d.s2.transpose() - ch.Y());
    rep.symplectic = symplectic_residual(d.S, sigma_full);
    rep.blocks = std::max(max_abs(d.S.topLeftCorner(2 * n, 2 * n) - ch.X().transpose()),
                          max_abs(d.S.topRightCorner(2 * n, env_dim) - d.s2));
    bool form_ok = true;
    try {
        rep.uncertainty_ok = hermitian_pair_psd(d.gamma_E, d.sigma_E, tol);
        if (d.kind == DilationKind::pure) {
            rep.purity_ok = purity_test(d.gamma_E, d.sigma_E, tol).pure;
        }
    } catch (const Error&) {
        form_ok = false;
        rep.uncertainty_ok = false;
        if (d.kind == DilationKind::pure) {
            rep.purity_ok = false;
        }
    }

    SplitMix64 rng(seed);
    for (Index i = 0; i < n_states; ++i) {
        const GaussianState in = random_state(n, rng);
        const GaussianState expected = apply(ch, in);
        const Matrix joint = d.S * block_diag(in.cov(), d.gamma_E) * d.S.transpose();
        Vector joint_mean = Vector::Zero(2 * n + env_dim);
        joint_mean.head(2 * n) = in.mean();
        const Vector mean = (d.S * joint_mean).head(2 * n) + ch.v();
        const double err = std::max(max_abs(joint.topLeftCorner(2 * n, 2 * n) - expected.cov()),
                                    (mean - expected.mean()).cwiseAbs().maxCoeff());
        rep.action_max_err = std::max(rep.action_max_err, err);
    }

    const double eq19_scale = 1.0 + max_abs(ch.Y());
    rep.passed = form_ok && rep.eq19_sigma <= tol.residual * eq19_scale && rep.eq19_Y <= tol.residual * eq19_scale &&
                 rep.symplectic <= tol.residual && rep.blocks <= tol.residual && rep.uncertainty_ok &&
                 rep.purity_ok.value_or(true) && rep.action_max_err <= tol.residual;
    return rep;
}

namespace detail {

inline Dilation build_dilation(const GaussianChannel& ch, DilationKind kind, const Tolerance& tol) {
    tol.validate();
    if (!validate_cp(ch, tol).valid) {
        throw PhysicalityError("dilation: channel is not completely positive");
    }
    const ModeCountReport counts = mode_counts(ch, tol);
    const Matrix sig = sigma_of(ch, tol);
    const CongruenceNormalForm nf = congruence_normal_form(ch.Y(), sig, tol, channel_scale(ch));

    const Index n = ch.n();
    const Index k = nf.a;
    const Index p = nf.b / 2;
    const Index ones = nf.ones_count;
    const Index thermal = p - ones;
    // An odd k leaves one unpaired direction of Y' outside the support of
    // Sigma'; it is served by the Q quadrature of a dedicated vacuum mode.
    const Index odd = k % 2;
    const Index h = (k - odd) / 2;
    const Index t = h - p;
    const bool pure = kind == DilationKind::pure;
    const Index w = t + (pure ? thermal : 0);
    const Index offset = pure ? thermal : 0;
    const Index env = h + w + odd;
    const Index env_dim = 2 * env;

    auto mu = [&](Index i) { return nf.mu[static_cast<std::size_t>(i)]; };
    // Positions in the congruence frame of the half-split layout
    // [mu rows, zero rows | mu rows, zero rows].
    auto qpos = [&](Index i) { return i < p ? i : 2 * p + (i - p); };
    auto ppos = [&](Index i) { return i < p ? p + i : 2 * p + t + (i - p); };
    auto q1 = [&](Index i) { return i; };
    auto p1 = [&](Index i) { return h + i; };
    auto q2 = [&](Index j) { return 2 * h + j; };
    auto p2 = [&](Index j) { return 2 * h + w + j; };

    Matrix s2_frame = Matrix::Zero(2 * n, env_dim);
    Matrix gamma = Matrix::Zero(env_dim, env_dim);
    auto couple = [&](Index a, Index b, double value) { gamma(a, b) = gamma(b, a) = value; };

    // K~^-1 block and alpha
    for (Index i = 0; i < h; ++i) {
        const double scale = i < p ? std::sqrt(mu(i)) : 1.0;
        s2_frame(qpos(i), q1(i)) = scale;
        s2_frame(ppos(i), p1(i)) = scale;
        const double var = i < p ? 1.0 / mu(i) : 1.25;
        gamma(q1(i), q1(i)) = gamma(p1(i), p1(i)) = var;
    }
    // A block: entangled pairs serving the part of Y' without Sigma' support
    for (Index s = 0; s < t; ++s) {
        const Index i = p + s;
        const Index j = offset + s;
        s2_frame(qpos(i), p2(j)) = 1.0;
        s2_frame(ppos(i), q2(j)) = 1.0;
        gamma(q2(j), q2(j)) = gamma(p2(j), p2(j)) = 1.25;
        couple(q1(i), p2(j), -0.75);
        couple(p1(i), q2(j), -0.75);
    }
    // purifying partners of the thermal modes with mu < 1
    if (pure) {
        for (Index u = 0; u < thermal; ++u) {
            const Index i = ones + u;
            const double var = 1.0 / mu(i);
            gamma(q2(u), q2(u)) = gamma(p2(u), p2(u)) = var;
            couple(q1(i), p2(u), squeeze_coupling(var));
            couple(p1(i), q2(u), squeeze_coupling(var));
        }
    }
    if (odd == 1) {
        const Index qx = 2 * h + 2 * w;
        s2_frame(k - 1, qx) = 1.0;
        gamma(qx, qx) = gamma(qx + 1, qx + 1) = 1.0;
    }

    Dilation d;
    d.kind = kind;
    d.env_modes = env;
    d.k = counts.k;
    d.r = counts.r;
    d.r_prime = counts.r_prime;
    d.mu = nf.mu;
    d.mu_o.assign(nf.mu.begin() + ones, nf.mu.end());
    d.sigma_E = block_diag(symplectic_form(h), symplectic_form(w));
    if (odd == 1) {
        d.sigma_E = block_diag(d.sigma_E, symplectic_form(1));
    }
    d.gamma_E = gamma;
    d.s2 = nf.C_inv * s2_frame;

    const Index expected = pure ? counts.ell_pure : counts.ell_mix;
    if (env != expected) {
        throw VerificationError("dilation: built " + std::to_string(env) + " environment modes, expected " +
                                std::to_string(expected));
    }

    Matrix top(2 * n, 2 * n + env_dim);
    top << ch.X().transpose(), d.s2;
    d.S = symplectic_complete(top, block_diag(symplectic_form(n), d.sigma_E), tol);

    const VerificationReport check = verify_dilation(ch, d, 0, 0, tol);
    if (!check.passed) {
        throw VerificationError("dilation: certification failed (eq19_sigma = " + std::to_string(check.eq19_sigma) +
                                ", eq19_Y = " + std::to_string(check.eq19_Y) +
                                ", symplectic = " + std::to_string(check.symplectic) +
                                ", blocks = " + std::to_string(check.blocks) +
                                ", uncertainty_ok = " + (check.uncertainty_ok ? "true" : "false") +
                                ", purity_ok = " + (check.purity_ok.value_or(true) ? "true" : "false") + ")");
    }
    return d;
}

}  // namespace detail

/// Stinespring dilation with the minimal rank[Y - i Sigma] environment modes
/// in a pure Gaussian state. The returned dilation has passed verification.
inline Dilation pure_dilation(const GaussianChannel& ch, const Tolerance& tol = {}) {
    return detail::build_dilation(ch, DilationKind::pure, tol);
}

/// Dilation with rank Y - rank Sigma / 2 modes in a possibly mixed state.
inline Dilation mixed_dilation(const GaussianChannel& ch, const Tolerance& tol = {}) {
    return detail::build_dilation(ch, DilationKind::mixed, tol);
}

}  // namespace gaussdil
