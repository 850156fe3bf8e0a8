#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's rank, eigen or congruence routines.

#include "gaussdil/channel.hpp"
#include "gaussdil/dilation.hpp"
#include "gaussdil/purify.hpp"
#include "gaussdil/random.hpp"

#include <algorithm>
#include <complex>
#include <vector>

namespace oracle {

using gaussdil::Index;
using gaussdil::Matrix;
using gaussdil::Vector;
using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

/// Rank of A - iB by complete-pivoting Gaussian elimination over C.
/// Stops once every remaining entry is below rel * max(|A - iB|, scale).
inline Index complex_rank(const Matrix& a, const Matrix& b, double rel = 1e-9, double scale = 0.0) {
    const Index n = a.rows();
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = cplx(a(i, j), -b(i, j));
    double top = scale;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) top = std::max(top, std::abs(m(i, j)));
    if (top == 0.0) return 0;
    const double cut = rel * top * static_cast<double>(std::max<Index>(n, 1));
    Index rank = 0;
    for (Index step = 0; step < n; ++step) {
        Index pr = step, pc = step;
        double best = 0.0;
        for (Index i = step; i < n; ++i)
            for (Index j = step; j < n; ++j)
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    pr = i;
                    pc = j;
                }
        if (best <= cut) break;
        m.row(step).swap(m.row(pr));
        m.col(step).swap(m.col(pc));
        for (Index i = step + 1; i < n; ++i) {
            const cplx f = m(i, step) / m(step, step);
            m.row(i).tail(n - step) -= f * m.row(step).tail(n - step);
        }
        ++rank;
    }
    return rank;
}

/// Real rank by complete-pivoting LU with the same cutoff rule.
inline Index real_rank(const Matrix& m, double rel = 1e-9, double scale = 0.0) {
    return complex_rank(m, Matrix::Zero(m.rows(), m.cols()), rel, scale);
}

/// Symplectic eigenvalues from the spectrum of -(sigma gamma)^2, descending.
/// Works for any nondegenerate skew form that is a permuted standard form.
inline std::vector<double> symplectic_spectrum(const Matrix& gamma, const Matrix& sigma) {
    if (gamma.size() == 0) {
        return {};
    }
    const Matrix m = -(sigma * gamma) * (sigma * gamma);
    Eigen::EigenSolver<Matrix> es(m, false);
    std::vector<double> vals;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) vals.push_back(std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0)));
    std::sort(vals.begin(), vals.end(), std::greater<>());
    std::vector<double> out;
    for (std::size_t i = 0; i < vals.size(); i += 2) out.push_back(0.5 * (vals[i] + vals[i + 1]));
    return out;
}

inline std::vector<double> symplectic_spectrum(const Matrix& gamma) {
    return symplectic_spectrum(gamma, gaussdil::symplectic_form(gamma.rows() / 2));
}

/// Largest violation of the four Penrose equations, each divided by the
/// magnitude of its terms (|M|, |P| spectral norms).
inline double penrose_residual(const Matrix& m, const Matrix& p) {
    const double nm = std::max(gaussdil::norm2(m), 1e-300);
    const double np = std::max(gaussdil::norm2(p), 1e-300);
    const double r1 = gaussdil::max_abs(m * p * m - m) / (nm * nm * np);
    const double r2 = gaussdil::max_abs(p * m * p - p) / (np * np * nm);
    const double r3 = gaussdil::max_abs((m * p).transpose() - m * p) / (nm * np);
    const double r4 = gaussdil::max_abs((p * m).transpose() - p * m) / (nm * np);
    return std::max({r1, r2, r3, r4});
}

/// Smallest eigenvalue of the Hermitian matrix A - iB, computed over C.
inline double complex_min_eig(const Matrix& a, const Matrix& b) {
    const Index n = a.rows();
    if (n == 0) return 0.0;
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = cplx(a(i, j), -b(i, j));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace oracle

namespace fixture {

using gaussdil::Index;
using gaussdil::Matrix;

inline Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline gaussdil::GaussianChannel attenuator(double eta) {
    return {std::sqrt(eta) * Matrix::Identity(2, 2), (1.0 - eta) * Matrix::Identity(2, 2)};
}

inline gaussdil::GaussianChannel thermal(double eta, double c) {
    return {std::sqrt(eta) * Matrix::Identity(2, 2), c * (1.0 - eta) * Matrix::Identity(2, 2)};
}

inline gaussdil::GaussianChannel classical_noise() { return {Matrix::Identity(2, 2), Matrix::Identity(2, 2)}; }

struct ChannelCase {
    Index n;
    Index env;
    bool env_pure;
    std::uint64_t seed;
};

/// The fixed 200-channel sweep: n in 1..4, generator environment 0..4, pure
/// and thermal environments.
inline std::vector<ChannelCase> channel_sweep(std::size_t count = 200) {
    std::vector<ChannelCase> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({static_cast<Index>(1 + i % 4), static_cast<Index>((i / 4) % 5), (i / 20) % 2 == 0,
                       static_cast<std::uint64_t>(1000 + i)});
    }
    return out;
}

/// A PSD with random rank and B = A^(1/2) W A^(1/2) where W = O^T J(nu) O on
/// range A, nu in (0, 1] with some entries exactly 1. Then A >= iB.
struct LemmaPair {
    Matrix a;
    Matrix b;
    Index unit_count;
};

inline LemmaPair lemma_pair(Index dim, gaussdil::SplitMix64& rng) {
    const Index rank_a = rng.integer(0, dim);
    Matrix factor = Matrix::Zero(dim, dim);
    const Matrix o = gaussdil::random_orthogonal(dim, rng);
    for (Index j = 0; j < rank_a; ++j) factor.col(j) = rng.uniform(0.3, 2.0) * o.col(j);
    const Matrix a = factor * factor.transpose();

    const Index pairs = rng.integer(0, rank_a / 2);
    std::vector<double> nu;
    Index units = 0;
    for (Index j = 0; j < pairs; ++j) {
        if (rng.uniform() < 0.4) {
            nu.push_back(1.0);
            ++units;
        } else {
            nu.push_back(rng.uniform(0.1, 0.95));
        }
    }
    std::sort(nu.begin(), nu.end(), std::greater<>());
    // W lives on range A so that unit entries of nu survive the congruence.
    const Matrix basis = o.leftCols(rank_a);
    Matrix w_range = Matrix::Zero(dim, dim);
    if (rank_a > 0) {
        const Matrix wr0 = gaussdil::skew_block_form(nu, rank_a);
        const Matrix orr = gaussdil::random_orthogonal(rank_a, rng);
        w_range = basis * (orr.transpose() * wr0 * orr) * basis.transpose();
    }
    const Matrix root = gaussdil::psd_sqrt(a);
    Matrix b = root * w_range * root;
    b = Matrix(0.5 * (b - b.transpose()));
    return {a, b, units};
}

}  // namespace fixture
