#pragma once

// Deterministic random generation of symplectic matrices and covariances.
//
// The generator is SplitMix64 (Steele, Lea and Flood, 2014): a 64-bit state
// advanced by the golden-gamma 0x9e3779b97f4a7c15 and finalized by the
// variant-13 mixer. Doubles are the top 53 bits scaled by 2^-53. Nothing here
// depends on std:: distributions, so output is identical across standard
// library implementations.

#include "gaussdil/linalg.hpp"

#include <cstdint>
#include <numbers>

namespace gaussdil {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    /// Independent child stream.
    SplitMix64 split() { return SplitMix64(next()); }

  private:
    std::uint64_t state_;
};

/// Random orthogonal matrix via Householder QR of a uniform matrix.
inline Matrix random_orthogonal(Index dim, SplitMix64& rng) {
    if (dim == 0) {
        return Matrix(0, 0);
    }
    Matrix g(dim, dim);
    for (Index j = 0; j < dim; ++j) {
        for (Index i = 0; i < dim; ++i) {
            g(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ();
}

/// Passive (orthogonal and symplectic) transformation on `modes` modes built
/// from two sweeps of phase rotations and beam splitters.
inline Matrix random_passive_symplectic(Index modes, SplitMix64& rng) {
    const Index dim = 2 * modes;
    Matrix out = Matrix::Identity(dim, dim);
    auto rotate = [&](Index i, Index j, double angle) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        Matrix g = Matrix::Identity(dim, dim);
        g(i, i) = c;
        g(i, j) = s;
        g(j, i) = -s;
        g(j, j) = c;
        out = g * out;
    };
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (Index j = 0; j < modes; ++j) {
            rotate(j, modes + j, rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
        for (Index i = 0; i < modes; ++i) {
            for (Index j = i + 1; j < modes; ++j) {
                const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
                rotate(i, j, angle);
                rotate(modes + i, modes + j, angle);
            }
        }
    }
    return out;
}

/// Random symplectic O1 Z O2 with Z = diag(e^s, e^-s), s uniform in [-1, 1].
inline Matrix random_symplectic(Index modes, SplitMix64& rng) {
    const Matrix left = random_passive_symplectic(modes, rng);
    Vector squeeze(2 * modes);
    for (Index j = 0; j < modes; ++j) {
        const double s = rng.uniform(-1.0, 1.0);
        squeeze(j) = std::exp(s);
        squeeze(modes + j) = std::exp(-s);
    }
    const Matrix right = random_passive_symplectic(modes, rng);
    return left * squeeze.asDiagonal() * right;
}

/// S diag(D, D) S^T for random symplectic S; D = 1 when `pure`, otherwise
/// uniform in [1, d_max].
inline Matrix random_covariance(Index modes, bool pure, SplitMix64& rng, double d_max = 3.0) {
    const Matrix s = random_symplectic(modes, rng);
    Vector diag(2 * modes);
    for (Index j = 0; j < modes; ++j) {
        const double d = pure ? 1.0 : rng.uniform(1.0, d_max);
        diag(j) = diag(modes + j) = d;
    }
    return s * diag.asDiagonal() * s.transpose();
}

}  // namespace gaussdil
