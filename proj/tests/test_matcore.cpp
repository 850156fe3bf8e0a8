#include "support.hpp"

#include <gtest/gtest.h>

using namespace gaussdil;

namespace {

Matrix random_matrix(Index rows, Index cols, SplitMix64& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-1.0, 1.0);
    return m;
}

Matrix random_skew(Index dim, SplitMix64& rng) {
    const Matrix m = random_matrix(dim, dim, rng);
    return m - m.transpose();
}

}  // namespace

TEST(SymplecticForm, Layout) {
    const Matrix s = symplectic_form(2);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 2) = expected(1, 3) = 1.0;
    expected(2, 0) = expected(3, 1) = -1.0;
    EXPECT_EQ(s, expected);
    EXPECT_EQ(s * s, -Matrix::Identity(4, 4));
    EXPECT_EQ(symplectic_form(0).size(), 0);
}

TEST(NumericalRank, Basics) {
    const Tolerance tol;
    EXPECT_EQ(numerical_rank(Matrix::Zero(3, 3), tol), 0);
    EXPECT_EQ(numerical_rank(Matrix::Identity(4, 4), tol), 4);
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1e-12;
    EXPECT_EQ(numerical_rank(m, tol), 1);
    // a scale hint turns a lone round-off residue into zero
    Matrix tiny = Matrix::Zero(2, 2);
    tiny(0, 0) = 1e-15;
    EXPECT_EQ(numerical_rank(tiny, tol), 1);
    EXPECT_EQ(numerical_rank(tiny, tol, 1.0), 0);
}

TEST(NumericalRank, AgreesWithPivotedElimination) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = rng.integer(1, 8);
        const Index r = rng.integer(0, dim);
        const Matrix m = random_matrix(dim, r, rng) * random_matrix(r, dim, rng);
        EXPECT_EQ(numerical_rank(m, Tolerance{}), oracle::real_rank(m)) << "trial " << trial;
        EXPECT_EQ(numerical_rank(m, Tolerance{}), r) << "trial " << trial;
    }
}

TEST(MpInverse, PenroseEquations) {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = rng.integer(1, 8);
        const Index r = rng.integer(0, dim);
        const Matrix f = random_matrix(dim, r, rng);
        const Matrix sym = f * f.transpose();
        if (r == 0) continue;
        EXPECT_LT(oracle::penrose_residual(sym, mp_inverse(sym)), 1e-12) << "symmetric trial " << trial;
        const Matrix general = random_matrix(dim, r, rng) * random_matrix(r, dim, rng);
        EXPECT_LT(oracle::penrose_residual(general, mp_inverse(general)), 1e-12) << "general trial " << trial;
    }
}

TEST(HermitianPair, EmbeddingLayout) {
    const Matrix a = Matrix::Identity(2, 2);
    const Matrix b = symplectic_form(1);
    const Matrix e = hermitian_embedding(a, b);
    EXPECT_EQ(e.topLeftCorner(2, 2), a);
    EXPECT_EQ(e.topRightCorner(2, 2), b);
    EXPECT_EQ(e.bottomLeftCorner(2, 2), -b);
    EXPECT_EQ(e.bottomRightCorner(2, 2), a);
}

TEST(HermitianPair, VacuumIsBoundary) {
    // I - i sigma has eigenvalues {0, 2}
    const Matrix a = Matrix::Identity(2, 2);
    const Matrix b = symplectic_form(1);
    EXPECT_TRUE(hermitian_pair_psd(a, b));
    EXPECT_NEAR(hermitian_pair_min_eig(a, b), 0.0, 1e-14);
    EXPECT_EQ(hermitian_pair_rank(a, b), 1);
    EXPECT_FALSE(hermitian_pair_psd(0.5 * a, b));
}

TEST(HermitianPair, RejectsMalformedPairs) {
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 0.3;
    EXPECT_THROW(hermitian_pair_psd(asym, symplectic_form(1)), InvalidArgument);
    EXPECT_THROW(hermitian_pair_psd(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), InvalidArgument);
}

TEST(HermitianPair, RankAndMinEigMatchComplexArithmetic) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const Index dim = rng.integer(1, 8);
        const auto pair = fixture::lemma_pair(dim, rng);
        EXPECT_EQ(hermitian_pair_rank(pair.a, pair.b, Tolerance{}, norm2(pair.a)),
                  oracle::complex_rank(pair.a, pair.b, 1e-9, norm2(pair.a)))
            << "trial " << trial;
        EXPECT_NEAR(hermitian_pair_min_eig(pair.a, pair.b), oracle::complex_min_eig(pair.a, pair.b), 1e-10);
    }
}

TEST(SkewCanonical, StandardForm) {
    const SkewCanonicalForm f = skew_canonical(symplectic_form(3));
    ASSERT_EQ(f.mu.size(), 3u);
    for (double m : f.mu) EXPECT_NEAR(m, 1.0, 1e-14);
    EXPECT_LT(max_abs(f.O * symplectic_form(3) * f.O.transpose() - skew_block_form(f.mu, 6)), 1e-14);
}

TEST(SkewCanonical, RandomAndDegenerateInputs) {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Index dim = rng.integer(1, 12);
        Matrix b;
        if (trial % 2 == 0) {
            b = random_skew(dim, rng);
        } else {
            // repeated values and an explicit kernel
            const Index pairs = rng.integer(0, dim / 2);
            std::vector<double> mu(static_cast<std::size_t>(pairs), trial % 4 == 1 ? 1.0 : 0.7);
            const Matrix o = random_orthogonal(dim, rng);
            b = o.transpose() * skew_block_form(mu, dim) * o;
        }
        const SkewCanonicalForm f = skew_canonical(b);
        const Index d = b.rows();
        EXPECT_LT(max_abs(f.O * f.O.transpose() - Matrix::Identity(d, d)), 1e-12);
        EXPECT_LT(max_abs(f.O * b * f.O.transpose() - skew_block_form(f.mu, d)), 1e-12 * (1.0 + max_abs(b)));
        EXPECT_TRUE(std::is_sorted(f.mu.begin(), f.mu.end(), std::greater<>()));
        EXPECT_EQ(2 * static_cast<Index>(f.mu.size()), oracle::real_rank(b));
    }
}

TEST(CongruenceNormalForm, ReproducesTargets) {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const Index dim = rng.integer(2, 10);
        const auto pair = fixture::lemma_pair(dim, rng);
        const CongruenceNormalForm nf = congruence_normal_form(pair.a, pair.b, Tolerance{}, norm2(pair.a));
        const double s = 1.0 + max_abs(pair.a);
        EXPECT_LT(max_abs(nf.C * pair.a * nf.C.transpose() - congruence_target_a(nf, dim)), 1e-9 * s);
        EXPECT_LT(max_abs(nf.C * pair.b * nf.C.transpose() - skew_block_form(nf.mu, dim)), 1e-9 * s);
        EXPECT_LT(max_abs(nf.C * nf.C_inv - Matrix::Identity(dim, dim)), 1e-9 * s);
        EXPECT_EQ(nf.ones_count, pair.unit_count) << "trial " << trial;
        for (double m : nf.mu) EXPECT_LE(m, 1.0);
    }
}

TEST(CongruenceNormalForm, RejectsUnphysicalPair) {
    EXPECT_THROW(congruence_normal_form(0.5 * Matrix::Identity(2, 2), symplectic_form(1)), PhysicalityError);
}

TEST(LemmaReport, WorkedCases) {
    // A = I, B = sigma: rank[A - iB] = 1, A - B A^+ B^T = 0
    const LemmaReport vac = lemma_report(Matrix::Identity(2, 2), symplectic_form(1));
    EXPECT_EQ(vac.lhs, 2);
    EXPECT_EQ(vac.rhs, 2);
    EXPECT_EQ(vac.ones_count, 1);
    EXPECT_TRUE(vac.ineq_ok);
    // B = 0: rank doubles
    const LemmaReport plain = lemma_report(Matrix::Identity(2, 2), Matrix::Zero(2, 2));
    EXPECT_EQ(plain.lhs, 4);
    EXPECT_EQ(plain.rhs, 4);
    EXPECT_EQ(plain.ones_count, 0);
}

TEST(LemmaReport, RankIdentityProperty) {
    SplitMix64 rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        const Index dim = rng.integer(2, 12);
        const auto pair = fixture::lemma_pair(dim, rng);
        const LemmaReport rep = lemma_report(pair.a, pair.b);
        EXPECT_EQ(rep.lhs, rep.rhs) << "trial " << trial;
        EXPECT_TRUE(rep.ineq_ok) << "trial " << trial;
        EXPECT_EQ(rep.rank_a - rep.rank_schur, 2 * rep.ones_count) << "trial " << trial;
    }
}

TEST(Williamson, DiagonalizesAndMatchesOracle) {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = rng.integer(1, 5);
        const Matrix gamma = random_covariance(n, trial % 3 == 0, rng);
        const WilliamsonDecomposition w = williamson(gamma);
        Vector diag(2 * n);
        for (Index j = 0; j < n; ++j) diag(j) = diag(n + j) = w.D[static_cast<std::size_t>(j)];
        EXPECT_LT(max_abs(w.S * gamma * w.S.transpose() - Matrix(diag.asDiagonal())), 1e-9 * max_abs(gamma));
        EXPECT_LT(symplectic_residual(w.S, symplectic_form(n)), 1e-9 * (1.0 + max_abs(w.S) * max_abs(w.S)));
        const auto ref = oracle::symplectic_spectrum(gamma);
        for (Index j = 0; j < n; ++j) EXPECT_NEAR(w.D[static_cast<std::size_t>(j)], ref[static_cast<std::size_t>(j)], 1e-8);
    }
}

TEST(Williamson, ThermalState) {
    const auto d = symplectic_eigenvalues(2.0 * Matrix::Identity(2, 2));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NEAR(d[0], 2.0, 1e-14);
    EXPECT_THROW(williamson(0.5 * Matrix::Identity(2, 2)), PhysicalityError);
}

TEST(SymplecticInverse, Formula) {
    SplitMix64 rng(37);
    const Matrix s = random_symplectic(3, rng);
    EXPECT_LT(max_abs(symplectic_inverse(s) * s - Matrix::Identity(6, 6)), 1e-10);
}

TEST(SymplecticComplete, ExtendsRows) {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = rng.integer(1, 3);
        const Index e = rng.integer(0, 3);
        const Matrix full = random_symplectic(n + e, rng);
        // top rows symplectic w.r.t. sigma_2n (+) sigma_2e after reordering into blocks
        const Matrix block = to_block_order(full, n, e);
        const Matrix sigma = block_diag(symplectic_form(n), symplectic_form(e));
        const Matrix top = block.topRows(2 * n);
        const Matrix s = symplectic_complete(top, sigma);
        EXPECT_EQ(s.topRows(2 * n), top);
        EXPECT_LT(symplectic_residual(s, sigma), 1e-9 * (1.0 + max_abs(top) * max_abs(top)));
    }
}

TEST(SymplecticComplete, RejectsNonSymplecticRows) {
    const Matrix top = 2.0 * Matrix::Identity(2, 2);
    EXPECT_THROW(symplectic_complete(top, symplectic_form(1)), InvalidArgument);
}

TEST(Determinism, RepeatedCallsAreBitIdentical) {
    SplitMix64 a(99), b(99);
    EXPECT_EQ(random_symplectic(3, a), random_symplectic(3, b));
    const Matrix skew = random_skew(7, a);
    EXPECT_EQ(skew_canonical(skew).O, skew_canonical(skew).O);
}
