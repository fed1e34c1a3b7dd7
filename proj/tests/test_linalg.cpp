// SPDX-License-Identifier: Apache-2.0
//
// ewsr-gap: expected weighted sum rate vs. massive-MIMO surrogate gap analysis
// Copyright (C) 2026 The ewsr-gap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ewsr/linalg.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>

using namespace ewsr;
using ewsr::test::max_abs_diff;
using ewsr::test::random_hpd;
using ewsr::test::to_eigen;

TEST(Matrix, ConstructorRejectsBadEntries)
{
    EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), dimension_mismatch);
    EXPECT_THROW(ComplexMatrix(1, 1, {cplx(std::nan(""), 0.0)}), domain_error);
    EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), dimension_mismatch);
}

TEST(Matrix, ProductMatchesEigen)
{
    RngStream rng(3);
    const auto A = rng.complex_normal_matrix(3, 5);
    const auto B = rng.complex_normal_matrix(5, 4);
    const ewsr::test::EMat ref = to_eigen(A) * to_eigen(B);
    EXPECT_LT((to_eigen(A * B) - ref).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((to_eigen(multiply_adjoint(A, A)) - to_eigen(A) * to_eigen(A).adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_THROW(A * A, dimension_mismatch);
}

TEST(Matrix, GramAndSandwichAreExactlyHermitian)
{
    RngStream rng(4);
    const auto A = rng.complex_normal_matrix(4, 3);
    const auto G = gram(A);
    const auto S = sandwich(A, random_hpd(3, 9));
    EXPECT_EQ(G, G.adjoint());
    EXPECT_EQ(S, S.adjoint());
}

TEST(Matrix, BlockHelpers)
{
    const ComplexMatrix A{{1.0, 2.0}};
    const ComplexMatrix B{{3.0}};
    const ComplexMatrix blocks[] = {A, B};
    EXPECT_EQ(hconcat(blocks), (ComplexMatrix{{1.0, 2.0, 3.0}}));
    const ComplexMatrix sq[] = {ComplexMatrix::identity(2), ComplexMatrix{{5.0}}};
    const auto D = block_diagonal(sq);
    EXPECT_EQ(D, (ComplexMatrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 5.0}}));
}

TEST(LogDet, Identity) { EXPECT_EQ(logdet_hpd(ComplexMatrix::identity(3)), 0.0); }

TEST(LogDet, Diagonal)
{
    const double d[] = {2.0, 4.0};
    EXPECT_NEAR(logdet_hpd(ComplexMatrix::diagonal(d)), std::log(8.0), 1e-15);
}

TEST(LogDet, MatchesEigenvaluesOfRandomMatrix)
{
    RngStream rng(5);
    const auto B = rng.complex_normal_matrix(4, 4);
    const auto A = gram(B) + ComplexMatrix::identity(4);
    const auto ev = hermitian_eig(A).eigenvalues;
    double s = 0.0;
    for (double l : ev)
        s += std::log(l);
    EXPECT_NEAR(logdet_hpd(A), s, 1e-10 * std::abs(s));
    // and against Eigen's LLT
    const Eigen::LLT<ewsr::test::EMat> llt(to_eigen(A));
    double ref = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i)
        ref += 2.0 * std::log(llt.matrixL()(i, i).real());
    EXPECT_NEAR(logdet_hpd(A), ref, 1e-12);
}

TEST(LogDet, Errors)
{
    const ComplexMatrix nh{{1.0, 0.5}, {0.0, 1.0}};
    EXPECT_THROW(logdet_hpd(nh), not_hermitian);
    const double d[] = {1.0, -1.0};
    EXPECT_THROW(logdet_hpd(ComplexMatrix::diagonal(d)), not_positive_definite);
    EXPECT_THROW(logdet_hpd(ComplexMatrix{{0.0}}), not_positive_definite);
}

TEST(LogDet, PropertyOverRandomMatrices)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const std::size_t n = 1 + seed % 7;
        const auto A = random_hpd(n, seed);
        const Eigen::SelfAdjointEigenSolver<ewsr::test::EMat> es(to_eigen(A));
        double ref = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            ref += std::log(es.eigenvalues()(i));
        EXPECT_NEAR(logdet_hpd(A), ref, 1e-10 * std::max(1.0, std::abs(ref))) << "seed " << seed;
    }
}

TEST(Inverse, MatchesEigen)
{
    const auto A = random_hpd(5, 11);
    const auto inv = inverse_hpd(A);
    EXPECT_LT((to_eigen(inv) - to_eigen(A).inverse()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(max_abs_diff(A * inv, ComplexMatrix::identity(5)), 1e-12);
}

TEST(Eig, Diagonal)
{
    const double d[] = {1.0, 2.0, 3.0};
    const auto s = hermitian_eig(ComplexMatrix::diagonal(d));
    ASSERT_EQ(s.eigenvalues.size(), 3u);
    EXPECT_DOUBLE_EQ(s.eigenvalues[0], 3.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues[1], 2.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues[2], 1.0);
}

TEST(Eig, RankOne)
{
    // ||h||^2 = 1 + 4 = 5
    const ComplexMatrix h{{1.0}, {cplx(0.0, 2.0)}, {0.0}, {0.0}};
    const auto s = hermitian_eig(gram(h));
    EXPECT_NEAR(s.eigenvalues[0], 5.0, 1e-14);
    for (std::size_t i = 1; i < 4; ++i)
        EXPECT_NEAR(s.eigenvalues[i], 0.0, 1e-14);
}

TEST(Eig, TraceIdentityAndResidualsOnRandomHermitian)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        RngStream rng(seed, StreamFamily::generic, 1);
        const auto B = rng.complex_normal_matrix(6, 6);
        const auto A = (B + B.adjoint()) * 0.5; // indefinite
        const auto s = hermitian_eig(A);
        const double tr = A.trace().real();
        const double sum = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0);
        EXPECT_NEAR(sum, tr, 1e-10 * std::max(1.0, A.frobenius_norm()));
        for (std::size_t j = 0; j + 1 < 6; ++j)
            EXPECT_GE(s.eigenvalues[j], s.eigenvalues[j + 1]);

        const double norm = A.frobenius_norm();
        for (std::size_t j = 0; j < 6; ++j)
        {
            const auto v = s.eigenvectors.block(0, j, 6, 1);
            const auto r = A * v - v * s.eigenvalues[j];
            EXPECT_LE(r.frobenius_norm(), 1e-10 * norm);
        }
        EXPECT_LE(max_abs_diff(s.eigenvectors.adjoint() * s.eigenvectors, ComplexMatrix::identity(6)), 1e-10);

        // Independent spectrum from Eigen.
        const Eigen::SelfAdjointEigenSolver<ewsr::test::EMat> es(to_eigen(A));
        for (std::size_t j = 0; j < 6; ++j)
            EXPECT_NEAR(s.eigenvalues[j], es.eigenvalues()(static_cast<Eigen::Index>(5 - j)), 1e-10 * norm);
    }
}

TEST(Eig, ReconstructsLargerMatrix)
{
    const auto A = random_hpd(32, 21);
    const auto s = hermitian_eig(A);
    const auto R = spectral_map(s, [](double l) { return l; });
    EXPECT_LE(max_abs_diff(R, A), 1e-10 * A.max_abs());
}

TEST(Eig, RejectsNonHermitian)
{
    const ComplexMatrix A{{1.0, cplx(0.0, 1.0)}, {cplx(0.0, 1.0), 1.0}};
    EXPECT_THROW(hermitian_eig(A), not_hermitian);
}

TEST(Sqrt, Examples)
{
    EXPECT_EQ(hermitian_sqrt(ComplexMatrix::identity(3)), ComplexMatrix::identity(3));
    const double d[] = {4.0, 9.0};
    const double r[] = {2.0, 3.0};
    EXPECT_LE(max_abs_diff(hermitian_sqrt(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(r)), 1e-15);
}

TEST(Sqrt, SquaresBackAndCommutes)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        RngStream rng(seed, StreamFamily::generic, 2);
        const auto C = gram(rng.complex_normal_matrix(5, 3)); // rank-deficient PSD
        const auto S = hermitian_sqrt(C);
        const double n = C.max_abs();
        EXPECT_LE(max_abs_diff(S * S, C), 1e-10 * n);
        EXPECT_LE(max_abs_diff(S * C, C * S), 1e-9 * n);
        EXPECT_EQ(S, S.adjoint());
    }
}

TEST(Sqrt, ClampsTinyNegativeAndRejectsIndefinite)
{
    const double tiny[] = {1.0, -1e-13};
    EXPECT_NO_THROW(hermitian_sqrt(ComplexMatrix::diagonal(tiny)));
    const double bad[] = {1.0, -1e-3};
    EXPECT_THROW(hermitian_sqrt(ComplexMatrix::diagonal(bad)), indefinite_matrix);
    EXPECT_THROW(require_psd(ComplexMatrix::diagonal(bad)), indefinite_matrix);
}
