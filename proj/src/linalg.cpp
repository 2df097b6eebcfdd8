// SPDX-License-Identifier: Apache-2.0
//
// squintlab: wideband beam-squint simulation for ISAC arrays
// Copyright (C) 2026 The squintlab authors
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

#include "squintlab/linalg.hpp"

#include "squintlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace squintlab::linalg
{
    CMat least_squares(const CMat &A, const CMat &B)
    {
        require(A.rows() == B.rows(), ErrorCode::dimension_mismatch,
                "least_squares: row count mismatch (" + std::to_string(A.rows()) + " vs " +
                    std::to_string(B.rows()) + ")");
        require(A.cols() > 0 && A.cols() <= A.rows(), ErrorCode::rank_deficient,
                "least_squares: system has more unknowns than equations");

        Eigen::ColPivHouseholderQR<CMat> qr(A);
        qr.setThreshold(kRankTolerance);
        require(qr.rank() == A.cols(), ErrorCode::rank_deficient,
                "least_squares: matrix has rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(A.cols()) + " columns");
        return qr.solve(B);
    }

    CMat normalize_power(const CMat &m, double power)
    {
        const double norm = m.norm();
        require(norm > 0.0 && std::isfinite(norm), ErrorCode::degenerate_input,
                "normalize_power: zero or non-finite matrix");
        return m * (std::sqrt(power) / norm);
    }

    double log2_det_identity_plus(const CMat &X)
    {
        CMat M = X;
        M.diagonal().array() += 1.0;
        Eigen::LDLT<CMat> ldlt(M);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            acc += std::log2(std::max(ldlt.vectorD()(i).real(), 1e-300));
        return acc;
    }

    CMat dominant_subspace_dense(const CMat &hermitian, Eigen::Index k)
    {
        require(hermitian.rows() == hermitian.cols(), ErrorCode::dimension_mismatch,
                "dominant_subspace: matrix is not square");
        require(k >= 0 && k <= hermitian.rows(), ErrorCode::invalid_argument,
                "dominant_subspace: invalid subspace dimension");
        Eigen::SelfAdjointEigenSolver<CMat> eig(hermitian);
        // eigenvalues are ascending
        return eig.eigenvectors().rightCols(k);
    }

    CMat dominant_subspace(const CMat &hermitian, Eigen::Index k)
    {
        require(hermitian.rows() == hermitian.cols(), ErrorCode::dimension_mismatch,
                "dominant_subspace: matrix is not square");
        require(k >= 0 && k <= hermitian.rows(), ErrorCode::invalid_argument,
                "dominant_subspace: invalid subspace dimension");
        const Eigen::Index n = hermitian.rows();
        const Eigen::Index p = std::min(n, k + 8);
        const double scale = hermitian.norm();
        if (k == 0 || n < 48 || 4 * p > n || !(scale > 0.0))
            return dominant_subspace_dense(hermitian, k);

        // Block subspace iteration with Rayleigh-Ritz, from a fixed start block.
        Rng rng(0x9e3779b97f4a7c15ull);
        CMat Q = Eigen::HouseholderQR<CMat>(complex_normal_matrix(rng, n, p)).householderQ() * CMat::Identity(n, p);
        for (int it = 0; it < kSubspaceIterations; ++it)
        {
            const CMat Z = hermitian * Q;
            CMat H = Q.adjoint() * Z;
            H = 0.5 * (H + H.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<CMat> ritz(H);
            const CMat Y = ritz.eigenvectors().rightCols(k);
            const RVec lambda = ritz.eigenvalues().tail(k);
            const CMat V = Q * Y;
            const double residual = (Z * Y - V * lambda.asDiagonal()).norm();
            if (residual <= kSubspaceTolerance * scale)
                return V;
            Q = Eigen::HouseholderQR<CMat>(Z).householderQ() * CMat::Identity(n, p);
        }
        return dominant_subspace_dense(hermitian, k);
    }
}
