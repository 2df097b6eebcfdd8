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

#pragma once

#include "squintlab/common.hpp"

namespace squintlab::linalg
{
    // Relative singular-value threshold below which a matrix is treated as rank deficient.
    inline constexpr double kRankTolerance = 1e-10;

    /// Least-squares solution of min_X ||B - A X||_F. Throws rank_deficient when
    /// A does not have full column rank; never regularizes silently.
    CMat least_squares(const CMat &A, const CMat &B);

    /// Scale `m` so that ||m||_F^2 == power. Throws degenerate_input on a zero matrix.
    CMat normalize_power(const CMat &m, double power);

    /// log2 det(I + X) for Hermitian positive semidefinite X.
    double log2_det_identity_plus(const CMat &X);

    inline constexpr int kSubspaceIterations = 200;
    inline constexpr double kSubspaceTolerance = 1e-11;

    /// Eigenvectors of the `k` largest eigenvalues of a Hermitian matrix (N x k).
    /// Small k uses block subspace iteration until ||A V - V L||_F <= 1e-11 ||A||_F,
    /// falling back to the dense solver when the eigengap is too small to converge.
    CMat dominant_subspace(const CMat &hermitian, Eigen::Index k);

    /// Same subspace from a full dense eigendecomposition.
    CMat dominant_subspace_dense(const CMat &hermitian, Eigen::Index k);
}
