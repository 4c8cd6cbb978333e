// SPDX-License-Identifier: Apache-2.0
//
// alignchain: degrees of freedom and subspace alignment chains for the
// three-user MIMO interference channel
// Copyright (C) 2026 The alignchain Authors
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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace alignchain {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

// One tolerance policy shared by every rank, alignment and zero-pattern
// decision in the library.
struct TolerancePolicy {
    double rel_tol = 1e-6;      // singular value threshold, relative
    double align_tol = 1e-8;    // residual of aligned interference, relative
    double pattern_tol = 1e-9;  // forced zeros after a change of basis, relative
};

struct RankReport {
    std::vector<double> singular_values;  // descending
    double tol_used = 0.0;
    int rank = 0;
};

/// SVD rank: count of singular values above rel_tol * max(s_1, tiny) * max(rows, cols).
/// Throws NonFinite on NaN/Inf input.
RankReport numeric_rank(const CMatrix& a, double rel_tol = TolerancePolicy{}.rel_tol);

// Same rule with s_1 replaced by max(s_1, scale): ranks a block of a larger
// matrix against the scale of the whole, so that a block of round-off is
// rank zero rather than full rank.
RankReport numeric_rank_scaled(const CMatrix& a, double scale, double rel_tol = TolerancePolicy{}.rel_tol);

// Orthonormal basis (columns) of {x : a x = 0}, with the rank decided by the
// same threshold rule as numeric_rank.
CMatrix null_space(const CMatrix& a, double rel_tol = TolerancePolicy{}.rel_tol);

// Orthonormal basis (rows) of {y : y a = 0}.
CMatrix left_null_space(const CMatrix& a, double rel_tol = TolerancePolicy{}.rel_tol);

// Unit norm, first entry of magnitude above 1e-12 made real positive.
CVector canonical_direction(const CVector& v);

double condition_number(const CMatrix& a);

// Splitmix-style mixing of a master seed with structural tags (link
// indices, block numbers, grid coordinates, attempt counters).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

// i.i.d. standard circularly-symmetric complex Gaussian entries, E|x|^2 = 1.
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

}  // namespace alignchain
