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

#include "alignchain/numeric.hpp"

#include "alignchain/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace alignchain {

namespace {

struct SvdResult {
    Eigen::VectorXd s;
    CMatrix v;  // full right singular vectors
};

SvdResult svd_full_v(const CMatrix& a)
{
    if (a.rows() == 0 || a.cols() == 0) return {Eigen::VectorXd(0), CMatrix::Identity(a.cols(), a.cols())};
    if (std::min(a.rows(), a.cols()) <= 48) {
        Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
        return {svd.singularValues(), svd.matrixV()};
    }
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    return {svd.singularValues(), svd.matrixV()};
}

double threshold(const Eigen::VectorXd& s, Eigen::Index rows, Eigen::Index cols, double rel_tol, double scale = 0.0)
{
    const double top = std::max(s.size() > 0 ? s(0) : 0.0, scale);
    const double tiny = std::numeric_limits<double>::min();
    return rel_tol * std::max(top, tiny) * static_cast<double>(std::max<Eigen::Index>({rows, cols, 1}));
}

int count_above(const Eigen::VectorXd& s, double tol)
{
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol) ++r;
    return r;
}

}  // namespace

RankReport numeric_rank(const CMatrix& a, double rel_tol)
{
    return numeric_rank_scaled(a, 0.0, rel_tol);
}

RankReport numeric_rank_scaled(const CMatrix& a, double scale, double rel_tol)
{
    if (!a.allFinite()) throw NonFinite("numeric_rank: matrix has non-finite entries");
    RankReport rep;
    Eigen::VectorXd s(0);
    if (a.size() > 0) {
        if (std::min(a.rows(), a.cols()) <= 48)
            s = Eigen::JacobiSVD<CMatrix>(a).singularValues();
        else
            s = Eigen::BDCSVD<CMatrix>(a).singularValues();
    }
    rep.singular_values.assign(s.data(), s.data() + s.size());
    rep.tol_used = threshold(s, a.rows(), a.cols(), rel_tol, scale);
    rep.rank = count_above(s, rep.tol_used);
    return rep;
}

CMatrix null_space(const CMatrix& a, double rel_tol)
{
    if (!a.allFinite()) throw NonFinite("null_space: matrix has non-finite entries");
    const auto svd = svd_full_v(a);
    const int rank = count_above(svd.s, threshold(svd.s, a.rows(), a.cols(), rel_tol));
    return svd.v.rightCols(a.cols() - rank);
}

CMatrix left_null_space(const CMatrix& a, double rel_tol)
{
    return null_space(a.adjoint(), rel_tol).adjoint();
}

CVector canonical_direction(const CVector& v)
{
    const double nrm = v.norm();
    if (nrm == 0.0) throw DegenerateChannel("canonical_direction: zero vector");
    CVector u = v / nrm;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double mag = std::abs(u(i));
        if (mag > 1e-12) {
            u *= std::conj(u(i)) / mag;
            u(i) = cplx(mag, 0.0);
            break;
        }
    }
    return u;
}

double condition_number(const CMatrix& a)
{
    const auto s = Eigen::JacobiSVD<CMatrix>(a).singularValues();
    if (s.size() == 0) return 1.0;
    const double lo = s(s.size() - 1);
    return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(master);
    for (auto t : tags) h = mix(h ^ mix(t + 0x632be59bd9b4e019ULL));
    return h;
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix out(rows, cols);
    // row-major fill so that the stream order matches the JSON layout
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(r, c) = cplx(re, im);
        }
    return out;
}

}  // namespace alignchain
