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

#include "alignchain/channel.hpp"

#include "alignchain/errors.hpp"

#include <stdexcept>

namespace alignchain {

namespace {

std::uint64_t link_seed(std::uint64_t seed, int j, int i, int block, bool transposed)
{
    return derive_seed(seed, {static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i),
                              static_cast<std::uint64_t>(block), transposed ? 1u : 0u});
}

CMatrix block_diag(const std::vector<CMatrix>& blocks)
{
    const auto r = blocks.front().rows();
    const auto c = blocks.front().cols();
    const auto t = static_cast<Eigen::Index>(blocks.size());
    CMatrix out = CMatrix::Zero(r * t, c * t);
    for (Eigen::Index b = 0; b < t; ++b) out.block(b * r, b * c, r, c) = blocks[b];
    return out;
}

}  // namespace

std::string to_string(Flavor f)
{
    return f == Flavor::Constant ? "constant" : "varying";
}

Flavor parse_flavor(const std::string& s)
{
    if (s == "constant") return Flavor::Constant;
    if (s == "varying" || s == "time-varying" || s == "timevarying") return Flavor::TimeVarying;
    throw std::invalid_argument("unknown channel flavor '" + s + "'");
}

ChannelSet ChannelSet::generate(int m_t, int m_r, Flavor flavor, std::uint64_t seed)
{
    if (m_t < 1 || m_r < 1) throw std::invalid_argument("generate: antenna counts must be >= 1");
    ChannelSet ch;
    ch.m_t_ = m_t;
    ch.m_r_ = m_r;
    ch.flavor_ = flavor;
    ch.seed_ = seed;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) ch.h_[j][i] = complex_gaussian(m_r, m_t, link_seed(seed, j, i, 0, false));
    return ch;
}

ChannelSet ChannelSet::from_links(LinkArray h, Flavor flavor, std::uint64_t seed, int extension, bool transposed)
{
    if (extension < 1) throw std::invalid_argument("from_links: extension must be >= 1");
    const auto rows = h[0][0].rows();
    const auto cols = h[0][0].cols();
    if (rows == 0 || cols == 0 || rows % extension != 0 || cols % extension != 0)
        throw ShapeMismatch("from_links: link shape incompatible with extension");
    for (const auto& row : h)
        for (const auto& m : row) {
            if (m.rows() != rows || m.cols() != cols) throw ShapeMismatch("from_links: inconsistent link shapes");
            if (!m.allFinite()) throw NonFinite("from_links: non-finite channel entry");
        }
    const auto r = rows / extension;
    const auto c = cols / extension;
    if (extension > 1) {
        for (const auto& row : h)
            for (const auto& m : row)
                for (int a = 0; a < extension; ++a)
                    for (int b = 0; b < extension; ++b) {
                        if (a == b) {
                            if (flavor == Flavor::Constant && m.block(a * r, a * c, r, c) != m.block(0, 0, r, c))
                                throw std::invalid_argument("from_links: constant flavor needs identical blocks");
                        } else if (!m.block(a * r, b * c, r, c).isZero(0.0)) {
                            throw std::invalid_argument("from_links: extended link is not block diagonal");
                        }
                    }
    }
    ChannelSet ch;
    ch.h_ = std::move(h);
    ch.m_t_ = static_cast<int>(c);
    ch.m_r_ = static_cast<int>(r);
    ch.flavor_ = flavor;
    ch.seed_ = seed;
    ch.extension_ = extension;
    ch.transposed_ = transposed;
    return ch;
}

ChannelSet ChannelSet::extend(int t) const
{
    if (t < 1) throw std::invalid_argument("extend: t must be >= 1");
    if (extension_ != 1) throw std::invalid_argument("extend: channel is already extended");
    if (t == 1) return *this;
    ChannelSet out = *this;
    out.extension_ = t;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            std::vector<CMatrix> blocks(t, h_[j][i]);
            if (flavor_ == Flavor::TimeVarying)
                for (int b = 1; b < t; ++b) blocks[b] = complex_gaussian(m_r_, m_t_, link_seed(seed_, j, i, b, transposed_));
            out.h_[j][i] = block_diag(blocks);
        }
    return out;
}

LinkArray reciprocal_links(const LinkArray& h)
{
    LinkArray out;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) out[j][i] = h[i][j].transpose();
    return out;
}

ChannelSet ChannelSet::reciprocal() const
{
    ChannelSet out = *this;
    out.h_ = reciprocal_links(h_);
    out.m_t_ = m_r_;
    out.m_r_ = m_t_;
    out.transposed_ = !transposed_;
    return out;
}

bool operator==(const ChannelSet& a, const ChannelSet& b)
{
    if (a.m_t_ != b.m_t_ || a.m_r_ != b.m_r_ || a.flavor_ != b.flavor_ || a.seed_ != b.seed_ ||
        a.extension_ != b.extension_ || a.transposed_ != b.transposed_)
        return false;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (a.h_[j][i] != b.h_[j][i]) return false;
    return true;
}

nlohmann::json matrix_to_json(const CMatrix& a)
{
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw ShapeMismatch("matrix: expected array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    CMatrix a(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ShapeMismatch("matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& e = row[c];
            if (!e.is_array() || e.size() != 2) throw ShapeMismatch("matrix: entries must be [re, im]");
            a(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return a;
}

nlohmann::json to_json(const ChannelSet& ch)
{
    nlohmann::json mats = nlohmann::json::array();
    for (int j = 0; j < 3; ++j) {
        auto row = nlohmann::json::array();
        for (int i = 0; i < 3; ++i) row.push_back(matrix_to_json(ch.h(j, i)));
        mats.push_back(std::move(row));
    }
    return {{"m_t", ch.m_t()},           {"m_r", ch.m_r()},         {"flavor", to_string(ch.flavor())},
            {"seed", ch.seed()},         {"extension", ch.extension()}, {"transposed", ch.transposed()},
            {"matrices", std::move(mats)}};
}

ChannelSet channel_from_json(const nlohmann::json& j)
{
    const int m_t = j.at("m_t").get<int>();
    const int m_r = j.at("m_r").get<int>();
    const int t = j.at("extension").get<int>();
    if (m_t < 1 || m_r < 1 || t < 1) throw std::invalid_argument("channel json: bad dimensions");
    const auto& mats = j.at("matrices");
    if (!mats.is_array() || mats.size() != 3) throw ShapeMismatch("channel json: need 3x3 matrices");
    LinkArray h;
    for (int r = 0; r < 3; ++r) {
        if (!mats[r].is_array() || mats[r].size() != 3) throw ShapeMismatch("channel json: need 3x3 matrices");
        for (int i = 0; i < 3; ++i) {
            h[r][i] = matrix_from_json(mats[r][i]);
            if (h[r][i].rows() != m_r * t || h[r][i].cols() != m_t * t)
                throw ShapeMismatch("channel json: link shape does not match m_r x m_t");
        }
    }
    return ChannelSet::from_links(std::move(h), parse_flavor(j.at("flavor").get<std::string>()),
                                  j.at("seed").get<std::uint64_t>(), t, j.value("transposed", false));
}

}  // namespace alignchain
