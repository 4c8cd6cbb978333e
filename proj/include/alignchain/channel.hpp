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

#include "alignchain/numeric.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>

namespace alignchain {

enum class Flavor { Constant, TimeVarying };

std::string to_string(Flavor f);
// Accepts "constant", "varying", "time-varying", "timevarying".
Flavor parse_flavor(const std::string& s);

// h[j][i]: receiver j, transmitter i, zero based.
using LinkArray = std::array<std::array<CMatrix, 3>, 3>;

class ChannelSet {
  public:
    /// Nine i.i.d. CN(0,1) links. Link (j, i) is drawn from a sub-seed of
    /// (seed, j, i, block 0), so extend() can reuse it as the first block.
    static ChannelSet generate(int m_t, int m_r, Flavor flavor, std::uint64_t seed);

    // Validates shapes and, for extension > 1, the block-diagonal structure.
    static ChannelSet from_links(LinkArray h, Flavor flavor, std::uint64_t seed, int extension = 1,
                                 bool transposed = false);

    const CMatrix& h(int j, int i) const { return h_[j][i]; }
    const LinkArray& links() const { return h_; }

    int m_t() const { return m_t_; }  // base antennas, per slot
    int m_r() const { return m_r_; }
    int tx_dims() const { return m_t_ * extension_; }
    int rx_dims() const { return m_r_ * extension_; }
    Flavor flavor() const { return flavor_; }
    std::uint64_t seed() const { return seed_; }
    int extension() const { return extension_; }
    bool transposed() const { return transposed_; }

    ChannelSet extend(int t) const;
    ChannelSet reciprocal() const;

    friend bool operator==(const ChannelSet& a, const ChannelSet& b);

  private:
    ChannelSet() = default;

    LinkArray h_;
    int m_t_ = 0;
    int m_r_ = 0;
    Flavor flavor_ = Flavor::Constant;
    std::uint64_t seed_ = 0;
    int extension_ = 1;
    bool transposed_ = false;  // produced by reciprocal(); keeps extension seeds distinct
};

inline ChannelSet generate(int m_t, int m_r, Flavor flavor, std::uint64_t seed)
{
    return ChannelSet::generate(m_t, m_r, flavor, seed);
}
inline ChannelSet extend(const ChannelSet& ch, int t) { return ch.extend(t); }
inline ChannelSet reciprocal(const ChannelSet& ch) { return ch.reciprocal(); }

// Transposed roles: h'[j][i] = h[i][j]^T.
LinkArray reciprocal_links(const LinkArray& h);

nlohmann::json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChannelSet& ch);
ChannelSet channel_from_json(const nlohmann::json& j);

}  // namespace alignchain
