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

#include "alignchain/channel.hpp"

#include <array>
#include <string>
#include <vector>

namespace alignchain {

// Antenna labels of the transformed (p, p+1) network. Layer 0 is the core:
// the single transmit antenna b (odd p), the single receive antenna b (even
// p) or the receive pair a0/c0 (odd p).
enum class Side { A, B, C };

struct AntennaLabel {
    Side side;
    int layer;
};

std::string to_string(const AntennaLabel& l);

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Expected connectivity of a transformed network: zero[j][i](r, c) is true
// when receive antenna r of user j must not hear transmit antenna c of user i.
struct ConnectivityPattern {
    int p = 0;
    bool transposed = false;  // pattern of the reciprocal (p+1, p) network
    std::vector<AntennaLabel> tx_labels;
    std::vector<AntennaLabel> rx_labels;
    std::array<std::array<BoolMatrix, 3>, 3> zero;

    ConnectivityPattern transpose() const;
};

struct BasisChange {
    int p = 0;
    bool transposed = false;
    std::array<CMatrix, 3> t_mats;  // columns: transmit antennas, ordered as tx_labels
    std::array<CMatrix, 3> r_mats;  // rows: receive antennas, ordered as rx_labels
    LinkArray transformed;          // r_mats[j] * h[j][i] * t_mats[i]
};

struct ZeroPatternReport {
    std::array<std::array<RMatrix, 3>, 3> residual;  // |entry| / max |entry|, masked entries only
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Layer rule for 2 <= p <= 8; throws Unsupported otherwise.
ConnectivityPattern builtin_pattern(int p);

// 2x3 change of basis. Requires m_t = 2, m_r = 3, extension 1.
BasisChange cob_2x3(const ChannelSet& ch, double rel_tol = TolerancePolicy{}.rel_tol);

/// Onion peeling for (p, p+1), or (p+1, p) through the reciprocal network.
/// Each layer fixes the outermost receive rows a_l / c_l as left null vectors
/// of the two cross links, the transmit columns a_l / c_l against the
/// neighbouring receivers' rows, and hands the intersection of the remaining
/// column spaces to the next layer.
BasisChange cob_recursive(const ChannelSet& ch, int p, double rel_tol = TolerancePolicy{}.rel_tol);

ZeroPatternReport verify_connectivity(const BasisChange& bc, const ConnectivityPattern& pattern,
                                      double pattern_tol = TolerancePolicy{}.pattern_tol);

// Largest condition number over all six transforms.
double worst_condition(const BasisChange& bc);

// Appendix-style listing: for each receive antenna, the transmit antennas it
// hears, with mismatches against the pattern flagged.
std::string connectivity_table(const BasisChange& bc, const ConnectivityPattern& pattern,
                               double pattern_tol = TolerancePolicy{}.pattern_tol);

}  // namespace alignchain
