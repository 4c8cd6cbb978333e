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
#include "alignchain/dof.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace alignchain {

// A subspace alignment chain. User indices are one based; position r of the
// chain belongs to transmitter tx_seq[r], and positions r, r+1 align at
// receiver rx_seq[r].
struct ChainSpec {
    int origin = 1;
    int length = 1;
    int sub_dim = 1;
    std::vector<int> tx_seq;
    std::vector<int> rx_seq;
};

ChainSpec chain_spec(int origin, int p, int sub_dim = 1);

struct StackedSystem {
    CMatrix matrix;  // (p-1) r_dims x p t_dims staircase
    ChainSpec spec;
    int t_dims = 0;
    int r_dims = 0;
};

StackedSystem build_stacked(const LinkArray& h, const ChainSpec& spec);
StackedSystem build_stacked(const ChannelSet& ch, const ChainSpec& spec);

/// Null space of the stacked system, combined down to d0 columns by a seeded
/// Gaussian matrix and cut into one t_dims x d0 block per chain position.
/// Throws InsufficientNullSpace when the numeric null dimension is below d0.
std::vector<CMatrix> solve_chain(const StackedSystem& sys, int d0, std::uint64_t combiner_seed,
                                 double rel_tol = TolerancePolicy{}.rel_tol);

enum class SchemeKind { None, Ratio, Spatial, TimeExtension, Feasibility, ZeroForcing, ClosedLoop };

std::string to_string(SchemeKind k);
SchemeKind parse_scheme_kind(const std::string& s);

struct SchemeDescriptor {
    SchemeKind kind = SchemeKind::None;
    int m_t = 0;  // antennas of the configuration the scheme was asked for
    int m_r = 0;
    int scale = 1;      // spatial scaling q
    int extension = 1;  // symbol extension T
    bool dual = false;  // built on the reciprocal network
    std::array<int, 3> streams{0, 0, 0};
    std::vector<ChainSpec> chains;  // in the orientation the chains were solved
    double alignment_residual = 0.0;  // worst chain mismatch at construction time
};

struct BeamformingSolution {
    // Precoders in the antenna space of the channel they were built for,
    // including any transmit projection.
    std::array<CMatrix, 3> v;
    // Optional receive-side reduction (selection or random projection); rows
    // are applied to the received vector before any rank test.
    std::array<std::optional<CMatrix>, 3> rx_filter;
    std::array<std::optional<CMatrix>, 3> tx_projection;
    SchemeDescriptor scheme;
};

// A solution together with the channel it was designed on.
struct Construction {
    ChannelSet channel;
    BeamformingSolution solution;
};

/// Three length-p chains of dimension q on ((2p-1)q, (2p+1)q).
BeamformingSolution construct_ratio_scheme(const ChannelSet& ch, std::uint64_t seed,
                                           double rel_tol = TolerancePolicy{}.rel_tol);

/// Scale by the spatial factor, trim the redundant side and run the ratio
/// scheme. Requires 1/2 < m/n < 1.
Construction construct_spatial(const AntennaConfig& cfg, std::uint64_t seed, Flavor flavor = Flavor::Constant,
                               double rel_tol = TolerancePolicy{}.rel_tol);

/// Random beams, receivers separate all streams. Requires m/n <= 1/2.
BeamformingSolution construct_zero_forcing(const ChannelSet& ch, std::uint64_t seed,
                                           double rel_tol = TolerancePolicy{}.rel_tol);
Construction construct_zero_forcing(const AntennaConfig& cfg, std::uint64_t seed,
                                    double rel_tol = TolerancePolicy{}.rel_tol);

/// Extend by T = 2p-1 (M-limited) or 2p+1 (N-limited), reduce the redundant
/// side with seeded random projections and run the ratio scheme.
Construction construct_time_extension(const AntennaConfig& cfg, Flavor flavor, std::uint64_t seed,
                                      double rel_tol = TolerancePolicy{}.rel_tol);

// Chain plan for demand d without extensions: delta[L] chains of each length L
// per origin, L = 1..kappa.
struct ChainPlan {
    int demand = 0;
    std::vector<int> delta;  // delta[0] unused
    int receive_dims = 0;    // 2 d + sum delta
    bool fits = false;       // receive_dims <= n
};

ChainPlan feasibility_plan(const AntennaConfig& cfg, int d);

/// d = floor(DoF*) streams per user (or a forced demand) on the channel
/// itself; closed-loop eigen scheme for m == n, chain packing otherwise.
BeamformingSolution construct_feasibility(const ChannelSet& ch, std::uint64_t seed, std::optional<int> demand = {},
                                          double rel_tol = TolerancePolicy{}.rel_tol);
Construction construct_feasibility(const AntennaConfig& cfg, std::uint64_t seed, std::optional<int> demand = {},
                                   double rel_tol = TolerancePolicy{}.rel_tol);

/// Dispatch on the configuration: zero forcing, ratio, spatial or closed loop.
Construction construct_auto(const AntennaConfig& cfg, std::uint64_t seed, Flavor flavor = Flavor::Constant,
                            double rel_tol = TolerancePolicy{}.rel_tol);

struct GMatrixDemo {
    CMatrix g;  // 15 x 15 at receiver 1
    RankReport rank;
};

/// Normalized 2x3 network over five slots, receiver 1.
GMatrixDemo g_matrix_demo(std::uint64_t seed, Flavor flavor, double rel_tol = TolerancePolicy{}.rel_tol);

// Largest relative mismatch ||H_{r,a} V_a - H_{r,b} V_b|| / max(norms) over
// the links of one solved chain.
double chain_alignment_residual(const LinkArray& h, const ChainSpec& spec, const std::vector<CMatrix>& blocks);

nlohmann::json to_json(const BeamformingSolution& sol);
BeamformingSolution solution_from_json(const nlohmann::json& j);

}  // namespace alignchain
