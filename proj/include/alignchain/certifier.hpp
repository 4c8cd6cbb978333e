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

#include "alignchain/alignment.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace alignchain {

struct ReceiverReport {
    int interference_dim = 0;
    int desired_dim = 0;
    int joint_rank = 0;
    int demanded = 0;
    double residual = 0.0;  // first discarded singular value of the interference, relative
    RankReport joint;       // rank of [interference | desired]
};

struct AlignmentReport {
    std::vector<ReceiverReport> per_rx;
    bool pass = false;
    SchemeDescriptor scheme;
};

/// Per receiver: interference = filtered cross images, desired = filtered
/// direct image. Passes when every receiver separates its demanded streams
/// from a well-aligned interference subspace.
AlignmentReport verify_solution(const ChannelSet& ch, const BeamformingSolution& sol,
                                const TolerancePolicy& tol = {});
AlignmentReport verify_solution(const LinkArray& h, const BeamformingSolution& sol, const TolerancePolicy& tol = {});

struct GridCell {
    int m_t = 0;
    int m_r = 0;
    Rational dof_star;
    int d = 0;
    SchemeKind scheme = SchemeKind::None;
    bool pass = false;
    int seeds = 0;          // seeds tried until the first pass (or all of them)
    bool expected = false;  // linear feasibility predicted from the closed form
    std::string error;      // last construction error, if any
    std::optional<AlignmentReport> failure;  // report of the last failing seed
};

struct GridOptions {
    int max_m = 10;  // m_t range 1..max_m
    int max_n = 10;  // m_r range 1..max_n
    int seeds = 3;
    int jobs = 1;
    std::uint64_t master_seed = 0;
    TolerancePolicy tol;
    std::map<std::pair<int, int>, int> demand;  // forced d for particular (m_t, m_r)
};

struct GridResult {
    std::vector<GridCell> cells;  // row-major over (m_t, m_r)
    GridOptions options;

    bool all_pass() const;
    bool agrees() const;  // every verdict equals its prediction
    const GridCell& at(int m_t, int m_r) const;
};

GridCell evaluate_cell(const AntennaConfig& cfg, int d, int seeds, std::uint64_t master_seed,
                       const TolerancePolicy& tol = {});

/// Cells are independent; per-cell seeds come from (master seed, m_t, m_r,
/// attempt), so the result does not depend on `jobs`.
GridResult feasibility_grid(const GridOptions& opt);

std::string to_csv(const GridResult& g);
GridResult grid_from_csv(const std::string& text);
nlohmann::json to_json(const RankReport& r);
nlohmann::json to_json(const AlignmentReport& r);
nlohmann::json to_json(const GridResult& g);
GridResult grid_from_json(const nlohmann::json& j);

struct TimeVariationCell {
    int m_t = 0;
    int m_r = 0;
    int extension = 1;
    bool constant_pass = false;
    bool varying_pass = false;
};

// Cells up to max x max whose DoF* is fractional in the alignment regime,
// with the verdict of the symbol-extension scheme on constant and on
// time-varying channels (pass if any of `seeds` seeds passes).
std::vector<TimeVariationCell> time_variation_cells(int max, std::uint64_t master_seed, int seeds = 3,
                                                    const TolerancePolicy& tol = {}, int jobs = 1);

/// Sum rate per channel use with per-stream linear MMSE receivers and equal
/// power per stream, fitted against log2(SNR). Throws VerificationFailed on a
/// failing solution unless require_pass is false.
double estimate_dof_slope(const ChannelSet& ch, const BeamformingSolution& sol, const std::vector<double>& snr_db,
                          bool require_pass = true, const TolerancePolicy& tol = {});

}  // namespace alignchain
