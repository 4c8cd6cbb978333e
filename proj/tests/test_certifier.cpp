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

#include "alignchain/certifier.hpp"
#include "alignchain/errors.hpp"

#include <doctest.h>

using namespace alignchain;

TEST_SUITE("certifier") {

TEST_CASE("numeric rank examples")
{
    CHECK(numeric_rank(CMatrix::Identity(4, 4)).rank == 4);
    CHECK(numeric_rank(CMatrix::Zero(3, 5)).rank == 0);
    CMatrix a = complex_gaussian(6, 2, 1);
    CMatrix b(6, 4);
    b << a, a * complex_gaussian(2, 2, 2);
    CHECK(numeric_rank(b).rank == 2);
    CMatrix d = CMatrix::Identity(3, 3);
    d(2, 2) = 1e-12;
    CHECK(numeric_rank(d).rank == 2);
    d(2, 2) = 1e-3;
    CHECK(numeric_rank(d).rank == 3);
}

TEST_CASE("verify_solution reports per receiver")
{
    const auto ch = generate(3, 5, Flavor::Constant, 3);
    const auto sol = construct_ratio_scheme(ch, 3);
    const auto rep = verify_solution(ch, sol);
    REQUIRE(rep.per_rx.size() == 3);
    CHECK(rep.pass);
    for (const auto& r : rep.per_rx) {
        CHECK(r.demanded == 2);
        CHECK(r.joint_rank == r.interference_dim + r.desired_dim);
        CHECK(r.residual <= 1e-8);
        CHECK(r.joint.singular_values.size() == 5);
    }
}

TEST_CASE("zero beamformers fail")
{
    const auto ch = generate(3, 5, Flavor::Constant, 3);
    auto sol = construct_ratio_scheme(ch, 3);
    for (auto& v : sol.v) v.setZero();
    const auto rep = verify_solution(ch, sol);
    CHECK_FALSE(rep.pass);
    for (const auto& r : rep.per_rx) CHECK(r.desired_dim == 0);
}

TEST_CASE("random beamformers without alignment fail")
{
    const auto ch = generate(3, 5, Flavor::Constant, 3);
    BeamformingSolution sol;
    for (int k = 0; k < 3; ++k) sol.v[k] = complex_gaussian(3, 2, 100 + k);
    CHECK_FALSE(verify_solution(ch, sol).pass);
}

TEST_CASE("shape mismatch throws")
{
    const auto ch = generate(3, 5, Flavor::Constant, 3);
    BeamformingSolution sol;
    for (int k = 0; k < 3; ++k) sol.v[k] = complex_gaussian(4, 1, k);
    CHECK_THROWS_AS(verify_solution(ch, sol), ShapeMismatch);
}

TEST_CASE("small grid is deterministic and jobs invariant")
{
    GridOptions opt;
    opt.max_m = 4;
    opt.max_n = 4;
    opt.master_seed = 11;
    const auto g1 = feasibility_grid(opt);
    const auto g2 = feasibility_grid(opt);
    opt.jobs = 4;
    const auto g4 = feasibility_grid(opt);
    CHECK(g1.cells.size() == 16);
    CHECK(g1.agrees());
    CHECK(g1.all_pass());
    CHECK(to_csv(g1) == to_csv(g2));
    CHECK(to_csv(g1) == to_csv(g4));
    CHECK(g1.at(1, 1).d == 0);
    CHECK(g1.at(1, 1).pass);
    CHECK(g1.at(2, 3).d == 1);
}

TEST_CASE("forced demand above the bound fails")
{
    const auto c = evaluate_cell(AntennaConfig(4, 8), 3, 3, 5);
    CHECK_FALSE(c.pass);
    CHECK_FALSE(c.expected);
    CHECK(c.failure.has_value());
    const auto ok = evaluate_cell(AntennaConfig(4, 8), 2, 3, 5);
    CHECK(ok.pass);
    CHECK(ok.expected);
    const auto zero = evaluate_cell(AntennaConfig(1, 1), 0, 3, 5);
    CHECK(zero.pass);
}

TEST_CASE("grid with demand override")
{
    GridOptions opt;
    opt.max_m = 4;
    opt.max_n = 8;
    opt.demand[{4, 8}] = 3;
    const auto g = feasibility_grid(opt);
    CHECK_FALSE(g.at(4, 8).pass);
    CHECK(g.agrees());
    CHECK_FALSE(g.all_pass());
}

TEST_CASE("csv and json round trips")
{
    GridOptions opt;
    opt.max_m = 5;
    opt.max_n = 5;
    const auto g = feasibility_grid(opt);
    const std::string csv = to_csv(g);
    CHECK(csv.rfind("m_t,m_r,dof_star_num,dof_star_den,d,scheme,verdict,seeds\n", 0) == 0);
    const auto back = grid_from_csv(csv);
    CHECK(to_csv(back) == csv);
    const auto jb = grid_from_json(nlohmann::json::parse(to_json(g).dump()));
    CHECK(to_csv(jb) == csv);
    CHECK_THROWS(grid_from_csv("bogus\n1,2"));
}

TEST_CASE("rank verdicts stable across tolerances")
{
    GridOptions opt;
    opt.max_m = 8;
    opt.max_n = 8;
    opt.master_seed = 3;
    opt.tol.rel_tol = 1e-7;
    const auto lo = feasibility_grid(opt);
    opt.tol.rel_tol = 1e-6;
    const auto hi = feasibility_grid(opt);
    for (std::size_t i = 0; i < lo.cells.size(); ++i) CHECK(lo.cells[i].pass == hi.cells[i].pass);
}

TEST_CASE("reciprocal grid symmetry")
{
    GridOptions opt;
    opt.max_m = 8;
    opt.max_n = 8;
    const auto g = feasibility_grid(opt);
    for (int a = 1; a <= 8; ++a)
        for (int b = 1; b <= 8; ++b) {
            CHECK(g.at(a, b).pass == g.at(b, a).pass);
            CHECK(g.at(a, b).d == g.at(b, a).d);
        }
}

TEST_CASE("failure is monotone in demand")
{
    for (auto [m, n] : {std::pair{4, 8}, {3, 5}, {4, 5}, {5, 8}}) {
        bool failed = false;
        for (int d = 0; d <= m; ++d) {
            const auto c = evaluate_cell(AntennaConfig(m, n), d, 2, 9);
            if (failed) CHECK_FALSE(c.pass);
            failed = failed || !c.pass;
        }
        CHECK(failed);
    }
}

TEST_CASE("dof slope")
{
    const std::vector<double> snr{30, 40, 50, 60};
    const auto ch = generate(1, 3, Flavor::Constant, 2);
    const auto zf = construct_zero_forcing(ch, 2);
    CHECK(estimate_dof_slope(ch, zf, snr) == doctest::Approx(3.0).epsilon(0.05));

    const auto c = construct_time_extension(AntennaConfig(2, 3), Flavor::Constant, 3);
    CHECK_THROWS_AS(estimate_dof_slope(c.channel, c.solution, snr), VerificationFailed);
    CHECK(estimate_dof_slope(c.channel, c.solution, snr, false) < 3 * 6.0 / 5.0 - 0.5);

    CHECK_THROWS_AS(estimate_dof_slope(ch, zf, {30}), std::invalid_argument);
}

TEST_CASE("time variation cells")
{
    const auto cells = time_variation_cells(3, 1);
    bool saw23 = false;
    for (const auto& c : cells) {
        CHECK(c.extension > 1);
        if (c.m_t == 2 && c.m_r == 3) {
            saw23 = true;
            CHECK_FALSE(c.constant_pass);
            CHECK(c.varying_pass);
        }
    }
    CHECK(saw23);
}

}  // TEST_SUITE
