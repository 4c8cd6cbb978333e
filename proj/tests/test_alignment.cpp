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

namespace {

AlignmentReport certify(const Construction& c) { return verify_solution(c.channel, c.solution); }

}  // namespace

TEST_SUITE("alignment") {

TEST_CASE("chain index sequences")
{
    auto c = chain_spec(1, 4);
    CHECK(c.tx_seq == std::vector<int>{1, 3, 2, 1});
    CHECK(c.rx_seq == std::vector<int>{2, 1, 3});
    c = chain_spec(2, 2);
    CHECK(c.tx_seq == std::vector<int>{2, 1});
    CHECK(c.rx_seq == std::vector<int>{3});
    c = chain_spec(3, 1);
    CHECK(c.tx_seq == std::vector<int>{3});
    CHECK(c.rx_seq.empty());
    c = chain_spec(3, 6);
    CHECK(c.tx_seq == std::vector<int>{3, 2, 1, 3, 2, 1});
    for (int o = 1; o <= 3; ++o) {
        const auto s = chain_spec(o, 7);
        for (int r = 0; r + 1 < 7; ++r) {
            CHECK(s.tx_seq[r] != s.tx_seq[r + 1]);
            CHECK(s.rx_seq[r] != s.tx_seq[r]);
            CHECK(s.rx_seq[r] != s.tx_seq[r + 1]);
        }
    }
    CHECK_THROWS_AS(chain_spec(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(chain_spec(1, 0), std::invalid_argument);
}

TEST_CASE("stacked staircase shapes and blocks")
{
    const auto ch = generate(3, 5, Flavor::Constant, 1);
    const auto s = build_stacked(ch, chain_spec(1, 2));
    CHECK(s.matrix.rows() == 5);
    CHECK(s.matrix.cols() == 6);
    CHECK(s.matrix.leftCols(3) == ch.h(1, 0));
    CHECK(s.matrix.rightCols(3) == CMatrix(-ch.h(1, 2)));

    const auto s57 = build_stacked(generate(5, 7, Flavor::Constant, 2), chain_spec(1, 3));
    CHECK(s57.matrix.rows() == 14);
    CHECK(s57.matrix.cols() == 15);
    CHECK(s57.matrix.block(0, 10, 7, 5).isZero(0.0));
    CHECK(s57.matrix.block(7, 0, 7, 5).isZero(0.0));

    for (int p = 2; p <= 4; ++p)
        for (int q = 1; q <= 2; ++q) {
            const auto sp = build_stacked(generate((2 * p - 1) * q, (2 * p + 1) * q, Flavor::Constant, 3),
                                          chain_spec(2, p));
            CHECK(sp.matrix.rows() == (p - 1) * (2 * p + 1) * q);
            CHECK(sp.matrix.cols() == p * (2 * p - 1) * q);
        }
    CHECK_THROWS_AS(build_stacked(ch, chain_spec(1, 1)), std::invalid_argument);
}

TEST_CASE("solve_chain null dimensions")
{
    const auto s35 = build_stacked(generate(3, 5, Flavor::Constant, 4), chain_spec(1, 2));
    CHECK(null_space(s35.matrix).cols() == 1);
    const auto s57 = build_stacked(generate(5, 7, Flavor::Constant, 4), chain_spec(1, 3));
    CHECK(null_space(s57.matrix).cols() == 1);
    const auto ch711 = generate(7, 11, Flavor::Constant, 4);
    const auto s711 = build_stacked(ch711, chain_spec(1, 2));
    CHECK(null_space(s711.matrix).cols() == 3);
    const auto blocks = solve_chain(s711, 2, 99);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].cols() == 2);
    CHECK(chain_alignment_residual(ch711.links(), s711.spec, blocks) < 1e-8);
    CHECK_THROWS_AS(solve_chain(s711, 4, 99), InsufficientNullSpace);
}

TEST_CASE("null dimension law")
{
    for (int p = 2; p <= 5; ++p)
        for (int t = 1; t <= 12; ++t)
            for (int r = t + 1; r <= 12; ++r)
                for (std::uint64_t seed = 0; seed < 20; seed += 7) {
                    const auto sys = build_stacked(generate(t, r, Flavor::Constant, seed), chain_spec(1, p));
                    REQUIRE(null_space(sys.matrix).cols() == std::max(0, p * t - (p - 1) * r));
                }
}

TEST_CASE("ratio schemes")
{
    for (auto [m, n, per_user, p] : {std::tuple{3, 5, 2, 2}, {5, 7, 3, 3}, {6, 10, 4, 2}, {7, 9, 4, 4}}) {
        const auto ch = generate(m, n, Flavor::Constant, 7);
        const auto sol = construct_ratio_scheme(ch, 7);
        const auto rep = verify_solution(ch, sol);
        CHECK(rep.pass);
        const int q = (n - m) / 2;
        for (const auto& r : rep.per_rx) {
            CHECK(r.interference_dim == (p + 1) * q);
            CHECK(r.desired_dim == per_user);
            CHECK(r.joint_rank == n);
        }
        for (const auto& v : sol.v) {
            CHECK(v.cols() == per_user);
            CHECK(numeric_rank(v).rank == per_user);
        }
        CHECK(sol.scheme.alignment_residual < 1e-8);
    }
    CHECK_THROWS_AS(construct_ratio_scheme(generate(2, 3, Flavor::Constant, 1), 1), std::invalid_argument);
}

TEST_CASE("spatial scheme")
{
    auto c = construct_spatial(AntennaConfig(7, 10), 5);
    CHECK(c.channel.m_t() == 35);
    CHECK(c.channel.m_r() == 50);
    CHECK(c.solution.scheme.streams == std::array<int, 3>{21, 21, 21});
    REQUIRE(c.solution.rx_filter[0]);
    CHECK(c.solution.rx_filter[0]->rows() == 49);
    CHECK(certify(c).pass);

    c = construct_spatial(AntennaConfig(2, 3), 5);
    CHECK(c.channel.m_t() == 10);
    CHECK(c.solution.scheme.streams == std::array<int, 3>{6, 6, 6});
    REQUIRE(c.solution.tx_projection[0]);
    CHECK(c.solution.tx_projection[0]->cols() == 9);
    CHECK(certify(c).pass);

    c = construct_spatial(AntennaConfig(3, 5), 5);
    CHECK(c.channel.m_t() == 3);
    CHECK_FALSE(c.solution.rx_filter[0]);
    CHECK_FALSE(c.solution.tx_projection[0]);
    CHECK(certify(c).pass);

    CHECK_THROWS_AS(construct_spatial(AntennaConfig(4, 4), 1), std::invalid_argument);
    CHECK_THROWS_AS(construct_spatial(AntennaConfig(1, 2), 1), std::invalid_argument);
}

TEST_CASE("zero forcing streams")
{
    auto c = construct_zero_forcing(AntennaConfig(1, 3), 1);
    CHECK(c.solution.scheme.streams == std::array<int, 3>{1, 1, 1});
    CHECK(certify(c).pass);
    c = construct_zero_forcing(AntennaConfig(2, 5), 1);
    CHECK(c.solution.scheme.streams == std::array<int, 3>{2, 2, 1});
    CHECK(certify(c).pass);
    c = construct_zero_forcing(AntennaConfig(1, 2), 1);
    CHECK(c.solution.scheme.streams == std::array<int, 3>{1, 1, 0});
    CHECK(certify(c).pass);
    c = construct_zero_forcing(AntennaConfig(5, 2), 1);
    CHECK(c.solution.scheme.dual);
    CHECK(certify(c).pass);
    CHECK_THROWS_AS(construct_zero_forcing(AntennaConfig(3, 5), 1), std::invalid_argument);
}

TEST_CASE("time extension")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto c = construct_time_extension(AntennaConfig(7, 10), Flavor::Constant, seed);
        CHECK(c.channel.extension() == 5);
        CHECK(c.solution.scheme.streams[0] == 21);
        CHECK(certify(c).pass);
    }

    const auto constant = construct_time_extension(AntennaConfig(2, 3), Flavor::Constant, 3);
    CHECK(constant.channel.extension() == 5);
    CHECK(constant.solution.scheme.streams[0] == 6);
    const auto rep = certify(constant);
    CHECK_FALSE(rep.pass);
    for (const auto& r : rep.per_rx) CHECK(r.joint_rank <= 14);

    const auto varying = construct_time_extension(AntennaConfig(2, 3), Flavor::TimeVarying, 3);
    CHECK(certify(varying).pass);

    CHECK_THROWS_AS(construct_time_extension(AntennaConfig(3, 5), Flavor::Constant, 1), Unsupported);
}

TEST_CASE("feasibility plans")
{
    auto plan = feasibility_plan(AntennaConfig(5, 8), 3);
    CHECK(plan.delta[2] == 1);
    CHECK(plan.delta[1] == 1);
    CHECK(plan.fits);
    plan = feasibility_plan(AntennaConfig(4, 5), 2);
    CHECK(plan.delta[2] == 1);
    CHECK(plan.receive_dims == 5);
    plan = feasibility_plan(AntennaConfig(7, 9), 4);
    CHECK(plan.delta[4] == 1);
    CHECK(plan.fits);
    plan = feasibility_plan(AntennaConfig(4, 8), 3);
    CHECK_FALSE(plan.fits);
    // N-limited segment: p chains of dimension floor(N/(2p+1)) plus p' unit chains
    plan = feasibility_plan(AntennaConfig(7, 11), 4);
    CHECK(plan.delta[2] == 2);
    CHECK(plan.fits);
}

TEST_CASE("feasibility constructions")
{
    for (auto [m, n, d] : {std::tuple{4, 5, 2}, {7, 9, 4}, {5, 8, 3}, {4, 4, 2}, {5, 5, 2}, {8, 5, 3}, {4, 8, 2}}) {
        const auto c = construct_feasibility(AntennaConfig(m, n), 13);
        CHECK(c.solution.scheme.streams == std::array<int, 3>{d, d, d});
        CHECK(certify(c).pass);
    }
    const auto forced = construct_feasibility(AntennaConfig(4, 8), 13, 3);
    CHECK_FALSE(certify(forced).pass);
    const auto none = construct_feasibility(AntennaConfig(1, 1), 13);
    CHECK(none.solution.scheme.streams == std::array<int, 3>{0, 0, 0});
    CHECK(certify(none).pass);
}

TEST_CASE("G matrix at receiver 1")
{
    int full = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = g_matrix_demo(seed, Flavor::Constant);
        CHECK(c.g.rows() == 15);
        CHECK(c.g.cols() == 15);
        CHECK(c.rank.rank <= 14);
        full += g_matrix_demo(seed, Flavor::TimeVarying).rank.rank == 15;
    }
    CHECK(full >= 19);
}

TEST_CASE("reciprocity of verdicts")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (auto [m, n] : {std::pair{3, 5}, {5, 7}, {6, 10}}) {
            const auto ch = generate(m, n, Flavor::Constant, seed);
            const auto rc = ch.reciprocal();
            CHECK(verify_solution(ch, construct_ratio_scheme(ch, seed)).pass ==
                  verify_solution(rc, construct_ratio_scheme(rc, seed)).pass);
        }
        for (auto [m, n] : {std::pair{1, 3}, {2, 5}}) {
            const auto ch = generate(m, n, Flavor::Constant, seed);
            const auto rc = ch.reciprocal();
            CHECK(verify_solution(ch, construct_zero_forcing(ch, seed)).pass ==
                  verify_solution(rc, construct_zero_forcing(rc, seed)).pass);
        }
        for (auto [m, n] : {std::pair{4, 5}, {5, 8}, {4, 8}}) {
            const auto ch = generate(m, n, Flavor::Constant, seed);
            const auto rc = ch.reciprocal();
            CHECK(verify_solution(ch, construct_feasibility(ch, seed)).pass ==
                  verify_solution(rc, construct_feasibility(rc, seed)).pass);
        }
    }
}

TEST_CASE("decodability over seeds")
{
    for (auto [m, n] : {std::pair{3, 5}, {5, 7}, {6, 10}, {7, 9}, {5, 3}, {9, 7}})
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto ch = generate(m, n, Flavor::Constant, seed);
            REQUIRE(verify_solution(ch, construct_ratio_scheme(ch, seed)).pass);
        }
}

TEST_CASE("solution json round trip")
{
    const auto c = construct_time_extension(AntennaConfig(3, 2), Flavor::TimeVarying, 2);
    const auto back = solution_from_json(nlohmann::json::parse(to_json(c.solution).dump()));
    for (int k = 0; k < 3; ++k) {
        CHECK(back.v[k] == c.solution.v[k]);
        CHECK(back.rx_filter[k].has_value() == c.solution.rx_filter[k].has_value());
    }
    CHECK(back.scheme.kind == SchemeKind::TimeExtension);
    CHECK(back.scheme.dual);
    CHECK(verify_solution(c.channel, back).pass == verify_solution(c.channel, c.solution).pass);

    const auto z = construct_zero_forcing(AntennaConfig(1, 2), 1);
    const auto zb = solution_from_json(to_json(z.solution));
    CHECK(zb.v[2].rows() == 1);
    CHECK(zb.v[2].cols() == 0);
}

}  // TEST_SUITE
