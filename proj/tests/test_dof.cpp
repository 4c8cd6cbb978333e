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

#include "alignchain/dof.hpp"

#include <doctest.h>

#include <vector>

using namespace alignchain;

namespace {

Rational dof(int a, int b) { return dof_star(AntennaConfig(a, b)); }

}  // namespace

TEST_SUITE("dof_core") {

TEST_CASE("antenna config validation")
{
    CHECK_THROWS_AS(AntennaConfig(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(AntennaConfig(2, -1), std::invalid_argument);
    const AntennaConfig c(5, 3);
    CHECK(c.m() == 3);
    CHECK(c.n() == 5);
    CHECK(c.gamma() == Rational(3, 5));
    CHECK(c.swapped() == AntennaConfig(3, 5));
}

TEST_CASE("kappa")
{
    CHECK(kappa(AntennaConfig(2, 3)) == ChainLength::finite(2));
    CHECK(kappa(AntennaConfig(5, 7)) == ChainLength::finite(3));
    CHECK(kappa(AntennaConfig(4, 5)) == ChainLength::finite(4));
    CHECK_FALSE(kappa(AntennaConfig(4, 4)).is_finite());
    CHECK_THROWS_AS(kappa(AntennaConfig(4, 4)).value(), std::logic_error);
}

TEST_CASE("dof_star reference values")
{
    CHECK(dof(2, 3) == Rational(6, 5));
    CHECK(dof(4, 8) == Rational(8, 3));
    CHECK(dof(4, 5) == Rational(20, 9));
    CHECK(dof(9, 10) == Rational(90, 19));
    CHECK(dof(1, 3) == Rational(1));
    CHECK(dof(3, 4) == Rational(12, 7));
    CHECK(dof(5, 6) == Rational(30, 11));
    CHECK(dof(7, 10) == Rational(21, 5));
    CHECK(dof(10, 15) == Rational(6));
    CHECK(dof(1, 2) == Rational(2, 3));
    CHECK(dof(4, 4) == Rational(2));
    CHECK(dof(1, 1) == Rational(1, 2));
}

TEST_CASE("piecewise form")
{
    CHECK(piecewise_dof(AntennaConfig(7, 10)) == Rational(21, 5));
    CHECK(piecewise_dof(AntennaConfig(3, 4)) == Rational(12, 7));
    CHECK(piecewise_dof(AntennaConfig(1, 2)) == Rational(2, 3));
    CHECK(segment_p(AntennaConfig(7, 10)) == 3);
    CHECK(branch(AntennaConfig(7, 10)) == Branch::M);
    CHECK(branch(AntennaConfig(2, 3)) == Branch::N);
}

TEST_CASE("piecewise equals min form for m < n <= 256")
{
    for (int n = 2; n <= 256; ++n)
        for (int m = 1; m < n; ++m) REQUIRE(piecewise_dof(AntennaConfig(m, n)) == dof(m, n));
}

TEST_CASE("branch formulas agree at breakpoints")
{
    for (std::int64_t p = 1; p <= 40; ++p) {
        // set B corner (2p-1)/(2p+1): both branches of segment p
        const AntennaConfig b(2 * p - 1, 2 * p + 1);
        CHECK(Rational(p * b.m(), 2 * p - 1) == Rational(p * b.n(), 2 * p + 1));
        CHECK(dof(b.m(), b.n()) == Rational(p));
        // set A corner p/(p+1): N-branch of segment p, M-branch of segment p+1
        const AntennaConfig a(p, p + 1);
        CHECK(Rational(p * a.n(), 2 * p + 1) == Rational((p + 1) * a.m(), 2 * p + 1));
        CHECK(dof(a.m(), a.n()) == Rational(p * a.n(), 2 * p + 1));
    }
}

TEST_CASE("bounds")
{
    const AntennaConfig c35(3, 5);
    CHECK(n_bound(c35) == Rational(2));
    CHECK(m_bound(c35) == Rational(2));
    const AntennaConfig c45(4, 5);
    CHECK(n_bound(c45) == Rational(20, 9));
    CHECK(m_bound(c45) == Rational(16, 7));
    const AntennaConfig c56(5, 6);
    CHECK(m_bound(c56) == Rational(25, 9));
    CHECK(n_bound(c56) == Rational(30, 11));
    CHECK_THROWS_AS(n_bound(AntennaConfig(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(m_bound(AntennaConfig(3, 3)), std::invalid_argument);
}

TEST_CASE("spatial scale factor")
{
    CHECK(spatial_scale_factor(AntennaConfig(2, 3)) == 5);
    CHECK(spatial_scale_factor(AntennaConfig(7, 10)) == 5);
    CHECK(spatial_scale_factor(AntennaConfig(3, 5)) == 1);
    for (int a = 1; a <= 20; ++a)
        for (int b = 1; b <= 20; ++b) {
            const Rational d = dof(a, b);
            const int q = spatial_scale_factor(AntennaConfig(a, b));
            CHECK((d * q).denominator() == 1);
            for (int r = 1; r < q; ++r) CHECK((d * r).denominator() != 1);
        }
}

TEST_CASE("redundancy classes")
{
    CHECK(redundancy_class(AntennaConfig(1, 2)) == Redundancy::SetA);
    CHECK(redundancy_class(AntennaConfig(2, 3)) == Redundancy::SetA);
    CHECK(redundancy_class(AntennaConfig(3, 5)) == Redundancy::SetB);
    CHECK(redundancy_class(AntennaConfig(1, 3)) == Redundancy::SetB);
    CHECK(redundancy_class(AntennaConfig(7, 10)) == Redundancy::MBottleneck);
    CHECK(redundancy_class(AntennaConfig(1, 4)) == Redundancy::MBottleneck);
    CHECK(redundancy_class(AntennaConfig(2, 5)) == Redundancy::NBottleneck);
    CHECK(redundancy_class(AntennaConfig(6, 6)) == Redundancy::Square);
    CHECK(redundancy_class(AntennaConfig(10, 7)) == Redundancy::MBottleneck);
}

TEST_CASE("proper test")
{
    auto pv = is_proper(AntennaConfig(8, 12), 5);
    CHECK(pv.proper);
    CHECK(pv.strictly);
    pv = is_proper(AntennaConfig(4, 8), 3);
    CHECK(pv.proper);
    CHECK(pv.strictly);
    pv = is_proper(AntennaConfig(2, 3), 2);
    CHECK_FALSE(pv.proper);
    CHECK_FALSE(pv.strictly);
    CHECK_THROWS_AS(is_proper(AntennaConfig(2, 3), 0), std::invalid_argument);
}

TEST_CASE("linear feasibility")
{
    auto v = is_linear_feasible(AntennaConfig(8, 12), 5);
    CHECK_FALSE(v.linear_feasible);
    CHECK(v.info_bound == Rational(24, 5));
    v = is_linear_feasible(AntennaConfig(244, 400), 161);
    CHECK_FALSE(v.linear_feasible);
    CHECK(v.info_bound == Rational(160));
    v = is_linear_feasible(AntennaConfig(3, 5), 2);
    CHECK(v.linear_feasible);
    CHECK(v.proper);
    v = is_linear_feasible(AntennaConfig(148, 200), 86);
    CHECK(v.info_bound == Rational(600, 7));
    CHECK_FALSE(v.linear_feasible);
    CHECK(v.proper);
}

TEST_CASE("mimo gain")
{
    CHECK(mimo_gain(AntennaConfig(2, 3)) == Rational(0));
    CHECK(mimo_gain(AntennaConfig(3, 5)) == Rational(1, 8));
    CHECK(mimo_gain(AntennaConfig(4, 4)) == Rational(0));
    for (int n = 2; n <= 40; ++n)
        for (int m = 1; m < n; ++m) {
            const bool set_a = m % (n - m) == 0;
            const Rational g = mimo_gain(AntennaConfig(m, n));
            CHECK(g >= Rational(0));
            CHECK((g == Rational(0)) == set_a);
        }
}

TEST_CASE("symmetry, scale covariance, monotonicity, ceiling")
{
    for (int a = 1; a <= 30; ++a)
        for (int b = 1; b <= 30; ++b) {
            const Rational d = dof(a, b);
            CHECK(d == dof(b, a));
            CHECK(d <= Rational(std::min(a, b)));
            CHECK(dof(a + 1, b) >= d);
            CHECK(dof(a, b + 1) >= d);
            for (int q = 1; q <= 8; ++q) CHECK(dof(q * a, q * b) == d * q);
        }
}

// Antenna removal at the spatially scaled configuration (s m, s n), s = 4n:
// one antenna out of s m or s n either costs DoF or is redundant.
TEST_CASE("redundancy semantics")
{
    for (int n = 2; n <= 64; ++n)
        for (int m = 1; m < n; ++m) {
            const AntennaConfig c(m, n);
            const int s = 4 * n;
            const Rational full = dof(m, n) * s;
            const Rational less_m = dof(s * m - 1, s * n);
            const Rational less_n = dof(s * m, s * n - 1);
            switch (redundancy_class(c)) {
            case Redundancy::SetA:
                CHECK(less_m == full);
                CHECK(less_n == full);
                break;
            case Redundancy::SetB:
                CHECK(less_m < full);
                CHECK(less_n < full);
                break;
            case Redundancy::MBottleneck:
                CHECK(less_n == full);
                CHECK(less_m < full);
                break;
            case Redundancy::NBottleneck:
                CHECK(less_m == full);
                CHECK(less_n < full);
                break;
            case Redundancy::Square: FAIL("unexpected class"); break;
            }
        }
}

TEST_CASE("characterize")
{
    const auto c = characterize(AntennaConfig(7, 10));
    CHECK(c.dof_star == Rational(21, 5));
    CHECK(c.scale_factor == 5);
    CHECK(c.redundancy == Redundancy::MBottleneck);
    REQUIRE(c.segment_p);
    CHECK(*c.segment_p == 3);
    CHECK(*c.n_bound >= c.dof_star);
    const auto sq = characterize(AntennaConfig(4, 4));
    CHECK_FALSE(sq.n_bound);
    CHECK_FALSE(sq.segment_p);
    CHECK(sq.dof_star == Rational(2));
}

TEST_CASE("proper but infeasible exists on every segment away from set B")
{
    // every ratio m/n (n <= 100) outside B has a scale s with a proper demand
    // above floor(DoF*)
    int segments_hit = 0;
    for (int n = 2; n <= 100; ++n)
        for (int m = 1; m < n; ++m) {
            const AntennaConfig c(m, n);
            if (redundancy_class(c) == Redundancy::SetB) continue;
            bool found = false;
            for (int s = 1; s <= 64 && !found; ++s) {
                const AntennaConfig sc = c.scaled(s);
                const int d = (sc.m_t() + sc.m_r()) / 4;
                if (d >= 1 && is_proper(sc, d).proper && !is_linear_feasible(sc, d).linear_feasible) found = true;
            }
            CHECK_MESSAGE(found, "no proper-infeasible demand for ", m, "/", n);
            ++segments_hit;
        }
    CHECK(segments_hit > 0);
}

}  // TEST_SUITE
