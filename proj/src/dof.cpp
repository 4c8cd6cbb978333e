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

#include <stdexcept>

namespace alignchain {

std::int64_t floor_of(const Rational& r)
{
    std::int64_t q = r.numerator() / r.denominator();
    if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
    return q;
}

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

AntennaConfig::AntennaConfig(int m_t, int m_r) : m_t_(m_t), m_r_(m_r)
{
    if (m_t < 1 || m_r < 1)
        throw std::invalid_argument("antenna counts must be positive, got (" + std::to_string(m_t) + ", " +
                                    std::to_string(m_r) + ")");
}

AntennaConfig AntennaConfig::scaled(int q) const
{
    if (q < 1) throw std::invalid_argument("scale factor must be positive");
    return {q * m_t_, q * m_r_};
}

ChainLength ChainLength::finite(int value)
{
    if (value < 1) throw std::invalid_argument("finite chain length must be positive");
    return ChainLength(value);
}

int ChainLength::value() const
{
    if (!is_finite()) throw std::logic_error("chain length is infinite (m == n)");
    return value_;
}

std::string to_string(Redundancy r)
{
    switch (r) {
    case Redundancy::SetA: return "SetA";
    case Redundancy::SetB: return "SetB";
    case Redundancy::MBottleneck: return "MBottleneck";
    case Redundancy::NBottleneck: return "NBottleneck";
    case Redundancy::Square: return "Square";
    }
    return "?";
}

ChainLength kappa(const AntennaConfig& cfg)
{
    const int m = cfg.m(), n = cfg.n();
    if (m == n) return ChainLength::infinite();
    const int gap = n - m;
    return ChainLength::finite((m + gap - 1) / gap);
}

Rational n_bound(const AntennaConfig& cfg)
{
    if (cfg.square()) throw std::invalid_argument("N-bound is defined only for m < n");
    const std::int64_t k = kappa(cfg).value();
    return Rational(k * cfg.n(), 2 * k + 1);
}

Rational m_bound(const AntennaConfig& cfg)
{
    if (cfg.square()) throw std::invalid_argument("M-bound is defined only for m < n");
    const std::int64_t k = kappa(cfg).value();
    return Rational(k * cfg.m(), 2 * k - 1);
}

Rational dof_star(const AntennaConfig& cfg)
{
    if (cfg.square()) return Rational(cfg.m(), 2);
    return std::min(n_bound(cfg), m_bound(cfg));
}

Rational piecewise_dof(const AntennaConfig& cfg)
{
    const std::int64_t m = cfg.m(), n = cfg.n();
    if (m == n) return Rational(m, 2);
    // smallest p with m/n <= p/(p+1)
    std::int64_t p = 1;
    while (m * (p + 1) > p * n) ++p;
    if (m * (2 * p + 1) <= n * (2 * p - 1)) return Rational(p * m, 2 * p - 1);
    return Rational(p * n, 2 * p + 1);
}

int spatial_scale_factor(const AntennaConfig& cfg)
{
    return static_cast<int>(dof_star(cfg).denominator());
}

int segment_p(const AntennaConfig& cfg)
{
    if (cfg.square()) throw std::invalid_argument("no piecewise segment for m == n");
    return kappa(cfg).value();
}

Branch branch(const AntennaConfig& cfg)
{
    const std::int64_t p = segment_p(cfg);
    const std::int64_t m = cfg.m(), n = cfg.n();
    return m * (2 * p + 1) <= n * (2 * p - 1) ? Branch::M : Branch::N;
}

Redundancy redundancy_class(const AntennaConfig& cfg)
{
    const int m = cfg.m(), n = cfg.n();
    if (m == n) return Redundancy::Square;
    const int gap = n - m;
    // m/n = p/(p+1)  <=>  m/(n-m) = p
    if (m % gap == 0) return Redundancy::SetA;
    // m/n = (2p-1)/(2p+1)  <=>  2m/(n-m) = 2p-1
    if ((2 * m) % gap == 0 && ((2 * m) / gap) % 2 == 1) return Redundancy::SetB;
    return branch(cfg) == Branch::M ? Redundancy::MBottleneck : Redundancy::NBottleneck;
}

DofCharacterization characterize(const AntennaConfig& cfg)
{
    DofCharacterization c{cfg,         kappa(cfg), std::nullopt, std::nullopt, dof_star(cfg), 1, Redundancy::Square,
                          std::nullopt, std::nullopt};
    c.scale_factor = static_cast<int>(c.dof_star.denominator());
    c.redundancy = redundancy_class(cfg);
    if (!cfg.square()) {
        c.n_bound = n_bound(cfg);
        c.m_bound = m_bound(cfg);
        c.segment_p = segment_p(cfg);
        c.branch = branch(cfg);
    }
    return c;
}

ProperVerdict is_proper(const AntennaConfig& cfg, int d)
{
    if (d < 1) throw std::invalid_argument("DoF demand must be >= 1");
    const int sum = cfg.m_t() + cfg.m_r();
    return {4 * d <= sum, 4 * d == sum};
}

FeasibilityVerdict is_linear_feasible(const AntennaConfig& cfg, int d)
{
    const auto pv = is_proper(cfg, d);
    FeasibilityVerdict v;
    v.demand = d;
    v.proper = pv.proper;
    v.strictly_proper = pv.strictly;
    v.info_bound = dof_star(cfg);
    v.linear_feasible = d <= floor_of(v.info_bound);
    return v;
}

Rational mimo_gain(const AntennaConfig& cfg)
{
    const std::int64_t m = cfg.m(), n = cfg.n();
    return dof_star(cfg) - Rational(m * n, m + n);
}

}  // namespace alignchain
