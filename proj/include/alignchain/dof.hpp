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

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace alignchain {

// Exact DoF values. boost::rational keeps num/den reduced with den >= 1.
using Rational = boost::rational<std::int64_t>;

std::int64_t floor_of(const Rational& r);
std::string to_string(const Rational& r);

// Antennas per transmitter (m_t) and per receiver (m_r), identical for all
// three users. m = min(m_t, m_r), n = max(m_t, m_r).
class AntennaConfig {
  public:
    AntennaConfig(int m_t, int m_r);

    int m_t() const { return m_t_; }
    int m_r() const { return m_r_; }
    int m() const { return m_t_ < m_r_ ? m_t_ : m_r_; }
    int n() const { return m_t_ < m_r_ ? m_r_ : m_t_; }
    Rational gamma() const { return Rational(m(), n()); }
    bool square() const { return m_t_ == m_r_; }

    AntennaConfig swapped() const { return {m_r_, m_t_}; }
    AntennaConfig scaled(int q) const;

    friend bool operator==(const AntennaConfig&, const AntennaConfig&) = default;

  private:
    int m_t_;
    int m_r_;
};

// Length of the longest subspace alignment chain; unbounded when m == n.
class ChainLength {
  public:
    static ChainLength finite(int value);
    static ChainLength infinite() { return ChainLength(0); }

    bool is_finite() const { return value_ > 0; }
    int value() const;  // throws std::logic_error when infinite

    friend bool operator==(const ChainLength&, const ChainLength&) = default;

  private:
    explicit ChainLength(int v) : value_(v) {}
    int value_;
};

enum class Redundancy { SetA, SetB, MBottleneck, NBottleneck, Square };

std::string to_string(Redundancy r);

// Which side limits the DoF on the piecewise segment containing m/n.
enum class Branch { M, N };

struct DofCharacterization {
    AntennaConfig config;
    ChainLength kappa;
    std::optional<Rational> n_bound;  // absent when m == n
    std::optional<Rational> m_bound;  // absent when m == n
    Rational dof_star;
    int scale_factor = 1;
    Redundancy redundancy = Redundancy::Square;
    std::optional<int> segment_p;     // absent when m == n
    std::optional<Branch> branch;     // absent when m == n
};

struct ProperVerdict {
    bool proper = false;
    bool strictly = false;
};

struct FeasibilityVerdict {
    int demand = 0;
    bool proper = false;
    bool strictly_proper = false;
    Rational info_bound;
    bool linear_feasible = false;
};

ChainLength kappa(const AntennaConfig& cfg);

/// Per-user DoF value min(m / (2 - 1/kappa), n / (2 + 1/kappa)), and m/2 for
/// m == n.
Rational dof_star(const AntennaConfig& cfg);

/// Same quantity evaluated from the piecewise-linear form: the segment p is
/// located by scanning the breakpoints (p-1)/p and p/(p+1), independently of
/// kappa. Boundary ratios go to the lower segment.
Rational piecewise_dof(const AntennaConfig& cfg);

// kappa * n / (2 kappa + 1) and kappa * m / (2 kappa - 1). Throw
// std::invalid_argument for m == n.
Rational n_bound(const AntennaConfig& cfg);
Rational m_bound(const AntennaConfig& cfg);

/// Smallest q >= 1 with q * dof_star integral.
int spatial_scale_factor(const AntennaConfig& cfg);

Redundancy redundancy_class(const AntennaConfig& cfg);

// Segment index p (== kappa) and limiting branch for m < n. The set-B corner
// (2p-1)/(2p+1), where both branches agree, is reported as Branch::M.
int segment_p(const AntennaConfig& cfg);
Branch branch(const AntennaConfig& cfg);

DofCharacterization characterize(const AntennaConfig& cfg);

// Three-user proper test: 4 d <= m_t + m_r. d must be >= 1.
ProperVerdict is_proper(const AntennaConfig& cfg, int d);

FeasibilityVerdict is_linear_feasible(const AntennaConfig& cfg, int d);

/// dof_star - m n / (m + n): the gain of joint antenna processing.
Rational mimo_gain(const AntennaConfig& cfg);

}  // namespace alignchain
