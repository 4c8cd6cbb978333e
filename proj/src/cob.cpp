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

#include "alignchain/cob.hpp"

#include "alignchain/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace alignchain {

namespace {

int nxt(int k) { return (k + 1) % 3; }
int prv(int k) { return (k + 2) % 3; }

std::vector<AntennaLabel> tx_layout(int p)
{
    const int L = p / 2;
    std::vector<AntennaLabel> out;
    for (int l = L; l >= 1; --l) out.push_back({Side::A, l});
    if (p % 2 == 1) out.push_back({Side::B, 0});
    for (int l = 1; l <= L; ++l) out.push_back({Side::C, l});
    return out;
}

std::vector<AntennaLabel> rx_layout(int p)
{
    const int L = p / 2;
    std::vector<AntennaLabel> out;
    for (int l = L; l >= 1; --l) out.push_back({Side::A, l});
    if (p % 2 == 0) {
        out.push_back({Side::B, 0});
    } else {
        out.push_back({Side::A, 0});
        out.push_back({Side::C, 0});
    }
    for (int l = 1; l <= L; ++l) out.push_back({Side::C, l});
    return out;
}

// Must receive antenna `row` of user j be silent for transmit antenna `col`
// of user i?
bool forced_zero(int j, const AntennaLabel& row, int i, const AntennaLabel& col)
{
    if (i == j) return false;
    if (row.layer == 0) {
        if (row.side == Side::A) return i == nxt(j) && col.side == Side::B;
        if (row.side == Side::C) return i == prv(j) && col.side == Side::B;
        return false;
    }
    if (col.layer > row.layer) return false;
    const bool same = col.side == row.side && col.layer == row.layer;
    if (row.side == Side::A) return i == nxt(j) || !same;
    return i == prv(j) || !same;
}

// Exactly one null direction, canonically normalized.
CVector unique_null(const CMatrix& a, double rel_tol, const char* what)
{
    const CMatrix ns = null_space(a, rel_tol);
    if (ns.cols() != 1) throw DegenerateChannel(std::string("change of basis: ") + what + " is not one-dimensional");
    return canonical_direction(ns.col(0));
}

CVector unique_left_null(const CMatrix& a, double rel_tol, const char* what)
{
    return unique_null(a.adjoint(), rel_tol, what).conjugate();
}

BasisChange peel(const LinkArray& h, int p, double rel_tol)
{
    const int m_t = p;
    const int m_r = p + 1;
    const int L = p / 2;
    BasisChange bc;
    bc.p = p;
    std::array<CMatrix, 3> basis;  // current transmit subspace, m_t x s
    for (int k = 0; k < 3; ++k) {
        bc.t_mats[k] = CMatrix::Zero(m_t, m_t);
        bc.r_mats[k] = CMatrix::Zero(m_r, m_r);
        basis[k] = CMatrix::Identity(m_t, m_t);
    }
    int lo = 0;  // receive window [lo, hi]
    int hi = m_r - 1;

    auto eff = [&](int j, int i) {
        return CMatrix(h[j][i].middleRows(lo, hi - lo + 1) * basis[i]);
    };

    for (int l = L; l >= 1; --l) {
        std::array<CVector, 3> ra, rc;  // row vectors over the window, stored as columns
        for (int k = 0; k < 3; ++k) {
            ra[k] = unique_left_null(eff(k, nxt(k)), rel_tol, "receive row a");
            rc[k] = unique_left_null(eff(k, prv(k)), rel_tol, "receive row c");
        }
        std::array<CMatrix, 3> inner;
        for (int k = 0; k < 3; ++k) {
            const CMatrix u = rc[prv(k)].transpose() * eff(prv(k), k);
            const CMatrix w = ra[nxt(k)].transpose() * eff(nxt(k), k);
            CMatrix uw(2, u.cols());
            uw << u, w;
            const CMatrix z = null_space(uw, rel_tol);
            if (z.cols() != u.cols() - 2) throw DegenerateChannel("change of basis: intersection has wrong dimension");
            CMatrix uz(1 + z.cols(), u.cols());
            uz << u, z.adjoint();
            CMatrix wz(1 + z.cols(), u.cols());
            wz << w, z.adjoint();
            const CVector ca = unique_null(uz, rel_tol, "transmit column a");
            const CVector cc = unique_null(wz, rel_tol, "transmit column c");
            bc.t_mats[k].col(L - l) = basis[k] * ca;
            bc.t_mats[k].col(p - L + l - 1) = basis[k] * cc;
            inner[k] = z;
        }
        for (int k = 0; k < 3; ++k) {
            bc.r_mats[k].row(L - l).segment(lo, hi - lo + 1) = ra[k].transpose();
            bc.r_mats[k].row(p - L + l).segment(lo, hi - lo + 1) = rc[k].transpose();
            basis[k] = basis[k] * inner[k];
        }
        ++lo;
        --hi;
    }

    if (p % 2 == 0) {
        // single window row left: the receive antenna b keeps its coordinate
        for (int k = 0; k < 3; ++k) bc.r_mats[k](L, lo) = 1.0;
    } else {
        for (int k = 0; k < 3; ++k) bc.t_mats[k].col(L) = canonical_direction(basis[k].col(0));
        for (int k = 0; k < 3; ++k) {
            const CVector a0 = unique_left_null(h[k][nxt(k)].middleRows(lo, 2) * bc.t_mats[nxt(k)].col(L), rel_tol,
                                                "receive row a0");
            const CVector c0 = unique_left_null(h[k][prv(k)].middleRows(lo, 2) * bc.t_mats[prv(k)].col(L), rel_tol,
                                                "receive row c0");
            bc.r_mats[k].row(L).segment(lo, 2) = a0.transpose();
            bc.r_mats[k].row(L + 1).segment(lo, 2) = c0.transpose();
        }
    }

    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) bc.transformed[j][i] = bc.r_mats[j] * h[j][i] * bc.t_mats[i];
    return bc;
}

}  // namespace

std::string to_string(const AntennaLabel& l)
{
    const char s = l.side == Side::A ? 'a' : l.side == Side::B ? 'b' : 'c';
    if (l.side == Side::B) return "b";
    return std::string(1, s) + std::to_string(l.layer);
}

ConnectivityPattern ConnectivityPattern::transpose() const
{
    ConnectivityPattern out;
    out.p = p;
    out.transposed = !transposed;
    out.tx_labels = rx_labels;
    out.rx_labels = tx_labels;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) out.zero[j][i] = zero[i][j].transpose();
    return out;
}

ConnectivityPattern builtin_pattern(int p)
{
    if (p < 2 || p > 8) throw Unsupported("builtin_pattern: p must lie in 2..8, got " + std::to_string(p));
    ConnectivityPattern pat;
    pat.p = p;
    pat.tx_labels = tx_layout(p);
    pat.rx_labels = rx_layout(p);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            BoolMatrix z(p + 1, p);
            for (int r = 0; r <= p; ++r)
                for (int c = 0; c < p; ++c) z(r, c) = forced_zero(j, pat.rx_labels[r], i, pat.tx_labels[c]);
            pat.zero[j][i] = z;
        }
    return pat;
}

BasisChange cob_2x3(const ChannelSet& ch, double rel_tol)
{
    if (ch.m_t() != 2 || ch.m_r() != 3 || ch.extension() != 1)
        throw ShapeMismatch("cob_2x3: needs a 2x3 channel without extension");
    return peel(ch.links(), 2, rel_tol);
}

BasisChange cob_recursive(const ChannelSet& ch, int p, double rel_tol)
{
    if (p < 2) throw Unsupported("cob_recursive: p must be >= 2");
    if (ch.extension() != 1) throw ShapeMismatch("cob_recursive: extended channels are not supported");
    if (ch.m_t() == p && ch.m_r() == p + 1) return p == 2 ? cob_2x3(ch, rel_tol) : peel(ch.links(), p, rel_tol);
    if (ch.m_t() == p + 1 && ch.m_r() == p) {
        const BasisChange dual = cob_recursive(ch.reciprocal(), p, rel_tol);
        BasisChange bc;
        bc.p = p;
        bc.transposed = true;
        for (int k = 0; k < 3; ++k) {
            bc.t_mats[k] = dual.r_mats[k].transpose();
            bc.r_mats[k] = dual.t_mats[k].transpose();
        }
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) bc.transformed[j][i] = bc.r_mats[j] * ch.h(j, i) * bc.t_mats[i];
        return bc;
    }
    throw ShapeMismatch("cob_recursive: channel shape does not match (p, p+1) or (p+1, p)");
}

ZeroPatternReport verify_connectivity(const BasisChange& bc, const ConnectivityPattern& pattern, double pattern_tol)
{
    double scale = 0.0;
    for (const auto& row : bc.transformed)
        for (const auto& m : row) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    if (scale == 0.0) scale = 1.0;
    ZeroPatternReport rep;
    rep.tol = pattern_tol;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            const CMatrix& m = bc.transformed[j][i];
            const BoolMatrix& z = pattern.zero[j][i];
            if (m.rows() != z.rows() || m.cols() != z.cols())
                throw ShapeMismatch("verify_connectivity: mask shape does not match transformed channel");
            RMatrix res = RMatrix::Zero(m.rows(), m.cols());
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    if (z(r, c)) {
                        res(r, c) = std::abs(m(r, c)) / scale;
                        rep.max_residual = std::max(rep.max_residual, res(r, c));
                    }
            rep.residual[j][i] = std::move(res);
        }
    rep.pass = rep.max_residual <= pattern_tol;
    return rep;
}

double worst_condition(const BasisChange& bc)
{
    double worst = 1.0;
    for (int k = 0; k < 3; ++k)
        worst = std::max({worst, condition_number(bc.t_mats[k]), condition_number(bc.r_mats[k])});
    return worst;
}

std::string connectivity_table(const BasisChange& bc, const ConnectivityPattern& pattern, double pattern_tol)
{
    double scale = 0.0;
    for (const auto& row : bc.transformed)
        for (const auto& m : row) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    if (scale == 0.0) scale = 1.0;

    std::ostringstream os;
    const bool tr = pattern.transposed;
    os << "connectivity after change of basis, " << (tr ? pattern.p + 1 : pattern.p) << "x"
       << (tr ? pattern.p : pattern.p + 1) << " (tx x rx)\n";
    for (int j = 0; j < 3; ++j) {
        for (std::size_t r = 0; r < pattern.rx_labels.size(); ++r) {
            std::ostringstream lhs;
            lhs << "S" << j + 1 << to_string(pattern.rx_labels[r]);
            os << std::left << std::setw(7) << lhs.str() << "<-";
            bool mismatch = false;
            for (int i = 0; i < 3; ++i) {
                os << "  X" << i + 1 << "[";
                bool first = true;
                for (std::size_t c = 0; c < pattern.tx_labels.size(); ++c) {
                    const double v = std::abs(bc.transformed[j][i](r, c)) / scale;
                    const bool heard = v > pattern_tol;
                    if (heard && pattern.zero[j][i](r, c)) mismatch = true;
                    if (heard) {
                        os << (first ? "" : " ") << to_string(pattern.tx_labels[c]);
                        first = false;
                    }
                }
                os << "]";
            }
            if (mismatch) os << "  MISMATCH";
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace alignchain
