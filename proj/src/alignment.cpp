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

#include "alignchain/alignment.hpp"

#include "alignchain/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace alignchain {

namespace {

// seed tags
constexpr std::uint64_t kChainTag = 0xc4a1;
constexpr std::uint64_t kBeamTag = 0xbea3;
constexpr std::uint64_t kProjTag = 0x9803;
constexpr std::uint64_t kGTag = 0x6a7e;

int nxt(int k) { return (k + 1) % 3; }
int prv(int k) { return (k + 2) % 3; }

Eigen::Index tx_dim(const LinkArray& h) { return h[0][0].cols(); }
Eigen::Index rx_dim(const LinkArray& h) { return h[0][0].rows(); }

CMatrix hcat(const std::vector<CMatrix>& blocks, Eigen::Index rows)
{
    Eigen::Index cols = 0;
    for (const auto& b : blocks) cols += b.cols();
    CMatrix out(rows, cols);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    return out;
}

struct Packed {
    std::array<CMatrix, 3> v;
    double residual = 0.0;
};

Packed pack_chains(const LinkArray& h, const std::vector<ChainSpec>& chains, std::uint64_t seed, double rel_tol)
{
    const auto t = tx_dim(h);
    std::array<std::vector<CMatrix>, 3> parts;
    Packed out;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const ChainSpec& spec = chains[c];
        const std::uint64_t s = derive_seed(seed, {kChainTag, c});
        if (spec.length == 1) {
            parts[spec.origin - 1].push_back(complex_gaussian(t, spec.sub_dim, s));
            continue;
        }
        const auto blocks = solve_chain(build_stacked(h, spec), spec.sub_dim, s, rel_tol);
        out.residual = std::max(out.residual, chain_alignment_residual(h, spec, blocks));
        for (int r = 0; r < spec.length; ++r) parts[spec.tx_seq[r] - 1].push_back(blocks[r]);
    }
    for (int k = 0; k < 3; ++k) out.v[k] = hcat(parts[k], t);
    return out;
}

std::array<int, 3> stream_counts(const std::array<CMatrix, 3>& v)
{
    return {static_cast<int>(v[0].cols()), static_cast<int>(v[1].cols()), static_cast<int>(v[2].cols())};
}

CMatrix apply_filter(const std::optional<CMatrix>& f, const CMatrix& m)
{
    return f ? CMatrix(*f * m) : m;
}

// Turn a solution of the reciprocal network into one for the original:
// reciprocal precoders become receive filters, and the reciprocal receivers'
// zero-forcing filters become the precoders.
BeamformingSolution dualize(const LinkArray& h_rec, const BeamformingSolution& rec, double rel_tol)
{
    BeamformingSolution out;
    out.scheme = rec.scheme;
    out.scheme.dual = !rec.scheme.dual;
    for (int i = 0; i < 3; ++i) {
        const auto& f = rec.rx_filter[i];
        std::vector<CMatrix> cross;
        for (int k = 0; k < 3; ++k)
            if (k != i) cross.push_back(apply_filter(f, h_rec[i][k] * rec.v[k]));
        const Eigen::Index rows = f ? f->rows() : rx_dim(h_rec);
        const CMatrix nn = left_null_space(hcat(cross, rows), rel_tol);
        const CMatrix a = nn * apply_filter(f, h_rec[i][i] * rec.v[i]);
        // project onto an orthonormal basis of the desired image; a^H would
        // square its conditioning
        const Eigen::Index d = std::min(a.rows(), a.cols());
        const CMatrix basis = Eigen::HouseholderQR<CMatrix>(a).householderQ() * CMatrix::Identity(a.rows(), d);
        // too small a null space leaves zero precoder columns for the
        // certifier to reject
        CMatrix full = CMatrix::Zero(a.cols(), nn.cols());
        full.topRows(d) = basis.adjoint() * nn;
        if (f) full = full * *f;
        out.v[i] = full.transpose();
        out.rx_filter[i] = rec.v[i].transpose();
    }
    return out;
}

using Builder = std::function<BeamformingSolution(const LinkArray&)>;

// Build in the m_t <= m_r orientation, through the reciprocal when needed.
BeamformingSolution oriented(const ChannelSet& ch, const Builder& build, double rel_tol)
{
    if (ch.m_t() <= ch.m_r()) return build(ch.links());
    const LinkArray rec = reciprocal_links(ch.links());
    return dualize(rec, build(rec), rel_tol);
}

void check_orientation_shape(const LinkArray& h, const char* who)
{
    if (tx_dim(h) > rx_dim(h)) throw std::logic_error(std::string(who) + ": expected m_t <= m_r orientation");
}

BeamformingSolution ratio_canonical(const LinkArray& h, std::uint64_t seed, double rel_tol)
{
    check_orientation_shape(h, "ratio scheme");
    const auto t = tx_dim(h);
    const auto r = rx_dim(h);
    if ((r - t) % 2 != 0 || r == t) throw std::invalid_argument("ratio scheme: needs m_t/m_r = (2p-1)/(2p+1)");
    const int q = static_cast<int>((r - t) / 2);
    if (t % q != 0 || (t / q) % 2 == 0) throw std::invalid_argument("ratio scheme: needs m_t/m_r = (2p-1)/(2p+1)");
    const int p = static_cast<int>((t / q + 1) / 2);
    if (p < 2) throw std::invalid_argument("ratio scheme: needs p >= 2");
    std::vector<ChainSpec> chains;
    for (int o = 1; o <= 3; ++o) chains.push_back(chain_spec(o, p, q));
    Packed packed = pack_chains(h, chains, seed, rel_tol);
    BeamformingSolution sol;
    sol.v = packed.v;
    sol.scheme.kind = SchemeKind::Ratio;
    sol.scheme.m_t = static_cast<int>(t);
    sol.scheme.m_r = static_cast<int>(r);
    sol.scheme.streams = stream_counts(sol.v);
    sol.scheme.chains = std::move(chains);
    sol.scheme.alignment_residual = packed.residual;
    return sol;
}

BeamformingSolution zf_canonical(const LinkArray& h, std::uint64_t seed)
{
    check_orientation_shape(h, "zero forcing");
    const int m = static_cast<int>(tx_dim(h));
    const int n = static_cast<int>(rx_dim(h));
    if (2 * m > n) throw std::invalid_argument("zero forcing: needs m/n <= 1/2");
    const std::array<int, 3> s = 3 * m <= n ? std::array<int, 3>{m, m, m} : std::array<int, 3>{m, m, n - 2 * m};
    BeamformingSolution sol;
    for (int k = 0; k < 3; ++k) {
        sol.v[k] = complex_gaussian(m, s[k], derive_seed(seed, {kBeamTag, static_cast<std::uint64_t>(k)}));
        if (s[k] > 0) sol.scheme.chains.push_back(chain_spec(k + 1, 1, s[k]));
    }
    sol.scheme.kind = SchemeKind::ZeroForcing;
    sol.scheme.m_t = m;
    sol.scheme.m_r = n;
    sol.scheme.streams = s;
    return sol;
}

BeamformingSolution closed_loop(const LinkArray& h, int d, double rel_tol)
{
    const auto m = tx_dim(h);
    if (rx_dim(h) != m) throw std::logic_error("closed loop: needs m_t == m_r");
    BeamformingSolution sol;
    sol.scheme.kind = SchemeKind::ClosedLoop;
    sol.scheme.m_t = sol.scheme.m_r = static_cast<int>(m);
    if (d > m) throw InsufficientNullSpace("closed loop: demand exceeds antennas");
    if (d == 0) {
        for (auto& v : sol.v) v = CMatrix(m, 0);
        return sol;
    }
    auto inv = [&](const CMatrix& a) {
        if (numeric_rank(a, rel_tol).rank < m) throw DegenerateChannel("closed loop: singular direct inverse");
        return CMatrix(a.partialPivLu().inverse());
    };
    // one-based H_21^-1 H_23 H_13^-1 H_12 H_32^-1 H_31
    const CMatrix e = inv(h[1][0]) * h[1][2] * inv(h[0][2]) * h[0][1] * inv(h[2][1]) * h[2][0];
    Eigen::ComplexEigenSolver<CMatrix> es(e);
    if (es.info() != Eigen::Success) throw DegenerateChannel("closed loop: eigen decomposition failed");
    CMatrix v1 = es.eigenvectors().leftCols(d);
    for (Eigen::Index c = 0; c < v1.cols(); ++c) v1.col(c) = canonical_direction(v1.col(c));
    sol.v[0] = v1;
    sol.v[1] = inv(h[2][1]) * h[2][0] * v1;
    sol.v[2] = inv(h[1][2]) * h[1][0] * v1;
    sol.scheme.streams = {d, d, d};
    return sol;
}

BeamformingSolution feasibility_canonical(const LinkArray& h, int d, std::uint64_t seed, double rel_tol)
{
    check_orientation_shape(h, "feasibility");
    const int m = static_cast<int>(tx_dim(h));
    const int n = static_cast<int>(rx_dim(h));
    if (m == n) {
        auto sol = closed_loop(h, d, rel_tol);
        sol.scheme.kind = SchemeKind::ClosedLoop;
        return sol;
    }
    const ChainPlan plan = feasibility_plan(AntennaConfig(m, n), d);
    std::vector<ChainSpec> chains;
    for (int len = static_cast<int>(plan.delta.size()) - 1; len >= 1; --len)
        if (plan.delta[len] > 0)
            for (int o = 1; o <= 3; ++o) chains.push_back(chain_spec(o, len, plan.delta[len]));
    Packed packed = pack_chains(h, chains, seed, rel_tol);
    BeamformingSolution sol;
    sol.v = packed.v;
    for (auto& v : sol.v)
        if (v.rows() == 0) v = CMatrix(m, 0);
    sol.scheme.kind = kappa(AntennaConfig(m, n)).value() == 1 ? SchemeKind::ZeroForcing : SchemeKind::Feasibility;
    sol.scheme.m_t = m;
    sol.scheme.m_r = n;
    sol.scheme.streams = {d, d, d};
    sol.scheme.chains = std::move(chains);
    sol.scheme.alignment_residual = packed.residual;
    return sol;
}

void require_alignment_regime(const AntennaConfig& cfg, const char* who)
{
    if (cfg.square() || 2 * cfg.m() <= cfg.n())
        throw std::invalid_argument(std::string(who) + ": needs 1/2 < m/n < 1");
}

}  // namespace

ChainSpec chain_spec(int origin, int p, int sub_dim)
{
    if (origin < 1 || origin > 3) throw std::invalid_argument("chain_spec: origin must be 1, 2 or 3");
    if (p < 1) throw std::invalid_argument("chain_spec: length must be >= 1");
    if (sub_dim < 1) throw std::invalid_argument("chain_spec: sub_dim must be >= 1");
    ChainSpec s;
    s.origin = origin;
    s.length = p;
    s.sub_dim = sub_dim;
    int tx = origin - 1;
    for (int r = 0; r < p; ++r) {
        s.tx_seq.push_back(tx + 1);
        const int next = prv(tx);
        if (r + 1 < p) s.rx_seq.push_back(3 - tx - next + 1);
        tx = next;
    }
    return s;
}

StackedSystem build_stacked(const LinkArray& h, const ChainSpec& spec)
{
    if (spec.length < 2) throw std::invalid_argument("build_stacked: chain length must be >= 2");
    if (static_cast<int>(spec.tx_seq.size()) != spec.length || static_cast<int>(spec.rx_seq.size()) != spec.length - 1)
        throw ShapeMismatch("build_stacked: malformed chain");
    const auto t = tx_dim(h);
    const auto r = rx_dim(h);
    for (const auto& row : h)
        for (const auto& m : row)
            if (m.rows() != r || m.cols() != t) throw ShapeMismatch("build_stacked: inconsistent link shapes");
    StackedSystem sys;
    sys.spec = spec;
    sys.t_dims = static_cast<int>(t);
    sys.r_dims = static_cast<int>(r);
    sys.matrix = CMatrix::Zero((spec.length - 1) * r, spec.length * t);
    for (int b = 0; b + 1 < spec.length; ++b) {
        const int rx = spec.rx_seq[b] - 1;
        sys.matrix.block(b * r, b * t, r, t) = h[rx][spec.tx_seq[b] - 1];
        sys.matrix.block(b * r, (b + 1) * t, r, t) = -h[rx][spec.tx_seq[b + 1] - 1];
    }
    return sys;
}

StackedSystem build_stacked(const ChannelSet& ch, const ChainSpec& spec)
{
    return build_stacked(ch.links(), spec);
}

std::vector<CMatrix> solve_chain(const StackedSystem& sys, int d0, std::uint64_t combiner_seed, double rel_tol)
{
    const CMatrix ns = null_space(sys.matrix, rel_tol);
    if (ns.cols() < d0)
        throw InsufficientNullSpace("solve_chain: null dimension " + std::to_string(ns.cols()) + " below " +
                                    std::to_string(d0));
    const CMatrix x = ns * complex_gaussian(ns.cols(), d0, combiner_seed);
    std::vector<CMatrix> blocks;
    for (int b = 0; b < sys.spec.length; ++b) blocks.push_back(x.middleRows(b * sys.t_dims, sys.t_dims));
    return blocks;
}

double chain_alignment_residual(const LinkArray& h, const ChainSpec& spec, const std::vector<CMatrix>& blocks)
{
    double worst = 0.0;
    for (int b = 0; b + 1 < spec.length; ++b) {
        const int rx = spec.rx_seq[b] - 1;
        const CMatrix x = h[rx][spec.tx_seq[b] - 1] * blocks[b];
        const CMatrix y = h[rx][spec.tx_seq[b + 1] - 1] * blocks[b + 1];
        const double scale = std::max({x.norm(), y.norm(), 1e-300});
        worst = std::max(worst, (x - y).norm() / scale);
    }
    return worst;
}

std::string to_string(SchemeKind k)
{
    switch (k) {
    case SchemeKind::None: return "none";
    case SchemeKind::Ratio: return "ratio";
    case SchemeKind::Spatial: return "spatial";
    case SchemeKind::TimeExtension: return "time";
    case SchemeKind::Feasibility: return "feasibility";
    case SchemeKind::ZeroForcing: return "zf";
    case SchemeKind::ClosedLoop: return "closed-loop";
    }
    return "none";
}

SchemeKind parse_scheme_kind(const std::string& s)
{
    for (auto k : {SchemeKind::None, SchemeKind::Ratio, SchemeKind::Spatial, SchemeKind::TimeExtension,
                   SchemeKind::Feasibility, SchemeKind::ZeroForcing, SchemeKind::ClosedLoop})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

BeamformingSolution construct_ratio_scheme(const ChannelSet& ch, std::uint64_t seed, double rel_tol)
{
    auto sol = oriented(ch, [&](const LinkArray& h) { return ratio_canonical(h, seed, rel_tol); }, rel_tol);
    sol.scheme.m_t = ch.m_t();
    sol.scheme.m_r = ch.m_r();
    sol.scheme.extension = ch.extension();
    return sol;
}

Construction construct_spatial(const AntennaConfig& cfg, std::uint64_t seed, Flavor flavor, double rel_tol)
{
    require_alignment_regime(cfg, "construct_spatial");
    const int q = spatial_scale_factor(cfg);
    const int p = segment_p(cfg);
    const bool m_branch = branch(cfg) == Branch::M;
    const int qm = q * cfg.m();
    const int qn = q * cfg.n();
    ChannelSet ch = generate(q * cfg.m_t(), q * cfg.m_r(), flavor, seed);

    auto build = [&](const LinkArray& h) {
        BeamformingSolution sol;
        if (m_branch) {
            const int keep = (2 * p + 1) * qm / (2 * p - 1);
            LinkArray eff;
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) eff[j][i] = h[j][i].topRows(keep);
            sol = ratio_canonical(eff, seed, rel_tol);
            if (keep < qn)
                for (auto& f : sol.rx_filter) f = CMatrix::Identity(keep, qn);
        } else {
            const int keep = (2 * p - 1) * qn / (2 * p + 1);
            LinkArray eff;
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) eff[j][i] = h[j][i].leftCols(keep);
            sol = ratio_canonical(eff, seed, rel_tol);
            if (keep < qm)
                for (int k = 0; k < 3; ++k) {
                    sol.tx_projection[k] = CMatrix::Identity(qm, keep);
                    sol.v[k] = *sol.tx_projection[k] * sol.v[k];
                }
        }
        return sol;
    };
    BeamformingSolution sol = oriented(ch, build, rel_tol);
    sol.scheme.kind = SchemeKind::Spatial;
    sol.scheme.m_t = cfg.m_t();
    sol.scheme.m_r = cfg.m_r();
    sol.scheme.scale = q;
    return {std::move(ch), std::move(sol)};
}

BeamformingSolution construct_zero_forcing(const ChannelSet& ch, std::uint64_t seed, double rel_tol)
{
    auto sol = oriented(ch, [&](const LinkArray& h) { return zf_canonical(h, seed); }, rel_tol);
    sol.scheme.m_t = ch.m_t();
    sol.scheme.m_r = ch.m_r();
    return sol;
}

Construction construct_zero_forcing(const AntennaConfig& cfg, std::uint64_t seed, double rel_tol)
{
    ChannelSet ch = generate(cfg.m_t(), cfg.m_r(), Flavor::Constant, seed);
    auto sol = construct_zero_forcing(ch, seed, rel_tol);
    return {std::move(ch), std::move(sol)};
}

namespace {

// Haar-like reduction: orthonormalizing a Gaussian draw keeps it generic but
// avoids the poor conditioning of a nearly square Gaussian matrix.
CMatrix orthonormal_rows(const CMatrix& g)
{
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(g.adjoint()).householderQ() * CMatrix::Identity(g.cols(), g.rows());
    return q.adjoint();
}

}  // namespace

Construction construct_time_extension(const AntennaConfig& cfg, Flavor flavor, std::uint64_t seed, double rel_tol)
{
    require_alignment_regime(cfg, "construct_time_extension");
    const Rational dof = dof_star(cfg);
    if (dof.denominator() == 1) throw Unsupported("construct_time_extension: DoF* is already integral");
    const int p = segment_p(cfg);
    const bool m_branch = branch(cfg) == Branch::M;
    const int m = cfg.m();
    const int n = cfg.n();
    const int t = m_branch ? 2 * p - 1 : 2 * p + 1;
    ChannelSet ch = generate(cfg.m_t(), cfg.m_r(), flavor, seed).extend(t);

    auto build = [&](const LinkArray& h) {
        LinkArray eff;
        std::array<CMatrix, 3> proj;
        if (m_branch) {
            for (int j = 0; j < 3; ++j) {
                proj[j] = orthonormal_rows(complex_gaussian((2 * p + 1) * m, t * n,
                                                            derive_seed(seed, {kProjTag, 0, static_cast<std::uint64_t>(j)})));
                for (int i = 0; i < 3; ++i) eff[j][i] = proj[j] * h[j][i];
            }
        } else {
            for (int i = 0; i < 3; ++i)
                proj[i] = orthonormal_rows(complex_gaussian((2 * p - 1) * n, t * m,
                                                            derive_seed(seed, {kProjTag, 1, static_cast<std::uint64_t>(i)})))
                              .adjoint();
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) eff[j][i] = h[j][i] * proj[i];
        }
        BeamformingSolution sol = ratio_canonical(eff, seed, rel_tol);
        for (int k = 0; k < 3; ++k) {
            if (m_branch) {
                sol.rx_filter[k] = proj[k];
            } else {
                sol.tx_projection[k] = proj[k];
                sol.v[k] = proj[k] * sol.v[k];
            }
        }
        return sol;
    };
    BeamformingSolution sol = oriented(ch, build, rel_tol);
    sol.scheme.kind = SchemeKind::TimeExtension;
    sol.scheme.m_t = cfg.m_t();
    sol.scheme.m_r = cfg.m_r();
    sol.scheme.extension = t;
    return {std::move(ch), std::move(sol)};
}

ChainPlan feasibility_plan(const AntennaConfig& cfg, int d)
{
    if (d < 0) throw std::invalid_argument("feasibility_plan: negative demand");
    if (cfg.square()) throw std::invalid_argument("feasibility_plan: m == n uses the closed-loop scheme");
    const int m = cfg.m();
    const int n = cfg.n();
    const int kap = kappa(cfg).value();
    auto cap = [&](int len) { return len == 1 ? m : len * m - (len - 1) * n; };

    // better(a, b): fewer chains, then more weight on longer chains
    auto total = [](const std::vector<int>& x) {
        int s = 0;
        for (std::size_t i = 1; i < x.size(); ++i) s += x[i];
        return s;
    };
    auto better = [&](const std::vector<int>& a, const std::vector<int>& b) {
        const int ta = total(a);
        const int tb = total(b);
        if (ta != tb) return ta < tb;
        for (int len = kap; len >= 1; --len)
            if (a[len] != b[len]) return a[len] > b[len];
        return false;
    };

    std::vector<std::optional<std::vector<int>>> best(d + 1);
    best[0] = std::vector<int>(kap + 1, 0);
    for (int len = 1; len <= kap; ++len) {
        auto next = best;
        for (int x = 0; x <= d; ++x) {
            if (!best[x]) continue;
            for (int c = 1; c <= cap(len) && x + c * len <= d; ++c) {
                auto cand = *best[x];
                cand[len] += c;
                auto& slot = next[x + c * len];
                if (!slot || better(cand, *slot)) slot = cand;
            }
        }
        best = std::move(next);
    }
    if (!best[d]) throw InsufficientNullSpace("feasibility_plan: no chain packing reaches the demand");
    ChainPlan plan;
    plan.demand = d;
    plan.delta = *best[d];
    plan.receive_dims = 2 * d + total(plan.delta);
    plan.fits = plan.receive_dims <= n;
    return plan;
}

BeamformingSolution construct_feasibility(const ChannelSet& ch, std::uint64_t seed, std::optional<int> demand,
                                          double rel_tol)
{
    if (ch.extension() != 1) throw Unsupported("construct_feasibility: runs without symbol extensions");
    const AntennaConfig cfg(ch.m_t(), ch.m_r());
    const int d = demand.value_or(static_cast<int>(floor_of(dof_star(cfg))));
    if (d < 0) throw std::invalid_argument("construct_feasibility: negative demand");
    auto sol = oriented(ch, [&](const LinkArray& h) { return feasibility_canonical(h, d, seed, rel_tol); }, rel_tol);
    sol.scheme.m_t = ch.m_t();
    sol.scheme.m_r = ch.m_r();
    return sol;
}

Construction construct_feasibility(const AntennaConfig& cfg, std::uint64_t seed, std::optional<int> demand,
                                   double rel_tol)
{
    ChannelSet ch = generate(cfg.m_t(), cfg.m_r(), Flavor::Constant, seed);
    auto sol = construct_feasibility(ch, seed, demand, rel_tol);
    return {std::move(ch), std::move(sol)};
}

Construction construct_auto(const AntennaConfig& cfg, std::uint64_t seed, Flavor flavor, double rel_tol)
{
    if (cfg.square()) return construct_feasibility(cfg, seed, std::nullopt, rel_tol);
    if (2 * cfg.m() <= cfg.n()) return construct_zero_forcing(cfg, seed, rel_tol);
    const int gap = cfg.n() - cfg.m();
    if (gap % 2 == 0 && (cfg.m() / (gap / 2)) % 2 == 1 && cfg.m() % (gap / 2) == 0) {
        ChannelSet ch = generate(cfg.m_t(), cfg.m_r(), flavor, seed);
        auto sol = construct_ratio_scheme(ch, seed, rel_tol);
        return {std::move(ch), std::move(sol)};
    }
    return construct_spatial(cfg, seed, flavor, rel_tol);
}

GMatrixDemo g_matrix_demo(std::uint64_t seed, Flavor flavor, double rel_tol)
{
    constexpr int t = 5;
    CMatrix to_next(3, 2);  // H_{k,k+1}
    to_next << 0, 0, 1, 0, 0, 1;
    CMatrix to_prev(3, 2);  // H_{k,k-1}
    to_prev << 1, 0, 0, 1, 0, 0;
    const CMatrix eye = CMatrix::Identity(t, t);
    auto kron = [&](const CMatrix& b) {
        CMatrix out = CMatrix::Zero(t * b.rows(), t * b.cols());
        for (int s = 0; s < t; ++s) out.block(s * b.rows(), s * b.cols(), b.rows(), b.cols()) = b;
        return out;
    };
    LinkArray h;
    for (int k = 0; k < 3; ++k) {
        h[k][nxt(k)] = kron(to_next);
        h[k][prv(k)] = kron(to_prev);
        CMatrix direct = CMatrix::Zero(3 * t, 2 * t);
        for (int s = 0; s < t; ++s) {
            const std::uint64_t block = flavor == Flavor::Constant ? 0 : static_cast<std::uint64_t>(s);
            direct.block(3 * s, 2 * s, 3, 2) =
                complex_gaussian(3, 2, derive_seed(seed, {kGTag, static_cast<std::uint64_t>(k), block}));
        }
        h[k][k] = direct;
    }
    // combiners a, b, c: one 5x3 Gaussian per chain
    std::array<std::vector<CMatrix>, 3> chain;
    for (int o = 1; o <= 3; ++o)
        chain[o - 1] = solve_chain(build_stacked(h, chain_spec(o, 2, 3)), 3,
                                   derive_seed(seed, {kGTag, 100, static_cast<std::uint64_t>(o)}), rel_tol);
    // chain 1: tx 1,3 align at rx 2; chain 2: tx 2,1 at rx 3; chain 3: tx 3,2 at rx 1
    const CMatrix& v11 = chain[0][0];
    const CMatrix& v32 = chain[0][1];
    const CMatrix& v21 = chain[1][0];
    const CMatrix& v12 = chain[1][1];
    const CMatrix& v22 = chain[2][1];
    GMatrixDemo out;
    out.g = hcat({h[0][0] * v11, h[0][0] * v12, h[0][1] * v21, h[0][1] * v22, h[0][2] * v32}, 3 * t);
    out.rank = numeric_rank(out.g, rel_tol);
    return out;
}

namespace {

nlohmann::json chain_to_json(const ChainSpec& c)
{
    return {{"origin", c.origin}, {"length", c.length}, {"sub_dim", c.sub_dim}, {"tx_seq", c.tx_seq},
            {"rx_seq", c.rx_seq}};
}

ChainSpec chain_from_json(const nlohmann::json& j)
{
    ChainSpec c = chain_spec(j.at("origin").get<int>(), j.at("length").get<int>(), j.at("sub_dim").get<int>());
    if (j.at("tx_seq").get<std::vector<int>>() != c.tx_seq || j.at("rx_seq").get<std::vector<int>>() != c.rx_seq)
        throw std::invalid_argument("solution json: chain sequences do not follow the recurrence");
    return c;
}

// JSON arrays cannot express an n x 0 matrix, so carry shapes separately.
nlohmann::json shaped(const CMatrix& m)
{
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", matrix_to_json(m)}};
}

CMatrix unshaped(const nlohmann::json& j)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    if (cols == 0 || rows == 0) return CMatrix(rows, cols);
    CMatrix m = matrix_from_json(j.at("data"));
    if (m.rows() != rows || m.cols() != cols) throw ShapeMismatch("solution json: matrix shape mismatch");
    return m;
}

nlohmann::json optional_matrices(const std::array<std::optional<CMatrix>, 3>& ms)
{
    auto out = nlohmann::json::array();
    for (const auto& m : ms) out.push_back(m ? shaped(*m) : nlohmann::json(nullptr));
    return out;
}

std::array<std::optional<CMatrix>, 3> optional_matrices_from(const nlohmann::json& j)
{
    std::array<std::optional<CMatrix>, 3> out;
    if (!j.is_array() || j.size() != 3) throw ShapeMismatch("solution json: need three entries");
    for (int k = 0; k < 3; ++k)
        if (!j[k].is_null()) out[k] = unshaped(j[k]);
    return out;
}

}  // namespace

nlohmann::json to_json(const BeamformingSolution& sol)
{
    const auto& s = sol.scheme;
    auto chains = nlohmann::json::array();
    for (const auto& c : s.chains) chains.push_back(chain_to_json(c));
    auto v = nlohmann::json::array();
    for (const auto& m : sol.v) v.push_back(shaped(m));
    return {{"scheme",
             {{"kind", to_string(s.kind)},
              {"m_t", s.m_t},
              {"m_r", s.m_r},
              {"scale", s.scale},
              {"extension", s.extension},
              {"dual", s.dual},
              {"streams", s.streams},
              {"chains", chains},
              {"alignment_residual", s.alignment_residual}}},
            {"v", v},
            {"rx_filter", optional_matrices(sol.rx_filter)},
            {"tx_projection", optional_matrices(sol.tx_projection)}};
}

BeamformingSolution solution_from_json(const nlohmann::json& j)
{
    BeamformingSolution sol;
    const auto& s = j.at("scheme");
    sol.scheme.kind = parse_scheme_kind(s.at("kind").get<std::string>());
    sol.scheme.m_t = s.at("m_t").get<int>();
    sol.scheme.m_r = s.at("m_r").get<int>();
    sol.scheme.scale = s.at("scale").get<int>();
    sol.scheme.extension = s.at("extension").get<int>();
    sol.scheme.dual = s.at("dual").get<bool>();
    sol.scheme.streams = s.at("streams").get<std::array<int, 3>>();
    for (const auto& c : s.at("chains")) sol.scheme.chains.push_back(chain_from_json(c));
    sol.scheme.alignment_residual = s.at("alignment_residual").get<double>();
    const auto& v = j.at("v");
    if (!v.is_array() || v.size() != 3) throw ShapeMismatch("solution json: need three precoders");
    for (int k = 0; k < 3; ++k) {
        sol.v[k] = unshaped(v[k]);
        if (sol.v[k].cols() != sol.scheme.streams[k]) throw ShapeMismatch("solution json: stream count mismatch");
    }
    sol.rx_filter = optional_matrices_from(j.at("rx_filter"));
    sol.tx_projection = optional_matrices_from(j.at("tx_projection"));
    return sol;
}

}  // namespace alignchain
