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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace alignchain {

namespace {

double top(const RankReport& r)
{
    return r.singular_values.empty() ? 0.0 : r.singular_values.front();
}

CMatrix filtered(const std::optional<CMatrix>& f, const CMatrix& m)
{
    return f ? CMatrix(*f * m) : m;
}

}  // namespace

AlignmentReport verify_solution(const LinkArray& h, const BeamformingSolution& sol, const TolerancePolicy& tol)
{
    const auto t = h[0][0].cols();
    const auto r = h[0][0].rows();
    for (int k = 0; k < 3; ++k) {
        if (sol.v[k].rows() != t) throw ShapeMismatch("verify_solution: precoder rows do not match transmit antennas");
        if (sol.rx_filter[k] && sol.rx_filter[k]->cols() != r)
            throw ShapeMismatch("verify_solution: receive filter does not match receive antennas");
    }
    AlignmentReport rep;
    rep.scheme = sol.scheme;
    rep.pass = true;
    for (int j = 0; j < 3; ++j) {
        const auto& f = sol.rx_filter[j];
        const Eigen::Index rows = f ? f->rows() : r;
        Eigen::Index ncross = 0;
        for (int i = 0; i < 3; ++i)
            if (i != j) ncross += sol.v[i].cols();
        CMatrix c(rows, ncross);
        Eigen::Index at = 0;
        for (int i = 0; i < 3; ++i) {
            if (i == j) continue;
            c.middleCols(at, sol.v[i].cols()) = filtered(f, h[j][i] * sol.v[i]);
            at += sol.v[i].cols();
        }
        const CMatrix d = filtered(f, h[j][j] * sol.v[j]);
        CMatrix both(rows, c.cols() + d.cols());
        both << c, d;

        ReceiverReport rr;
        rr.joint = numeric_rank(both, tol.rel_tol);
        // blocks are ranked against the scale of the whole received signal
        const double scale = top(rr.joint);
        const RankReport rc = numeric_rank_scaled(c, scale, tol.rel_tol);
        const RankReport rd = numeric_rank_scaled(d, scale, tol.rel_tol);
        rr.interference_dim = rc.rank;
        rr.desired_dim = rd.rank;
        rr.joint_rank = rr.joint.rank;
        rr.demanded = sol.scheme.streams[j];
        const double first_dropped =
            rc.rank < static_cast<int>(rc.singular_values.size()) ? rc.singular_values[rc.rank] : 0.0;
        rr.residual = first_dropped / std::max({top(rc), top(rd), scale, std::numeric_limits<double>::min()});
        const bool ok = rr.joint_rank == rr.interference_dim + rr.desired_dim && rr.desired_dim == rr.demanded &&
                        sol.v[j].cols() == rr.demanded && rr.residual <= tol.align_tol;
        rep.pass = rep.pass && ok;
        rep.per_rx.push_back(std::move(rr));
    }
    return rep;
}

AlignmentReport verify_solution(const ChannelSet& ch, const BeamformingSolution& sol, const TolerancePolicy& tol)
{
    return verify_solution(ch.links(), sol, tol);
}

bool GridResult::all_pass() const
{
    return std::all_of(cells.begin(), cells.end(), [](const GridCell& c) { return c.pass; });
}

bool GridResult::agrees() const
{
    return std::all_of(cells.begin(), cells.end(), [](const GridCell& c) { return c.pass == c.expected; });
}

const GridCell& GridResult::at(int m_t, int m_r) const
{
    for (const auto& c : cells)
        if (c.m_t == m_t && c.m_r == m_r) return c;
    throw std::out_of_range("grid: no cell (" + std::to_string(m_t) + ", " + std::to_string(m_r) + ")");
}

GridCell evaluate_cell(const AntennaConfig& cfg, int d, int seeds, std::uint64_t master_seed,
                       const TolerancePolicy& tol)
{
    GridCell cell;
    cell.m_t = cfg.m_t();
    cell.m_r = cfg.m_r();
    cell.dof_star = dof_star(cfg);
    cell.d = d;
    if (d == 0) {
        cell.pass = cell.expected = true;
        return cell;
    }
    cell.expected = is_linear_feasible(cfg, d).linear_feasible;
    for (int s = 0; s < seeds; ++s) {
        ++cell.seeds;
        const std::uint64_t seed = derive_seed(
            master_seed, {static_cast<std::uint64_t>(cfg.m_t()), static_cast<std::uint64_t>(cfg.m_r()),
                          static_cast<std::uint64_t>(s)});
        try {
            const Construction con = construct_feasibility(cfg, seed, d, tol.rel_tol);
            cell.scheme = con.solution.scheme.kind;
            AlignmentReport rep = verify_solution(con.channel, con.solution, tol);
            if (rep.pass) {
                cell.pass = true;
                cell.failure.reset();
                cell.error.clear();
                break;
            }
            cell.failure = std::move(rep);
        } catch (const Error& e) {
            cell.error = e.what();
        }
    }
    return cell;
}

GridResult feasibility_grid(const GridOptions& opt)
{
    if (opt.max_m < 1 || opt.max_n < 1 || opt.seeds < 1 || opt.jobs < 1)
        throw std::invalid_argument("feasibility_grid: sizes, seeds and jobs must be >= 1");
    GridResult g;
    g.options = opt;
    std::vector<std::pair<int, int>> work;
    for (int a = 1; a <= opt.max_m; ++a)
        for (int b = 1; b <= opt.max_n; ++b) work.emplace_back(a, b);
    g.cells.resize(work.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < work.size(); k = next++) {
            const AntennaConfig cfg(work[k].first, work[k].second);
            const auto forced = opt.demand.find(work[k]);
            const int d = forced != opt.demand.end() ? forced->second : static_cast<int>(floor_of(dof_star(cfg)));
            g.cells[k] = evaluate_cell(cfg, d, opt.seeds, opt.master_seed, opt.tol);
        }
    };
    const int n = std::min<int>(opt.jobs, static_cast<int>(work.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return g;
}

std::string to_csv(const GridResult& g)
{
    std::ostringstream os;
    os << "m_t,m_r,dof_star_num,dof_star_den,d,scheme,verdict,seeds\n";
    for (const auto& c : g.cells)
        os << c.m_t << ',' << c.m_r << ',' << c.dof_star.numerator() << ',' << c.dof_star.denominator() << ',' << c.d
           << ',' << to_string(c.scheme) << ',' << (c.pass ? "pass" : "fail") << ',' << c.seeds << '\n';
    return os.str();
}

GridResult grid_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "m_t,m_r,dof_star_num,dof_star_den,d,scheme,verdict,seeds")
        throw std::invalid_argument("grid csv: unexpected header");
    GridResult g;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        if (f.size() != 8) throw std::invalid_argument("grid csv: expected 8 fields");
        GridCell c;
        c.m_t = std::stoi(f[0]);
        c.m_r = std::stoi(f[1]);
        c.dof_star = Rational(std::stoll(f[2]), std::stoll(f[3]));
        c.d = std::stoi(f[4]);
        c.scheme = parse_scheme_kind(f[5]);
        if (f[6] != "pass" && f[6] != "fail") throw std::invalid_argument("grid csv: bad verdict");
        c.pass = f[6] == "pass";
        c.seeds = std::stoi(f[7]);
        const AntennaConfig cfg(c.m_t, c.m_r);
        if (c.dof_star != dof_star(cfg)) throw std::invalid_argument("grid csv: DoF* does not match the closed form");
        c.expected = c.d == 0 || is_linear_feasible(cfg, c.d).linear_feasible;
        g.cells.push_back(std::move(c));
    }
    return g;
}

nlohmann::json to_json(const RankReport& r)
{
    return {{"singular_values", r.singular_values}, {"tol_used", r.tol_used}, {"rank", r.rank}};
}

nlohmann::json to_json(const AlignmentReport& r)
{
    auto rx = nlohmann::json::array();
    for (const auto& x : r.per_rx)
        rx.push_back({{"interference_dim", x.interference_dim},
                      {"desired_dim", x.desired_dim},
                      {"joint_rank", x.joint_rank},
                      {"demanded", x.demanded},
                      {"residual", x.residual},
                      {"joint", to_json(x.joint)}});
    return {{"pass", r.pass}, {"scheme", to_string(r.scheme.kind)}, {"per_rx", rx}};
}

nlohmann::json to_json(const GridResult& g)
{
    auto cells = nlohmann::json::array();
    for (const auto& c : g.cells) {
        nlohmann::json cell = {{"m_t", c.m_t},
                               {"m_r", c.m_r},
                               {"dof_star_num", c.dof_star.numerator()},
                               {"dof_star_den", c.dof_star.denominator()},
                               {"d", c.d},
                               {"scheme", to_string(c.scheme)},
                               {"verdict", c.pass ? "pass" : "fail"},
                               {"seeds", c.seeds},
                               {"expected", c.expected ? "pass" : "fail"}};
        if (!c.error.empty()) cell["error"] = c.error;
        if (c.failure) cell["failure"] = to_json(*c.failure);
        cells.push_back(std::move(cell));
    }
    return {{"max_m", g.options.max_m},
            {"max_n", g.options.max_n},
            {"seeds_per_cell", g.options.seeds},
            {"master_seed", g.options.master_seed},
            {"rel_tol", g.options.tol.rel_tol},
            {"cells", cells}};
}

GridResult grid_from_json(const nlohmann::json& j)
{
    GridResult g;
    g.options.max_m = j.at("max_m").get<int>();
    g.options.max_n = j.at("max_n").get<int>();
    g.options.seeds = j.at("seeds_per_cell").get<int>();
    g.options.master_seed = j.at("master_seed").get<std::uint64_t>();
    g.options.tol.rel_tol = j.at("rel_tol").get<double>();
    for (const auto& c : j.at("cells")) {
        GridCell cell;
        cell.m_t = c.at("m_t").get<int>();
        cell.m_r = c.at("m_r").get<int>();
        cell.dof_star = Rational(c.at("dof_star_num").get<std::int64_t>(), c.at("dof_star_den").get<std::int64_t>());
        cell.d = c.at("d").get<int>();
        cell.scheme = parse_scheme_kind(c.at("scheme").get<std::string>());
        cell.pass = c.at("verdict").get<std::string>() == "pass";
        cell.seeds = c.at("seeds").get<int>();
        cell.expected = c.at("expected").get<std::string>() == "pass";
        cell.error = c.value("error", std::string());
        if (cell.dof_star != dof_star(AntennaConfig(cell.m_t, cell.m_r)))
            throw std::invalid_argument("grid json: DoF* does not match the closed form");
        g.cells.push_back(std::move(cell));
    }
    return g;
}

std::vector<TimeVariationCell> time_variation_cells(int max, std::uint64_t master_seed, int seeds,
                                                    const TolerancePolicy& tol, int jobs)
{
    if (seeds < 1 || jobs < 1) throw std::invalid_argument("time_variation_cells: seeds and jobs must be >= 1");
    std::vector<TimeVariationCell> out;
    for (int a = 1; a <= max; ++a)
        for (int b = 1; b <= max; ++b) {
            const AntennaConfig cfg(a, b);
            if (cfg.square() || 2 * cfg.m() <= cfg.n() || dof_star(cfg).denominator() == 1) continue;
            TimeVariationCell cell;
            cell.m_t = a;
            cell.m_r = b;
            out.push_back(cell);
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < out.size(); k = next++) {
            TimeVariationCell& cell = out[k];
            const AntennaConfig cfg(cell.m_t, cell.m_r);
            for (auto f : {Flavor::Constant, Flavor::TimeVarying}) {
                bool pass = false;
                for (int s = 0; s < seeds && !pass; ++s) {
                    const std::uint64_t seed = derive_seed(
                        master_seed, {static_cast<std::uint64_t>(cell.m_t), static_cast<std::uint64_t>(cell.m_r),
                                      static_cast<std::uint64_t>(s)});
                    try {
                        const Construction con = construct_time_extension(cfg, f, seed, tol.rel_tol);
                        cell.extension = con.solution.scheme.extension;
                        pass = verify_solution(con.channel, con.solution, tol).pass;
                    } catch (const Error&) {
                        pass = false;
                    }
                }
                (f == Flavor::Constant ? cell.constant_pass : cell.varying_pass) = pass;
            }
        }
    };
    const int n = std::min<int>(jobs, static_cast<int>(out.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

double estimate_dof_slope(const ChannelSet& ch, const BeamformingSolution& sol, const std::vector<double>& snr_db,
                          bool require_pass, const TolerancePolicy& tol)
{
    if (snr_db.size() < 2) throw std::invalid_argument("estimate_dof_slope: need at least two SNR points");
    if (require_pass && !verify_solution(ch, sol, tol).pass)
        throw VerificationFailed("estimate_dof_slope: solution does not pass verification");
    const auto r = ch.rx_dims();

    // unit-norm beams, one per stream
    std::array<CMatrix, 3> beams;
    for (int k = 0; k < 3; ++k) {
        beams[k] = sol.v[k];
        for (Eigen::Index c = 0; c < beams[k].cols(); ++c) {
            const double nrm = beams[k].col(c).norm();
            if (nrm > 0.0) beams[k].col(c) /= nrm;
        }
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (double db : snr_db) {
        const double rho = std::pow(10.0, db / 10.0);
        double sum_rate = 0.0;
        for (int j = 0; j < 3; ++j) {
            std::vector<CVector> g;
            Eigen::Index own_begin = 0;
            for (int i = 0; i < 3; ++i) {
                if (i == j) own_begin = static_cast<Eigen::Index>(g.size());
                const auto ds = beams[i].cols();
                if (ds == 0) continue;
                const double power = rho / static_cast<double>(ds);
                const CMatrix img = ch.h(j, i) * beams[i];
                for (Eigen::Index c = 0; c < ds; ++c) g.push_back(std::sqrt(power) * img.col(c));
            }
            CMatrix k_all = CMatrix::Identity(r, r);
            for (const auto& x : g) k_all += x * x.adjoint();
            for (Eigen::Index s = 0; s < beams[j].cols(); ++s) {
                const CVector& x = g[own_begin + s];
                const CMatrix k_rest = k_all - x * x.adjoint();
                const cplx sinr = x.dot(k_rest.ldlt().solve(x));
                sum_rate += std::log2(1.0 + std::max(0.0, sinr.real()));
            }
        }
        xs.push_back(db / 10.0 * std::log2(10.0));
        ys.push_back(sum_rate / static_cast<double>(ch.extension()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k] / n;
        my += ys[k] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("estimate_dof_slope: SNR points must differ");
    return sxy / sxx;
}

}  // namespace alignchain
