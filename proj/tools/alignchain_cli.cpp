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

// alignchain command line: DoF queries, tables, scheme construction,
// feasibility grids and change-of-basis connectivity dumps.
//
// Exit status: 0 pass / query ok, 1 verdict fail, 2 usage error.

#include "alignchain/certifier.hpp"
#include "alignchain/cob.hpp"
#include "alignchain/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace alignchain;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;

enum class Output { Text, Json, Csv };

struct Global {
    std::uint64_t seed = kDefaultSeed;
    Output output = Output::Text;
    double rel_tol = TolerancePolicy{}.rel_tol;

    TolerancePolicy tol() const
    {
        TolerancePolicy t;
        t.rel_tol = rel_tol;
        return t;
    }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string branch_name(const DofCharacterization& c)
{
    if (!c.branch) return "-";
    return *c.branch == Branch::M ? "M-limited" : "N-limited";
}

int cmd_dof(const Global& g, int m_t, int m_r)
{
    const AntennaConfig cfg(m_t, m_r);
    const auto c = characterize(cfg);
    const Rational proper_bound(m_t + m_r, 4);
    const std::string kap = c.kappa.is_finite() ? std::to_string(c.kappa.value()) : "inf";
    switch (g.output) {
    case Output::Json: {
        json j = {{"m_t", m_t},
                  {"m_r", m_r},
                  {"kappa", c.kappa.is_finite() ? json(c.kappa.value()) : json("inf")},
                  {"n_bound", c.n_bound ? json(to_string(*c.n_bound)) : json(nullptr)},
                  {"m_bound", c.m_bound ? json(to_string(*c.m_bound)) : json(nullptr)},
                  {"dof_star", to_string(c.dof_star)},
                  {"dof_star_floor", floor_of(c.dof_star)},
                  {"scale_factor", c.scale_factor},
                  {"redundancy", to_string(c.redundancy)},
                  {"segment_p", c.segment_p ? json(*c.segment_p) : json(nullptr)},
                  {"branch", branch_name(c)},
                  {"proper_threshold", to_string(proper_bound)},
                  {"mimo_gain", to_string(mimo_gain(cfg))}};
        std::cout << j.dump(2) << "\n";
        break;
    }
    case Output::Csv:
        std::cout << "m_t,m_r,kappa,n_bound,m_bound,dof_star,scale_factor,redundancy,segment_p,proper_threshold\n"
                  << m_t << ',' << m_r << ',' << kap << ',' << (c.n_bound ? to_string(*c.n_bound) : "") << ','
                  << (c.m_bound ? to_string(*c.m_bound) : "") << ',' << to_string(c.dof_star) << ','
                  << c.scale_factor << ',' << to_string(c.redundancy) << ','
                  << (c.segment_p ? std::to_string(*c.segment_p) : "") << ',' << to_string(proper_bound) << "\n";
        break;
    case Output::Text:
        std::cout << "M_T x M_R   " << m_t << " x " << m_r << "  (M/N = " << to_string(cfg.gamma()) << ")\n"
                  << "kappa       " << kap << "\n"
                  << "N-bound     " << (c.n_bound ? to_string(*c.n_bound) : "-") << "\n"
                  << "M-bound     " << (c.m_bound ? to_string(*c.m_bound) : "-") << "\n"
                  << "DoF*        " << to_string(c.dof_star) << " per user (floor " << floor_of(c.dof_star) << ")\n"
                  << "q           " << c.scale_factor << "\n"
                  << "class       " << to_string(c.redundancy) << "\n"
                  << "segment     " << (c.segment_p ? "p=" + std::to_string(*c.segment_p) + ", " : "")
                  << branch_name(c) << "\n"
                  << "proper      d <= " << to_string(proper_bound) << "\n"
                  << "MIMO gain   " << to_string(mimo_gain(cfg)) << " over MN/(M+N)\n";
        break;
    }
    return 0;
}

int cmd_table(const Global& g, int max)
{
    if (g.output == Output::Json) {
        json rows = json::array();
        for (int a = 1; a <= max; ++a)
            for (int b = 1; b <= max; ++b) {
                const Rational d = dof_star(AntennaConfig(a, b));
                rows.push_back({{"m_t", a}, {"m_r", b}, {"dof_star", to_string(d)}, {"floor", floor_of(d)}});
            }
        std::cout << rows.dump(2) << "\n";
        return 0;
    }
    std::cout << "m_t,m_r,dof_star,floor\n";
    for (int a = 1; a <= max; ++a)
        for (int b = 1; b <= max; ++b) {
            const Rational d = dof_star(AntennaConfig(a, b));
            std::cout << a << ',' << b << ',' << to_string(d) << ',' << floor_of(d) << "\n";
        }
    return 0;
}

void print_report(const AlignmentReport& rep, const ChannelSet& ch)
{
    const auto& s = rep.scheme;
    std::cout << "scheme      " << to_string(s.kind) << (s.dual ? " (reciprocal)" : "") << "\n"
              << "channel     " << ch.m_t() << " x " << ch.m_r() << ", T=" << ch.extension() << ", "
              << to_string(ch.flavor()) << ", seed " << ch.seed() << "\n"
              << "streams     " << s.streams[0] << ", " << s.streams[1] << ", " << s.streams[2] << "\n";
    std::cout << "rx  interference  desired  joint  residual\n";
    for (std::size_t j = 0; j < rep.per_rx.size(); ++j) {
        const auto& r = rep.per_rx[j];
        std::cout << std::setw(2) << j + 1 << std::setw(14) << r.interference_dim << std::setw(9) << r.desired_dim
                  << std::setw(7) << r.joint_rank << "  " << std::scientific << std::setprecision(2) << r.residual
                  << std::defaultfloat << "\n";
    }
}

int cmd_construct(const Global& g, int m_t, int m_r, const std::string& mode, const std::string& flavor_name,
                  int demand, const std::string& dump, bool slope)
{
    const AntennaConfig cfg(m_t, m_r);
    const Flavor flavor = parse_flavor(flavor_name);
    const auto tol = g.tol();
    std::optional<Construction> con;
    try {
        if (mode == "auto") {
            con = construct_auto(cfg, g.seed, flavor, tol.rel_tol);
        } else if (mode == "ratio") {
            ChannelSet ch = generate(m_t, m_r, flavor, g.seed);
            auto sol = construct_ratio_scheme(ch, g.seed, tol.rel_tol);
            con = Construction{std::move(ch), std::move(sol)};
        } else if (mode == "spatial") {
            con = construct_spatial(cfg, g.seed, flavor, tol.rel_tol);
        } else if (mode == "time") {
            con = construct_time_extension(cfg, flavor, g.seed, tol.rel_tol);
        } else if (mode == "feasibility") {
            ChannelSet ch = generate(m_t, m_r, flavor, g.seed);
            auto sol = construct_feasibility(ch, g.seed, demand > 0 ? std::optional<int>(demand) : std::nullopt,
                                             tol.rel_tol);
            con = Construction{std::move(ch), std::move(sol)};
        } else if (mode == "zf") {
            ChannelSet ch = generate(m_t, m_r, flavor, g.seed);
            auto sol = construct_zero_forcing(ch, g.seed, tol.rel_tol);
            con = Construction{std::move(ch), std::move(sol)};
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const Unsupported& e) {
        throw UsageError(e.what());
    }
    const AlignmentReport rep = verify_solution(con->channel, con->solution, tol);
    std::optional<double> dof_slope;
    if (slope) dof_slope = estimate_dof_slope(con->channel, con->solution, {40, 50, 60}, false, tol);

    const json payload = {{"report", to_json(rep)},
                          {"solution", to_json(con->solution)},
                          {"channel", to_json(con->channel)}};
    if (!dump.empty()) {
        std::ofstream out(dump);
        if (!out) throw UsageError("cannot write " + dump);
        out << payload.dump() << "\n";
    }
    if (g.output == Output::Json) {
        json j = payload;
        if (dof_slope) j["dof_slope"] = *dof_slope;
        std::cout << j.dump() << "\n";
    } else if (g.output == Output::Csv) {
        std::cout << "rx,interference_dim,desired_dim,joint_rank,residual,demanded\n";
        for (std::size_t k = 0; k < rep.per_rx.size(); ++k) {
            const auto& r = rep.per_rx[k];
            std::cout << k + 1 << ',' << r.interference_dim << ',' << r.desired_dim << ',' << r.joint_rank << ','
                      << r.residual << ',' << r.demanded << "\n";
        }
    } else {
        print_report(rep, con->channel);
        if (dof_slope) std::cout << "DoF slope   " << *dof_slope << " per channel use\n";
        const int per_user = con->solution.scheme.streams[0];
        const int t = con->channel.extension();
        const int q = con->solution.scheme.scale;
        std::cout << "verdict     " << (rep.pass ? "pass" : "fail") << ", " << per_user << "/user";
        if (t > 1) std::cout << " over " << t << " slots";
        if (q > 1) std::cout << " on the " << q << "x scaled channel";
        std::cout << "\n";
    }
    return rep.pass ? 0 : 1;
}

int cmd_grid(const Global& g, int max, int seeds, int jobs, const std::vector<std::string>& demands,
             bool time_variation)
{
    GridOptions opt;
    opt.max_m = opt.max_n = max;
    opt.seeds = seeds;
    opt.jobs = jobs;
    opt.master_seed = g.seed;
    opt.tol = g.tol();
    for (const auto& d : demands) {
        int a = 0, b = 0, k = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(d);
        if (!(in >> a >> c1 >> b >> c2 >> k) || c1 != ',' || c2 != ',' || a < 1 || b < 1 || k < 0)
            throw UsageError("--demand expects M_T,M_R,D");
        opt.demand[{a, b}] = k;
    }
    const GridResult res = feasibility_grid(opt);
    if (g.output == Output::Json) {
        json j = to_json(res);
        if (time_variation) {
            json tv = json::array();
            for (const auto& c : time_variation_cells(max, g.seed, seeds, opt.tol, jobs))
                tv.push_back({{"m_t", c.m_t}, {"m_r", c.m_r}, {"extension", c.extension},
                              {"constant", c.constant_pass ? "pass" : "fail"},
                              {"varying", c.varying_pass ? "pass" : "fail"}});
            j["time_variation"] = tv;
        }
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << to_csv(res);
        if (time_variation) {
            std::cerr << "cells needing time-varying channels for the symbol-extension scheme:";
            for (const auto& c : time_variation_cells(max, g.seed, seeds, opt.tol, jobs))
                if (!c.constant_pass) std::cerr << " (" << c.m_t << "," << c.m_r << ")";
            std::cerr << "\n";
        }
    }
    for (const auto& c : res.cells)
        if (c.pass != c.expected)
            std::cerr << "mismatch at (" << c.m_t << "," << c.m_r << "): verdict " << (c.pass ? "pass" : "fail")
                      << ", predicted " << (c.expected ? "pass" : "fail") << "\n";
    return res.agrees() ? 0 : 1;
}

int cmd_cob(const Global& g, int p, bool reciprocal_shape)
{
    ConnectivityPattern pattern;
    try {
        pattern = builtin_pattern(p);
    } catch (const Unsupported& e) {
        throw UsageError(e.what());
    }
    const ChannelSet ch = reciprocal_shape ? generate(p + 1, p, Flavor::Constant, g.seed)
                                           : generate(p, p + 1, Flavor::Constant, g.seed);
    if (reciprocal_shape) pattern = pattern.transpose();
    const BasisChange bc = cob_recursive(ch, p, g.rel_tol);
    const ZeroPatternReport rep = verify_connectivity(bc, pattern);
    if (g.output == Output::Json) {
        json t = json::array(), r = json::array();
        for (int k = 0; k < 3; ++k) {
            t.push_back(matrix_to_json(bc.t_mats[k]));
            r.push_back(matrix_to_json(bc.r_mats[k]));
        }
        std::cout << json{{"p", p},
                          {"m_t", ch.m_t()},
                          {"m_r", ch.m_r()},
                          {"max_residual", rep.max_residual},
                          {"pattern_tol", rep.tol},
                          {"pass", rep.pass},
                          {"worst_condition", worst_condition(bc)},
                          {"t_mats", t},
                          {"r_mats", r},
                          {"channel", to_json(ch)}}
                         .dump()
                  << "\n";
    } else {
        std::cout << connectivity_table(bc, pattern);
        std::cout << "max residual " << rep.max_residual << " (tol " << rep.tol << "), worst condition "
                  << worst_condition(bc) << "\n"
                  << "verdict " << (rep.pass ? "pass" : "fail") << "\n";
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Degrees of freedom and subspace alignment chains for the three-user MIMO interference channel"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    std::string output = "text";
    app.add_option("--seed", g.seed, "Master seed")->envname("ALIGNCHAIN_SEED");
    app.add_option("--output", output, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--rel-tol", g.rel_tol, "Relative rank tolerance")->check(CLI::Range(1e-15, 1e-1));

    int m_t = 0, m_r = 0, max = 0, p = 0, seeds = 3, jobs = 1, demand = 0;
    std::string mode = "auto", flavor = "constant", dump;
    std::vector<std::string> demands;
    bool slope = false, time_variation = false, reciprocal_shape = false;

    auto* dof = app.add_subcommand("dof", "Closed-form DoF characterization");
    dof->add_option("m_t", m_t, "Transmit antennas")->required()->check(CLI::PositiveNumber);
    dof->add_option("m_r", m_r, "Receive antennas")->required()->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "CSV of DoF* for all m_t, m_r <= max");
    table->add_option("max", max, "Largest antenna count")->required()->check(CLI::Range(1, 256));

    auto* construct = app.add_subcommand("construct", "Build a beamforming scheme and certify it");
    construct->add_option("m_t", m_t, "Transmit antennas")->required()->check(CLI::PositiveNumber);
    construct->add_option("m_r", m_r, "Receive antennas")->required()->check(CLI::PositiveNumber);
    construct->add_option("--mode", mode, "Construction")
        ->check(CLI::IsMember({"auto", "ratio", "spatial", "time", "feasibility", "zf"}));
    construct->add_option("--flavor", flavor, "Channel flavor")
        ->check(CLI::IsMember({"constant", "varying", "time-varying"}));
    construct->add_option("--demand", demand, "Streams per user (feasibility mode)")->check(CLI::NonNegativeNumber);
    construct->add_option("--dump", dump, "Write channel, solution and report as JSON");
    construct->add_flag("--slope", slope, "Also estimate the DoF slope at 40/50/60 dB");

    auto* grid = app.add_subcommand("grid", "Feasibility grid for all m_t, m_r <= max");
    grid->add_option("max", max, "Largest antenna count")->required()->check(CLI::Range(1, 32));
    grid->add_option("--seeds", seeds, "Seeds per cell")->check(CLI::Range(1, 100));
    grid->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));
    grid->add_option("--demand", demands, "Force a demand, M_T,M_R,D (repeatable)");
    grid->add_flag("--time-variation", time_variation, "Report cells whose extension scheme needs time variation");

    auto* cob = app.add_subcommand("cob", "Change-of-basis connectivity for (p, p+1)");
    cob->add_option("p", p, "Layer parameter, 2..8")->required();
    cob->add_flag("--reciprocal", reciprocal_shape, "Use the (p+1, p) network");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    g.output = output == "json" ? Output::Json : output == "csv" ? Output::Csv : Output::Text;

    try {
        if (*dof) return cmd_dof(g, m_t, m_r);
        if (*table) return cmd_table(g, max);
        if (*construct) return cmd_construct(g, m_t, m_r, mode, flavor, demand, dump, slope);
        if (*grid) return cmd_grid(g, max, seeds, jobs, demands, time_variation);
        if (*cob) return cmd_cob(g, p, reciprocal_shape);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
