// SPDX-License-Identifier: Apache-2.0
//
// owcsim - optical wireless channel simulator for data-centre downlinks
// Copyright (C) 2026 owcsim developers
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

#include "owcsim/owcsim.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace
{

struct Overrides
{
    std::string config;
    std::optional<std::string> receiver;
    std::optional<int> orders;
    std::optional<double> bin_ps;
    std::optional<double> bitrate;
    std::optional<unsigned> threads;
    std::string out = "out";
    bool plot = false;
};

void add_common(CLI::App &cmd, Overrides &o)
{
    cmd.add_option("--config", o.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    cmd.add_option("--receiver", o.receiver, "Receiver kind")
        ->check(CLI::IsMember({"wfov", "adr", "imaging", "all"}));
    cmd.add_option("--orders", o.orders, "Maximum reflection order")->check(CLI::Range(0, 2));
    cmd.add_option("--bin-ps", o.bin_ps, "Histogram bin width in picoseconds")->check(CLI::PositiveNumber);
    cmd.add_option("--bitrate", o.bitrate, "OOK bit rate in bit/s")->check(CLI::PositiveNumber);
    cmd.add_option("--out", o.out, "Output directory");
    cmd.add_option("--threads", o.threads, "Worker threads (speed only)");
}

owcsim::RunConfig resolve(Overrides const &o)
{
    auto cfg = owcsim::load_config(o.config);
    if (o.receiver)
        cfg.receiver = *o.receiver;
    if (o.orders)
        cfg.trace.max_order = *o.orders;
    if (o.bin_ps)
        cfg.trace.bin_width = *o.bin_ps * 1e-12;
    if (o.bitrate)
        cfg.bit_rate = *o.bitrate;
    if (o.threads)
    {
        cfg.trace.threads = *o.threads;
    }
    else if (char const *env = std::getenv("OWCSIM_THREADS"))
    {
        try
        {
            cfg.trace.threads = static_cast<unsigned>(std::stoul(env));
        }
        catch (std::exception const &)
        {
            throw owcsim::config_error(std::string("OWCSIM_THREADS: expects an integer, got '") + env + "'");
        }
    }
    return cfg;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"owcsim: optical wireless channel simulator for data-centre downlinks"};
    app.require_subcommand(1);

    Overrides sim_o, sweep_o, check_o;
    auto *sim = app.add_subcommand("simulate", "Trace impulse responses for every mount and branch");
    add_common(*sim, sim_o);
    auto *sweep = app.add_subcommand("sweep", "Move the receiver along a row and write link metrics");
    add_common(*sweep, sweep_o);
    sweep->add_flag("--plot", sweep_o.plot, "Also write a gnuplot script");
    auto *check = app.add_subcommand("check", "Validate the scene and report element counts");
    add_common(*check, check_o);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sim->parsed())
            return owcsim::run_simulate(resolve(sim_o), sim_o.out, std::cout, std::cerr);
        if (sweep->parsed())
            return owcsim::run_sweep(resolve(sweep_o), sweep_o.out, std::cout, std::cerr, sweep_o.plot);
        if (check->parsed())
            return owcsim::run_scene_check(resolve(check_o), std::cout);
    }
    catch (std::exception const &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
