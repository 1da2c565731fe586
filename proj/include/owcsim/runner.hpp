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

// Subcommand drivers shared by the command-line tool and the tests.

#ifndef OWCSIM_RUNNER_HPP
#define OWCSIM_RUNNER_HPP

#include "owcsim/config.hpp"
#include "owcsim/linkmetrics.hpp"
#include "owcsim/raytracer.hpp"
#include "owcsim/receivers.hpp"
#include "owcsim/scene.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace owcsim
{

inline constexpr char const *metrics_header =
    "mount_x,mount_y,mount_z,receiver,delay_spread_s,bandwidth_hz,snr_sc_db,snr_mrc_db,ber,max_rate_bps";

namespace detail
{
inline std::string fmt_g(double v, int digits = 10)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string fmt_opt(std::optional<double> const &v) { return v ? fmt_g(*v) : std::string("inf"); }

inline PixelLayout layout_for(RunConfig const &cfg)
{
    if (cfg.pixel_layout.empty())
        return default_pixel_layout();
    std::ifstream in(cfg.pixel_layout);
    if (!in)
        throw config_error("[receiver] pixel_layout: cannot open '" + cfg.pixel_layout + "'");
    return read_pixel_layout(in);
}

inline void print_diagnostics(std::ostream &os, std::vector<Diagnostic> const &diags)
{
    os << diags.size() << " diagnostics\n";
    for (auto const &d : diags)
        os << "  " << d.str() << "\n";
}
} // namespace detail

/// One metrics CSV row.
inline std::string metrics_row(LinkReport const &rep)
{
    using detail::fmt_g;
    char ber[32];
    std::snprintf(ber, sizeof ber, "%.6e", rep.ber_mrc);
    return fmt_g(rep.mount.x) + "," + fmt_g(rep.mount.y) + "," + fmt_g(rep.mount.z) + "," + to_string(rep.kind) +
           "," + (rep.delay ? fmt_g(rep.delay->spread) : std::string("nan")) + "," + detail::fmt_opt(rep.bandwidth_hz) +
           "," + fmt_g(rep.snr_sc_db()) + "," + fmt_g(rep.snr_mrc_db()) + "," + ber + "," +
           detail::fmt_opt(rep.max_rate_bps);
}

inline std::string ir_filename(ReceiverKind kind, std::size_t mount, std::size_t branch)
{
    return std::string("ir_") + to_string(kind) + "_mount" + std::to_string(mount) + "_branch" +
           std::to_string(branch) + ".csv";
}

/// `check`: scene diagnostics, element counts and trace cost. Returns the
/// process exit code.
inline int run_scene_check(RunConfig const &cfg, std::ostream &out)
{
    Scene const scene = build_reference_pod(cfg.pod);
    auto const diags = validate_scene(scene);
    out << "scene check: ";
    detail::print_diagnostics(out, diags);
    out << "panels: " << scene.panels.size() << ", luminaires: " << scene.luminaires.size()
        << ", rows: " << scene.rows.size() << ", mounts: " << scene.mounts.size() << "\n";
    out << "surface area: " << detail::fmt_g(scene.total_surface_area()) << " m^2\n";
    if (!diags.empty())
        return 1;

    auto const fine = discretize(scene, cfg.trace.first_order_edge).size();
    auto const coarse = discretize(scene, cfg.trace.second_order_edge).size();
    out << "first-order elements: " << fine << " (edge " << detail::fmt_g(cfg.trace.first_order_edge) << " m)\n";
    out << "second-order elements: " << coarse << " (edge " << detail::fmt_g(cfg.trace.second_order_edge)
        << " m)\n";
    std::size_t branches = 0;
    for (auto kind : cfg.receiver_kinds())
        branches += make_receiver(kind, {0.0, 0.0, 0.0}, detail::layout_for(cfg)).size();
    double const per_branch = static_cast<double>(fine) + (cfg.trace.max_order >= 2
                                                               ? static_cast<double>(coarse) * static_cast<double>(coarse)
                                                               : 0.0);
    out << "estimated trace cost: " << detail::fmt_g(per_branch, 4) << " element pairs per branch x "
        << branches * scene.mounts.size() << " branches\n";
    return 0;
}

/// `simulate`: one IR file per branch per mount plus a summary line per
/// mount and receiver on `out`.
inline int run_simulate(RunConfig const &cfg, std::filesystem::path const &out_dir, std::ostream &out,
                        std::ostream &err)
{
    Scene const scene = build_reference_pod(cfg.pod);
    if (auto diags = validate_scene(scene); !diags.empty())
    {
        err << "invalid scene: ";
        detail::print_diagnostics(err, diags);
        return 1;
    }
    std::filesystem::create_directories(out_dir);
    ChannelTracer const tracer(scene, cfg.trace);
    auto const layout = detail::layout_for(cfg);
    for (std::size_t m = 0; m < scene.mounts.size(); ++m)
    {
        auto const &lums = scene.assignment[m];
        for (auto kind : cfg.receiver_kinds())
        {
            auto const rx = make_receiver(kind, scene.mounts[m], layout);
            auto const irs = tracer.trace_receiver(lums, rx);
            double total = 0.0;
            for (std::size_t k = 0; k < irs.size(); ++k)
            {
                std::ofstream f(out_dir / ir_filename(kind, m, k));
                write_ir_csv(f, irs[k]);
                if (!f)
                    throw std::runtime_error("failed writing " + (out_dir / ir_filename(kind, m, k)).string());
                total += total_received_power(irs[k]);
            }
            auto const rep = link_report(rx, irs, cfg.link_params());
            out << "mount " << m << " (" << detail::fmt_g(rx.mount.x) << ", " << detail::fmt_g(rx.mount.y) << ", "
                << detail::fmt_g(rx.mount.z) << ") " << to_string(kind) << ": total_power_w=" << detail::fmt_g(total)
                << " delay_spread_s=" << (rep.delay ? detail::fmt_g(rep.delay->spread) : std::string("nan")) << "\n";
        }
    }
    return 0;
}

/// Link reports along the row line of the sweep mount, position-major.
inline std::vector<LinkReport> sweep_reports(RunConfig const &cfg)
{
    if (!cfg.sweep)
        throw config_error("[sweep]: section required for a sweep");
    check_sweep(cfg);
    Scene const scene = build_reference_pod(cfg.pod);
    ChannelTracer const tracer(scene, cfg.trace);
    auto const layout = detail::layout_for(cfg);
    auto const &sw = *cfg.sweep;
    Point3 const base = scene.mounts.at(sw.mount);
    auto const &lums = scene.assignment.at(sw.mount);

    std::vector<LinkReport> reps;
    for (double y : sw.positions())
    {
        Point3 const mount{base.x, y, base.z};
        for (auto kind : cfg.receiver_kinds())
            reps.push_back(link_report(tracer, lums, make_receiver(kind, mount, layout), cfg.link_params()));
    }
    return reps;
}

inline void write_gnuplot_script(std::ostream &os, std::string const &csv_name)
{
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'y (m)'\n"
       << "set ylabel 'rms delay spread (s)'\n"
       << "set logscale y\n"
       << "plot for [k in \"wfov adr imaging\"] '" << csv_name
       << "' using 2:(strcol(4) eq k ? $5 : NaN) with linespoints title k\n";
}

/// `sweep`: writes `metrics.csv` (and `metrics.gp` when `plot` is set).
inline int run_sweep(RunConfig const &cfg, std::filesystem::path const &out_dir, std::ostream &out, std::ostream &err,
                     bool plot = false)
{
    try
    {
        if (!cfg.sweep)
            throw config_error("[sweep]: section required for a sweep");
        check_sweep(cfg);
    }
    catch (config_error const &e)
    {
        err << e.what() << "\n";
        return 1;
    }
    Scene const scene = build_reference_pod(cfg.pod);
    if (auto diags = validate_scene(scene); !diags.empty())
    {
        err << "invalid scene: ";
        detail::print_diagnostics(err, diags);
        return 1;
    }
    auto const reps = sweep_reports(cfg);
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir / "metrics.csv");
    f << metrics_header << "\n";
    for (auto const &r : reps)
        f << metrics_row(r) << "\n";
    if (!f)
        throw std::runtime_error("failed writing " + (out_dir / "metrics.csv").string());
    if (plot)
    {
        std::ofstream gp(out_dir / "metrics.gp");
        write_gnuplot_script(gp, "metrics.csv");
    }
    out << "sweep: " << reps.size() << " rows written to " << (out_dir / "metrics.csv").string() << "\n";
    return 0;
}

} // namespace owcsim

#endif
