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

// Sectioned key-value run configuration.
//
//   [room]       length width height communication_floor row_x row_y_min
//                row_y_max rack_top_height rack_depth racks_occluding
//   [surfaces]   ceiling_reflectance wall_reflectance floor_reflectance
//   [luminaires] power_w (required) semi_angle_deg diode_count positions
//   [receiver]   kind pixel_layout bit_rate_bps
//   [noise]      preamp_density background_current bandwidth_factor
//   [trace]      max_order first_order_edge second_order_edge bin_width_s
//                occlusion delay_weighting threads
//   [sweep]      mount start stop step
//
// Lists are comma separated; `positions` holds `x y z` triples separated
// by `;`. Comments start with `#` or `;` at the beginning of a line.

#ifndef OWCSIM_CONFIG_HPP
#define OWCSIM_CONFIG_HPP

#include "owcsim/linkmetrics.hpp"
#include "owcsim/raytracer.hpp"
#include "owcsim/receivers.hpp"
#include "owcsim/scene.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace owcsim
{

struct config_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct SweepSpec
{
    std::size_t mount = 1;
    double start = 1.0;
    double stop = 7.0;
    double step = 0.5;

    std::vector<double> positions() const
    {
        std::vector<double> out;
        auto const n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
        for (std::size_t k = 0; k <= n; ++k)
            out.push_back(start + static_cast<double>(k) * step);
        return out;
    }

    friend bool operator==(SweepSpec const &, SweepSpec const &) = default;
};

struct RunConfig
{
    PodConfig pod;
    std::string receiver = "adr"; // wfov | adr | imaging | all
    std::string pixel_layout;     // optional CSV override
    double bit_rate = 1e9;
    NoiseParams noise;
    TraceConfig trace;
    DelayWeighting weighting = DelayWeighting::power_squared;
    std::optional<SweepSpec> sweep;

    std::vector<ReceiverKind> receiver_kinds() const
    {
        if (receiver == "all")
            return {ReceiverKind::wfov, ReceiverKind::adr, ReceiverKind::imaging};
        if (auto k = parse_receiver_kind(receiver))
            return {*k};
        throw config_error("[receiver] kind: unknown receiver '" + receiver + "'");
    }

    LinkParams link_params() const { return {bit_rate, noise, weighting}; }

    friend bool operator==(RunConfig const &, RunConfig const &) = default;
};

namespace detail
{
inline std::string trim(std::string_view s)
{
    auto const b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto const e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string const &s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep))
        out.push_back(trim(item));
    return out;
}

struct Entry
{
    std::string value;
    std::size_t line = 0;
};

class EntryReader
{
  public:
    EntryReader(std::string section, std::string key, Entry const &e)
        : where_("[" + std::move(section) + "] " + std::move(key) + " (line " + std::to_string(e.line) + ")"),
          value_(e.value)
    {
    }

    double number() const { return parse_number(value_); }

    std::size_t count() const
    {
        double const v = number();
        if (v < 0.0 || v != std::floor(v))
            fail("expects a non-negative integer, got '" + value_ + "'");
        return static_cast<std::size_t>(v);
    }

    bool boolean() const
    {
        if (value_ == "true" || value_ == "yes" || value_ == "1")
            return true;
        if (value_ == "false" || value_ == "no" || value_ == "0")
            return false;
        fail("expects true or false, got '" + value_ + "'");
        return false;
    }

    std::vector<double> numbers() const
    {
        std::vector<double> out;
        for (auto const &item : split(value_, ','))
            out.push_back(parse_number(item));
        return out;
    }

    std::vector<Point3> points() const
    {
        std::vector<Point3> out;
        for (auto const &triple : split(value_, ';'))
        {
            if (triple.empty())
                continue;
            std::istringstream is(triple);
            std::string a, b, c, extra;
            if (!(is >> a >> b >> c) || (is >> extra))
                fail("expects 'x y z' triples separated by ';', got '" + triple + "'");
            out.push_back({parse_number(a), parse_number(b), parse_number(c)});
        }
        return out;
    }

    std::string const &text() const { return value_; }

    [[noreturn]] void fail(std::string const &msg) const { throw config_error(where_ + ": " + msg); }

  private:
    double parse_number(std::string const &s) const
    {
        double v = 0.0;
        auto const *first = s.data();
        auto const *last = s.data() + s.size();
        auto const res = std::from_chars(first, last, v);
        if (s.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
            fail("expects a number, got '" + s + "'");
        return v;
    }

    std::string where_;
    std::string value_;
};

inline std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace detail

/// Sweep bounds must lie on the chosen row line inside the room.
inline void check_sweep(RunConfig const &cfg)
{
    if (!cfg.sweep)
        return;
    auto const &sw = *cfg.sweep;
    if (!(sw.step > 0.0))
        throw config_error("[sweep] step: must be positive");
    if (!(sw.start <= sw.stop))
        throw config_error("[sweep] start: must not exceed stop");
    if (sw.start < 0.0 || sw.stop > cfg.pod.room.width)
        throw config_error("[sweep] start/stop: range leaves the room (y in [0, " +
                           detail::fmt_double(cfg.pod.room.width) + "])");
    if (sw.mount >= cfg.pod.row_x.size())
        throw config_error("[sweep] mount: no receiver mount with index " + std::to_string(sw.mount));
}

/// Parses and validates a configuration text. Omitted optional keys keep
/// their defaults; unknown sections and keys are rejected.
inline RunConfig parse_config(std::string const &text)
{
    using detail::Entry;
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        std::string const line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) + ": malformed section header");
            current = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        if (current.empty())
            throw config_error("line " + std::to_string(lineno) + ": key outside of any section");
        std::string const key = detail::trim(std::string_view(line).substr(0, eq));
        std::string const value = detail::trim(std::string_view(line).substr(eq + 1));
        auto &sec = sections[current];
        if (sec.count(key))
            throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + current +
                               "]");
        sec[key] = {value, lineno};
    }

    static std::map<std::string, std::set<std::string>> const schema = {
        {"room",
         {"length", "width", "height", "communication_floor", "row_x", "row_y_min", "row_y_max", "rack_top_height",
          "rack_depth", "racks_occluding"}},
        {"surfaces", {"ceiling_reflectance", "wall_reflectance", "floor_reflectance"}},
        {"luminaires", {"power_w", "semi_angle_deg", "diode_count", "positions"}},
        {"receiver", {"kind", "pixel_layout", "bit_rate_bps"}},
        {"noise", {"preamp_density", "background_current", "bandwidth_factor"}},
        {"trace",
         {"max_order", "first_order_edge", "second_order_edge", "bin_width_s", "occlusion", "delay_weighting",
          "threads"}},
        {"sweep", {"mount", "start", "stop", "step"}},
    };
    for (auto const &[name, entries] : sections)
    {
        auto const it = schema.find(name);
        if (it == schema.end())
        {
            throw config_error("unknown section [" + name + "]");
        }
        for (auto const &[key, e] : entries)
        {
            if (!it->second.count(key))
                throw config_error("unknown key '" + key + "' in section [" + name + "] (line " +
                                   std::to_string(e.line) + ")");
        }
    }

    auto get = [&](char const *sec, char const *key) -> std::optional<detail::EntryReader> {
        auto const s = sections.find(sec);
        if (s == sections.end())
            return std::nullopt;
        auto const k = s->second.find(key);
        if (k == s->second.end())
            return std::nullopt;
        return detail::EntryReader(sec, key, k->second);
    };

    RunConfig cfg;
    auto &pod = cfg.pod;
    if (auto e = get("room", "length"))
        pod.room.length = e->number();
    if (auto e = get("room", "width"))
        pod.room.width = e->number();
    if (auto e = get("room", "height"))
        pod.room.height = e->number();
    if (auto e = get("room", "communication_floor"))
        pod.communication_floor = e->number();
    if (auto e = get("room", "row_x"))
        pod.row_x = e->numbers();
    if (auto e = get("room", "row_y_min"))
        pod.row_y_min = e->number();
    if (auto e = get("room", "row_y_max"))
        pod.row_y_max = e->number();
    if (auto e = get("room", "rack_top_height"))
        pod.rack_top_height = e->number();
    if (auto e = get("room", "rack_depth"))
        pod.rack_depth = e->number();
    if (auto e = get("room", "racks_occluding"))
        pod.racks_occluding = e->boolean();

    if (auto e = get("surfaces", "ceiling_reflectance"))
        pod.ceiling_reflectance = e->number();
    if (auto e = get("surfaces", "wall_reflectance"))
        pod.wall_reflectance = e->number();
    if (auto e = get("surfaces", "floor_reflectance"))
        pod.floor_reflectance = e->number();

    if (auto e = get("luminaires", "power_w"))
        pod.luminaire_power_w = e->number();
    else
        throw config_error("[luminaires] power_w: required key missing");
    if (auto e = get("luminaires", "semi_angle_deg"))
        pod.semi_angle_deg = e->number();
    if (auto e = get("luminaires", "diode_count"))
        pod.diode_count = static_cast<int>(e->count());
    if (auto e = get("luminaires", "positions"))
        pod.luminaire_positions = e->points();

    if (auto e = get("receiver", "kind"))
    {
        if (e->text() != "all" && !parse_receiver_kind(e->text()))
            e->fail("expects wfov, adr, imaging or all, got '" + e->text() + "'");
        cfg.receiver = e->text();
    }
    if (auto e = get("receiver", "pixel_layout"))
        cfg.pixel_layout = e->text();
    if (auto e = get("receiver", "bit_rate_bps"))
    {
        cfg.bit_rate = e->number();
        if (!(cfg.bit_rate > 0.0))
            e->fail("bit rate must be positive");
    }

    if (auto e = get("noise", "preamp_density"))
        cfg.noise.preamp_density = e->number();
    if (auto e = get("noise", "background_current"))
        cfg.noise.background_current = e->number();
    if (auto e = get("noise", "bandwidth_factor"))
    {
        cfg.noise.bandwidth_factor = e->number();
        if (!(cfg.noise.bandwidth_factor > 0.0))
            e->fail("bandwidth factor must be positive");
    }
    if (cfg.noise.preamp_density < 0.0 || cfg.noise.background_current < 0.0)
        throw config_error("[noise]: noise parameters must be non-negative");

    if (auto e = get("trace", "max_order"))
    {
        auto const n = e->count();
        if (n > 2)
            e->fail("expects 0, 1 or 2");
        cfg.trace.max_order = static_cast<int>(n);
    }
    if (auto e = get("trace", "first_order_edge"))
        cfg.trace.first_order_edge = e->number();
    if (auto e = get("trace", "second_order_edge"))
        cfg.trace.second_order_edge = e->number();
    if (auto e = get("trace", "bin_width_s"))
        cfg.trace.bin_width = e->number();
    if (auto e = get("trace", "occlusion"))
        cfg.trace.occlusion = e->boolean();
    if (auto e = get("trace", "threads"))
        cfg.trace.threads = static_cast<unsigned>(e->count());
    if (auto e = get("trace", "delay_weighting"))
    {
        if (e->text() == "power_squared")
            cfg.weighting = DelayWeighting::power_squared;
        else if (e->text() == "power")
            cfg.weighting = DelayWeighting::power;
        else
            e->fail("expects power_squared or power, got '" + e->text() + "'");
    }
    try
    {
        check_trace_config(cfg.trace);
    }
    catch (invalid_parameter const &ex)
    {
        throw config_error(std::string("[trace]: ") + ex.what());
    }

    if (sections.count("sweep"))
    {
        SweepSpec sw;
        if (auto e = get("sweep", "mount"))
            sw.mount = e->count();
        if (auto e = get("sweep", "start"))
            sw.start = e->number();
        if (auto e = get("sweep", "stop"))
            sw.stop = e->number();
        if (auto e = get("sweep", "step"))
            sw.step = e->number();
        cfg.sweep = sw;
    }
    check_sweep(cfg);
    return cfg;
}

inline RunConfig load_config(std::string const &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Writes every key, so that parse_config(serialize_config(c)) == c.
inline std::string serialize_config(RunConfig const &c)
{
    using detail::fmt_double;
    auto list = [](std::vector<double> const &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ", " : "") + fmt_double(v[i]);
        return s;
    };
    auto const &p = c.pod;
    std::ostringstream os;
    os << "[room]\n"
       << "length = " << fmt_double(p.room.length) << "\n"
       << "width = " << fmt_double(p.room.width) << "\n"
       << "height = " << fmt_double(p.room.height) << "\n"
       << "communication_floor = " << fmt_double(p.communication_floor) << "\n"
       << "row_x = " << list(p.row_x) << "\n"
       << "row_y_min = " << fmt_double(p.row_y_min) << "\n"
       << "row_y_max = " << fmt_double(p.row_y_max) << "\n"
       << "rack_top_height = " << fmt_double(p.rack_top_height) << "\n"
       << "rack_depth = " << fmt_double(p.rack_depth) << "\n"
       << "racks_occluding = " << (p.racks_occluding ? "true" : "false") << "\n\n";
    os << "[surfaces]\n"
       << "ceiling_reflectance = " << fmt_double(p.ceiling_reflectance) << "\n"
       << "wall_reflectance = " << fmt_double(p.wall_reflectance) << "\n"
       << "floor_reflectance = " << fmt_double(p.floor_reflectance) << "\n\n";
    os << "[luminaires]\n"
       << "power_w = " << fmt_double(p.luminaire_power_w) << "\n"
       << "semi_angle_deg = " << fmt_double(p.semi_angle_deg) << "\n"
       << "diode_count = " << p.diode_count << "\n"
       << "positions = ";
    for (std::size_t i = 0; i < p.luminaire_positions.size(); ++i)
    {
        auto const &q = p.luminaire_positions[i];
        os << (i ? "; " : "") << fmt_double(q.x) << " " << fmt_double(q.y) << " " << fmt_double(q.z);
    }
    os << "\n\n";
    os << "[receiver]\n"
       << "kind = " << c.receiver << "\n";
    if (!c.pixel_layout.empty())
        os << "pixel_layout = " << c.pixel_layout << "\n";
    os << "bit_rate_bps = " << fmt_double(c.bit_rate) << "\n\n";
    os << "[noise]\n"
       << "preamp_density = " << fmt_double(c.noise.preamp_density) << "\n"
       << "background_current = " << fmt_double(c.noise.background_current) << "\n"
       << "bandwidth_factor = " << fmt_double(c.noise.bandwidth_factor) << "\n\n";
    os << "[trace]\n"
       << "max_order = " << c.trace.max_order << "\n"
       << "first_order_edge = " << fmt_double(c.trace.first_order_edge) << "\n"
       << "second_order_edge = " << fmt_double(c.trace.second_order_edge) << "\n"
       << "bin_width_s = " << fmt_double(c.trace.bin_width) << "\n"
       << "occlusion = " << (c.trace.occlusion ? "true" : "false") << "\n"
       << "delay_weighting = " << (c.weighting == DelayWeighting::power ? "power" : "power_squared") << "\n"
       << "threads = " << c.trace.threads << "\n";
    if (c.sweep)
    {
        os << "\n[sweep]\n"
           << "mount = " << c.sweep->mount << "\n"
           << "start = " << fmt_double(c.sweep->start) << "\n"
           << "stop = " << fmt_double(c.sweep->stop) << "\n"
           << "step = " << fmt_double(c.sweep->step) << "\n";
    }
    return os.str();
}

} // namespace owcsim

#endif
