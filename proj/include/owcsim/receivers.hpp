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

#ifndef OWCSIM_RECEIVERS_HPP
#define OWCSIM_RECEIVERS_HPP

#include "owcsim/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace owcsim
{

struct invalid_layout : invalid_parameter
{
    using invalid_parameter::invalid_parameter;
};

struct invalid_receiver : invalid_parameter
{
    using invalid_parameter::invalid_parameter;
};

inline constexpr double detector_area_m2 = 4e-6;
inline constexpr double detector_responsivity = 0.4; // A/W

/// Single photodetector element.
struct DetectorSpec
{
    double area = detector_area_m2;
    double responsivity = detector_responsivity;
    Direction3 boresight{0.0, 0.0, 1.0};
    double fov_deg = 90.0; // half-angle
    bool lens = false;
};

/// Azimuth/elevation pair in degrees. Elevation is measured up from the
/// horizontal plane, azimuth counter-clockwise from +x.
struct Orientation
{
    double az_deg = 0.0;
    double el_deg = 90.0;

    Direction3 boresight() const
    {
        if (!(az_deg >= 0.0 && az_deg < 360.0) || !(el_deg >= 0.0 && el_deg <= 90.0))
            throw invalid_parameter("orientation out of range: az " + std::to_string(az_deg) + ", el " +
                                    std::to_string(el_deg));
        double const az = deg2rad(az_deg), el = deg2rad(el_deg);
        return Direction3{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
    }
};

/// Imaging lens: angle-dependent transmission over incidence Y (radians,
/// measured off the vertical lens axis), zero outside the acceptance cone.
struct LensModel
{
    double acceptance_deg = 65.0;
    std::array<double, 3> coeffs{-0.1982, 0.0425, 0.8778}; // Y^2, Y, 1

    double transmission(double y_rad) const
    {
        if (!(y_rad >= 0.0))
            throw invalid_parameter("lens incidence angle must be non-negative");
        if (y_rad > deg2rad(acceptance_deg))
            return 0.0;
        double const t = (coeffs[0] * y_rad + coeffs[1]) * y_rad + coeffs[2];
        return std::clamp(t, 0.0, 1.0);
    }
};

inline double lens_transmission(double y_rad, LensModel const &lens = {}) { return lens.transmission(y_rad); }

enum class ReceiverKind
{
    wfov,
    adr,
    imaging
};

inline char const *to_string(ReceiverKind k) noexcept
{
    switch (k)
    {
    case ReceiverKind::wfov: return "wfov";
    case ReceiverKind::adr: return "adr";
    case ReceiverKind::imaging: return "imaging";
    }
    return "?";
}

inline std::optional<ReceiverKind> parse_receiver_kind(std::string const &s)
{
    if (s == "wfov")
        return ReceiverKind::wfov;
    if (s == "adr")
        return ReceiverKind::adr;
    if (s == "imaging")
        return ReceiverKind::imaging;
    return std::nullopt;
}

struct ReceiverSpec
{
    ReceiverKind kind = ReceiverKind::wfov;
    Point3 mount;
    std::vector<DetectorSpec> branches;
    std::optional<LensModel> lens;

    std::size_t size() const noexcept { return branches.size(); }
};

inline ReceiverSpec make_wfov(Point3 const &mount)
{
    DetectorSpec d;
    d.boresight = Direction3{0.0, 0.0, 1.0};
    d.fov_deg = 70.0;
    return {ReceiverKind::wfov, mount, {d}, std::nullopt};
}

/// Three narrow branches: one facing up, two tilted to 25 degrees elevation
/// along +y and -y (the row axis).
inline ReceiverSpec make_adr(Point3 const &mount)
{
    constexpr Orientation orientations[] = {{0.0, 90.0}, {90.0, 25.0}, {270.0, 25.0}};
    ReceiverSpec r{ReceiverKind::adr, mount, {}, std::nullopt};
    for (auto const &o : orientations)
    {
        DetectorSpec d;
        d.boresight = o.boresight();
        d.fov_deg = 20.0;
        r.branches.push_back(d);
    }
    return r;
}

using PixelLayout = std::vector<Orientation>;

inline constexpr std::size_t imaging_pixel_count = 50;

/// Concentric rings of (1, 7, 14, 28) pixels at elevations (90, 73, 56, 39)
/// degrees, evenly spaced in azimuth starting at 0.
inline PixelLayout default_pixel_layout()
{
    constexpr int counts[] = {1, 7, 14, 28};
    constexpr double elevations[] = {90.0, 73.0, 56.0, 39.0};
    PixelLayout layout;
    for (int ring = 0; ring < 4; ++ring)
    {
        for (int k = 0; k < counts[ring]; ++k)
            layout.push_back({360.0 * k / counts[ring], elevations[ring]});
    }
    return layout;
}

/// Reads `pixel_index,az_deg,el_deg` rows. A leading header line is skipped.
inline PixelLayout read_pixel_layout(std::istream &in)
{
    PixelLayout layout;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ls(line);
        std::string idx, az, el;
        std::getline(ls, idx, ',');
        std::getline(ls, az, ',');
        std::getline(ls, el, ',');
        try
        {
            std::size_t pos = 0;
            auto const index = std::stoul(idx, &pos);
            if (index != layout.size())
                throw invalid_layout("pixel layout line " + std::to_string(lineno) + ": expected index " +
                                     std::to_string(layout.size()));
            layout.push_back({std::stod(az), std::stod(el)});
        }
        catch (std::invalid_argument const &e)
        {
            if (dynamic_cast<invalid_layout const *>(&e))
                throw;
            if (lineno == 1 && layout.empty())
                continue; // header
            throw invalid_layout("pixel layout line " + std::to_string(lineno) + ": malformed row");
        }
        catch (std::out_of_range const &)
        {
            throw invalid_layout("pixel layout line " + std::to_string(lineno) + ": value out of range");
        }
    }
    return layout;
}

inline ReceiverSpec make_imaging(Point3 const &mount, PixelLayout const &layout = default_pixel_layout())
{
    if (layout.size() != imaging_pixel_count)
        throw invalid_layout("imaging layout needs exactly 50 pixels, got " + std::to_string(layout.size()));
    LensModel const lens;
    Direction3 const axis{0.0, 0.0, 1.0};
    ReceiverSpec r{ReceiverKind::imaging, mount, {}, lens};
    for (std::size_t i = 0; i < layout.size(); ++i)
    {
        Direction3 b;
        try
        {
            b = layout[i].boresight();
        }
        catch (invalid_parameter const &e)
        {
            throw invalid_layout("pixel " + std::to_string(i) + ": " + e.what());
        }
        if (rad2deg(angle_between(b, axis)) > lens.acceptance_deg + 1e-9)
            throw invalid_layout("pixel " + std::to_string(i) + " points outside the lens acceptance cone");
        DetectorSpec d;
        d.boresight = b;
        d.fov_deg = 17.0;
        d.lens = true;
        r.branches.push_back(d);
    }
    return r;
}

inline ReceiverSpec make_receiver(ReceiverKind kind, Point3 const &mount,
                                  PixelLayout const &layout = default_pixel_layout())
{
    switch (kind)
    {
    case ReceiverKind::wfov: return make_wfov(mount);
    case ReceiverKind::adr: return make_adr(mount);
    case ReceiverKind::imaging: return make_imaging(mount, layout);
    }
    throw invalid_receiver("unknown receiver kind");
}

/// Fraction of power arriving along `incoming` (unit vector pointing from the
/// source toward the detector) that the element converts, per unit area:
/// cos(theta) inside the FOV, times lens transmission when a lens is given.
inline double detector_acceptance(DetectorSpec const &det, Direction3 const &incoming,
                                  LensModel const *lens = nullptr)
{
    Direction3 const look = -incoming;
    double const cos_theta = dot(look, det.boresight);
    if (!(cos_theta > 0.0))
        return 0.0;
    if (rad2deg(angle_between(look, det.boresight)) > det.fov_deg)
        return 0.0;
    double factor = cos_theta;
    if (lens)
    {
        double const y = angle_between(look, Direction3{0.0, 0.0, 1.0});
        factor *= lens->transmission(y);
    }
    return factor;
}

/// Pixel whose boresight is angularly closest to the arrival direction, or
/// none outside the lens cone. Ties within 1e-12 in cosine go to the lower
/// index.
inline std::optional<std::size_t> assign_pixel(ReceiverSpec const &rx, Direction3 const &incoming)
{
    if (rx.kind != ReceiverKind::imaging || !rx.lens)
        throw invalid_receiver(std::string("pixel assignment needs an imaging receiver, got ") + to_string(rx.kind));
    Direction3 const look = -incoming;
    if (rad2deg(angle_between(look, Direction3{0.0, 0.0, 1.0})) > rx.lens->acceptance_deg)
        return std::nullopt;
    std::optional<std::size_t> best;
    double best_cos = -2.0;
    for (std::size_t k = 0; k < rx.branches.size(); ++k)
    {
        double const c = dot(look, rx.branches[k].boresight);
        if (c > best_cos + 1e-12)
        {
            best_cos = c;
            best = k;
        }
    }
    return best;
}

/// Acceptance of branch `k` of a receiver, including the pixel routing of an
/// imaging receiver: a ray lands only on its assigned pixel.
inline double branch_acceptance(ReceiverSpec const &rx, std::size_t k, Direction3 const &incoming)
{
    auto const &det = rx.branches.at(k);
    if (rx.kind != ReceiverKind::imaging)
        return detector_acceptance(det, incoming, nullptr);
    double const a = detector_acceptance(det, incoming, rx.lens ? &*rx.lens : nullptr);
    if (a == 0.0)
        return 0.0;
    auto const pixel = assign_pixel(rx, incoming);
    return (pixel && *pixel == k) ? a : 0.0;
}

} // namespace owcsim

#endif
