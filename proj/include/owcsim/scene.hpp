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

#ifndef OWCSIM_SCENE_HPP
#define OWCSIM_SCENE_HPP

#include "owcsim/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace owcsim
{

enum class SurfaceKind
{
    ceiling,
    wall,
    floor
};

inline char const *to_string(SurfaceKind k) noexcept
{
    switch (k)
    {
    case SurfaceKind::ceiling: return "ceiling";
    case SurfaceKind::wall: return "wall";
    case SurfaceKind::floor: return "floor";
    }
    return "?";
}

/// Rectangular reflecting surface spanned by two orthogonal edge vectors.
struct SurfacePanel
{
    std::string name;
    Point3 origin;
    Vec3 u;
    Vec3 v;
    Direction3 normal; // points into the room
    double reflectance = 0.0;
    SurfaceKind kind = SurfaceKind::wall;

    double area() const noexcept { return norm(cross(u, v)); }
};

/// One cell of a discretized panel, emitting as a first-order Lambertian.
struct SurfaceElement
{
    Point3 centre;
    Direction3 normal;
    double area = 0.0;
    double reflectance = 0.0;
    double order = 1.0;
    std::size_t panel = 0;
};

struct Luminaire
{
    Point3 position;
    Direction3 boresight{0.0, 0.0, -1.0};
    double semi_angle_deg = 70.0;
    double order = 1.0; // Lambertian order, derived from semi_angle_deg
    double power_w = 1.0;
    int diode_count = 16;
};

struct RackRow
{
    double centre_x = 0.0;
    double y_min = 1.0;
    double y_max = 7.0;
    double top_height = 2.0;
    double depth = 1.2; // extent across x, only used for occlusion
    bool occluding = false;

    Box3 box() const noexcept
    {
        return {{centre_x - 0.5 * depth, y_min, 0.0}, {centre_x + 0.5 * depth, y_max, top_height}};
    }
};

struct RoomDims
{
    double length = 8.0; // x
    double width = 8.0;  // y
    double height = 3.0; // z

    friend constexpr bool operator==(RoomDims const &, RoomDims const &) = default;
};

struct Scene
{
    RoomDims room;
    double communication_floor = 0.25;
    std::vector<SurfacePanel> panels;
    std::vector<Luminaire> luminaires;
    std::vector<RackRow> rows;
    std::vector<Point3> mounts;
    // mount index -> luminaire indices carrying that mount's data
    std::vector<std::vector<std::size_t>> assignment;

    bool contains(Point3 const &p, double tol = 1e-9) const noexcept
    {
        return p.x >= -tol && p.x <= room.length + tol && p.y >= -tol && p.y <= room.width + tol && p.z >= -tol &&
               p.z <= room.height + tol;
    }

    double total_surface_area() const noexcept
    {
        double a = 0.0;
        for (auto const &p : panels)
            a += p.area();
        return a;
    }
};

/// Lambertian order m that halves the radiant intensity at `semi_angle_deg`.
inline double lambertian_order(double semi_angle_deg)
{
    if (!(semi_angle_deg > 0.0 && semi_angle_deg < 90.0))
        throw invalid_parameter("semi-angle must lie in (0, 90) degrees, got " + std::to_string(semi_angle_deg));
    return -std::log(2.0) / std::log(std::cos(deg2rad(semi_angle_deg)));
}

/// Inputs for the three-row pod. Defaults reproduce the reference pod.
struct PodConfig
{
    RoomDims room;
    double communication_floor = 0.25;
    double ceiling_reflectance = 0.8;
    double wall_reflectance = 0.8;
    double floor_reflectance = 0.3;

    std::vector<Point3> luminaire_positions = {
        {1.8, 2.0, 3.0}, {1.8, 4.0, 3.0}, {1.8, 6.0, 3.0}, {4.0, 2.0, 3.0}, {4.0, 4.0, 3.0},
        {4.0, 6.0, 3.0}, {6.2, 2.0, 3.0}, {6.2, 4.0, 3.0}, {6.2, 6.0, 3.0},
    };
    double semi_angle_deg = 70.0;
    int diode_count = 16;
    double luminaire_power_w = 1.0;

    std::vector<double> row_x = {1.8, 4.0, 6.2};
    double row_y_min = 1.0;
    double row_y_max = 7.0;
    double rack_top_height = 2.0;
    double rack_depth = 1.2;
    bool racks_occluding = false;

    friend bool operator==(PodConfig const &, PodConfig const &) = default;
};

/// Six axis-aligned panels of a shoebox room with inward normals.
inline std::vector<SurfacePanel> room_panels(RoomDims const &r, double ceiling_rho, double wall_rho, double floor_rho)
{
    double const L = r.length, W = r.width, H = r.height;
    return {
        {"floor", {0, 0, 0}, {L, 0, 0}, {0, W, 0}, Direction3{0, 0, 1}, floor_rho, SurfaceKind::floor},
        {"ceiling", {0, 0, H}, {L, 0, 0}, {0, W, 0}, Direction3{0, 0, -1}, ceiling_rho, SurfaceKind::ceiling},
        {"wall_x0", {0, 0, 0}, {0, W, 0}, {0, 0, H}, Direction3{1, 0, 0}, wall_rho, SurfaceKind::wall},
        {"wall_xL", {L, 0, 0}, {0, W, 0}, {0, 0, H}, Direction3{-1, 0, 0}, wall_rho, SurfaceKind::wall},
        {"wall_y0", {0, 0, 0}, {L, 0, 0}, {0, 0, H}, Direction3{0, 1, 0}, wall_rho, SurfaceKind::wall},
        {"wall_yW", {0, W, 0}, {L, 0, 0}, {0, 0, H}, Direction3{0, -1, 0}, wall_rho, SurfaceKind::wall},
    };
}

/// Builds the pod: panels, luminaires, rack rows, one receiver mount at the
/// top centre of each row, and the luminaires sharing each row's x.
inline Scene build_reference_pod(PodConfig const &cfg)
{
    Scene s;
    s.room = cfg.room;
    s.communication_floor = cfg.communication_floor;
    s.panels = room_panels(cfg.room, cfg.ceiling_reflectance, cfg.wall_reflectance, cfg.floor_reflectance);

    // An out-of-range semi-angle is left for validate_scene to report.
    double const m = (cfg.semi_angle_deg > 0.0 && cfg.semi_angle_deg < 90.0) ? lambertian_order(cfg.semi_angle_deg)
                                                                             : 0.0;
    for (auto const &p : cfg.luminaire_positions)
    {
        Luminaire l;
        l.position = p;
        l.semi_angle_deg = cfg.semi_angle_deg;
        l.order = m;
        l.power_w = cfg.luminaire_power_w;
        l.diode_count = cfg.diode_count;
        s.luminaires.push_back(l);
    }

    for (double x : cfg.row_x)
    {
        RackRow row;
        row.centre_x = x;
        row.y_min = cfg.row_y_min;
        row.y_max = cfg.row_y_max;
        row.top_height = cfg.rack_top_height;
        row.depth = cfg.rack_depth;
        row.occluding = cfg.racks_occluding;
        s.rows.push_back(row);

        s.mounts.push_back({x, 0.5 * (cfg.row_y_min + cfg.row_y_max), cfg.rack_top_height});
        std::vector<std::size_t> assigned;
        for (std::size_t i = 0; i < s.luminaires.size(); ++i)
        {
            if (std::abs(s.luminaires[i].position.x - x) < 1e-9)
                assigned.push_back(i);
        }
        s.assignment.push_back(std::move(assigned));
    }
    return s;
}

/// Tiles a panel into a regular grid of cells with the requested edge. When
/// the edge does not divide a panel side, the cell count along that side is
/// rounded to the nearest integer and the cell stretched to tile exactly.
inline std::vector<SurfaceElement> discretize(SurfacePanel const &panel, double element_edge,
                                              std::size_t panel_index = 0)
{
    if (!(element_edge > 0.0) || !std::isfinite(element_edge))
        throw invalid_parameter("element edge must be positive");

    double const lu = norm(panel.u);
    double const lv = norm(panel.v);
    auto cells = [element_edge](double len) {
        auto n = static_cast<std::size_t>(std::llround(len / element_edge));
        return n == 0 ? std::size_t{1} : n;
    };
    std::size_t const nu = cells(lu);
    std::size_t const nv = cells(lv);
    Vec3 const du = panel.u * (1.0 / static_cast<double>(nu));
    Vec3 const dv = panel.v * (1.0 / static_cast<double>(nv));
    double const da = norm(cross(du, dv));

    std::vector<SurfaceElement> out;
    out.reserve(nu * nv);
    for (std::size_t i = 0; i < nu; ++i)
    {
        for (std::size_t j = 0; j < nv; ++j)
        {
            SurfaceElement e;
            e.centre = panel.origin + du * (static_cast<double>(i) + 0.5) + dv * (static_cast<double>(j) + 0.5);
            e.normal = panel.normal;
            e.area = da;
            e.reflectance = panel.reflectance;
            e.order = 1.0;
            e.panel = panel_index;
            out.push_back(e);
        }
    }
    return out;
}

/// Discretizes every panel of the scene independently.
inline std::vector<SurfaceElement> discretize(Scene const &scene, double element_edge)
{
    std::vector<SurfaceElement> all;
    for (std::size_t p = 0; p < scene.panels.size(); ++p)
    {
        auto part = discretize(scene.panels[p], element_edge, p);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

struct Diagnostic
{
    std::string entity;
    std::string message;

    std::string str() const { return entity + ": " + message; }
};

inline std::vector<Diagnostic> validate_scene(Scene const &s)
{
    std::vector<Diagnostic> out;
    auto report = [&out](std::string entity, std::string msg) { out.push_back({std::move(entity), std::move(msg)}); };

    if (!(s.room.length > 0 && s.room.width > 0 && s.room.height > 0))
        report("room", "non-positive dimensions");
    if (!(s.communication_floor >= 0.0 && s.communication_floor < s.room.height))
        report("room", "communication floor outside room height");

    for (auto const &p : s.panels)
    {
        std::string const who = "panel " + p.name;
        if (!(p.reflectance >= 0.0 && p.reflectance <= 1.0))
            report(who, "reflectance out of range");
        double const lu = norm(p.u), lv = norm(p.v);
        if (!(lu > 0.0 && lv > 0.0))
        {
            report(who, "degenerate edges");
            continue;
        }
        if (std::abs(dot(p.u, p.v)) > 1e-9 * lu * lv)
            report(who, "edges not orthogonal");
        if (std::abs(dot(p.normal, p.u)) > 1e-9 * lu || std::abs(dot(p.normal, p.v)) > 1e-9 * lv)
            report(who, "normal not perpendicular to edges");
    }

    for (std::size_t i = 0; i < s.luminaires.size(); ++i)
    {
        auto const &l = s.luminaires[i];
        std::string const who = "luminaire " + std::to_string(i);
        if (!s.contains(l.position))
            report(who, "outside room");
        if (!(l.semi_angle_deg > 0.0 && l.semi_angle_deg < 90.0))
            report(who, "semi-angle out of range");
        else if (std::abs(l.order - lambertian_order(l.semi_angle_deg)) > 1e-9)
            report(who, "Lambertian order inconsistent with semi-angle");
        if (!(l.order > 0.0))
            report(who, "non-positive Lambertian order");
        if (!(l.power_w > 0.0))
            report(who, "non-positive optical power");
        if (l.diode_count < 1)
            report(who, "diode count below one");
    }

    for (std::size_t i = 0; i < s.rows.size(); ++i)
    {
        auto const &r = s.rows[i];
        std::string const who = "row " + std::to_string(i);
        if (!(r.top_height < s.room.height))
            report(who, "rack top at or above ceiling");
        if (!(r.top_height > s.communication_floor))
            report(who, "rack top at or below communication floor");
        if (!(r.y_min < r.y_max))
            report(who, "empty y extent");
        if (r.centre_x < 0.0 || r.centre_x > s.room.length || r.y_min < 0.0 || r.y_max > s.room.width)
            report(who, "outside room");
    }

    if (s.assignment.size() != s.mounts.size())
        report("assignment", "mount count and assignment count differ");
    for (std::size_t i = 0; i < s.mounts.size(); ++i)
    {
        std::string const who = "mount " + std::to_string(i);
        if (!s.contains(s.mounts[i]))
            report(who, "outside room");
        else if (!(s.mounts[i].z > s.communication_floor))
            report(who, "below communication floor");
        if (i >= s.assignment.size())
            continue;
        if (s.assignment[i].empty())
            report(who, "no luminaires assigned");
        for (std::size_t li : s.assignment[i])
        {
            if (li >= s.luminaires.size())
            {
                report(who, "assigned luminaire index " + std::to_string(li) + " does not exist");
                continue;
            }
            auto const &lp = s.luminaires[li].position;
            if (std::abs(lp.x - s.mounts[i].x) > 1e-9)
                report(who, "assigned luminaire " + std::to_string(li) + " not above the row");
            if (!(lp.z > s.mounts[i].z))
                report(who, "assigned luminaire " + std::to_string(li) + " not above the mount");
        }
    }
    return out;
}

} // namespace owcsim

#endif
