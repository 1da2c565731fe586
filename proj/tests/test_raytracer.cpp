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

#include "oracles.hpp"
#include "owcsim/raytracer.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace owcsim;
using Catch::Approx;

namespace
{

Luminaire down_lum(Point3 p, double semi_angle = 60.0)
{
    Luminaire l;
    l.position = p;
    l.semi_angle_deg = semi_angle;
    l.order = lambertian_order(semi_angle);
    return l;
}

// 4 x 4 x 3 room whose only surface is a 1 m^2 floor patch centred at (2, 2).
Scene single_patch_scene(double rho)
{
    Scene s;
    s.room = {4.0, 4.0, 3.0};
    SurfacePanel p;
    p.name = "patch";
    p.origin = {1.5, 1.5, 0.0};
    p.u = {1.0, 0.0, 0.0};
    p.v = {0.0, 1.0, 0.0};
    p.normal = Direction3{0.0, 0.0, 1.0};
    p.reflectance = rho;
    p.kind = SurfaceKind::floor;
    s.panels.push_back(p);
    s.luminaires.push_back(down_lum({2.0, 2.0, 3.0}, 70.0));
    return s;
}

TraceConfig first_only(double edge)
{
    TraceConfig c;
    c.max_order = 1;
    c.first_order_edge = edge;
    c.second_order_edge = edge;
    c.threads = 1;
    return c;
}

} // namespace

TEST_CASE("los_gain worked examples", "[raytracer]")
{
    DetectorSpec det; // face up, FOV 90, 4 mm^2
    det.fov_deg = 60.0;

    SECTION("on axis, m = 1, 1 m")
    {
        auto const l = down_lum({0.0, 0.0, 1.0}, 60.0);
        CHECK(los_gain(l, det, {0.0, 0.0, 0.0}) == Approx(4e-6 / std::numbers::pi).epsilon(1e-12));
        CHECK(los_gain(l, det, {0.0, 0.0, 0.0}) == Approx(1.27324e-6).epsilon(1e-5));
    }
    SECTION("just outside the FOV")
    {
        auto const l = down_lum({0.0, 0.0, 1.0}, 60.0);
        double const t = deg2rad(60.1);
        CHECK(los_gain(l, det, {std::tan(t), 0.0, 0.0}) == 0.0);
        double const inside = deg2rad(59.9);
        CHECK(los_gain(l, det, {std::tan(inside), 0.0, 0.0}) > 0.0);
    }
    SECTION("45 degree geometry at sqrt 2")
    {
        det.fov_deg = 90.0;
        auto const l = down_lum({0.0, 0.0, 1.0}, 60.0);
        // phi = theta = 45 deg, d^2 = 2
        double const expect = 2.0 / (2.0 * std::numbers::pi * 2.0) * std::cos(std::numbers::pi / 4) *
                              std::cos(std::numbers::pi / 4) * 4e-6;
        CHECK(los_gain(l, det, {1.0, 0.0, 0.0}) == Approx(expect).epsilon(1e-12));
        CHECK(los_gain(l, det, {1.0, 0.0, 0.0}) == Approx(3.1831e-7).epsilon(1e-4));
    }
    SECTION("coincident positions")
    {
        auto const l = down_lum({0.0, 0.0, 1.0}, 60.0);
        CHECK_THROWS_AS(los_gain(l, det, {0.0, 0.0, 1.0}), degenerate_geometry);
    }
    SECTION("behind the luminaire")
    {
        auto const l = down_lum({0.0, 0.0, 1.0}, 60.0);
        CHECK(los_gain(l, det, {0.0, 0.0, 2.0}) == 0.0);
    }
}

TEST_CASE("lambertian_hop reciprocity for order-1 emitters", "[raytracer][property]")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 200; ++i)
    {
        Point3 const a{u(rng), u(rng), u(rng)};
        Point3 const b{u(rng) + 3.0, u(rng), u(rng)};
        Direction3 const na{Vec3{u(rng), u(rng), u(rng)} + Vec3{1.0, 0.0, 0.0}};
        Direction3 const nb{Vec3{u(rng), u(rng), u(rng)} - Vec3{1.0, 0.0, 0.0}};
        double const area = 0.01;
        double const ab = lambertian_hop(a, na, 1.0, b, nb, area);
        double const ba = lambertian_hop(b, nb, 1.0, a, na, area);
        if (ab > 0.0)
            ++checked;
        CHECK(ab == Approx(ba).epsilon(1e-12).margin(1e-300));
    }
    CHECK(checked > 50);
}

TEST_CASE("reflected_path_gain worked examples", "[raytracer]")
{
    auto const lum = down_lum({0.0, 0.0, 1.0}, 60.0);
    DetectorSpec det;
    det.boresight = Direction3{0.0, 0.0, -1.0};
    det.fov_deg = 90.0;
    Point3 const det_pos{1.0, 0.0, 1.0};

    SurfaceElement e;
    e.centre = {0.5, 0.0, 0.0};
    e.normal = Direction3{0.0, 0.0, 1.0};
    e.area = 0.01;
    e.reflectance = 0.8;

    SECTION("zero reflectance gives zero")
    {
        SurfaceElement dark = e;
        dark.reflectance = 0.0;
        CHECK(reflected_path_gain(lum, std::span(&dark, 1), det, det_pos).gain == 0.0);
    }
    SECTION("mirror-symmetric elements contribute equally")
    {
        SurfaceElement l = e, r = e;
        l.centre = {0.5, 0.3, 0.0};
        r.centre = {0.5, -0.3, 0.0};
        double const gl = reflected_path_gain(lum, std::span(&l, 1), det, det_pos).gain;
        double const gr = reflected_path_gain(lum, std::span(&r, 1), det, det_pos).gain;
        REQUIRE(gl > 0.0);
        CHECK(gl == Approx(gr).epsilon(1e-12));
    }
    SECTION("matches the hop-by-hop oracle")
    {
        double const g = reflected_path_gain(lum, std::span(&e, 1), det, det_pos).gain;
        double const ref = oracle::one_bounce_gain({0, 0, 1}, {0, 0, -1}, 1.0L, {0.5L, 0, 0}, {0, 0, 1}, 0.01L, 0.8L,
                                                   {1, 0, 1}, {0, 0, -1}, 4e-6L);
        CHECK(g == Approx(ref).epsilon(1e-12));
    }
    SECTION("worked one-bounce example")
    {
        // 2.5e-3 m^2 floor element under the luminaire, detector 1 m across
        SurfaceElement f = e;
        f.centre = {0.0, 0.0, 0.0};
        f.area = 2.5e-3;
        double const g = reflected_path_gain(lum, std::span(&f, 1), det, det_pos).gain;
        double const ref = oracle::one_bounce_gain({0, 0, 1}, {0, 0, -1}, 1.0L, {0, 0, 0}, {0, 0, 1}, 2.5e-3L, 0.8L,
                                                   {1, 0, 1}, {0, 0, -1}, 4e-6L);
        CHECK(g == Approx(ref).epsilon(1e-12));
        // mpmath, 40 digits
        CHECK(g == Approx(2.0264236728467554e-10).epsilon(1e-12));
    }
    SECTION("delay is the path length over c")
    {
        auto const pg = reflected_path_gain(lum, std::span(&e, 1), det, det_pos);
        CHECK(pg.delay == Approx(2.0 * std::hypot(0.5, 1.0) / speed_of_light).epsilon(1e-14));
    }
    SECTION("two-element path applies both reflectances")
    {
        SurfaceElement w;
        w.centre = {0.5, 0.5, 0.5};
        w.normal = Direction3{0.0, -1.0, 0.0};
        w.area = 0.01;
        w.reflectance = 0.5;
        std::vector<SurfaceElement> path{e, w};
        double const g = reflected_path_gain(lum, path, det, det_pos).gain;
        double const hop1 = lambertian_hop(lum.position, lum.boresight, lum.order, e.centre, e.normal, e.area);
        double const hop2 = lambertian_hop(e.centre, e.normal, 1.0, w.centre, w.normal, w.area);
        double const last = los_gain(Luminaire{w.centre, w.normal, 60.0, 1.0, 1.0, 1}, det, det_pos);
        CHECK(g == Approx(hop1 * 0.8 * hop2 * 0.5 * last).epsilon(1e-12));
    }
    SECTION("path length limits")
    {
        std::vector<SurfaceElement> none;
        std::vector<SurfaceElement> three(3, e);
        CHECK_THROWS_AS(reflected_path_gain(lum, none, det, det_pos), invalid_parameter);
        CHECK_THROWS_AS(reflected_path_gain(lum, three, det, det_pos), invalid_parameter);
    }
}

TEST_CASE("delay_bin", "[raytracer]")
{
    CHECK(delay_bin(0.0, 5e-11) == 0);
    CHECK(delay_bin(3.0, 5e-11) == static_cast<std::size_t>(std::floor(3.0 / speed_of_light / 5e-11)));
    CHECK(delay_bin(3.0, 5e-11) == 200);
}

TEST_CASE("impulse response container", "[raytracer]")
{
    ImpulseResponse ir;
    CHECK(ir.empty());
    CHECK(total_received_power(ir) == 0.0);
    ir.add(4, 1e-6);
    ir.add(4, 1e-6);
    ir.add(7, 3e-6);
    CHECK_FALSE(ir.empty());
    CHECK(ir.bins.size() == 8);
    CHECK(total_received_power(ir) == Approx(5e-6));
    CHECK(total_received_power(ir.scaled(2.0)) == Approx(1e-5));
    CHECK(ir.bin_start(4) == Approx(2e-10));
    CHECK(ir.bin_centre(4) == Approx(2.25e-10));

    auto const r = rebin(ir, 2);
    CHECK(r.bin_width == Approx(1e-10));
    CHECK(r.bins.size() == 4);
    CHECK(r.bins[2] == Approx(2e-6));
    CHECK(r.bins[3] == Approx(3e-6));
    CHECK_THROWS_AS(rebin(ir, 0), invalid_parameter);
}

TEST_CASE("rebin conserves total power", "[raytracer][property]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> p(0.0, 1e-6);
    for (int t = 0; t < 50; ++t)
    {
        ImpulseResponse ir;
        for (int i = 0; i < 37 + t; ++i)
            ir.add(static_cast<std::size_t>(i), p(rng));
        for (std::size_t f : {1u, 2u, 3u, 7u, 64u})
            CHECK(total_received_power(rebin(ir, f)) == Approx(total_received_power(ir)).epsilon(1e-12));
    }
}

TEST_CASE("IR CSV dump", "[raytracer]")
{
    ImpulseResponse ir;
    ir.add(2, 0.5);
    ir.add(5, 0.25);
    std::ostringstream os;
    write_ir_csv(os, ir);
    CHECK(os.str() == "time_s,power_w\n1.000000000000e-10,0.5\n2.500000000000e-10,0.25\n");
}

TEST_CASE("zero reflectance leaves only line of sight", "[raytracer]")
{
    PodConfig cfg;
    cfg.ceiling_reflectance = 0.0;
    cfg.wall_reflectance = 0.0;
    cfg.floor_reflectance = 0.0;
    Scene const s = build_reference_pod(cfg);
    TraceConfig tc;
    tc.threads = 1;
    tc.second_order_edge = 0.4;
    ChannelTracer const tracer(s, tc);
    auto const rx = make_wfov(s.mounts[1]);
    auto const comp = tracer.trace_components(s.assignment[1], view_of(rx, 0));
    CHECK(comp.first.empty());
    CHECK(comp.second.empty());
    double expect = 0.0;
    for (std::size_t li : s.assignment[1])
        expect += s.luminaires[li].power_w * los_gain(s.luminaires[li], rx.branches[0], rx.mount);
    REQUIRE(expect > 0.0);
    CHECK(total_received_power(comp.total()) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("empty luminaire set gives an empty response", "[raytracer]")
{
    Scene const s = build_reference_pod({});
    TraceConfig tc;
    tc.max_order = 1;
    tc.threads = 1;
    ChannelTracer const tracer(s, tc);
    std::vector<std::size_t> none;
    CHECK(tracer.trace(none, view_of(make_wfov(s.mounts[0]), 0)).empty());
}

TEST_CASE("single patch scene matches the closed-form oracle", "[raytracer]")
{
    Scene const s = single_patch_scene(0.8);
    DetectorSpec det;
    det.boresight = Direction3{-1.0, 0.0, 0.0};
    det.fov_deg = 90.0;
    Point3 const pos{3.0, 2.0, 1.0};
    std::vector<std::size_t> lums{0};

    ChannelTracer const tracer(s, first_only(1.0));
    REQUIRE(tracer.first_order_elements() == 1);
    auto const comp = tracer.trace_components(lums, view_of(det, pos));

    oracle::Pose const pose{{3, 2, 1}, {-1, 0, 0}, 90.0L, 4e-6L};
    double const los = oracle::los_sum(s, lums, pose);
    long double const m = -std::log(2.0L) / std::log(std::cos(70.0L * oracle::pi_l / 180.0L));
    double const bounce =
        oracle::one_bounce_gain({2, 2, 3}, {0, 0, -1}, m, {2, 2, 0}, {0, 0, 1}, 1.0L, 0.8L, {3, 2, 1}, {-1, 0, 0}, 4e-6L);
    REQUIRE(los > 0.0);
    REQUIRE(bounce > 0.0);
    CHECK(total_received_power(comp.los) == Approx(los).epsilon(1e-12));
    CHECK(total_received_power(comp.first) == Approx(bounce).epsilon(1e-12));

    // each contribution lands in floor(path / c / w)
    std::size_t const los_bin = delay_bin(std::hypot(1.0, 2.0), tracer.config().bin_width);
    std::size_t const ref_bin = delay_bin(3.0 + std::hypot(1.0, 1.0), tracer.config().bin_width);
    CHECK(comp.los.bins.size() == los_bin + 1);
    CHECK(comp.los.bins[los_bin] > 0.0);
    REQUIRE(comp.first.bins.size() == ref_bin + 1);
    CHECK(comp.first.bins[ref_bin] == total_received_power(comp.first));
}

TEST_CASE("LOS matches the oracle at random poses", "[raytracer][property]")
{
    Scene const s = build_reference_pod({});
    TraceConfig tc;
    tc.max_order = 0;
    ChannelTracer const tracer(s, tc);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(0.2, 7.8), uz(0.3, 2.8), ua(0.0, 359.9), ue(10.0, 90.0),
        uf(10.0, 90.0);
    std::vector<std::size_t> all(s.luminaires.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    for (int t = 0; t < 20; ++t)
    {
        DetectorSpec det;
        det.boresight = Orientation{ua(rng), ue(rng)}.boresight();
        det.fov_deg = uf(rng);
        Point3 const pos{ux(rng), ux(rng), uz(rng)};
        double const got = total_received_power(tracer.trace(all, view_of(det, pos)));
        oracle::Pose const pose{oracle::from(pos), oracle::from(det.boresight.vec()), det.fov_deg, det.area};
        double const ref = oracle::los_sum(s, all, pose);
        CHECK(got == Approx(ref).epsilon(1e-12).margin(1e-30));
    }
}

TEST_CASE("surface power flow is bounded", "[raytracer][property]")
{
    Scene const s = build_reference_pod({});
    TraceConfig tc;
    tc.second_order_edge = 0.4;
    ChannelTracer const tracer(s, tc);
    for (std::size_t m = 0; m < s.mounts.size(); ++m)
    {
        double launched = 0.0;
        for (std::size_t li : s.assignment[m])
            launched += s.luminaires[li].power_w;
        auto const f = tracer.power_flow(s.assignment[m]);
        // midpoint quadrature slightly over-counts the floor directly below
        CHECK(f.first_incident <= launched * (1.0 + 1e-3));
        CHECK(f.first_incident > 0.9 * launched);
        CHECK(f.first_reflected <= 0.8 * f.first_incident);
        CHECK(f.second_incident <= 0.8 * f.first_incident);
    }
}

TEST_CASE("thread count does not change the result", "[raytracer][property]")
{
    Scene const s = build_reference_pod({});
    TraceConfig tc;
    tc.second_order_edge = 0.4;
    tc.threads = 1;
    ChannelTracer const one(s, tc);
    tc.threads = 4;
    ChannelTracer const four(s, tc);
    auto const rx = make_adr(s.mounts[0]);
    for (std::size_t k = 0; k < rx.size(); ++k)
        CHECK(one.trace(s.assignment[0], view_of(rx, k)) == four.trace(s.assignment[0], view_of(rx, k)));
}

TEST_CASE("occluding racks only remove power", "[raytracer]")
{
    Scene s = build_reference_pod({});
    TraceConfig tc;
    tc.max_order = 1;
    tc.threads = 1;
    DetectorSpec det;
    det.boresight = Direction3{1.0, 0.0, 0.0};
    det.fov_deg = 90.0;
    // beside the middle row looking across it, below its top
    Point3 const pos{2.9, 4.0, 1.0};
    std::vector<std::size_t> all(s.luminaires.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;

    double const open = total_received_power(ChannelTracer(s, tc).trace(all, view_of(det, pos)));
    for (auto &r : s.rows)
        r.occluding = true;
    tc.occlusion = true;
    double const shut = total_received_power(ChannelTracer(s, tc).trace(all, view_of(det, pos)));
    CHECK(shut < open);
    CHECK(shut > 0.0);
}

TEST_CASE("segment_hits_box", "[raytracer]")
{
    Box3 const b{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    CHECK(segment_hits_box({-1.0, 0.5, 0.5}, {2.0, 0.5, 0.5}, b));
    CHECK_FALSE(segment_hits_box({-1.0, 2.0, 0.5}, {2.0, 2.0, 0.5}, b));
    CHECK_FALSE(segment_hits_box({-1.0, 0.5, 0.5}, {-0.5, 0.5, 0.5}, b));
    // an endpoint resting on a face does not count
    CHECK_FALSE(segment_hits_box({0.5, 0.5, 1.0}, {0.5, 0.5, 3.0}, b));
}

TEST_CASE("tracer rejects bad inputs", "[raytracer]")
{
    Scene const s = build_reference_pod({});
    TraceConfig tc;
    tc.max_order = 3;
    CHECK_THROWS_AS(ChannelTracer(s, tc), invalid_parameter);
    tc.max_order = 0;
    tc.bin_width = 0.0;
    CHECK_THROWS_AS(ChannelTracer(s, tc), invalid_parameter);

    PodConfig bad;
    bad.wall_reflectance = 1.2;
    Scene const sb = build_reference_pod(bad);
    CHECK_THROWS_AS(ChannelTracer(sb, TraceConfig{}), scene_error);

    TraceConfig ok;
    ok.max_order = 0;
    ChannelTracer const tracer(s, ok);
    std::vector<std::size_t> lums{0};
    CHECK_THROWS_AS(tracer.trace(lums, view_of(DetectorSpec{}, {4.0, 4.0, 0.1})), invalid_parameter);
    CHECK_THROWS_AS(tracer.trace(lums, view_of(DetectorSpec{}, {9.0, 4.0, 1.0})), invalid_parameter);
    std::vector<std::size_t> oob{42};
    CHECK_THROWS_AS(tracer.trace(oob, view_of(DetectorSpec{}, {4.0, 4.0, 1.0})), invalid_parameter);
}
