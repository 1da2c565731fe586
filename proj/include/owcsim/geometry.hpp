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

#ifndef OWCSIM_GEOMETRY_HPP
#define OWCSIM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace owcsim
{

// Error categories. Every failure the library reports is one of these.
struct invalid_parameter : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct degenerate_geometry : std::domain_error
{
    using std::domain_error::domain_error;
};

struct undefined_result : std::domain_error
{
    using std::domain_error::domain_error;
};

inline constexpr double speed_of_light = 2.9979e8;  // m/s, air
inline constexpr double electron_charge = 1.602e-19; // C

inline constexpr double deg2rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Cartesian point or displacement in metres.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 &operator+=(Vec3 const &o) noexcept
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3 &operator-=(Vec3 const &o) noexcept
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3 &operator*=(double s) noexcept
    {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 const &b) noexcept { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 const &b) noexcept { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
    friend constexpr Vec3 operator-(Vec3 a) noexcept { return {-a.x, -a.y, -a.z}; }
    friend constexpr bool operator==(Vec3 const &, Vec3 const &) = default;
};

using Point3 = Vec3;

inline constexpr double dot(Vec3 const &a, Vec3 const &b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline constexpr Vec3 cross(Vec3 const &a, Vec3 const &b) noexcept
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 const &a) noexcept { return std::sqrt(dot(a, a)); }

/// Unit vector. Construction normalizes; a zero vector is rejected.
class Direction3
{
  public:
    constexpr Direction3() noexcept = default;

    explicit Direction3(Vec3 const &v)
    {
        double const n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n))
            throw degenerate_geometry("cannot normalize a zero-length direction");
        v_ = v * (1.0 / n);
    }

    Direction3(double x, double y, double z) : Direction3(Vec3{x, y, z}) {}

    constexpr Vec3 const &vec() const noexcept { return v_; }
    constexpr double x() const noexcept { return v_.x; }
    constexpr double y() const noexcept { return v_.y; }
    constexpr double z() const noexcept { return v_.z; }

    Direction3 operator-() const noexcept
    {
        Direction3 d;
        d.v_ = -v_;
        return d;
    }

    friend constexpr bool operator==(Direction3 const &, Direction3 const &) = default;

  private:
    Vec3 v_{0.0, 0.0, 1.0};
};

inline constexpr double dot(Direction3 const &a, Direction3 const &b) noexcept { return dot(a.vec(), b.vec()); }
inline constexpr double dot(Direction3 const &a, Vec3 const &b) noexcept { return dot(a.vec(), b); }

/// Angle between two unit vectors in radians, robust near 0 and pi.
inline double angle_between(Direction3 const &a, Direction3 const &b) noexcept
{
    double const c = dot(a, b);
    double const s = norm(cross(a.vec(), b.vec()));
    return std::atan2(s, c);
}

/// Axis-aligned box, used for rack occluders.
struct Box3
{
    Point3 lo;
    Point3 hi;

    friend constexpr bool operator==(Box3 const &, Box3 const &) = default;
};

// Slab test: true when the open segment (a, b) passes through the interior
// of the box. Endpoints lying on a face do not count as intersections.
inline bool segment_hits_box(Point3 const &a, Point3 const &b, Box3 const &box) noexcept
{
    constexpr double eps = 1e-9;
    double t0 = 0.0;
    double t1 = 1.0;
    double const ad[3] = {a.x, a.y, a.z};
    double const dd[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
    double const lo[3] = {box.lo.x + eps, box.lo.y + eps, box.lo.z + eps};
    double const hi[3] = {box.hi.x - eps, box.hi.y - eps, box.hi.z - eps};
    for (int k = 0; k < 3; ++k)
    {
        if (std::abs(dd[k]) < 1e-15)
        {
            if (ad[k] <= lo[k] || ad[k] >= hi[k])
                return false;
            continue;
        }
        double ta = (lo[k] - ad[k]) / dd[k];
        double tb = (hi[k] - ad[k]) / dd[k];
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 >= t1)
            return false;
    }
    return true;
}

} // namespace owcsim

#endif
