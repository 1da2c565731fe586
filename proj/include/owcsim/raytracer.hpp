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

#ifndef OWCSIM_RAYTRACER_HPP
#define OWCSIM_RAYTRACER_HPP

#include "owcsim/geometry.hpp"
#include "owcsim/parallel.hpp"
#include "owcsim/receivers.hpp"
#include "owcsim/scene.hpp"

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace owcsim
{

struct scene_error : invalid_parameter
{
    explicit scene_error(std::vector<Diagnostic> d)
        : invalid_parameter(summary(d)), diagnostics(std::move(d))
    {
    }

    std::vector<Diagnostic> diagnostics;

  private:
    static std::string summary(std::vector<Diagnostic> const &d)
    {
        std::string s = "invalid scene (" + std::to_string(d.size()) + " diagnostics)";
        if (!d.empty())
            s += ": " + d.front().str();
        return s;
    }
};

//---------------------------------------------------------------------------//
// Impulse response
//---------------------------------------------------------------------------//

/// Received power histogram. Bin i covers [origin + i*w, origin + (i+1)*w).
struct ImpulseResponse
{
    double bin_width = 5e-11;
    double origin = 0.0;
    std::vector<double> bins;

    bool empty() const noexcept
    {
        for (double b : bins)
        {
            if (b != 0.0)
                return false;
        }
        return true;
    }

    double bin_start(std::size_t i) const noexcept { return origin + static_cast<double>(i) * bin_width; }
    double bin_centre(std::size_t i) const noexcept { return origin + (static_cast<double>(i) + 0.5) * bin_width; }

    void add(std::size_t index, double power)
    {
        if (index >= bins.size())
            bins.resize(index + 1, 0.0);
        bins[index] += power;
    }

    ImpulseResponse &operator+=(ImpulseResponse const &o)
    {
        if (o.bins.size() > bins.size())
            bins.resize(o.bins.size(), 0.0);
        for (std::size_t i = 0; i < o.bins.size(); ++i)
            bins[i] += o.bins[i];
        return *this;
    }

    ImpulseResponse scaled(double k) const
    {
        ImpulseResponse r = *this;
        for (double &b : r.bins)
            b *= k;
        return r;
    }

    friend bool operator==(ImpulseResponse const &, ImpulseResponse const &) = default;
};

inline double total_received_power(ImpulseResponse const &ir) noexcept
{
    double s = 0.0;
    for (double b : ir.bins)
        s += b;
    return s;
}

/// Merges groups of `factor` adjacent bins.
inline ImpulseResponse rebin(ImpulseResponse const &ir, std::size_t factor)
{
    if (factor == 0)
        throw invalid_parameter("rebin factor must be positive");
    ImpulseResponse out;
    out.bin_width = ir.bin_width * static_cast<double>(factor);
    out.origin = ir.origin;
    out.bins.assign((ir.bins.size() + factor - 1) / factor, 0.0);
    for (std::size_t i = 0; i < ir.bins.size(); ++i)
        out.bins[i / factor] += ir.bins[i];
    return out;
}

/// Two-column `time_s,power_w` dump, one row per non-empty bin. The time is
/// the bin start.
inline void write_ir_csv(std::ostream &os, ImpulseResponse const &ir)
{
    os << "time_s,power_w\n";
    char buf[96];
    for (std::size_t i = 0; i < ir.bins.size(); ++i)
    {
        if (ir.bins[i] == 0.0)
            continue;
        std::snprintf(buf, sizeof buf, "%.12e,%.17g\n", ir.bin_start(i), ir.bins[i]);
        os << buf;
    }
}

//---------------------------------------------------------------------------//
// Configuration
//---------------------------------------------------------------------------//

struct TraceConfig
{
    int max_order = 2;
    double first_order_edge = 0.05;
    double second_order_edge = 0.20;
    double bin_width = 5e-11;
    bool occlusion = false;
    unsigned threads = 0; // 0: hardware concurrency; does not affect results

    friend bool operator==(TraceConfig const &, TraceConfig const &) = default;
};

inline void check_trace_config(TraceConfig const &cfg)
{
    if (cfg.max_order < 0 || cfg.max_order > 2)
        throw invalid_parameter("max reflection order must be 0, 1 or 2");
    if (!(cfg.bin_width > 0.0))
        throw invalid_parameter("bin width must be positive");
    if (!(cfg.first_order_edge > 0.0) || !(cfg.second_order_edge > 0.0))
        throw invalid_parameter("element edges must be positive");
}

//---------------------------------------------------------------------------//
// Closed-form hop gains
//---------------------------------------------------------------------------//

namespace detail
{
// Radiant intensity per watt of a generalized Lambertian source at cos(phi).
inline double lambert_intensity(double order, double cos_phi) noexcept
{
    if (!(cos_phi > 0.0))
        return 0.0;
    return (order + 1.0) / (2.0 * std::numbers::pi) * std::pow(cos_phi, order);
}

inline double lambert_intensity_n1(double cos_phi) noexcept
{
    return cos_phi > 0.0 ? cos_phi / std::numbers::pi : 0.0;
}
} // namespace detail

/// Line-of-sight power gain from a luminaire to a detector element at `pos`.
/// `accept` returns the detector's angular acceptance for an arrival
/// direction (cos theta, FOV gate and optional lens).
template<class Accept>
double los_gain(Luminaire const &lum, Point3 const &pos, double area, Accept &&accept)
{
    Vec3 const d = pos - lum.position;
    double const dist2 = dot(d, d);
    if (!(dist2 > 0.0))
        throw degenerate_geometry("luminaire and detector coincide");
    Direction3 const dir{d};
    double const emit = detail::lambert_intensity(lum.order, dot(lum.boresight, dir));
    if (emit == 0.0)
        return 0.0;
    return emit * accept(dir) * area / dist2;
}

inline double los_gain(Luminaire const &lum, DetectorSpec const &det, Point3 const &pos,
                       LensModel const *lens = nullptr)
{
    return los_gain(lum, pos, det.area, [&](Direction3 const &dir) { return detector_acceptance(det, dir, lens); });
}

/// Gain and propagation delay of one multipath route.
struct PathGain
{
    double gain = 0.0;
    double delay = 0.0; // seconds
};

/// Power reaching a receiving surface per watt leaving a Lambertian emitter
/// of the given order: (n+1)/(2 pi d^2) cos^n(phi) cos(theta) A. Zero for
/// back-facing geometry.
inline double lambertian_hop(Point3 const &from, Direction3 const &from_axis, double order, Point3 const &to,
                             Direction3 const &to_normal, double to_area)
{
    Vec3 const d = to - from;
    double const dist2 = dot(d, d);
    if (!(dist2 > 0.0))
        throw degenerate_geometry("zero-length hop");
    Direction3 const dir{d};
    double const cos_in = -dot(to_normal, dir);
    if (!(cos_in > 0.0))
        return 0.0;
    return detail::lambert_intensity(order, dot(from_axis, dir)) * cos_in * to_area / dist2;
}

/// Power gain of luminaire -> element(s) -> detector. Each hop uses the
/// upstream emitter's Lambertian order and each bounce applies the element
/// reflectance; the final hop applies the detector acceptance and area.
template<class Accept>
PathGain reflected_path_gain(Luminaire const &lum, std::span<SurfaceElement const> path, Point3 const &pos,
                             double area, Accept &&accept)
{
    if (path.empty() || path.size() > 2)
        throw invalid_parameter("reflected path must have one or two elements");

    double length = norm(path.front().centre - lum.position);
    double gain = lambertian_hop(lum.position, lum.boresight, lum.order, path.front().centre, path.front().normal,
                                 path.front().area);
    for (std::size_t k = 1; k < path.size(); ++k)
    {
        auto const &a = path[k - 1];
        auto const &b = path[k];
        gain *= a.reflectance * lambertian_hop(a.centre, a.normal, a.order, b.centre, b.normal, b.area);
        length += norm(b.centre - a.centre);
    }
    auto const &e = path.back();
    Vec3 const d = pos - e.centre;
    double const dist = norm(d);
    if (!(dist > 0.0))
        throw degenerate_geometry("zero-length hop to detector");
    Direction3 const dir{d};
    gain *= e.reflectance * detail::lambert_intensity(e.order, dot(e.normal, dir)) * accept(dir) * area /
            (dist * dist);
    length += dist;
    return {gain, length / speed_of_light};
}

inline PathGain reflected_path_gain(Luminaire const &lum, std::span<SurfaceElement const> path,
                                    DetectorSpec const &det, Point3 const &pos, LensModel const *lens = nullptr)
{
    return reflected_path_gain(lum, path, pos, det.area,
                               [&](Direction3 const &dir) { return detector_acceptance(det, dir, lens); });
}

inline std::size_t delay_bin(double path_length, double bin_width) noexcept
{
    return static_cast<std::size_t>(std::floor(path_length / speed_of_light / bin_width));
}

//---------------------------------------------------------------------------//
// Tracer
//---------------------------------------------------------------------------//

/// One receiving element as seen by the tracer.
struct DetectorView
{
    Point3 position;
    double area = detector_area_m2;
    std::function<double(Direction3 const &)> accept;
};

inline DetectorView view_of(ReceiverSpec const &rx, std::size_t branch)
{
    ReceiverSpec const *r = &rx;
    return {rx.mount, rx.branches.at(branch).area,
            [r, branch](Direction3 const &dir) { return branch_acceptance(*r, branch, dir); }};
}

inline DetectorView view_of(DetectorSpec const &det, Point3 const &pos, LensModel const *lens = nullptr)
{
    return {pos, det.area, [det, lens](Direction3 const &dir) { return detector_acceptance(det, dir, lens); }};
}

/// Impulse response split by reflection order.
struct TraceComponents
{
    ImpulseResponse los;
    ImpulseResponse first;
    ImpulseResponse second;

    ImpulseResponse total() const
    {
        ImpulseResponse r = los;
        r += first;
        r += second;
        return r;
    }
};

/// Incident power summed over surface elements, per reflection order.
struct SurfacePowerFlow
{
    double first_incident = 0.0;  // luminaire -> surfaces
    double first_reflected = 0.0; // after applying reflectance
    double second_incident = 0.0; // surfaces -> surfaces
};

/// Discretized scene ready for repeated tracing. Holds both element grids;
/// the scene must outlive the tracer.
class ChannelTracer
{
  public:
    ChannelTracer(Scene const &scene, TraceConfig cfg) : scene_(&scene), cfg_(cfg)
    {
        check_trace_config(cfg_);
        if (auto diags = validate_scene(scene); !diags.empty())
            throw scene_error(std::move(diags));
        if (cfg_.max_order >= 1)
            fine_ = discretize(scene, cfg_.first_order_edge);
        if (cfg_.max_order >= 2)
            coarse_ = discretize(scene, cfg_.second_order_edge);
        if (cfg_.occlusion)
        {
            for (auto const &row : scene.rows)
            {
                if (row.occluding)
                    occluders_.push_back(row.box());
            }
        }
    }

    Scene const &scene() const noexcept { return *scene_; }
    TraceConfig const &config() const noexcept { return cfg_; }
    std::size_t first_order_elements() const noexcept { return fine_.size(); }
    std::size_t second_order_elements() const noexcept { return coarse_.size(); }

    TraceComponents trace_components(std::span<std::size_t const> lums, DetectorView const &det) const
    {
        check_detector(det.position);
        TraceComponents out;
        for (auto *ir : {&out.los, &out.first, &out.second})
            ir->bin_width = cfg_.bin_width;
        if (lums.empty())
            return out;
        for (std::size_t li : lums)
        {
            if (li >= scene_->luminaires.size())
                throw invalid_parameter("luminaire index " + std::to_string(li) + " out of range");
        }

        trace_los(lums, det, out.los);
        if (cfg_.max_order >= 1)
            trace_first(lums, det, out.first);
        if (cfg_.max_order >= 2)
            trace_second(lums, det, out.second);
        return out;
    }

    ImpulseResponse trace(std::span<std::size_t const> lums, DetectorView const &det) const
    {
        return trace_components(lums, det).total();
    }

    std::vector<ImpulseResponse> trace_receiver(std::span<std::size_t const> lums, ReceiverSpec const &rx) const
    {
        std::vector<ImpulseResponse> out;
        out.reserve(rx.size());
        for (std::size_t k = 0; k < rx.size(); ++k)
            out.push_back(trace(lums, view_of(rx, k)));
        return out;
    }

    /// Power leaving the luminaires that lands on the surfaces, and what the
    /// surfaces pass on to each other, on the same grids trace() uses.
    SurfacePowerFlow power_flow(std::span<std::size_t const> lums) const
    {
        SurfacePowerFlow flow;
        if (cfg_.max_order < 1)
            return flow;
        for (auto const &e : fine_)
        {
            for (std::size_t li : lums)
            {
                double const g = hop_from_luminaire(scene_->luminaires[li], e).gain;
                flow.first_incident += g;
                flow.first_reflected += e.reflectance * g;
            }
        }
        if (cfg_.max_order < 2)
            return flow;
        auto const lum_hops = luminaire_hops(lums);
        auto partial = parallel_reduce_chunks(coarse_.size(), second_chunk, cfg_.threads,
                                              [&](std::size_t begin, std::size_t end) {
                                                  double s = 0.0;
                                                  for (std::size_t j = begin; j < end; ++j)
                                                  {
                                                      for (std::size_t i = 0; i < coarse_.size(); ++i)
                                                      {
                                                          auto const h = hop_between(i, j);
                                                          if (h.gain == 0.0)
                                                              continue;
                                                          for (auto const &lh : lum_hops)
                                                              s += lh[i].gain * h.gain;
                                                      }
                                                  }
                                                  return std::vector<double>{s};
                                              });
        for (auto const &p : partial)
            flow.second_incident += p.empty() ? 0.0 : p[0];
        return flow;
    }

  private:
    static constexpr std::size_t first_chunk = 2048;
    static constexpr std::size_t second_chunk = 32;

    struct Hop
    {
        double gain = 0.0;
        double length = 0.0;
    };

    void check_detector(Point3 const &p) const
    {
        if (!scene_->contains(p))
            throw invalid_parameter("detector outside the room");
        if (!(p.z > scene_->communication_floor))
            throw invalid_parameter("detector below the communication floor");
    }

    bool blocked(Point3 const &a, Point3 const &b) const noexcept
    {
        for (auto const &box : occluders_)
        {
            if (segment_hits_box(a, b, box))
                return true;
        }
        return false;
    }

    // Power (per watt scaled by luminaire power) incident on an element.
    Hop hop_from_luminaire(Luminaire const &lum, SurfaceElement const &e) const
    {
        Vec3 const d = e.centre - lum.position;
        double const dist2 = dot(d, d);
        if (!(dist2 > 0.0))
            return {};
        double const dist = std::sqrt(dist2);
        Vec3 const u = d * (1.0 / dist);
        double const cos_in = -dot(e.normal, u);
        if (!(cos_in > 0.0))
            return {};
        double const emit = detail::lambert_intensity(lum.order, dot(lum.boresight, u));
        if (emit == 0.0 || blocked(lum.position, e.centre))
            return {};
        return {lum.power_w * emit * cos_in * e.area / dist2, dist};
    }

    // Reflected power from element (per watt incident) reaching the detector.
    Hop hop_to_detector(SurfaceElement const &e, DetectorView const &det) const
    {
        if (e.reflectance == 0.0)
            return {};
        Vec3 const d = det.position - e.centre;
        double const dist2 = dot(d, d);
        if (!(dist2 > 0.0))
            return {};
        double const dist = std::sqrt(dist2);
        Direction3 const dir{d};
        double const emit = detail::lambert_intensity_n1(dot(e.normal, dir));
        if (emit == 0.0)
            return {};
        double const a = det.accept(dir);
        if (a == 0.0 || blocked(e.centre, det.position))
            return {};
        return {e.reflectance * emit * a * det.area / dist2, dist};
    }

    // Coarse element i -> coarse element j, per watt incident on i.
    Hop hop_between(std::size_t i, std::size_t j) const
    {
        auto const &a = coarse_[i];
        auto const &b = coarse_[j];
        if (a.panel == b.panel || a.reflectance == 0.0)
            return {};
        Vec3 const d = b.centre - a.centre;
        double const dist2 = dot(d, d);
        double const dist = std::sqrt(dist2);
        double const cos_out = dot(a.normal, d) / dist;
        if (!(cos_out > 0.0))
            return {};
        double const cos_in = -dot(b.normal, d) / dist;
        if (!(cos_in > 0.0))
            return {};
        if (blocked(a.centre, b.centre))
            return {};
        return {a.reflectance * cos_out * cos_in * b.area / (std::numbers::pi * dist2), dist};
    }

    std::vector<std::vector<Hop>> luminaire_hops(std::span<std::size_t const> lums) const
    {
        std::vector<std::vector<Hop>> out;
        for (std::size_t li : lums)
        {
            std::vector<Hop> h(coarse_.size());
            for (std::size_t i = 0; i < coarse_.size(); ++i)
                h[i] = hop_from_luminaire(scene_->luminaires[li], coarse_[i]);
            out.push_back(std::move(h));
        }
        return out;
    }

    void trace_los(std::span<std::size_t const> lums, DetectorView const &det, ImpulseResponse &ir) const
    {
        for (std::size_t li : lums)
        {
            auto const &lum = scene_->luminaires[li];
            if (blocked(lum.position, det.position))
                continue;
            double const g = los_gain(lum, det.position, det.area, det.accept);
            if (g == 0.0)
                continue;
            ir.add(delay_bin(norm(det.position - lum.position), cfg_.bin_width), lum.power_w * g);
        }
    }

    void trace_first(std::span<std::size_t const> lums, DetectorView const &det, ImpulseResponse &ir) const
    {
        auto partial = parallel_reduce_chunks(fine_.size(), first_chunk, cfg_.threads,
                                              [&](std::size_t begin, std::size_t end) {
                                                  ImpulseResponse local;
                                                  for (std::size_t k = begin; k < end; ++k)
                                                  {
                                                      auto const &e = fine_[k];
                                                      auto const out = hop_to_detector(e, det);
                                                      if (out.gain == 0.0)
                                                          continue;
                                                      for (std::size_t li : lums)
                                                      {
                                                          auto const in = hop_from_luminaire(scene_->luminaires[li], e);
                                                          if (in.gain == 0.0)
                                                              continue;
                                                          local.add(delay_bin(in.length + out.length, cfg_.bin_width),
                                                                    in.gain * out.gain);
                                                      }
                                                  }
                                                  return std::move(local.bins);
                                              });
        merge_into(ir, partial);
    }

    void trace_second(std::span<std::size_t const> lums, DetectorView const &det, ImpulseResponse &ir) const
    {
        auto const lum_hops = luminaire_hops(lums);
        auto partial = parallel_reduce_chunks(coarse_.size(), second_chunk, cfg_.threads,
                                              [&](std::size_t begin, std::size_t end) {
                                                  ImpulseResponse local;
                                                  for (std::size_t j = begin; j < end; ++j)
                                                  {
                                                      auto const out = hop_to_detector(coarse_[j], det);
                                                      if (out.gain == 0.0)
                                                          continue;
                                                      for (std::size_t i = 0; i < coarse_.size(); ++i)
                                                      {
                                                          auto const mid = hop_between(i, j);
                                                          if (mid.gain == 0.0)
                                                              continue;
                                                          double const tail = mid.gain * out.gain;
                                                          double const tail_len = mid.length + out.length;
                                                          for (auto const &lh : lum_hops)
                                                          {
                                                              auto const &in = lh[i];
                                                              if (in.gain == 0.0)
                                                                  continue;
                                                              local.add(delay_bin(in.length + tail_len, cfg_.bin_width),
                                                                        in.gain * tail);
                                                          }
                                                      }
                                                  }
                                                  return std::move(local.bins);
                                              });
        merge_into(ir, partial);
    }

    static void merge_into(ImpulseResponse &ir, std::vector<std::vector<double>> const &partial)
    {
        for (auto const &p : partial)
        {
            if (p.size() > ir.bins.size())
                ir.bins.resize(p.size(), 0.0);
            for (std::size_t i = 0; i < p.size(); ++i)
                ir.bins[i] += p[i];
        }
    }

    Scene const *scene_;
    TraceConfig cfg_;
    std::vector<SurfaceElement> fine_;
    std::vector<SurfaceElement> coarse_;
    std::vector<Box3> occluders_;
};

/// One-shot trace of a single detector element.
inline ImpulseResponse trace_impulse_response(Scene const &scene, std::span<std::size_t const> lums,
                                              DetectorSpec const &det, Point3 const &pos, TraceConfig const &cfg,
                                              LensModel const *lens = nullptr)
{
    ChannelTracer const tracer(scene, cfg);
    return tracer.trace(lums, view_of(det, pos, lens));
}

/// One-shot trace of one branch of a receiver assembly.
inline ImpulseResponse trace_impulse_response(Scene const &scene, std::span<std::size_t const> lums,
                                              ReceiverSpec const &rx, std::size_t branch, TraceConfig const &cfg)
{
    ChannelTracer const tracer(scene, cfg);
    return tracer.trace(lums, view_of(rx, branch));
}

} // namespace owcsim

#endif
