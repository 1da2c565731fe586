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

#ifndef OWCSIM_LINKMETRICS_HPP
#define OWCSIM_LINKMETRICS_HPP

#include "owcsim/raytracer.hpp"
#include "owcsim/receivers.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace owcsim
{

//---------------------------------------------------------------------------//
// Delay statistics and bandwidth
//---------------------------------------------------------------------------//

enum class DelayWeighting
{
    power_squared, // weights P_i^2
    power          // weights P_i
};

struct DelayStats
{
    double mean = 0.0;   // s
    double spread = 0.0; // rms, s
};

/// Mean delay and rms delay spread over bin centres.
inline DelayStats delay_stats(ImpulseResponse const &ir, DelayWeighting w = DelayWeighting::power_squared)
{
    double norm_sum = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < ir.bins.size(); ++i)
    {
        double const p = ir.bins[i];
        double const wt = (w == DelayWeighting::power_squared) ? p * p : p;
        norm_sum += wt;
        first += wt * ir.bin_centre(i);
    }
    if (!(norm_sum > 0.0))
        throw undefined_result("delay statistics of a zero-power impulse response");
    double const mean = first / norm_sum;
    double second = 0.0;
    for (std::size_t i = 0; i < ir.bins.size(); ++i)
    {
        double const p = ir.bins[i];
        double const wt = (w == DelayWeighting::power_squared) ? p * p : p;
        double const dt = ir.bin_centre(i) - mean;
        second += wt * dt * dt;
    }
    return {mean, std::sqrt(second / norm_sum)};
}

/// Lowest frequency at which |H(f)|/|H(0)| falls to 1/sqrt(2), with H the
/// discrete-time Fourier transform over bin centres. Scans from DC to the
/// bin Nyquist rate in `step_hz` steps and bisects the first crossing.
/// Returns nullopt (unbounded) when the response never drops that far.
inline std::optional<double> bandwidth_3db(ImpulseResponse const &ir, double step_hz = 1e6)
{
    std::vector<double> t, p;
    double dc = 0.0;
    for (std::size_t i = 0; i < ir.bins.size(); ++i)
    {
        if (ir.bins[i] == 0.0)
            continue;
        t.push_back(ir.bin_centre(i));
        p.push_back(ir.bins[i]);
        dc += ir.bins[i];
    }
    if (!(dc > 0.0))
        throw undefined_result("bandwidth of a zero-power impulse response");
    if (p.size() == 1)
        return std::nullopt;

    double const t0 = t.front();
    auto ratio = [&](double f) {
        double re = 0.0, im = 0.0;
        double const w = 2.0 * std::numbers::pi * f;
        for (std::size_t k = 0; k < t.size(); ++k)
        {
            double const ph = w * (t[k] - t0);
            re += p[k] * std::cos(ph);
            im -= p[k] * std::sin(ph);
        }
        return std::hypot(re, im) / dc;
    };

    double const target = 1.0 / std::numbers::sqrt2;
    double const nyquist = 0.5 / ir.bin_width;
    double lo = 0.0;
    for (double f = step_hz; f <= nyquist; f += step_hz)
    {
        if (ratio(f) <= target)
        {
            double hi = f;
            for (int it = 0; it < 40; ++it)
            {
                double const mid = 0.5 * (lo + hi);
                (ratio(mid) > target ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        lo = f;
    }
    return std::nullopt;
}

//---------------------------------------------------------------------------//
// OOK link budget
//---------------------------------------------------------------------------//

struct EyePowers
{
    double ps1 = 0.0; // W
    double ps0 = 0.0; // W
};

/// Splits the impulse response at one bit period after the first arrival:
/// power inside the bit is the logic-1 level, the spill-over is the ISI
/// that lands on a following logic-0 slot.
inline EyePowers eye_powers(ImpulseResponse const &ir, double bit_rate, double launch_scale = 1.0)
{
    if (!(bit_rate > 0.0))
        throw invalid_parameter("bit rate must be positive");
    std::size_t first = ir.bins.size();
    for (std::size_t i = 0; i < ir.bins.size(); ++i)
    {
        if (ir.bins[i] != 0.0)
        {
            first = i;
            break;
        }
    }
    if (first == ir.bins.size())
        throw undefined_result("eye powers of a zero-power impulse response");

    // Bins whose start lies within [0, Tb) of the first arrival bin.
    double const per_bit = 1.0 / bit_rate / ir.bin_width;
    auto const in_bit = static_cast<std::size_t>(std::ceil(per_bit - 1e-9));
    EyePowers e;
    for (std::size_t i = first; i < ir.bins.size(); ++i)
        ((i - first) < in_bit ? e.ps1 : e.ps0) += ir.bins[i];
    e.ps1 *= launch_scale;
    e.ps0 *= launch_scale;
    return e;
}

struct NoiseParams
{
    double preamp_density = 4.5e-12;  // A/sqrt(Hz)
    double background_current = 1e-4; // A
    double bandwidth_factor = 0.7;    // receiver bandwidth = factor * bit rate

    friend bool operator==(NoiseParams const &, NoiseParams const &) = default;
};

struct NoiseBudget
{
    double preamp = 0.0;     // A rms
    double background = 0.0; // A rms
    double signal = 0.0;     // A rms
    double total = 0.0;      // A rms
    double bandwidth = 0.0;  // Hz
    double background_current = 0.0;
    double preamp_density = 0.0;
};

inline NoiseBudget noise_budget(double received_power, double responsivity, double bandwidth,
                                double background_current, double preamp_density)
{
    if (!(received_power >= 0.0) || !(responsivity >= 0.0) || !(background_current >= 0.0) ||
        !(preamp_density >= 0.0))
        throw invalid_parameter("noise inputs must be non-negative");
    if (!(bandwidth > 0.0))
        throw invalid_parameter("receiver bandwidth must be positive");
    NoiseBudget n;
    n.bandwidth = bandwidth;
    n.background_current = background_current;
    n.preamp_density = preamp_density;
    n.signal = std::sqrt(2.0 * electron_charge * responsivity * received_power * bandwidth);
    n.background = std::sqrt(2.0 * electron_charge * background_current * bandwidth);
    n.preamp = preamp_density * std::sqrt(bandwidth);
    n.total = std::sqrt(n.preamp * n.preamp + n.background * n.background + n.signal * n.signal);
    return n;
}

/// Linear OOK SNR (R (Ps1 - Ps0) / sigma)^2. A closed eye (Ps0 >= Ps1)
/// gives zero.
inline double snr_ook(double responsivity, EyePowers const &eye, double sigma_total)
{
    if (!(sigma_total > 0.0))
        throw undefined_result("SNR with zero total noise");
    double const open = eye.ps1 - eye.ps0;
    if (!(open > 0.0))
        return 0.0;
    double const r = responsivity * open / sigma_total;
    return r * r;
}

inline double to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

inline double combine_sc(std::span<double const> snrs)
{
    if (snrs.empty())
        throw invalid_parameter("selection combining needs at least one branch");
    double best = snrs.front();
    for (double s : snrs)
        best = std::max(best, s);
    return best;
}

inline double combine_mrc(std::span<double const> snrs)
{
    if (snrs.empty())
        throw invalid_parameter("maximum ratio combining needs at least one branch");
    double sum = 0.0;
    for (double s : snrs)
        sum += s;
    return sum;
}

/// Gaussian tail probability, exact erfc form.
inline double q_function(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double ber_from_snr(double snr)
{
    if (!(snr >= 0.0))
        throw invalid_parameter("SNR must be non-negative");
    return q_function(std::sqrt(snr));
}

/// Highest OOK rate the channel supports, 1 / (10 D). Unbounded for D = 0.
inline std::optional<double> max_data_rate(DelayStats const &stats)
{
    if (!(stats.spread >= 0.0))
        throw invalid_parameter("delay spread must be non-negative");
    if (stats.spread == 0.0)
        return std::nullopt;
    return 1.0 / (10.0 * stats.spread);
}

//---------------------------------------------------------------------------//
// Link report
//---------------------------------------------------------------------------//

struct LinkParams
{
    double bit_rate = 1e9;
    NoiseParams noise;
    DelayWeighting weighting = DelayWeighting::power_squared;
};

struct BranchReport
{
    double total_power = 0.0;
    EyePowers eye;
    NoiseBudget noise;
    double snr = 0.0;
    double snr_db = -std::numeric_limits<double>::infinity();
    std::optional<DelayStats> delay;
};

struct LinkReport
{
    ReceiverKind kind = ReceiverKind::wfov;
    Point3 mount;
    std::vector<BranchReport> branches;
    std::size_t sc_branch = 0;
    double snr_sc = 0.0;
    double snr_mrc = 0.0;
    double ber_sc = 0.5;
    double ber_mrc = 0.5;
    std::optional<DelayStats> delay;    // SC-selected branch
    std::optional<double> bandwidth_hz; // nullopt: unbounded or no signal
    std::optional<double> max_rate_bps; // nullopt: unbounded or no signal

    double snr_sc_db() const noexcept { return to_db(snr_sc); }
    double snr_mrc_db() const noexcept { return to_db(snr_mrc); }
};

/// Link metrics from already traced branch impulse responses.
inline LinkReport link_report(ReceiverSpec const &rx, std::span<ImpulseResponse const> irs, LinkParams const &p)
{
    if (irs.size() != rx.size())
        throw invalid_parameter("one impulse response per receiver branch required");
    if (!(p.bit_rate > 0.0))
        throw invalid_parameter("bit rate must be positive");

    double const bandwidth = p.noise.bandwidth_factor * p.bit_rate;
    LinkReport rep;
    rep.kind = rx.kind;
    rep.mount = rx.mount;
    std::vector<double> snrs;
    for (std::size_t k = 0; k < rx.size(); ++k)
    {
        BranchReport b;
        auto const &ir = irs[k];
        b.total_power = total_received_power(ir);
        double avg = 0.0;
        if (b.total_power > 0.0)
        {
            b.eye = eye_powers(ir, p.bit_rate);
            b.delay = delay_stats(ir, p.weighting);
            avg = 0.5 * (b.eye.ps1 + b.eye.ps0);
        }
        double const r = rx.branches[k].responsivity;
        b.noise = noise_budget(avg, r, bandwidth, p.noise.background_current, p.noise.preamp_density);
        b.snr = snr_ook(r, b.eye, b.noise.total);
        b.snr_db = to_db(b.snr);
        snrs.push_back(b.snr);
        rep.branches.push_back(b);
    }

    rep.snr_sc = combine_sc(snrs);
    rep.snr_mrc = combine_mrc(snrs);
    for (std::size_t k = 0; k < snrs.size(); ++k)
    {
        if (snrs[k] == rep.snr_sc)
        {
            rep.sc_branch = k;
            break;
        }
    }
    rep.ber_sc = ber_from_snr(rep.snr_sc);
    rep.ber_mrc = ber_from_snr(rep.snr_mrc);

    auto const &sel = irs[rep.sc_branch];
    if (total_received_power(sel) > 0.0)
    {
        rep.delay = rep.branches[rep.sc_branch].delay;
        rep.bandwidth_hz = bandwidth_3db(sel);
        rep.max_rate_bps = max_data_rate(*rep.delay);
    }
    return rep;
}

/// Traces every branch of `rx` for the luminaire set and evaluates the link.
inline LinkReport link_report(ChannelTracer const &tracer, std::span<std::size_t const> lums, ReceiverSpec const &rx,
                              LinkParams const &p)
{
    auto const irs = tracer.trace_receiver(lums, rx);
    return link_report(rx, irs, p);
}

} // namespace owcsim

#endif
