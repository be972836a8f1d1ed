#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/parallel.hpp"
#include "polyclust/rng.hpp"
#include "polyclust/series.hpp"

namespace polyclust {

struct ArmaSpec {
    double ar1 = 0.1;
    double ar2 = 0.5;
    double ma1 = 0.2;
    double ma2 = 0.8;
    double noise_sd = 1.0;
    int burn_in = 200;
};

enum class GarchForm {
    literal,   // sigma_t = omega + alpha*X^2_{t-1} + beta*sigma_{t-1}; X_t = sigma_t * W_t
    standard,  // sigma^2_t = omega + alpha*X^2_{t-1} + beta*sigma^2_{t-1}; X_t = sigma_t * W_t
};

struct GarchSpec {
    double alpha = 0.2;
    double beta = 0.3;
    double omega = 0.0;
    double sigma0 = 1.0;
    double noise_sd = 1.0;
    int burn_in = 200;
    GarchForm form = GarchForm::literal;
};

struct ScenarioSpec {
    int scenario = 1;
    std::vector<int> group_sizes;  // empty -> scenario defaults
    int length = 100;
    std::uint64_t seed = 1;
};

inline std::vector<int> default_group_sizes(int scenario) {
    switch (scenario) {
        case 1:
        case 2:
            return {25, 25};
        case 3:
            return {20, 15, 15};
        default:
            throw ScenarioError("scenario must be 1, 2, or 3; got " + std::to_string(scenario));
    }
}

inline void validate_arma(const ArmaSpec& spec) {
    // AR(2) stationarity triangle: both roots of 1 - ar1*z - ar2*z^2 outside
    // the unit circle.
    if (!(std::abs(spec.ar2) < 1.0 && spec.ar2 + spec.ar1 < 1.0 && spec.ar2 - spec.ar1 < 1.0)) {
        throw UnstableModel("AR coefficients (" + std::to_string(spec.ar1) + ", " +
                            std::to_string(spec.ar2) + ") violate the stationarity triangle");
    }
    if (spec.burn_in < 0) throw UnstableModel("burn_in must be non-negative");
}

inline void validate_garch(const GarchSpec& spec) {
    if (spec.alpha < 0.0 || spec.beta < 0.0 || spec.omega < 0.0 || spec.sigma0 < 0.0) {
        throw UnstableModel("GARCH parameters must be non-negative");
    }
    if (!(spec.alpha + spec.beta < 1.0)) {
        throw UnstableModel("GARCH requires alpha + beta < 1; got " +
                            std::to_string(spec.alpha + spec.beta));
    }
    if (spec.burn_in < 0) throw UnstableModel("burn_in must be non-negative");
}

/// ARMA(2,2) with the expanded recursion
///   X_t = ar1*X_{t-1} + ar2*X_{t-2} + W_t - ma1*W_{t-1} - ma2*W_{t-2},
/// W ~ N(0, noise_sd^2), pre-sample X and W zero, first burn_in values dropped.
inline TimeSeries gen_arma(const ArmaSpec& spec, int T, Rng& rng) {
    validate_arma(spec);
    if (T < 1) throw InvalidLength("gen_arma requires T >= 1");
    const int n = spec.burn_in + T;
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int t = 0; t < n; ++t) {
        w[t] = spec.noise_sd * rng.normal();
        double v = w[t];
        if (t >= 1) v += spec.ar1 * x[t - 1] - spec.ma1 * w[t - 1];
        if (t >= 2) v += spec.ar2 * x[t - 2] - spec.ma2 * w[t - 2];
        x[t] = v;
    }
    TimeSeries out;
    out.values.assign(x.end() - T, x.end());
    return out;
}

/// GARCH(1,1), literal form by default: sigma enters as the multiplicative
/// scale without squaring, sigma_1 = sigma0, first burn_in values dropped.
///
/// The literal scale recursion is a stochastic quadratic map: with small
/// positive probability an early transient escapes toward floating-point
/// overflow instead of contracting. Trajectories whose scale crosses
/// kGarchScaleCap are doomed (return probability is negligible), so they are
/// rejected and regenerated from subsequent draws of the same stream; every
/// emitted series is finite and the output stays deterministic per stream.
inline constexpr double kGarchScaleCap = 1e10;

inline TimeSeries gen_garch(const GarchSpec& spec, int T, Rng& rng) {
    validate_garch(spec);
    if (T < 1) throw InvalidLength("gen_garch requires T >= 1");
    if (!(spec.sigma0 < kGarchScaleCap)) {
        throw UnstableModel("GARCH sigma0 exceeds the stability cap");
    }
    const int n = spec.burn_in + T;
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const bool literal = spec.form == GarchForm::literal;
    const double scale_start = literal ? spec.sigma0 : spec.sigma0 * spec.sigma0;
    const double scale_cap = literal ? kGarchScaleCap : kGarchScaleCap * kGarchScaleCap;
    for (int attempt = 0; attempt < 64; ++attempt) {
        double scale = scale_start;
        bool ok = true;
        for (int t = 0; t < n; ++t) {
            if (t > 0) scale = spec.omega + spec.alpha * x[t - 1] * x[t - 1] + spec.beta * scale;
            if (!(scale < scale_cap)) {
                ok = false;
                break;
            }
            const double sigma = literal ? scale : std::sqrt(scale);
            x[t] = sigma * spec.noise_sd * rng.normal();
        }
        if (ok) {
            TimeSeries out;
            out.values.assign(x.end() - T, x.end());
            return out;
        }
        std::fill(x.begin(), x.end(), 0.0);
    }
    throw UnstableModel("GARCH recursion failed to stay below the stability cap");
}

inline double trend_quadratic(int t, int T) {
    const double u = static_cast<double>(t) / T;
    return 10.0 * u * u;
}

inline double trend_quad_sine(int t, int T) {
    const double u = static_cast<double>(t) / T;
    return 10.0 * u * u * std::sin(0.9 * kPi * u);
}

struct LabeledSeries {
    TimeSeries series;
    std::string group;
};

namespace detail {

inline std::string series_id(char group, int index, int group_size) {
    int width = 2;
    for (int v = group_size - 1; v >= 100; v /= 10) ++width;
    std::string digits = std::to_string(index);
    std::string id(1, group);
    id += '_';
    id.append(static_cast<std::size_t>(width) - std::min<std::size_t>(width, digits.size()), '0');
    id += digits;
    return id;
}

} // namespace detail

/// Generates the labeled series collection for one scenario replication.
///
///   Scenario 1: A = ARMA + eps, B = GARCH + eps.
///   Scenario 2: A = 10(t/T)^2 + ARMA + eps,
///               B = 10(t/T)^2 sin(0.9 pi t/T) + GARCH + eps.
///   Scenario 3: A = 5 + ARMA + eps,
///               B = 10(t/T)^2 * ARMA + eps        (trend multiplies),
///               C = 10(t/T)^2 sin(0.9 pi t/T) * GARCH + eps.
///
/// eps ~ N(0,1) i.i.d. per point. Every series draws from RNG streams keyed
/// by (seed, group, position within group), so a series is unaffected by the
/// sizes of other groups and generation order.
inline std::vector<LabeledSeries> gen_scenario(const ScenarioSpec& spec) {
    if (spec.scenario < 1 || spec.scenario > 3) {
        throw ScenarioError("scenario must be 1, 2, or 3; got " + std::to_string(spec.scenario));
    }
    std::vector<int> sizes = spec.group_sizes.empty() ? default_group_sizes(spec.scenario)
                                                      : spec.group_sizes;
    const std::size_t expected_groups = (spec.scenario == 3) ? 3 : 2;
    if (sizes.size() != expected_groups) {
        throw ScenarioError("scenario " + std::to_string(spec.scenario) + " requires " +
                            std::to_string(expected_groups) + " group sizes, got " +
                            std::to_string(sizes.size()));
    }
    for (int s : sizes) {
        if (s < 1) throw ScenarioError("group sizes must be positive");
    }
    if (spec.length < 1) throw ScenarioError("series length must be positive");
    const int T = spec.length;

    std::vector<std::pair<int, int>> slots;  // (group, position)
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        for (int i = 0; i < sizes[g]; ++i) slots.emplace_back(static_cast<int>(g), i);
    }
    std::vector<LabeledSeries> out(slots.size());
    parallel_for(slots.size(), [&](std::size_t slot) {
        const auto [g, i] = slots[slot];
        const std::uint64_t sid = derive_seed(spec.seed, static_cast<std::uint64_t>(g) + 1,
                                              static_cast<std::uint64_t>(i) + 1);
        Rng proc_rng = Rng::stream(sid, 1);
        Rng eps_rng = Rng::stream(sid, 2);

        const bool garch_group = (spec.scenario == 3) ? (g == 2) : (g == 1);
        TimeSeries base = garch_group ? gen_garch(GarchSpec{}, T, proc_rng)
                                      : gen_arma(ArmaSpec{}, T, proc_rng);

        TimeSeries series;
        series.values.resize(static_cast<std::size_t>(T));
        for (int t = 1; t <= T; ++t) {
            const double b = base.values[t - 1];
            const double eps = eps_rng.normal();
            double v = 0.0;
            switch (spec.scenario) {
                case 1:
                    v = b + eps;
                    break;
                case 2:
                    v = (g == 0 ? trend_quadratic(t, T) : trend_quad_sine(t, T)) + b + eps;
                    break;
                case 3:
                    if (g == 0) {
                        v = 5.0 + b + eps;
                    } else if (g == 1) {
                        v = trend_quadratic(t, T) * b + eps;
                    } else {
                        v = trend_quad_sine(t, T) * b + eps;
                    }
                    break;
            }
            series.values[t - 1] = v;
        }
        const char letter = static_cast<char>('A' + g);
        series.label = detail::series_id(letter, i, sizes[g]);
        out[slot].series = std::move(series);
        out[slot].group = std::string(1, letter);
    });
    return out;
}

inline std::vector<TimeSeries> series_of(const std::vector<LabeledSeries>& items) {
    std::vector<TimeSeries> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.series);
    return out;
}

inline std::vector<std::string> groups_of(const std::vector<LabeledSeries>& items) {
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.group);
    return out;
}

} // namespace polyclust
