#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/rng.hpp"

namespace polyclust {

/// Uniformly sampled real-valued sequence. Time indices are 1-based
/// (t = t0_index .. t0_index + size - 1), which matters for the DFT phase
/// convention used throughout.
struct TimeSeries {
    std::vector<double> values;
    std::string label;
    int t0_index = 1;

    std::size_t size() const { return values.size(); }
};

inline void require_finite(const TimeSeries& s) {
    for (double v : s.values) {
        if (!std::isfinite(v)) {
            throw NonFiniteSeries("series '" + s.label + "' contains a non-finite value");
        }
    }
}

/// First differences: out[t] = in[t+1] - in[t]; length shrinks by one.
inline TimeSeries difference(const TimeSeries& s) {
    if (s.size() < 2) {
        throw InvalidLength("difference requires length >= 2, got " + std::to_string(s.size()));
    }
    TimeSeries out;
    out.label = s.label;
    out.t0_index = s.t0_index;
    out.values.resize(s.size() - 1);
    for (std::size_t t = 0; t + 1 < s.size(); ++t) {
        out.values[t] = s.values[t + 1] - s.values[t];
    }
    return out;
}

/// Divides every value by the first one, so out[0] == 1.
inline TimeSeries scale_to_initial(const TimeSeries& s) {
    if (s.values.empty() || s.values.front() == 0.0) {
        throw DegenerateScale("series '" + s.label + "' starts at zero; cannot scale by initial value");
    }
    TimeSeries out = s;
    const double v0 = s.values.front();
    for (double& v : out.values) v /= v0;
    return out;
}

/// DFT coefficients d(lambda_j) = sum_{t=1}^{T} X_t exp(-i lambda_j t) for
/// j = 0..T-1, lambda_j = 2 pi j / T. The exponent index starts at t = 1,
/// which differs from 0-based transforms by a per-bin phase exp(-i lambda_j).
struct DftTable {
    std::vector<std::complex<double>> coefficients;
    int length = 0;

    const std::complex<double>& operator[](std::size_t j) const { return coefficients[j]; }
};

/// Single-frequency DFT evaluation with the same t = 1..T convention.
/// Valid at any real lambda, not just grid frequencies.
inline std::complex<double> dft_point(std::span<const double> x, double lambda) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double angle = lambda * static_cast<double>(t + 1);
        acc += x[t] * std::complex<double>(std::cos(angle), -std::sin(angle));
    }
    return acc;
}

inline DftTable dft(const TimeSeries& s) {
    if (s.size() < 1) throw InvalidLength("dft requires length >= 1");
    require_finite(s);
    const int n = static_cast<int>(s.size());
    DftTable table;
    table.length = n;
    table.coefficients.resize(s.size());
    for (int j = 0; j < n; ++j) {
        const double lambda = kTwoPi * j / n;
        table.coefficients[j] = dft_point(s.values, lambda);
    }
    return table;
}

/// Sample autocorrelation up to max_lag, biased (1/T) covariance normalization.
inline std::vector<double> acf(const TimeSeries& s, int max_lag) {
    const int n = static_cast<int>(s.size());
    if (max_lag < 0 || max_lag >= n) {
        throw InvalidLag("max_lag must satisfy 0 <= max_lag < T");
    }
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= n;
    double gamma0 = 0.0;
    for (double v : s.values) gamma0 += (v - mean) * (v - mean);
    gamma0 /= n;
    if (gamma0 == 0.0) {
        throw DegenerateVariance("acf undefined for zero-variance series '" + s.label + "'");
    }
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1);
    for (int h = 0; h <= max_lag; ++h) {
        double g = 0.0;
        for (int t = 0; t + h < n; ++t) {
            g += (s.values[t] - mean) * (s.values[t + h] - mean);
        }
        out[h] = (g / n) / gamma0;
    }
    return out;
}

struct DescriptiveStats {
    double mean_return = 0.0;
    double volatility = 0.0;  // population sd of the simple returns
    double acf1 = 0.0;        // NaN when returns have zero variance
};

/// Summary stats of the return series r_t = first differences of the
/// (already scaled) input.
inline DescriptiveStats descriptive_stats(const TimeSeries& s) {
    if (s.size() < 3) throw InvalidLength("descriptive_stats requires length >= 3");
    const TimeSeries r = difference(s);
    const int n = static_cast<int>(r.size());
    DescriptiveStats d;
    for (double v : r.values) d.mean_return += v;
    d.mean_return /= n;
    double var = 0.0;
    for (double v : r.values) var += (v - d.mean_return) * (v - d.mean_return);
    var /= n;
    d.volatility = std::sqrt(var);
    if (var > 0.0) {
        d.acf1 = acf(r, 1)[1];
    } else {
        d.acf1 = std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

/// Periodogram argmax over j = 1..floor(T/2); returns T / j*. Ties go to the
/// smallest j, so slower oscillations win.
inline double dominant_period(const DftTable& table) {
    const int n = table.length;
    if (n < 4) throw InvalidLength("dominant_period requires T >= 4");
    int best_j = 0;
    double best_power = 0.0;
    double peak_power = 0.0;  // includes j = 0, so a constant series still has a peak
    for (int j = 0; j < n; ++j) {
        peak_power = std::max(peak_power, std::norm(table.coefficients[j]));
    }
    for (int j = 1; j <= n / 2; ++j) {
        const double p = std::norm(table.coefficients[j]);
        if (p > best_power) {
            best_power = p;
            best_j = j;
        }
    }
    // Everything at or below the roundoff floor of the strongest coefficient
    // counts as zero; a constant series leaves only cancellation residue here.
    if (best_j == 0 || best_power <= 1e-18 * peak_power) {
        throw DegenerateSpectrum("no nonzero frequency component");
    }
    return static_cast<double>(n) / best_j;
}

inline double dominant_period(const TimeSeries& s) {
    if (s.size() < 4) throw InvalidLength("dominant_period requires T >= 4");
    return dominant_period(dft(s));
}

} // namespace polyclust
