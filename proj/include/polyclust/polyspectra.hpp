#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/series.hpp"
#include "polyclust/weights.hpp"

namespace polyclust {

/// True iff no non-empty subset of the Fourier indices sums to 0 mod T.
/// Grid frequencies sum to 0 mod 2*pi exactly when their indices sum to
/// 0 mod T, so the check is exact integer arithmetic.
inline bool phi_indicator(std::span<const int> freq_indices, int T) {
    const int k = static_cast<int>(freq_indices.size());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        long long sum = 0;
        for (int i = 0; i < k; ++i) {
            if (mask & (1u << i)) sum += freq_indices[i];
        }
        if (sum % T == 0) return false;
    }
    return true;
}

inline bool phi_indicator(std::initializer_list<int> freq_indices, int T) {
    return phi_indicator(std::span<const int>(freq_indices.begin(), freq_indices.size()), T);
}

/// Fold a grid frequency 2*pi*j/T into (-pi, pi]: indices above T/2 wrap to
/// their negative alias.
inline double folded_frequency(int j, int T) {
    const double lambda = kTwoPi * j / T;
    return (2 * j > T) ? lambda - kTwoPi : lambda;
}

struct PolyspectralEstimate {
    double value = 0.0;
    std::string weight;
    int order = 1;
    std::complex<double> raw_complex{0.0, 0.0};
    std::string series_label;
    // Set when |imag| of the raw sum exceeds what conjugate-pair cancellation
    // of a symmetric weight can leave behind.
    bool asymmetry_warning = false;
};

namespace detail {

inline PolyspectralEstimate finish_estimate(std::complex<double> acc, int order, int T,
                                            std::string weight_name, std::string series_label) {
    PolyspectralEstimate e;
    e.order = order;
    e.weight = std::move(weight_name);
    e.series_label = std::move(series_label);
    const double scale = std::pow(kTwoPi, order) * std::pow(static_cast<double>(T), -(order + 1));
    e.raw_complex = scale * acc;
    e.value = e.raw_complex.real();
    const double tol = 1e-6 * (1.0 + std::abs(e.raw_complex));
    e.asymmetry_warning = std::abs(e.raw_complex.imag()) > tol;
    return e;
}

} // namespace detail

/// Weighted average of the order-k periodogram products on the Fourier grid:
///
///   (2 pi)^k T^-(k+1) sum over (j_1..j_k) of
///       d(l_{j_1}) ... d(l_{j_k}) d(-[l_{j_1}+...+l_{j_k}]) g(folded l) Phi
///
/// evaluated from a precomputed DFT table. d(-l) is the table entry at the
/// negated index mod T. The callable g sees frequencies folded to (-pi, pi].
template <class G>
PolyspectralEstimate polyspectral_mean_core(const DftTable& table, int order, G&& g,
                                            std::string weight_name, std::string series_label) {
    const int T = table.length;
    if (T < order + 2) {
        throw InvalidLength("polyspectral mean of order " + std::to_string(order) +
                            " requires T >= " + std::to_string(order + 2));
    }
    const auto& d = table.coefficients;
    std::complex<double> acc(0.0, 0.0);
    if (order == 1) {
        std::array<double, 1> lam{};
        for (int j = 1; j < T; ++j) {  // j = 0 is excluded by Phi
            lam[0] = folded_frequency(j, T);
            const double w = g(std::span<const double>(lam));
            if (w == 0.0) continue;
            acc += d[j] * d[(T - j) % T] * w;
        }
    } else if (order == 2) {
        std::array<double, 2> lam{};
        std::vector<double> folded(static_cast<std::size_t>(T));
        for (int j = 0; j < T; ++j) folded[j] = folded_frequency(j, T);
        for (int j1 = 1; j1 < T; ++j1) {
            lam[0] = folded[j1];
            for (int j2 = 1; j2 < T; ++j2) {
                if ((j1 + j2) % T == 0) continue;  // Phi: pair sum must not vanish
                lam[1] = folded[j2];
                const double w = g(std::span<const double>(lam));
                if (w == 0.0) continue;
                const int j3 = (2 * T - j1 - j2) % T;
                acc += d[j1] * d[j2] * d[j3] * w;
            }
        }
    } else {
        throw WeightArityError("only orders 1 and 2 are supported");
    }
    return detail::finish_estimate(acc, order, T, std::move(weight_name), std::move(series_label));
}

inline PolyspectralEstimate polyspectral_mean(const DftTable& table, const WeightFunction& g,
                                              const std::string& series_label) {
    validate_weight(g);
    return polyspectral_mean_core(
        table, g.order, [&g](std::span<const double> lam) { return eval_weight(g, lam); },
        g.name(), series_label);
}

inline PolyspectralEstimate polyspectral_mean(const TimeSeries& s, const WeightFunction& g) {
    validate_weight(g);
    if (static_cast<int>(s.size()) < g.order + 2) {
        throw InvalidLength("series '" + s.label + "' too short for order " +
                            std::to_string(g.order));
    }
    require_finite(s);
    return polyspectral_mean(dft(s), g, s.label);
}

/// Independent oracle for the estimator: every DFT factor is evaluated by a
/// fresh O(T) summation at the literal (possibly negative, unreduced)
/// frequency, with no shared table and no conjugate shortcuts. Quadratic in
/// tuple count times linear per factor, so capped at T <= 256.
inline PolyspectralEstimate brute_force_polyspectral_mean(const TimeSeries& s,
                                                          const WeightFunction& g) {
    validate_weight(g);
    const int T = static_cast<int>(s.size());
    if (T > 256) {
        throw OracleSizeError("brute-force oracle limited to T <= 256, got " + std::to_string(T));
    }
    if (T < g.order + 2) {
        throw InvalidLength("series '" + s.label + "' too short for order " +
                            std::to_string(g.order));
    }
    require_finite(s);
    const std::span<const double> x(s.values);
    std::complex<double> acc(0.0, 0.0);
    if (g.order == 1) {
        for (int j = 0; j < T; ++j) {
            std::array<int, 1> idx{j};
            if (!phi_indicator(std::span<const int>(idx), T)) continue;
            const double lambda = kTwoPi * j / T;
            std::array<double, 1> lam{folded_frequency(j, T)};
            const double w = eval_weight(g, lam);
            acc += dft_point(x, lambda) * dft_point(x, -lambda) * w;
        }
    } else {
        for (int j1 = 0; j1 < T; ++j1) {
            for (int j2 = 0; j2 < T; ++j2) {
                std::array<int, 2> idx{j1, j2};
                if (!phi_indicator(std::span<const int>(idx), T)) continue;
                const double l1 = kTwoPi * j1 / T;
                const double l2 = kTwoPi * j2 / T;
                std::array<double, 2> lam{folded_frequency(j1, T), folded_frequency(j2, T)};
                const double w = eval_weight(g, lam);
                if (w == 0.0) continue;
                acc += dft_point(x, l1) * dft_point(x, l2) * dft_point(x, -(l1 + l2)) * w;
            }
        }
    }
    return detail::finish_estimate(acc, g.order, T, g.name(), s.label);
}

} // namespace polyclust
