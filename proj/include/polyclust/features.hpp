#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/parallel.hpp"
#include "polyclust/polyspectra.hpp"
#include "polyclust/series.hpp"
#include "polyclust/weights.hpp"

namespace polyclust {

struct FeatureMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> rows;
    bool standardized = false;
    std::vector<double> column_means;  // filled by standardize
    std::vector<double> column_sds;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return column_names.size(); }
    const std::vector<double>& row(std::size_t i) const { return rows[i]; }
};

/// Column names: one per weight, then the four shape features of the
/// differenced series.
inline std::vector<std::string> feature_names(
    const std::vector<WeightFunction>& weights = default_weights()) {
    std::vector<std::string> names;
    names.reserve(weights.size() + 4);
    for (const auto& w : weights) names.push_back(w.name());
    names.push_back("period");
    names.push_back("mean_diff");
    names.push_back("max_diff");
    names.push_back("diff_end_start");
    return names;
}

/// One row per series: each series is differenced once, then the weighted
/// spectral/bispectral means, the dominant period, and the mean / max /
/// end-minus-start of the differenced values are computed. Rows are
/// independent, so extraction runs in parallel; no standardization here.
inline FeatureMatrix build_feature_matrix(
    std::span<const TimeSeries> series,
    const std::vector<WeightFunction>& weights = default_weights()) {
    for (const auto& w : weights) validate_weight(w);
    FeatureMatrix m;
    m.column_names = feature_names(weights);
    m.row_labels.resize(series.size());
    m.rows.assign(series.size(), std::vector<double>(m.column_names.size(), 0.0));
    parallel_for(series.size(), [&](std::size_t i) {
        const TimeSeries& s = series[i];
        const std::string label = s.label.empty() ? "series_" + std::to_string(i) : s.label;
        m.row_labels[i] = label;
        require_finite(s);
        if (s.size() < 4) {
            throw InvalidLength("series '" + label + "' has length " + std::to_string(s.size()) +
                                "; feature extraction needs at least 4");
        }
        const TimeSeries d = difference(s);
        if (d.size() < 4) {
            throw InvalidLength("series '" + label + "': differenced length " +
                                std::to_string(d.size()) + " is below the minimum of 4");
        }
        const DftTable table = dft(d);
        auto& row = m.rows[i];
        std::size_t c = 0;
        for (const auto& w : weights) {
            row[c++] = polyspectral_mean(table, w, label).value;
        }
        try {
            row[c++] = dominant_period(table);
        } catch (const DegenerateSpectrum&) {
            throw DegenerateSpectrum("series '" + label +
                                     "': differenced series has no nonzero frequency component");
        }
        double mean = 0.0;
        double mx = d.values.front();
        for (double v : d.values) {
            mean += v;
            mx = std::max(mx, v);
        }
        row[c++] = mean / static_cast<double>(d.size());
        row[c++] = mx;
        row[c++] = d.values.back() - d.values.front();
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw NonFiniteSeries("series '" + label + "' produced a non-finite feature");
            }
        }
    });
    return m;
}

inline FeatureMatrix build_feature_matrix(
    const std::vector<TimeSeries>& series,
    const std::vector<WeightFunction>& weights = default_weights()) {
    return build_feature_matrix(std::span<const TimeSeries>(series), weights);
}

/// Z-scores every column (sample standard deviation, n - 1). Means and sds
/// of the input are kept on the result so the mapping can be inverted.
inline FeatureMatrix standardize(const FeatureMatrix& m) {
    const std::size_t n = m.n_rows();
    const std::size_t p = m.n_cols();
    if (n < 2) {
        throw ConstantFeature("standardize needs at least 2 rows to estimate spread");
    }
    FeatureMatrix out = m;
    out.standardized = true;
    out.column_means.assign(p, 0.0);
    out.column_sds.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += m.rows[i][j];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = m.rows[i][j] - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd == 0.0) {
            throw ConstantFeature("feature '" + m.column_names[j] + "' is constant");
        }
        out.column_means[j] = mean;
        out.column_sds[j] = sd;
        for (std::size_t i = 0; i < n; ++i) {
            out.rows[i][j] = (m.rows[i][j] - mean) / sd;
        }
    }
    return out;
}

} // namespace polyclust
