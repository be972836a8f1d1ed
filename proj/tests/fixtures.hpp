#pragma once

// Synthetic feature matrices shared by the clustering, validation, and
// acceptance tests.

#include <cstddef>
#include <string>
#include <vector>

#include "polyclust/features.hpp"
#include "polyclust/rng.hpp"

namespace fixtures {

struct Blob {
    std::vector<double> center;
    double sd = 1.0;
    int count = 0;
};

/// Gaussian blobs around the given centers; rows appear blob by blob and
/// row labels record the one-based blob index.
inline polyclust::FeatureMatrix blob_matrix(const std::vector<Blob>& blobs,
                                            std::uint64_t seed) {
    polyclust::FeatureMatrix m;
    const std::size_t d = blobs.front().center.size();
    for (std::size_t f = 0; f < d; ++f) m.column_names.push_back("f" + std::to_string(f));
    polyclust::Rng rng = polyclust::Rng::stream(seed, 7001);
    for (std::size_t b = 0; b < blobs.size(); ++b) {
        for (int i = 0; i < blobs[b].count; ++i) {
            std::vector<double> row(d);
            for (std::size_t f = 0; f < d; ++f) {
                row[f] = blobs[b].center[f] + blobs[b].sd * rng.normal();
            }
            m.rows.push_back(std::move(row));
            m.row_labels.push_back("b" + std::to_string(b + 1) + "_" + std::to_string(i));
        }
    }
    return m;
}

/// Convenience: `k` well-separated blobs of `per` points in `d` dimensions,
/// centers spaced along the first axis.
inline polyclust::FeatureMatrix separated_blobs(int k, int per, std::size_t d,
                                                double spacing, double sd,
                                                std::uint64_t seed) {
    std::vector<Blob> blobs;
    for (int b = 0; b < k; ++b) {
        std::vector<double> center(d, 0.0);
        center[0] = spacing * b;
        blobs.push_back({center, sd, per});
    }
    return blob_matrix(blobs, seed);
}

/// Points uniform on [0,1]^d.
inline polyclust::FeatureMatrix uniform_matrix(int n, std::size_t d, std::uint64_t seed) {
    polyclust::FeatureMatrix m;
    for (std::size_t f = 0; f < d; ++f) m.column_names.push_back("f" + std::to_string(f));
    polyclust::Rng rng = polyclust::Rng::stream(seed, 7002);
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(d);
        for (double& v : row) v = rng.uniform();
        m.rows.push_back(std::move(row));
        m.row_labels.push_back("u" + std::to_string(i));
    }
    return m;
}

/// Blob index (one-based) for each row of a blob_matrix result.
inline std::vector<int> blob_truth(const std::vector<Blob>& blobs) {
    std::vector<int> truth;
    for (std::size_t b = 0; b < blobs.size(); ++b) {
        for (int i = 0; i < blobs[b].count; ++i) truth.push_back(static_cast<int>(b + 1));
    }
    return truth;
}

} // namespace fixtures
