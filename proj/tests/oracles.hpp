#pragma once

// Reference implementations used to cross-check the library. Each oracle
// recomputes its quantity straight from the defining formula, sharing no code
// path with the implementation under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace oracles {

inline std::complex<double> naive_dft_point(const std::vector<double>& x, double lambda) {
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double phase = -lambda * static_cast<double>(t + 1);
        sum += x[t] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return sum;
}

/// Index j in 1..T/2 with the largest |d(2*pi*j/T)|^2, smallest j on ties.
inline int periodogram_argmax(const std::vector<double>& x) {
    const auto T = static_cast<double>(x.size());
    int best_j = 1;
    double best = -1.0;
    for (int j = 1; j <= static_cast<int>(x.size()) / 2; ++j) {
        const double lambda = 2.0 * 3.14159265358979323846 * j / T;
        const double power = std::norm(naive_dft_point(x, lambda));
        if (power > best + 1e-9 * (1.0 + best)) {
            best = power;
            best_j = j;
        }
    }
    return best_j;
}

/// Theoretical ARMA(2,2) variance via the psi-weight expansion of
/// X_t = ar1 X_{t-1} + ar2 X_{t-2} + W_t - ma1 W_{t-1} - ma2 W_{t-2}.
inline double arma_psi_variance(double ar1, double ar2, double ma1, double ma2,
                                double noise_sd, int n_terms = 4000) {
    std::vector<double> psi(static_cast<std::size_t>(n_terms), 0.0);
    psi[0] = 1.0;
    psi[1] = ar1 - ma1;
    for (int j = 2; j < n_terms; ++j) {
        psi[j] = ar1 * psi[j - 1] + ar2 * psi[j - 2];
        if (j == 2) psi[j] -= ma2;
    }
    double sum = 0.0;
    for (double p : psi) sum += p * p;
    return noise_sd * noise_sd * sum;
}

/// Minimal total dissimilarity over every k-subset of medoids (n <= ~12).
inline double pam_exhaustive(const std::vector<std::vector<double>>& diss, int k) {
    const std::size_t n = diss.size();
    std::vector<std::size_t> medoids(static_cast<std::size_t>(k));
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> pick(n, 0);
    std::fill(pick.end() - k, pick.end(), 1);
    std::sort(pick.begin(), pick.end());
    // iterate combinations via std::next_permutation on the mask
    do {
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) medoids[m++] = i;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < medoids.size(); ++j) {
                nearest = std::min(nearest, diss[i][medoids[j]]);
            }
            total += nearest;
        }
        best = std::min(best, total);
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best;
}

inline double silhouette_average(const std::vector<std::vector<double>>& dist,
                                 const std::vector<int>& assign, int k) {
    const std::size_t n = dist.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[static_cast<std::size_t>(assign[j] - 1)] += dist[i][j];
            ++counts[static_cast<std::size_t>(assign[j] - 1)];
        }
        const auto own = static_cast<std::size_t>(assign[i] - 1);
        if (counts[own] == 0) continue;  // singleton contributes 0
        const double a = sums[own] / counts[own];
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sums.size(); ++c) {
            if (c == own || counts[c] == 0) continue;
            b = std::min(b, sums[c] / counts[c]);
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

inline double dunn_index(const std::vector<std::vector<double>>& dist,
                         const std::vector<int>& assign) {
    const std::size_t n = dist.size();
    double separation = std::numeric_limits<double>::infinity();
    double diameter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (assign[i] == assign[j]) {
                diameter = std::max(diameter, dist[i][j]);
            } else {
                separation = std::min(separation, dist[i][j]);
            }
        }
    }
    if (diameter == 0.0) {
        return separation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return separation / diameter;
}

inline std::vector<std::vector<double>> group_centroids(
    const std::vector<std::vector<double>>& rows, const std::vector<int>& assign, int k) {
    const std::size_t d = rows.front().size();
    std::vector<std::vector<double>> cent(static_cast<std::size_t>(k),
                                          std::vector<double>(d, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto c = static_cast<std::size_t>(assign[i] - 1);
        ++counts[c];
        for (std::size_t f = 0; f < d; ++f) cent[c][f] += rows[i][f];
    }
    for (std::size_t c = 0; c < cent.size(); ++c) {
        for (double& v : cent[c]) v /= counts[c];
    }
    return cent;
}

inline double point_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) s += (a[f] - b[f]) * (a[f] - b[f]);
    return std::sqrt(s);
}

inline double davies_bouldin_index(const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& assign, int k) {
    const auto cent = group_centroids(rows, assign, k);
    std::vector<double> scatter(static_cast<std::size_t>(k), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto c = static_cast<std::size_t>(assign[i] - 1);
        scatter[c] += point_distance(rows[i], cent[c]);
        ++counts[c];
    }
    for (std::size_t c = 0; c < scatter.size(); ++c) scatter[c] /= counts[c];
    double total = 0.0;
    for (std::size_t a = 0; a < scatter.size(); ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < scatter.size(); ++b) {
            if (a == b) continue;
            worst = std::max(worst, (scatter[a] + scatter[b]) / point_distance(cent[a], cent[b]));
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

inline double calinski_harabasz_index(const std::vector<std::vector<double>>& rows,
                                      const std::vector<int>& assign, int k) {
    const std::size_t n = rows.size();
    const std::size_t d = rows.front().size();
    const auto cent = group_centroids(rows, assign, k);
    std::vector<double> grand(d, 0.0);
    for (const auto& r : rows) {
        for (std::size_t f = 0; f < d; ++f) grand[f] += r[f];
    }
    for (double& v : grand) v /= static_cast<double>(n);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : assign) ++counts[static_cast<std::size_t>(a - 1)];
    double between = 0.0;
    for (std::size_t c = 0; c < cent.size(); ++c) {
        double s = 0.0;
        for (std::size_t f = 0; f < d; ++f) s += (cent[c][f] - grand[f]) * (cent[c][f] - grand[f]);
        between += counts[c] * s;
    }
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(assign[i] - 1);
        for (std::size_t f = 0; f < d; ++f) {
            within += (rows[i][f] - cent[c][f]) * (rows[i][f] - cent[c][f]);
        }
    }
    const auto kk = static_cast<double>(k);
    const auto nn = static_cast<double>(n);
    if (within == 0.0 || k == static_cast<int>(n)) {
        return std::numeric_limits<double>::infinity();
    }
    return (between / (kk - 1.0)) / (within / (nn - kk));
}

/// AUC by counting concordant pairs, ties worth one half.
inline double auc_pair_counting(const std::vector<int>& positive,
                                const std::vector<double>& scores) {
    double wins = 0.0;
    long long n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (positive[i]) {
            ++n1;
        } else {
            ++n0;
        }
    }
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (!positive[i]) continue;
        for (std::size_t j = 0; j < positive.size(); ++j) {
            if (positive[j]) continue;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(n1) * static_cast<double>(n0));
}

/// Best accuracy over every injective mapping of clusters to labels.
inline double best_alignment_accuracy(const std::vector<std::string>& truth,
                                      const std::vector<int>& assign) {
    std::vector<std::string> labels = truth;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::vector<int> clusters = assign;
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());

    // pad the smaller side so one fixed-size permutation covers all mappings
    const std::size_t m = std::max(labels.size(), clusters.size());
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    long long best = -1;
    do {
        long long hits = 0;
        for (std::size_t li = 0; li < labels.size(); ++li) {
            if (perm[li] >= clusters.size()) continue;
            const int cid = clusters[perm[li]];
            for (std::size_t i = 0; i < truth.size(); ++i) {
                if (truth[i] == labels[li] && assign[i] == cid) ++hits;
            }
        }
        best = std::max(best, hits);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(truth.size());
}

} // namespace oracles
