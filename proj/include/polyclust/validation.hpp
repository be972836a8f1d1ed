#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "polyclust/clustering.hpp"
#include "polyclust/errors.hpp"
#include "polyclust/features.hpp"
#include "polyclust/parallel.hpp"
#include "polyclust/rng.hpp"

namespace polyclust {

namespace detail {

/// Regularized incomplete beta I_x(a, b) for integer a, b >= 1 via the
/// binomial-sum identity I_x(a,b) = sum_{j=a}^{a+b-1} C(a+b-1,j) x^j (1-x)^{a+b-1-j}.
inline double reg_incomplete_beta_int(double x, int a, int b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const int n = a + b - 1;
    double sum = 0.0;
    for (int j = a; j <= n; ++j) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                                std::lgamma(n - j + 1.0) + j * std::log(x) +
                                (n - j) * std::log1p(-x);
        sum += std::exp(log_term);
    }
    return std::min(1.0, sum);
}

inline std::vector<std::size_t> cluster_sizes(const std::vector<int>& assignments, int k) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) {
        if (a < 1 || a > k) throw InvalidK("assignment id " + std::to_string(a) + " out of range");
        ++sizes[static_cast<std::size_t>(a - 1)];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) throw InvalidK("cluster " + std::to_string(c + 1) + " is empty");
    }
    return sizes;
}

inline int infer_k(const std::vector<int>& assignments) {
    int k = 0;
    for (int a : assignments) k = std::max(k, a);
    return k;
}

/// Elbow pick: the k with the largest discrete second difference of the WSS
/// curve. Returns 0 (no elbow) when the largest bend is under 5% of the
/// k = 2 objective, or when the curve is too short to bend.
inline int elbow_from_curve(const std::vector<int>& ks, const std::vector<double>& wss) {
    if (ks.size() < 3) return 0;
    double ref = wss.front();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] == 2) ref = wss[i];
    }
    double best = -std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        const double dd = wss[i - 1] - 2.0 * wss[i] + wss[i + 1];
        if (dd > best) {
            best = dd;
            best_k = ks[i];
        }
    }
    return best >= 0.05 * ref ? best_k : 0;
}

} // namespace detail

struct HopkinsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int m_samples = 0;  // per-replication probe count actually used
    int reps = 0;
};

/// Cluster-tendency statistic. Per replication: m_samples uniform probes in
/// the data bounding box vs m_samples real points; H compares their
/// nearest-neighbor distances raised to the feature dimension. H near 0.5
/// means spatially uniform, H near 1 means clusterable. The p-value is the
/// two-sided tail of the Beta(m, m) null at the averaged statistic.
inline HopkinsResult hopkins(const FeatureMatrix& m, int m_samples = 0, int reps = 100,
                             std::uint64_t seed = 1) {
    const std::size_t n = m.n_rows();
    const std::size_t d = m.n_cols();
    if (n < 2) throw InvalidSampleSize("hopkins needs at least 2 rows");
    int ms = m_samples;
    if (ms <= 0) ms = std::max(5, static_cast<int>((n + 9) / 10));
    if (static_cast<std::size_t>(ms) >= n) {
        throw InvalidSampleSize("m_samples must be below the number of rows (" +
                                std::to_string(ms) + " >= " + std::to_string(n) + ")");
    }
    if (reps < 1) throw InvalidSampleSize("reps must be positive");

    std::vector<double> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = hi[j] = m.rows[0][j];
        for (std::size_t i = 1; i < n; ++i) {
            lo[j] = std::min(lo[j], m.rows[i][j]);
            hi[j] = std::max(hi[j], m.rows[i][j]);
        }
    }

    std::vector<double> stats(static_cast<std::size_t>(reps), 0.0);
    parallel_for(stats.size(), [&](std::size_t r) {
        Rng rng = Rng::stream(seed, r);
        const double dim = static_cast<double>(d);
        double u_sum = 0.0;
        std::vector<double> probe(d);
        for (int s = 0; s < ms; ++s) {
            for (std::size_t j = 0; j < d; ++j) probe[j] = rng.uniform(lo[j], hi[j]);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                best = std::min(best, squared_distance(probe, m.rows[i]));
            }
            u_sum += std::pow(std::sqrt(best), dim);
        }
        double w_sum = 0.0;
        const std::vector<std::size_t> chosen = rng.sample_without_replacement(n, ms);
        for (std::size_t i : chosen) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t o = 0; o < n; ++o) {
                if (o == i) continue;
                best = std::min(best, squared_distance(m.rows[i], m.rows[o]));
            }
            w_sum += std::pow(std::sqrt(best), dim);
        }
        const double denom = u_sum + w_sum;
        stats[r] = denom > 0.0 ? u_sum / denom : 0.5;
    });

    HopkinsResult out;
    out.m_samples = ms;
    out.reps = reps;
    for (double s : stats) out.statistic += s;
    out.statistic /= static_cast<double>(reps);
    const double cdf = detail::reg_incomplete_beta_int(out.statistic, ms, ms);
    out.p_value = 2.0 * std::min(cdf, 1.0 - cdf);
    return out;
}

/// Best-of-restarts k-means WSS for each k. The elbow pick maximizes the
/// discrete second difference; it is absent (0) when every second difference
/// is under 5% of the k=2 WSS, i.e. the curve bends nowhere in particular.
struct WssCurve {
    std::vector<int> ks;
    std::vector<double> wss;
    int elbow_k = 0;  // 0 = none
};

inline WssCurve wss_curve(const FeatureMatrix& m, int k_min, int k_max, std::uint64_t seed,
                          int n_init = 25) {
    if (k_min < 1 || k_max < k_min) throw InvalidK("bad k range");
    WssCurve out;
    for (int k = k_min; k <= k_max; ++k) {
        out.ks.push_back(k);
        out.wss.push_back(kmeans(m, k, derive_seed(seed, 101, static_cast<std::uint64_t>(k)),
                                 n_init)
                              .objective);
    }
    out.elbow_k = detail::elbow_from_curve(out.ks, out.wss);
    return out;
}

struct SilhouetteResult {
    std::vector<double> per_point;
    double average = 0.0;
};

/// s(i) = (b - a) / max(a, b) with a = mean in-cluster distance (self
/// excluded), b = best mean distance to another cluster. Singletons score 0,
/// as does the all-coincident case a = b = 0.
inline SilhouetteResult silhouette(const DistanceMatrix& diss, const std::vector<int>& assignments) {
    const std::size_t n = diss.size();
    if (assignments.size() != n) throw InvalidK("assignment length mismatch");
    const int k = detail::infer_k(assignments);
    if (k < 2) throw InvalidK("silhouette needs k >= 2");
    const std::vector<std::size_t> sizes = detail::cluster_sizes(assignments, k);

    SilhouetteResult out;
    out.per_point.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> mean_to(static_cast<std::size_t>(k), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_to[static_cast<std::size_t>(assignments[j] - 1)] += diss(i, j);
        }
        const auto own = static_cast<std::size_t>(assignments[i] - 1);
        if (sizes[own] <= 1) {
            out.per_point[i] = 0.0;
            continue;
        }
        double a = mean_to[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (c == own) continue;
            b = std::min(b, mean_to[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        out.per_point[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    for (double s : out.per_point) out.average += s;
    out.average /= static_cast<double>(n);
    return out;
}

inline SilhouetteResult silhouette(const FeatureMatrix& m, const std::vector<int>& assignments) {
    return silhouette(DistanceMatrix::from_features(m), assignments);
}

/// Min single-linkage separation between clusters over max cluster diameter.
/// All-zero diameters with positive separation yield +infinity.
inline double dunn(const DistanceMatrix& diss, const std::vector<int>& assignments) {
    const std::size_t n = diss.size();
    if (assignments.size() != n) throw InvalidK("assignment length mismatch");
    const int k = detail::infer_k(assignments);
    if (k < 2) throw InvalidK("dunn needs k >= 2");
    detail::cluster_sizes(assignments, k);
    double separation = std::numeric_limits<double>::infinity();
    double diameter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (assignments[i] == assignments[j]) {
                diameter = std::max(diameter, diss(i, j));
            } else {
                separation = std::min(separation, diss(i, j));
            }
        }
    }
    if (diameter == 0.0) {
        return separation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return separation / diameter;
}

inline double dunn(const FeatureMatrix& m, const std::vector<int>& assignments) {
    return dunn(DistanceMatrix::from_features(m), assignments);
}

namespace detail {

inline std::vector<std::vector<double>> cluster_centroids(const FeatureMatrix& m,
                                                          const std::vector<int>& assignments,
                                                          int k) {
    const std::vector<std::size_t> sizes = cluster_sizes(assignments, k);
    std::vector<std::vector<double>> cent(static_cast<std::size_t>(k),
                                          std::vector<double>(m.n_cols(), 0.0));
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        const auto c = static_cast<std::size_t>(assignments[i] - 1);
        for (std::size_t j = 0; j < m.n_cols(); ++j) cent[c][j] += m.rows[i][j];
    }
    for (std::size_t c = 0; c < cent.size(); ++c) {
        for (double& v : cent[c]) v /= static_cast<double>(sizes[c]);
    }
    return cent;
}

} // namespace detail

/// Mean over clusters of the worst (sigma_i + sigma_j) / d(c_i, c_j) ratio,
/// sigma = mean member distance to centroid. Lower is better.
inline double davies_bouldin(const FeatureMatrix& m, const std::vector<int>& assignments) {
    const std::size_t n = m.n_rows();
    if (assignments.size() != n) throw InvalidK("assignment length mismatch");
    const int k = detail::infer_k(assignments);
    if (k < 2) throw InvalidK("davies_bouldin needs k >= 2");
    const std::vector<std::size_t> sizes = detail::cluster_sizes(assignments, k);
    const auto cent = detail::cluster_centroids(m, assignments, k);
    std::vector<double> sigma(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(assignments[i] - 1);
        sigma[c] += euclidean_distance(m.rows[i], cent[c]);
    }
    for (std::size_t c = 0; c < sigma.size(); ++c) sigma[c] /= static_cast<double>(sizes[c]);
    double total = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
            if (i == j) continue;
            const double dc = euclidean_distance(cent[i], cent[j]);
            if (dc == 0.0) {
                throw DegenerateCentroids("clusters " + std::to_string(i + 1) + " and " +
                                          std::to_string(j + 1) + " have coincident centroids");
            }
            worst = std::max(worst, (sigma[i] + sigma[j]) / dc);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

/// Between-over-within variance ratio [B/(k-1)] / [W/(n-k)]. Higher is
/// better; returns +infinity when the within scatter vanishes.
inline double calinski_harabasz(const FeatureMatrix& m, const std::vector<int>& assignments) {
    const std::size_t n = m.n_rows();
    if (assignments.size() != n) throw InvalidK("assignment length mismatch");
    const int k = detail::infer_k(assignments);
    if (k < 2) throw InvalidK("calinski_harabasz needs k >= 2");
    const std::vector<std::size_t> sizes = detail::cluster_sizes(assignments, k);
    const auto cent = detail::cluster_centroids(m, assignments, k);
    std::vector<double> grand(m.n_cols(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m.n_cols(); ++j) grand[j] += m.rows[i][j];
    }
    for (double& v : grand) v /= static_cast<double>(n);
    double between = 0.0;
    for (std::size_t c = 0; c < cent.size(); ++c) {
        between += static_cast<double>(sizes[c]) * squared_distance(cent[c], grand);
    }
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        within += squared_distance(m.rows[i], cent[static_cast<std::size_t>(assignments[i] - 1)]);
    }
    if (within == 0.0 || n == static_cast<std::size_t>(k)) {
        return std::numeric_limits<double>::infinity();
    }
    return (between / (k - 1.0)) / (within / (static_cast<double>(n) - k));
}

/// VAT ordering: Prim's traversal of the dissimilarity graph seeded at the
/// first endpoint of the largest pairwise distance; ties break to the lowest
/// index. Plotting the matrix in this order makes block structure visible.
inline std::vector<std::size_t> vat_order(const DistanceMatrix& diss) {
    const std::size_t n = diss.size();
    std::vector<std::size_t> order;
    if (n == 0) return order;
    std::size_t start = 0;
    double max_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (diss(i, j) > max_d) {
                max_d = diss(i, j);
                start = i;
            }
        }
    }
    std::vector<char> visited(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    order.reserve(n);
    order.push_back(start);
    visited[start] = 1;
    for (std::size_t i = 0; i < n; ++i) best[i] = diss(i, start);
    while (order.size() < n) {
        std::size_t next = n;
        double nd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (visited[i]) continue;
            if (best[i] < nd) {
                nd = best[i];
                next = i;
            }
        }
        visited[next] = 1;
        order.push_back(next);
        for (std::size_t i = 0; i < n; ++i) best[i] = std::min(best[i], diss(i, next));
    }
    return order;
}

struct FeatureImportance {
    std::vector<std::string> names;
    std::vector<double> scores;    // normalized to sum 1 (see rules below)
    std::vector<char> degenerate;  // 1 where the raw F-statistic was infinite
};

/// One-way ANOVA F per feature against the cluster labels, normalized to sum
/// one. A feature with zero within-cluster variance but positive separation
/// has infinite F; such features split the mass equally and all finite ones
/// get zero. A feature constant everywhere scores zero.
inline FeatureImportance feature_importance(const FeatureMatrix& m,
                                            const std::vector<int>& assignments) {
    const std::size_t n = m.n_rows();
    if (assignments.size() != n) throw InvalidK("assignment length mismatch");
    const int k = detail::infer_k(assignments);
    if (k < 2) throw InvalidK("feature_importance needs k >= 2");
    const std::vector<std::size_t> sizes = detail::cluster_sizes(assignments, k);
    if (n <= static_cast<std::size_t>(k)) throw InvalidK("need more rows than clusters");

    const std::size_t p = m.n_cols();
    FeatureImportance out;
    out.names = m.column_names;
    out.scores.assign(p, 0.0);
    out.degenerate.assign(p, 0);

    std::vector<double> fstat(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double grand = 0.0;
        for (std::size_t i = 0; i < n; ++i) grand += m.rows[i][j];
        grand /= static_cast<double>(n);
        std::vector<double> cmean(static_cast<std::size_t>(k), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            cmean[static_cast<std::size_t>(assignments[i] - 1)] += m.rows[i][j];
        }
        for (std::size_t c = 0; c < cmean.size(); ++c) cmean[c] /= static_cast<double>(sizes[c]);
        double ssb = 0.0;
        for (std::size_t c = 0; c < cmean.size(); ++c) {
            ssb += static_cast<double>(sizes[c]) * (cmean[c] - grand) * (cmean[c] - grand);
        }
        double ssw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = m.rows[i][j] - cmean[static_cast<std::size_t>(assignments[i] - 1)];
            ssw += dev * dev;
        }
        if (ssw == 0.0) {
            if (ssb == 0.0) {
                fstat[j] = 0.0;  // feature identical everywhere
            } else {
                fstat[j] = std::numeric_limits<double>::infinity();
                out.degenerate[j] = 1;
            }
        } else {
            fstat[j] = (ssb / (k - 1.0)) / (ssw / (static_cast<double>(n) - k));
        }
    }
    std::size_t n_inf = 0;
    for (char d : out.degenerate) n_inf += d;
    if (n_inf > 0) {
        for (std::size_t j = 0; j < p; ++j) {
            out.scores[j] = out.degenerate[j] ? 1.0 / static_cast<double>(n_inf) : 0.0;
        }
        return out;
    }
    double total = 0.0;
    for (double f : fstat) total += f;
    if (total > 0.0) {
        for (std::size_t j = 0; j < p; ++j) out.scores[j] = fstat[j] / total;
    }
    return out;
}

struct GapCurve {
    std::vector<int> ks;
    std::vector<double> gap;
    std::vector<double> se;
    int recommended_k = 0;
};

/// Tibshirani's gap statistic: log WSS of the data vs B uniform reference
/// draws over each feature's observed range. recommended_k is the smallest k
/// with gap(k) >= gap(k+1) - se(k+1), or the largest k when never satisfied.
/// data_wss may carry precomputed per-k objectives to avoid re-clustering.
inline GapCurve gap_statistic(const FeatureMatrix& m, int k_min, int k_max, int B,
                              std::uint64_t seed, int n_init = 25,
                              const std::map<int, double>* data_wss = nullptr) {
    const std::size_t n = m.n_rows();
    const std::size_t p = m.n_cols();
    if (k_min < 1 || k_max < k_min) throw InvalidK("bad k range");
    if (B < 10) throw InvalidK("gap statistic needs B >= 10");

    std::vector<double> lo(p), hi(p);
    for (std::size_t j = 0; j < p; ++j) {
        lo[j] = hi[j] = m.rows[0][j];
        for (std::size_t i = 1; i < n; ++i) {
            lo[j] = std::min(lo[j], m.rows[i][j]);
            hi[j] = std::max(hi[j], m.rows[i][j]);
        }
    }

    GapCurve out;
    for (int k = k_min; k <= k_max; ++k) out.ks.push_back(k);
    const std::size_t nk = out.ks.size();

    std::vector<double> log_data(nk, 0.0);
    for (std::size_t ki = 0; ki < nk; ++ki) {
        const int k = out.ks[ki];
        double wss;
        if (data_wss != nullptr && data_wss->count(k) > 0) {
            wss = data_wss->at(k);
        } else {
            wss = kmeans(m, k, derive_seed(seed, 101, static_cast<std::uint64_t>(k)), n_init)
                      .objective;
        }
        log_data[ki] = std::log(std::max(wss, 1e-300));
    }

    // log W_k for every (reference draw, k) pair; references are seeded per b
    // so the curve is identical for any thread count.
    std::vector<std::vector<double>> log_ref(static_cast<std::size_t>(B),
                                             std::vector<double>(nk, 0.0));
    parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
        Rng rng = Rng::stream(derive_seed(seed, 202, b), 0);
        FeatureMatrix ref;
        ref.column_names = m.column_names;
        ref.row_labels.assign(n, "");
        ref.rows.assign(n, std::vector<double>(p, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) ref.rows[i][j] = rng.uniform(lo[j], hi[j]);
        }
        for (std::size_t ki = 0; ki < nk; ++ki) {
            const double wss =
                kmeans(ref, out.ks[ki], derive_seed(seed, 303, b * 1000 + static_cast<std::uint64_t>(out.ks[ki])),
                       n_init)
                    .objective;
            log_ref[b][ki] = std::log(std::max(wss, 1e-300));
        }
    });

    out.gap.assign(nk, 0.0);
    out.se.assign(nk, 0.0);
    for (std::size_t ki = 0; ki < nk; ++ki) {
        double mean = 0.0;
        for (int b = 0; b < B; ++b) mean += log_ref[b][ki];
        mean /= static_cast<double>(B);
        double var = 0.0;
        for (int b = 0; b < B; ++b) {
            var += (log_ref[b][ki] - mean) * (log_ref[b][ki] - mean);
        }
        var /= static_cast<double>(B);
        out.gap[ki] = mean - log_data[ki];
        out.se[ki] = std::sqrt(var) * std::sqrt(1.0 + 1.0 / static_cast<double>(B));
    }

    out.recommended_k = out.ks.back();
    for (std::size_t ki = 0; ki + 1 < nk; ++ki) {
        if (out.gap[ki] >= out.gap[ki + 1] - out.se[ki + 1]) {
            out.recommended_k = out.ks[ki];
            break;
        }
    }
    return out;
}

struct PerKStats {
    double wss = 0.0;
    double silhouette_avg = 0.0;
    double gap = 0.0;
    double gap_se = 0.0;
    double dunn = 0.0;
    double davies_bouldin = 0.0;
    double calinski_harabasz = 0.0;
};

struct ValidationReport {
    HopkinsResult hopkins;
    std::vector<int> ks;
    std::vector<PerKStats> per_k;
    int elbow_k = 0;  // 0 = no clear elbow
    int silhouette_k = 0;
    int gap_k = 0;
    int dunn_k = 0;
    std::uint64_t seed = 0;
    int B = 0;
    int k_min = 0;
    int k_max = 0;
};

/// Runs the whole diagnostic battery on a feature matrix, reusing one
/// best-of-restarts k-means partition per k for every index. Indices that
/// need k >= 2 are NaN on a k = 1 row.
inline ValidationReport validate_clustering(const FeatureMatrix& m, int k_min = 2, int k_max = 10,
                                            int B = 100, std::uint64_t seed = 1,
                                            int hopkins_reps = 100, int n_init = 25) {
    const std::size_t n = m.n_rows();
    if (k_min < 1 || k_max < k_min) throw InvalidK("bad k range");
    if (static_cast<std::size_t>(k_max) > n) throw InvalidK("k_max exceeds rows");

    ValidationReport rep;
    rep.seed = seed;
    rep.B = B;
    rep.k_min = k_min;
    rep.k_max = k_max;
    rep.hopkins = hopkins(m, 0, hopkins_reps, derive_seed(seed, 404, 0));

    const DistanceMatrix diss = DistanceMatrix::from_features(m);
    std::map<int, double> data_wss;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int k = k_min; k <= k_max; ++k) {
        const ClusteringResult r =
            kmeans(m, k, derive_seed(seed, 101, static_cast<std::uint64_t>(k)), n_init);
        data_wss[k] = r.objective;
        PerKStats s;
        s.wss = r.objective;
        if (k >= 2) {
            s.silhouette_avg = silhouette(diss, r.assignments).average;
            s.dunn = dunn(diss, r.assignments);
            s.davies_bouldin = davies_bouldin(m, r.assignments);
            s.calinski_harabasz = calinski_harabasz(m, r.assignments);
        } else {
            s.silhouette_avg = nan;
            s.dunn = nan;
            s.davies_bouldin = nan;
            s.calinski_harabasz = nan;
        }
        rep.ks.push_back(k);
        rep.per_k.push_back(s);
    }

    const GapCurve gap = gap_statistic(m, k_min, k_max, B, seed, n_init, &data_wss);
    for (std::size_t ki = 0; ki < rep.ks.size(); ++ki) {
        rep.per_k[ki].gap = gap.gap[ki];
        rep.per_k[ki].gap_se = gap.se[ki];
    }
    rep.gap_k = gap.recommended_k;

    {
        std::vector<double> wss_vals;  // reuse the per-k objectives for the elbow rule
        for (const auto& s : rep.per_k) wss_vals.push_back(s.wss);
        rep.elbow_k = detail::elbow_from_curve(rep.ks, wss_vals);
    }

    double best_sil = -std::numeric_limits<double>::infinity();
    double best_dunn = -std::numeric_limits<double>::infinity();
    for (std::size_t ki = 0; ki < rep.ks.size(); ++ki) {
        if (rep.ks[ki] < 2) continue;
        if (rep.per_k[ki].silhouette_avg > best_sil) {
            best_sil = rep.per_k[ki].silhouette_avg;
            rep.silhouette_k = rep.ks[ki];
        }
        if (rep.per_k[ki].dunn > best_dunn) {
            best_dunn = rep.per_k[ki].dunn;
            rep.dunn_k = rep.ks[ki];
        }
    }
    return rep;
}

} // namespace polyclust
