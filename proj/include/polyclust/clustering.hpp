#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/features.hpp"
#include "polyclust/parallel.hpp"
#include "polyclust/rng.hpp"

namespace polyclust {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

/// Symmetric pairwise dissimilarities with zero diagonal.
struct DistanceMatrix {
    std::vector<std::vector<double>> values;

    std::size_t size() const { return values.size(); }
    double operator()(std::size_t i, std::size_t j) const { return values[i][j]; }

    static DistanceMatrix from_features(const FeatureMatrix& m) {
        const std::size_t n = m.n_rows();
        DistanceMatrix d;
        d.values.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = euclidean_distance(m.rows[i], m.rows[j]);
                d.values[i][j] = v;
                d.values[j][i] = v;
            }
        }
        return d;
    }

    static DistanceMatrix from_raw(std::vector<std::vector<double>> raw) {
        const std::size_t n = raw.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (raw[i].size() != n) {
                throw InvalidDissimilarity("dissimilarity matrix must be square");
            }
            if (raw[i][i] != 0.0) {
                throw InvalidDissimilarity("dissimilarity diagonal must be zero");
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!(raw[i][j] >= 0.0)) {
                    throw InvalidDissimilarity("dissimilarities must be non-negative and finite");
                }
                const double diff = std::abs(raw[i][j] - raw[j][i]);
                if (diff > 1e-12 * std::max(1.0, std::abs(raw[i][j]))) {
                    throw InvalidDissimilarity("dissimilarity matrix must be symmetric");
                }
            }
        }
        DistanceMatrix d;
        d.values = std::move(raw);
        return d;
    }
};

struct ClusteringResult {
    std::string algorithm;
    int k = 0;
    std::vector<int> assignments;                // 1-based cluster ids, one per row
    std::vector<std::vector<double>> centroids;  // kmeans only
    std::vector<std::size_t> medoids;            // pam/clara only, sorted row indices
    double objective = 0.0;
    std::vector<double> objective_trace;
    int iterations = 0;
    std::uint64_t seed = 0;
};

namespace detail {

struct KmeansRun {
    double objective = std::numeric_limits<double>::infinity();
    std::vector<int> assignments;  // 0-based during the run
    std::vector<std::vector<double>> centroids;
    std::vector<double> trace;
    int iterations = 0;
};

inline std::size_t nearest_centroid(const std::vector<std::vector<double>>& centroids,
                                    std::span<const double> x, double* dist_out = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(centroids[c], x);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (dist_out != nullptr) *dist_out = best_d;
    return best;
}

inline std::vector<std::vector<double>> kmeanspp_init(const FeatureMatrix& m, int k, Rng& rng) {
    const std::size_t n = m.n_rows();
    std::vector<std::size_t> centers;
    std::vector<char> chosen(n, 0);
    centers.push_back(rng.uniform_index(n));
    chosen[centers[0]] = 1;
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (centers.size() < static_cast<std::size_t>(k)) {
        const auto& last = m.rows[centers.back()];
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(m.rows[i], last));
            total += d2[i];
        }
        std::size_t next = n;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum > u) {
                    next = i;
                    break;
                }
            }
            if (next == n) {  // float roundoff: fall back to the last positive weight
                for (std::size_t i = n; i-- > 0;) {
                    if (d2[i] > 0.0) {
                        next = i;
                        break;
                    }
                }
            }
        }
        if (next == n) {  // all remaining points duplicate a center
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    next = i;
                    break;
                }
            }
        }
        centers.push_back(next);
        chosen[next] = 1;
    }
    std::vector<std::vector<double>> centroids;
    centroids.reserve(centers.size());
    for (std::size_t c : centers) centroids.push_back(m.rows[c]);
    return centroids;
}

inline KmeansRun kmeans_single(const FeatureMatrix& m, int k, Rng rng, int max_iter) {
    const std::size_t n = m.n_rows();
    KmeansRun run;
    run.centroids = kmeanspp_init(m, k, rng);
    run.assignments.assign(n, -1);
    std::vector<int> prev(n, -1);
    for (int iter = 1; iter <= max_iter; ++iter) {
        double wss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            run.assignments[i] = static_cast<int>(nearest_centroid(run.centroids, m.rows[i], &d));
            wss += d;
        }
        run.trace.push_back(wss);
        run.objective = wss;
        run.iterations = iter;
        if (run.assignments == prev) break;
        prev = run.assignments;

        const std::size_t p = m.n_cols();
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(p, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(run.assignments[i]);
            ++counts[c];
            for (std::size_t j = 0; j < p; ++j) sums[c][j] += m.rows[i][j];
        }
        std::vector<char> reseeded(n, 0);
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < p; ++j) {
                    run.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
                }
            }
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] > 0) continue;
            // Reseed an empty cluster at the point currently farthest from
            // its own centroid; it gets captured on the next assignment pass.
            std::size_t far = n;
            double far_d = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (reseeded[i]) continue;
                const auto a = static_cast<std::size_t>(run.assignments[i]);
                if (counts[a] <= 1) continue;
                const double d = squared_distance(run.centroids[a], m.rows[i]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == n) break;  // fewer distinct points than clusters
            run.centroids[c] = m.rows[far];
            reseeded[far] = 1;
        }
    }
    return run;
}

/// Repairs any cluster left empty by pathological (duplicate-point) inputs so
/// the non-empty invariant always holds. No-op on typical data.
inline void enforce_nonempty(const FeatureMatrix& m, int k, KmeansRun& run) {
    const std::size_t n = m.n_rows();
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (int a : run.assignments) ++counts[static_cast<std::size_t>(a)];
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        if (counts[c] > 0) continue;
        std::size_t far = n;
        double far_d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<std::size_t>(run.assignments[i]);
            if (counts[a] <= 1) continue;
            const double d = squared_distance(run.centroids[a], m.rows[i]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == n) throw InvalidK("k exceeds the number of distinct points");
        --counts[static_cast<std::size_t>(run.assignments[far])];
        run.assignments[far] = static_cast<int>(c);
        ++counts[c];
        run.centroids[c] = m.rows[far];
    }
    // Refresh centroids and objective from the final assignments.
    const std::size_t p = m.n_cols();
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                          std::vector<double>(p, 0.0));
    std::vector<std::size_t> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(run.assignments[i]);
        ++cnt[c];
        for (std::size_t j = 0; j < p; ++j) sums[c][j] += m.rows[i][j];
    }
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        for (std::size_t j = 0; j < p; ++j) {
            run.centroids[c][j] = sums[c][j] / static_cast<double>(cnt[c]);
        }
    }
    double wss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wss += squared_distance(run.centroids[static_cast<std::size_t>(run.assignments[i])],
                                m.rows[i]);
    }
    if (wss <= run.objective) {
        run.objective = wss;
        if (run.trace.empty() || wss < run.trace.back()) run.trace.push_back(wss);
    }
}

/// Renumbers clusters by order of first appearance (row 0's cluster becomes
/// 1), permuting centers to match, so equal partitions serialize equally.
inline void canonicalize(ClusteringResult& r, int k) {
    std::vector<int> remap(static_cast<std::size_t>(k), 0);
    int next = 0;
    for (int& a : r.assignments) {
        if (remap[static_cast<std::size_t>(a)] == 0) remap[static_cast<std::size_t>(a)] = ++next;
        a = remap[static_cast<std::size_t>(a)];
    }
    if (!r.centroids.empty()) {
        std::vector<std::vector<double>> reordered(r.centroids.size());
        for (std::size_t c = 0; c < r.centroids.size(); ++c) {
            if (remap[c] > 0) reordered[static_cast<std::size_t>(remap[c] - 1)] = r.centroids[c];
        }
        // Clusters that never appear (impossible after non-empty repair) would
        // leave gaps; guard stays for safety.
        r.centroids = std::move(reordered);
    }
}

} // namespace detail

/// Lloyd's k-means with k-means++ starts, n_init independent restarts, and
/// farthest-point repair of empty clusters. Ties across restarts go to the
/// lowest restart index. Expects standardized features (scale-sensitive).
inline ClusteringResult kmeans(const FeatureMatrix& m, int k, std::uint64_t seed,
                               int n_init = 25, int max_iter = 300) {
    const std::size_t n = m.n_rows();
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw InvalidK("kmeans needs 1 <= k <= rows; got k=" + std::to_string(k) + ", rows=" +
                       std::to_string(n));
    }
    if (n_init < 1) throw InvalidK("n_init must be positive");
    std::vector<detail::KmeansRun> runs(static_cast<std::size_t>(n_init));
    parallel_for(runs.size(), [&](std::size_t r) {
        runs[r] = detail::kmeans_single(m, k, Rng::stream(seed, r), max_iter);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].objective < runs[best].objective) best = r;
    }
    detail::enforce_nonempty(m, k, runs[best]);
    ClusteringResult out;
    out.algorithm = "kmeans";
    out.k = k;
    out.seed = seed;
    out.assignments = std::move(runs[best].assignments);
    out.centroids = std::move(runs[best].centroids);
    out.objective = runs[best].objective;
    out.objective_trace = std::move(runs[best].trace);
    out.iterations = runs[best].iterations;
    detail::canonicalize(out, k);
    return out;
}

/// Extra seeded SWAP descents from random medoid sets; the greedy BUILD start
/// alone can converge to a swap-local optimum above the true minimum.
inline constexpr int kPamRestarts = 12;
inline constexpr std::uint64_t kPamRestartStream = 909;

/// Classical PAM: greedy BUILD, then repeated best-improving SWAP with strict
/// decrease, best of the BUILD start and kPamRestarts seeded random starts.
inline ClusteringResult pam(const DistanceMatrix& diss, int k, std::uint64_t seed = 0) {
    const std::size_t n = diss.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw InvalidK("pam needs 1 <= k <= points; got k=" + std::to_string(k) + ", points=" +
                       std::to_string(n));
    }
    std::vector<std::size_t> medoids;
    std::vector<char> is_medoid(n, 0);

    // BUILD: start from the 1-medoid optimum, then greedily add the point
    // with the largest total-cost reduction.
    std::size_t first = 0;
    double first_cost = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += diss(i, j);
        if (c < first_cost) {
            first_cost = c;
            first = j;
        }
    }
    medoids.push_back(first);
    is_medoid[first] = 1;
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = diss(i, first);

    while (medoids.size() < static_cast<std::size_t>(k)) {
        std::size_t pick = n;
        double best_gain = -1.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double improve = nearest[i] - diss(i, c);
                if (improve > 0.0) gain += improve;
            }
            if (gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = 1;
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], diss(i, pick));
    }

    auto total_cost = [&](const std::vector<std::size_t>& med) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t j : med) m = std::min(m, diss(i, j));
            c += m;
        }
        return c;
    };

    struct Descent {
        double objective = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> medoids;
        std::vector<double> trace;
        int swaps = 0;
    };

    // SWAP: scan (medoid slot, candidate) pairs in a fixed order, apply the
    // single best strictly improving swap, repeat until none improves.
    auto swap_descent = [&](std::vector<std::size_t> med) {
        std::vector<char> in_set(n, 0);
        for (std::size_t m : med) in_set[m] = 1;
        Descent d;
        d.objective = total_cost(med);
        d.trace.push_back(d.objective);
        for (;;) {
            double best_obj = d.objective;
            std::size_t best_slot = n, best_h = n;
            for (std::size_t s = 0; s < med.size(); ++s) {
                for (std::size_t h = 0; h < n; ++h) {
                    if (in_set[h]) continue;
                    std::vector<std::size_t> trial = med;
                    trial[s] = h;
                    const double c = total_cost(trial);
                    if (c < best_obj) {
                        best_obj = c;
                        best_slot = s;
                        best_h = h;
                    }
                }
            }
            if (best_slot == n) break;
            in_set[med[best_slot]] = 0;
            med[best_slot] = best_h;
            in_set[best_h] = 1;
            d.objective = best_obj;
            d.trace.push_back(d.objective);
            ++d.swaps;
        }
        d.medoids = std::move(med);
        return d;
    };

    // A single descent from the greedy start can stall in a swap-local
    // optimum, so a few seeded random starts descend too and the best
    // converged set wins; the greedy start keeps ties.
    Descent best = swap_descent(std::move(medoids));
    Rng restart_rng = Rng::stream(seed, kPamRestartStream);
    for (int r = 0; r < kPamRestarts; ++r) {
        Descent d = swap_descent(
            restart_rng.sample_without_replacement(n, static_cast<std::size_t>(k)));
        if (d.objective < best.objective) best = std::move(d);
    }

    std::sort(best.medoids.begin(), best.medoids.end());
    ClusteringResult out;
    out.algorithm = "pam";
    out.k = k;
    out.seed = seed;
    out.medoids = best.medoids;
    out.objective = best.objective;
    out.objective_trace = std::move(best.trace);
    out.iterations = best.swaps;
    out.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // A medoid always belongs to its own cluster; others go to the
        // nearest medoid, first of the sorted list on ties.
        std::size_t best_c = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < out.medoids.size(); ++c) {
            if (out.medoids[c] == i) {
                best_c = c;
                break;
            }
            const double d = diss(i, out.medoids[c]);
            if (d < best_d) {
                best_d = d;
                best_c = c;
            }
        }
        out.assignments[i] = static_cast<int>(best_c) + 1;
    }
    return out;
}

/// CLARA: PAM on n_samples random subsets, every row then assigned to the
/// nearest candidate medoid, best full-data total dissimilarity wins.
/// sample_size <= 0 selects the default min(rows, 40 + 2k).
inline ClusteringResult clara(const FeatureMatrix& m, int k, std::uint64_t seed,
                              int n_samples = 5, int sample_size = 0) {
    const std::size_t n = m.n_rows();
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw InvalidK("clara needs 1 <= k <= rows; got k=" + std::to_string(k) + ", rows=" +
                       std::to_string(n));
    }
    if (n_samples < 1) throw InvalidK("n_samples must be positive");
    std::size_t ss = sample_size > 0 ? static_cast<std::size_t>(sample_size)
                                     : std::min(n, static_cast<std::size_t>(40 + 2 * k));
    ss = std::min(ss, n);
    if (ss < static_cast<std::size_t>(k)) {
        throw InvalidK("sample_size must be at least k");
    }

    struct Candidate {
        double score = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> medoids;
    };
    std::vector<Candidate> cands(static_cast<std::size_t>(n_samples));
    parallel_for(cands.size(), [&](std::size_t s) {
        Rng rng = Rng::stream(seed, s);
        const std::vector<std::size_t> sample = rng.sample_without_replacement(n, ss);
        DistanceMatrix sub;
        sub.values.assign(sample.size(), std::vector<double>(sample.size(), 0.0));
        for (std::size_t a = 0; a < sample.size(); ++a) {
            for (std::size_t b = a + 1; b < sample.size(); ++b) {
                const double d = euclidean_distance(m.rows[sample[a]], m.rows[sample[b]]);
                sub.values[a][b] = d;
                sub.values[b][a] = d;
            }
        }
        const ClusteringResult local = pam(sub, k, seed);
        Candidate c;
        c.medoids.reserve(local.medoids.size());
        for (std::size_t mi : local.medoids) c.medoids.push_back(sample[mi]);
        std::sort(c.medoids.begin(), c.medoids.end());
        double score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t mi : c.medoids) {
                best = std::min(best, euclidean_distance(m.rows[i], m.rows[mi]));
            }
            score += best;
        }
        c.score = score;
        cands[s] = std::move(c);
    });

    std::size_t best = 0;
    std::vector<double> trace;
    trace.reserve(cands.size());
    for (std::size_t s = 0; s < cands.size(); ++s) {
        if (cands[s].score < cands[best].score) best = s;
        trace.push_back(cands[best].score);  // best-so-far, non-increasing
    }

    ClusteringResult out;
    out.algorithm = "clara";
    out.k = k;
    out.seed = seed;
    out.medoids = cands[best].medoids;
    out.objective = cands[best].score;
    out.objective_trace = std::move(trace);
    out.iterations = n_samples;
    out.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best_c = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < out.medoids.size(); ++c) {
            if (out.medoids[c] == i) {
                best_c = c;
                break;
            }
            const double d = euclidean_distance(m.rows[i], m.rows[out.medoids[c]]);
            if (d < best_d) {
                best_d = d;
                best_c = c;
            }
        }
        out.assignments[i] = static_cast<int>(best_c) + 1;
    }
    return out;
}

} // namespace polyclust
