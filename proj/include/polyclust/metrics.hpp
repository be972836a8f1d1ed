#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "polyclust/clustering.hpp"
#include "polyclust/errors.hpp"
#include "polyclust/features.hpp"

namespace polyclust {

namespace detail {

/// Exact rectangular assignment maximizing total weight, via the O(n^3)
/// Hungarian algorithm with potentials on a zero-padded square matrix.
/// Returns, per row, the assigned column (or -1 for padding matches).
inline std::vector<int> max_assignment(const std::vector<std::vector<double>>& weight) {
    const std::size_t r = weight.size();
    const std::size_t c = r == 0 ? 0 : weight[0].size();
    const std::size_t n = std::max(r, c);
    if (n == 0) return {};
    // Minimize cost = max_weight - weight on the padded square matrix.
    double wmax = 0.0;
    for (const auto& row : weight) {
        for (double v : row) wmax = std::max(wmax, v);
    }
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, wmax));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) cost[i + 1][j + 1] = wmax - weight[i][j];
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // column -> row
    std::vector<std::size_t> way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0][j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(r, -1);
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t i = match[j];
        if (i >= 1 && i <= r && j <= c) row_to_col[i - 1] = static_cast<int>(j - 1);
    }
    return row_to_col;
}

} // namespace detail

/// Confusion counts after the cluster ids have been matched to true labels.
struct AlignedConfusion {
    std::vector<std::string> labels;             // sorted unique true labels (rows)
    std::vector<int> cluster_ids;                // sorted unique cluster ids (columns)
    std::vector<std::vector<long long>> counts;  // labels x clusters
    std::vector<int> matched_cluster;            // per label: column index or -1
    std::size_t total = 0;
    double accuracy = 0.0;

    long long row_total(std::size_t r) const {
        long long s = 0;
        for (long long v : counts[r]) s += v;
        return s;
    }
    long long col_total(std::size_t c) const {
        long long s = 0;
        for (const auto& row : counts) s += row[c];
        return s;
    }
};

/// Matches cluster ids to true labels so the total count on matched pairs
/// (and hence accuracy) is maximal; exact via the Hungarian algorithm. The
/// mapping is injective: each cluster serves at most one label.
inline AlignedConfusion align_clusters(const std::vector<std::string>& true_labels,
                                       const std::vector<int>& assignments) {
    if (true_labels.size() != assignments.size()) {
        throw InputMismatch("labels and assignments differ in length (" +
                            std::to_string(true_labels.size()) + " vs " +
                            std::to_string(assignments.size()) + ")");
    }
    if (true_labels.empty()) throw InputMismatch("empty inputs");

    AlignedConfusion out;
    out.labels = true_labels;
    std::sort(out.labels.begin(), out.labels.end());
    out.labels.erase(std::unique(out.labels.begin(), out.labels.end()), out.labels.end());
    out.cluster_ids = assignments;
    std::sort(out.cluster_ids.begin(), out.cluster_ids.end());
    out.cluster_ids.erase(std::unique(out.cluster_ids.begin(), out.cluster_ids.end()),
                          out.cluster_ids.end());

    const std::size_t kt = out.labels.size();
    const std::size_t kp = out.cluster_ids.size();
    out.counts.assign(kt, std::vector<long long>(kp, 0));
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const auto r = static_cast<std::size_t>(
            std::lower_bound(out.labels.begin(), out.labels.end(), true_labels[i]) -
            out.labels.begin());
        const auto c = static_cast<std::size_t>(
            std::lower_bound(out.cluster_ids.begin(), out.cluster_ids.end(), assignments[i]) -
            out.cluster_ids.begin());
        ++out.counts[r][c];
    }
    out.total = true_labels.size();

    std::vector<std::vector<double>> weight(kt, std::vector<double>(kp, 0.0));
    for (std::size_t r = 0; r < kt; ++r) {
        for (std::size_t c = 0; c < kp; ++c) {
            weight[r][c] = static_cast<double>(out.counts[r][c]);
        }
    }
    out.matched_cluster = detail::max_assignment(weight);

    long long hit = 0;
    for (std::size_t r = 0; r < kt; ++r) {
        if (out.matched_cluster[r] >= 0) {
            hit += out.counts[r][static_cast<std::size_t>(out.matched_cluster[r])];
        }
    }
    out.accuracy = static_cast<double>(hit) / static_cast<double>(out.total);
    return out;
}

struct BinaryMeasures {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
    double balanced_accuracy = 0.0;
    std::string note;  // populated when a division was undefined
};

/// Two-class measures with the first (alphabetically) label as the positive
/// class. Undefined ratios surface as NaN plus a note instead of crashing.
inline BinaryMeasures binary_measures(const AlignedConfusion& conf) {
    if (conf.labels.size() != 2) {
        throw InputMismatch("binary_measures needs exactly 2 true classes, got " +
                            std::to_string(conf.labels.size()));
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    long long tp = 0, fp = 0;
    if (conf.matched_cluster[0] >= 0) {
        const auto c = static_cast<std::size_t>(conf.matched_cluster[0]);
        tp = conf.counts[0][c];
        fp = conf.col_total(c) - tp;
    }
    const long long fn = conf.row_total(0) - tp;
    const long long tn = static_cast<long long>(conf.total) - tp - fp - fn;

    BinaryMeasures b;
    if (tp + fn > 0) {
        b.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        b.sensitivity = nan;
        b.note = "no positive-class points";
    }
    if (tn + fp > 0) {
        b.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
    } else {
        b.specificity = nan;
        b.note = "no negative-class points";
    }
    if (2 * tp + fp + fn > 0) {
        b.f1 = static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
    } else {
        b.f1 = nan;
        b.note = "positive class empty in truth and prediction";
    }
    b.balanced_accuracy = (b.sensitivity + b.specificity) / 2.0;
    return b;
}

struct MulticlassMeasures {
    std::vector<std::string> classes;
    std::vector<double> sensitivity;
    std::vector<double> specificity;
    std::vector<double> f1;
    double weighted_f1 = 0.0;        // class-frequency weighted mean of f1
    double macro_sensitivity = 0.0;  // unweighted means
    double macro_specificity = 0.0;
};

/// One-vs-rest measures per class; empty classes carry zero weight in the
/// weighted F1 and are skipped by the macro averages.
inline MulticlassMeasures multiclass_measures(const AlignedConfusion& conf) {
    const std::size_t kt = conf.labels.size();
    if (kt < 2) throw InputMismatch("multiclass_measures needs at least 2 classes");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    MulticlassMeasures m;
    m.classes = conf.labels;
    m.sensitivity.assign(kt, nan);
    m.specificity.assign(kt, nan);
    m.f1.assign(kt, nan);
    double macro_sens = 0.0, macro_spec = 0.0;
    std::size_t counted = 0;
    for (std::size_t r = 0; r < kt; ++r) {
        long long tp = 0, fp = 0;
        if (conf.matched_cluster[r] >= 0) {
            const auto c = static_cast<std::size_t>(conf.matched_cluster[r]);
            tp = conf.counts[r][c];
            fp = conf.col_total(c) - tp;
        }
        const long long fn = conf.row_total(r) - tp;
        const long long tn = static_cast<long long>(conf.total) - tp - fp - fn;
        if (tp + fn > 0) m.sensitivity[r] = static_cast<double>(tp) / static_cast<double>(tp + fn);
        if (tn + fp > 0) m.specificity[r] = static_cast<double>(tn) / static_cast<double>(tn + fp);
        if (2 * tp + fp + fn > 0) {
            m.f1[r] = static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
        }
        if (conf.row_total(r) > 0) {
            m.weighted_f1 += (static_cast<double>(conf.row_total(r)) /
                              static_cast<double>(conf.total)) *
                             m.f1[r];
            macro_sens += m.sensitivity[r];
            macro_spec += m.specificity[r];
            ++counted;
        }
    }
    m.macro_sensitivity = counted > 0 ? macro_sens / static_cast<double>(counted) : nan;
    m.macro_specificity = counted > 0 ? macro_spec / static_cast<double>(counted) : nan;
    return m;
}

/// Mann-Whitney AUC with midranks, so ties count half. Exactly equals the
/// O(n^2) pair-counting definition (ranks are half-integers; the sums are
/// exact in double precision).
inline double auc(const std::vector<int>& positive, const std::vector<double>& scores) {
    if (positive.size() != scores.size()) {
        throw InputMismatch("labels and scores differ in length");
    }
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int p : positive) n_pos += (p != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw UndefinedAUC("AUC needs both classes present");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw InputMismatch("scores must be finite");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
    });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) {
            if (positive[idx[t]] != 0) rank_sum_pos += midrank;
        }
        i = j + 1;
    }
    const double u = rank_sum_pos -
                     static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace detail {

inline std::vector<std::vector<double>> cluster_centers_of(const FeatureMatrix& m,
                                                           const ClusteringResult& r) {
    if (!r.centroids.empty()) return r.centroids;
    std::vector<std::vector<double>> centers;
    centers.reserve(r.medoids.size());
    for (std::size_t mi : r.medoids) centers.push_back(m.rows[mi]);
    return centers;
}

} // namespace detail

/// AUC of a hard clustering against true labels, using center geometry as
/// the score. Binary: score(x) = d(x, c_neg) / (d(x, c_pos) + d(x, c_neg)).
/// Multiclass: per-class scores are normalized inverse center distances and
/// the one-vs-rest AUCs are averaged.
inline double cluster_auc(const FeatureMatrix& m, const ClusteringResult& r,
                          const std::vector<std::string>& true_labels) {
    if (true_labels.size() != m.n_rows() || r.assignments.size() != m.n_rows()) {
        throw InputMismatch("rows, labels, and assignments must agree");
    }
    const AlignedConfusion conf = align_clusters(true_labels, r.assignments);
    const std::size_t kt = conf.labels.size();
    if (kt < 2) throw UndefinedAUC("AUC needs at least two true classes");
    const auto centers = detail::cluster_centers_of(m, r);

    // Per true class, the center of its matched cluster.
    std::vector<std::vector<double>> class_center(kt);
    for (std::size_t c = 0; c < kt; ++c) {
        if (conf.matched_cluster[c] < 0) {
            throw UndefinedAUC("class '" + conf.labels[c] + "' has no matched cluster");
        }
        const int cid = conf.cluster_ids[static_cast<std::size_t>(conf.matched_cluster[c])];
        if (cid < 1 || static_cast<std::size_t>(cid) > centers.size()) {
            throw UndefinedAUC("cluster id " + std::to_string(cid) + " has no center");
        }
        class_center[c] = centers[static_cast<std::size_t>(cid - 1)];
    }

    const std::size_t n = m.n_rows();
    if (kt == 2) {
        std::vector<int> pos(n, 0);
        std::vector<double> score(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = (true_labels[i] == conf.labels[0]) ? 1 : 0;
            const double dp = euclidean_distance(m.rows[i], class_center[0]);
            const double dn = euclidean_distance(m.rows[i], class_center[1]);
            score[i] = (dp + dn) > 0.0 ? dn / (dp + dn) : 0.5;
        }
        return auc(pos, score);
    }

    double total = 0.0;
    for (std::size_t c = 0; c < kt; ++c) {
        std::vector<int> pos(n, 0);
        std::vector<double> score(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = (true_labels[i] == conf.labels[c]) ? 1 : 0;
            double inv_sum = 0.0;
            double inv_c = 0.0;
            bool exact = false;
            for (std::size_t o = 0; o < kt; ++o) {
                const double d = euclidean_distance(m.rows[i], class_center[o]);
                if (d == 0.0) {
                    // Sitting on a center: all mass goes to that class.
                    score[i] = (o == c) ? 1.0 : 0.0;
                    exact = true;
                    break;
                }
                const double inv = 1.0 / d;
                inv_sum += inv;
                if (o == c) inv_c = inv;
            }
            if (!exact) score[i] = inv_c / inv_sum;
        }
        total += auc(pos, score);
    }
    return total / static_cast<double>(kt);
}

} // namespace polyclust
