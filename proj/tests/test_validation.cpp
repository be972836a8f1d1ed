#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyclust/validation.hpp"

using namespace polyclust;

namespace {

std::vector<int> random_assignment(std::size_t n, int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> a(n);
    for (;;) {
        std::vector<bool> seen(static_cast<std::size_t>(k) + 1, false);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
            seen[static_cast<std::size_t>(a[i])] = true;
        }
        bool full = true;
        for (int c = 1; c <= k; ++c) full = full && seen[static_cast<std::size_t>(c)];
        if (full) return a;  // every cluster must be non-empty
    }
}

} // namespace

TEST_CASE("hopkins sits near one half on uniform noise") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const FeatureMatrix m = fixtures::uniform_matrix(200, 12, 40 + seed);
        const HopkinsResult h = hopkins(m, 0, 100, seed);
        CHECK(h.statistic > 0.40);
        CHECK(h.statistic < 0.62);
        CHECK(h.p_value >= 0.0);
        CHECK(h.p_value <= 1.0);
    }
}

TEST_CASE("hopkins approaches one on strongly clustered data") {
    const FeatureMatrix m = fixtures::separated_blobs(3, 20, 4, 25.0, 0.5, 50);
    const HopkinsResult h = hopkins(m, 0, 100, 1);
    CHECK(h.statistic > 0.8);
    CHECK(h.p_value < 0.05);
}

TEST_CASE("hopkins uses the documented default probe count") {
    const FeatureMatrix big = fixtures::uniform_matrix(200, 3, 51);
    CHECK(hopkins(big, 0, 5, 1).m_samples == 20);
    const FeatureMatrix small = fixtures::uniform_matrix(30, 3, 52);
    CHECK(hopkins(small, 0, 5, 1).m_samples == 5);
}

TEST_CASE("hopkins is deterministic and validates its arguments") {
    const FeatureMatrix m = fixtures::uniform_matrix(50, 3, 53);
    const HopkinsResult a = hopkins(m, 10, 30, 9);
    const HopkinsResult b = hopkins(m, 10, 30, 9);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);
    CHECK(a.reps == 30);
    CHECK_THROWS_AS(hopkins(m, 50, 10, 1), InvalidSampleSize);
    CHECK_THROWS_AS(hopkins(m, 10, 0, 1), InvalidSampleSize);
    FeatureMatrix one;
    one.column_names = {"x"};
    one.rows = {{1.0}};
    CHECK_THROWS_AS(hopkins(one, 0, 10, 1), InvalidSampleSize);
}

TEST_CASE("the wss curve bends at the true cluster count") {
    // Equidistant blob centers, so no two-cluster split looks better than the
    // three-cluster one and the bend lands squarely at k = 3.
    const std::vector<fixtures::Blob> blobs = {
        {{0.0, 0.0}, 0.8, 15}, {{12.0, 0.0}, 0.8, 15}, {{6.0, 10.392}, 0.8, 15}};
    const FeatureMatrix m = fixtures::blob_matrix(blobs, 54);
    const WssCurve c = wss_curve(m, 1, 6, 7);
    REQUIRE(c.ks == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(c.elbow_k == 3);
    for (std::size_t i = 1; i < c.wss.size(); ++i) CHECK(c.wss[i] <= c.wss[i - 1] + 1e-9);
    CHECK_THROWS_AS(wss_curve(m, 0, 3, 1), InvalidK);
    CHECK_THROWS_AS(wss_curve(m, 3, 2, 1), InvalidK);
}

TEST_CASE("silhouette is near one for far apart blobs") {
    const std::vector<fixtures::Blob> blobs = {{{0.0, 0.0}, 0.3, 12}, {{30.0, 0.0}, 0.3, 12}};
    const FeatureMatrix m = fixtures::blob_matrix(blobs, 55);
    const SilhouetteResult s = silhouette(m, fixtures::blob_truth(blobs));
    CHECK(s.average > 0.9);
    REQUIRE(s.per_point.size() == 24);
    for (double v : s.per_point) {
        CHECK(v <= 1.0);
        CHECK(v >= -1.0);
    }
}

TEST_CASE("silhouette of coincident points is zero by convention") {
    FeatureMatrix m;
    m.column_names = {"x"};
    m.rows = {{2.0}, {2.0}, {2.0}, {2.0}};
    const SilhouetteResult s = silhouette(m, {1, 1, 2, 2});
    CHECK(s.average == 0.0);
}

TEST_CASE("silhouette matches the definitional recomputation") {
    const FeatureMatrix m = fixtures::uniform_matrix(25, 3, 56);
    const DistanceMatrix d = DistanceMatrix::from_features(m);
    const std::vector<int> assign = random_assignment(25, 3, 57);
    const SilhouetteResult s = silhouette(d, assign);
    const double want = oracles::silhouette_average(d.values, assign, 3);
    CHECK(s.average == Catch::Approx(want).margin(1e-9));
}

TEST_CASE("silhouette needs at least two clusters and matching lengths") {
    const FeatureMatrix m = fixtures::uniform_matrix(10, 2, 58);
    CHECK_THROWS_AS(silhouette(m, std::vector<int>(10, 1)), InvalidK);
    CHECK_THROWS_AS(silhouette(m, std::vector<int>{1, 2}), InvalidK);
}

TEST_CASE("dunn matches its oracle and ignores distance scale") {
    const FeatureMatrix m = fixtures::uniform_matrix(20, 3, 59);
    const std::vector<int> assign = random_assignment(20, 3, 60);
    const DistanceMatrix d = DistanceMatrix::from_features(m);
    const double got = dunn(d, assign);
    CHECK(got == Catch::Approx(oracles::dunn_index(d.values, assign)).margin(1e-12));

    DistanceMatrix scaled = d;
    for (auto& row : scaled.values) {
        for (double& v : row) v *= 7.0;
    }
    CHECK(dunn(scaled, assign) == Catch::Approx(got).margin(1e-12));
}

TEST_CASE("dunn returns infinity when clusters have no spread") {
    FeatureMatrix m;
    m.column_names = {"x"};
    m.rows = {{0.0}, {0.0}, {5.0}, {5.0}};
    CHECK(std::isinf(dunn(m, {1, 1, 2, 2})));
}

TEST_CASE("davies_bouldin matches its oracle and is label-permutation invariant") {
    const FeatureMatrix m = fixtures::uniform_matrix(24, 3, 61);
    const std::vector<int> assign = random_assignment(24, 3, 62);
    const double got = davies_bouldin(m, assign);
    CHECK(got == Catch::Approx(oracles::davies_bouldin_index(m.rows, assign, 3)).margin(1e-9));

    std::vector<int> permuted = assign;  // swap cluster ids 1 and 3
    for (int& a : permuted) a = (a == 1) ? 3 : (a == 3 ? 1 : a);
    CHECK(davies_bouldin(m, permuted) == Catch::Approx(got).margin(1e-12));
}

TEST_CASE("davies_bouldin rejects coincident centroids") {
    FeatureMatrix m;
    m.column_names = {"x", "y"};
    m.rows = {{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}, {1.0, -1.0}};
    // both clusters average to (1, 0)
    CHECK_THROWS_AS(davies_bouldin(m, {1, 1, 2, 2}), DegenerateCentroids);
}

TEST_CASE("calinski_harabasz matches its oracle and degenerates to infinity") {
    const FeatureMatrix m = fixtures::uniform_matrix(24, 3, 63);
    const std::vector<int> assign = random_assignment(24, 4, 64);
    const double got = calinski_harabasz(m, assign);
    CHECK(got == Catch::Approx(oracles::calinski_harabasz_index(m.rows, assign, 4)).margin(1e-9));

    FeatureMatrix tiny;
    tiny.column_names = {"x"};
    tiny.rows = {{0.0}, {1.0}, {2.0}};
    CHECK(std::isinf(calinski_harabasz(tiny, {1, 2, 3})));  // k == n
    FeatureMatrix dup;
    dup.column_names = {"x"};
    dup.rows = {{0.0}, {0.0}, {5.0}, {5.0}};
    CHECK(std::isinf(calinski_harabasz(dup, {1, 1, 2, 2})));  // zero within scatter
}

TEST_CASE("vat ordering is a permutation that keeps blobs contiguous") {
    const std::vector<fixtures::Blob> blobs = {
        {{0.0, 0.0}, 0.4, 10}, {{15.0, 0.0}, 0.4, 10}, {{0.0, 15.0}, 0.4, 10}};
    const FeatureMatrix m = fixtures::blob_matrix(blobs, 65);
    const DistanceMatrix d = DistanceMatrix::from_features(m);
    const std::vector<std::size_t> order = vat_order(d);
    REQUIRE(order.size() == 30);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) REQUIRE(sorted[i] == i);

    const std::vector<int> truth = fixtures::blob_truth(blobs);
    int runs = 1;
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (truth[order[i]] != truth[order[i - 1]]) ++runs;
    }
    CHECK(runs == 3);  // each blob appears as one uninterrupted block
    CHECK(vat_order(d) == order);
    CHECK(vat_order(DistanceMatrix{}).empty());
}

TEST_CASE("feature importance scores sum to one and rank the separator first") {
    const std::vector<fixtures::Blob> blobs = {{{0.0, 0.0}, 0.4, 15}, {{12.0, 0.0}, 0.4, 15}};
    FeatureMatrix m = fixtures::blob_matrix(blobs, 66);
    m.column_names = {"separator", "noise"};
    const FeatureImportance fi = feature_importance(m, fixtures::blob_truth(blobs));
    REQUIRE(fi.scores.size() == 2);
    double total = 0.0;
    for (double s : fi.scores) total += s;
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    CHECK(fi.scores[0] > 0.9);
    CHECK(fi.names == m.column_names);
}

TEST_CASE("an identical-everywhere feature scores zero importance") {
    FeatureMatrix m;
    m.column_names = {"flat", "useful"};
    m.rows = {{1.0, 0.0}, {1.0, 0.1}, {1.0, 5.0}, {1.0, 5.2}};
    const FeatureImportance fi = feature_importance(m, {1, 1, 2, 2});
    CHECK(fi.scores[0] == 0.0);
    CHECK(fi.scores[1] == Catch::Approx(1.0));
}

TEST_CASE("perfectly separating features split the mass equally") {
    FeatureMatrix m;
    m.column_names = {"exact", "noisy"};
    // the first feature equals the cluster id: zero within-cluster variance
    m.rows = {{1.0, 0.3}, {1.0, 0.1}, {2.0, 4.9}, {2.0, 5.6}};
    const FeatureImportance fi = feature_importance(m, {1, 1, 2, 2});
    REQUIRE(fi.degenerate[0] == 1);
    CHECK(fi.degenerate[1] == 0);
    CHECK(fi.scores[0] == Catch::Approx(1.0));
    CHECK(fi.scores[1] == 0.0);
}

TEST_CASE("feature importance validates its inputs") {
    const FeatureMatrix m = fixtures::uniform_matrix(6, 2, 67);
    CHECK_THROWS_AS(feature_importance(m, std::vector<int>(6, 1)), InvalidK);
    CHECK_THROWS_AS(feature_importance(m, random_assignment(6, 6, 1)), InvalidK);
}

TEST_CASE("the gap statistic recovers three uneven blobs") {
    const std::vector<fixtures::Blob> blobs = {
        {{0.0, 0.0}, 0.5, 20}, {{4.0, 0.5}, 0.5, 20}, {{12.0, 1.0}, 0.5, 20}};
    const FeatureMatrix m = fixtures::blob_matrix(blobs, 68);
    const GapCurve g = gap_statistic(m, 1, 5, 25, 3);
    REQUIRE(g.ks == std::vector<int>{1, 2, 3, 4, 5});
    REQUIRE(g.gap.size() == 5);
    REQUIRE(g.se.size() == 5);
    for (double se : g.se) CHECK(se >= 0.0);
    CHECK(g.recommended_k == 3);
}

TEST_CASE("the gap statistic requires a usable reference count") {
    const FeatureMatrix m = fixtures::uniform_matrix(20, 2, 69);
    CHECK_THROWS_AS(gap_statistic(m, 1, 3, 9, 1), InvalidK);
    CHECK_THROWS_AS(gap_statistic(m, 2, 1, 20, 1), InvalidK);
}

TEST_CASE("precomputed objectives reproduce the freshly clustered gap curve") {
    const FeatureMatrix m = fixtures::separated_blobs(2, 15, 2, 9.0, 0.7, 70);
    const GapCurve fresh = gap_statistic(m, 1, 4, 15, 5);
    std::map<int, double> data_wss;
    for (int k = 1; k <= 4; ++k) {
        data_wss[k] = kmeans(m, k, derive_seed(5, 101, static_cast<std::uint64_t>(k))).objective;
    }
    const GapCurve reused = gap_statistic(m, 1, 4, 15, 5, 25, &data_wss);
    REQUIRE(reused.gap == fresh.gap);
    REQUIRE(reused.se == fresh.se);
    CHECK(reused.recommended_k == fresh.recommended_k);
}

TEST_CASE("the full validation report agrees across its indices on blobs") {
    const std::vector<fixtures::Blob> blobs = {
        {{0.0, 0.0}, 0.5, 20}, {{4.0, 0.5}, 0.5, 20}, {{12.0, 1.0}, 0.5, 20}};
    const FeatureMatrix m = fixtures::blob_matrix(blobs, 71);
    const ValidationReport rep = validate_clustering(m, 2, 5, 25, 3, 40);
    REQUIRE(rep.ks == std::vector<int>{2, 3, 4, 5});
    REQUIRE(rep.per_k.size() == 4);
    CHECK(rep.hopkins.statistic > 0.8);
    CHECK(rep.gap_k == 3);
    CHECK(rep.silhouette_k == 3);
    CHECK(rep.elbow_k == 3);
    CHECK(rep.dunn_k == 3);
    CHECK(rep.k_min == 2);
    CHECK(rep.k_max == 5);
    CHECK(rep.B == 25);
    for (const auto& s : rep.per_k) {
        CHECK(s.wss > 0.0);
        CHECK(std::isfinite(s.gap));
        CHECK(s.gap_se >= 0.0);
    }
    CHECK_THROWS_AS(validate_clustering(m, 2, 100, 25, 1), InvalidK);
}
