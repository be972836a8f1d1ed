#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "polyclust/polyspectra.hpp"
#include "polyclust/rng.hpp"

using namespace polyclust;

namespace {

TimeSeries random_series(int T, std::uint64_t seed) {
    Rng rng(seed);
    TimeSeries s;
    s.label = "r" + std::to_string(seed);
    s.values.resize(static_cast<std::size_t>(T));
    for (double& v : s.values) v = rng.normal();
    return s;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

} // namespace

TEST_CASE("phi_indicator excludes subsets that sum to zero mod T") {
    CHECK_FALSE(phi_indicator({0}, 8));
    CHECK(phi_indicator({1}, 8));
    CHECK_FALSE(phi_indicator({8}, 8));
    CHECK_FALSE(phi_indicator({3, 5}, 8));  // the pair sums to T
    CHECK_FALSE(phi_indicator({0, 3}, 8));  // a singleton already vanishes
    CHECK(phi_indicator({1, 2}, 8));
    CHECK(phi_indicator({2, 3}, 8) == phi_indicator({3, 2}, 8));
}

TEST_CASE("phi_indicator pair count matches direct enumeration at T = 8") {
    const int T = 8;
    int lib_count = 0;
    int direct_count = 0;
    for (int j1 = 0; j1 < T; ++j1) {
        for (int j2 = 0; j2 < T; ++j2) {
            std::array<int, 2> idx{j1, j2};
            if (phi_indicator(std::span<const int>(idx), T)) ++lib_count;
            if (j1 % T != 0 && j2 % T != 0 && (j1 + j2) % T != 0) ++direct_count;
        }
    }
    CHECK(direct_count == 42);
    CHECK(lib_count == direct_count);
}

TEST_CASE("phi_indicator is stable under index reflection j -> T - j") {
    const int T = 12;
    for (int j1 = 1; j1 < T; ++j1) {
        for (int j2 = 1; j2 < T; ++j2) {
            std::array<int, 2> idx{j1, j2};
            std::array<int, 2> ref{T - j1, T - j2};
            CHECK(phi_indicator(std::span<const int>(idx), T) ==
                  phi_indicator(std::span<const int>(ref), T));
        }
    }
}

TEST_CASE("folded_frequency lands in (-pi, pi] and preserves the alias") {
    for (const int T : {7, 8, 16}) {
        for (int j = 0; j < T; ++j) {
            const double f = folded_frequency(j, T);
            CHECK(f > -kPi - 1e-12);
            CHECK(f <= kPi + 1e-12);
            // folding shifts by a multiple of 2 pi, so the alias is unchanged
            const double raw = kTwoPi * j / T;
            const double shift = (raw - f) / kTwoPi;
            CHECK(std::abs(shift - std::round(shift)) < 1e-12);
        }
        CHECK(folded_frequency(0, T) == 0.0);
    }
    CHECK(folded_frequency(4, 8) == Catch::Approx(kPi));   // 2j == T stays positive
    CHECK(folded_frequency(5, 8) < 0.0);                   // above T/2 wraps negative
}

TEST_CASE("the zero series has zero polyspectral mean at both orders") {
    TimeSeries s;
    s.values.assign(16, 0.0);
    for (const auto& g : default_weights()) {
        CHECK(polyspectral_mean(s, g).value == 0.0);
    }
}

TEST_CASE("unit-weight spectral mean equals 2 pi times the biased variance") {
    const WeightFunction unit{1, WeightKind::unit, {}, ""};
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const TimeSeries s = random_series(32, 500 + seed);
        double mean = 0.0;
        for (double v : s.values) mean += v;
        mean /= static_cast<double>(s.size());
        double gamma0 = 0.0;
        for (double v : s.values) gamma0 += (v - mean) * (v - mean);
        gamma0 /= static_cast<double>(s.size());
        const double est = polyspectral_mean(s, unit).value;
        REQUIRE(rel_err(est, kTwoPi * gamma0) < 1e-9);
    }
}

TEST_CASE("estimator agrees with the brute-force evaluation") {
    for (const int T : {8, 16, 32}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const TimeSeries s = random_series(T, 900 + seed);
            for (const auto& g : default_weights()) {
                const double fast = polyspectral_mean(s, g).value;
                const double slow = brute_force_polyspectral_mean(s, g).value;
                REQUIRE(rel_err(fast, slow) < 1e-9);
            }
        }
    }
}

TEST_CASE("band means add over a partition of the frequency axis") {
    const double cut = 1.3;
    const WeightFunction lo{1, WeightKind::band_indicator, {0.0, cut}, ""};
    const WeightFunction hi{1, WeightKind::band_indicator, {cut, 4.0}, ""};
    const WeightFunction full{1, WeightKind::band_indicator, {0.0, 4.0}, ""};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TimeSeries s = random_series(32, 700 + seed);
        const double sum = polyspectral_mean(s, lo).value + polyspectral_mean(s, hi).value;
        const double whole = polyspectral_mean(s, full).value;
        CHECK(rel_err(sum, whole) < 1e-9);
    }
}

TEST_CASE("adding a constant does not move the estimates") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const TimeSeries s = random_series(24, 300 + seed);
        TimeSeries shifted = s;
        for (double& v : shifted.values) v += 37.25;
        for (const auto& g : default_weights()) {
            const double base = polyspectral_mean(s, g).value;
            const double moved = polyspectral_mean(shifted, g).value;
            REQUIRE(rel_err(moved, base) < 1e-9);
        }
    }
}

TEST_CASE("rescaling by alpha scales order-k estimates by alpha^(k+1)") {
    const double alpha = 2.5;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const TimeSeries s = random_series(24, 400 + seed);
        TimeSeries scaled = s;
        for (double& v : scaled.values) v *= alpha;
        for (const auto& g : default_weights()) {
            const double base = polyspectral_mean(s, g).value;
            const double got = polyspectral_mean(scaled, g).value;
            const double want = std::pow(alpha, g.order + 1) * base;
            REQUIRE(rel_err(got, want) < 1e-9);
        }
    }
}

TEST_CASE("symmetric weights leave no imaginary residue") {
    const TimeSeries s = random_series(32, 11);
    for (const auto& g : default_weights()) {
        const auto e = polyspectral_mean(s, g);
        CHECK_FALSE(e.asymmetry_warning);
        CHECK(e.value == e.raw_complex.real());
        CHECK(std::abs(e.raw_complex.imag()) <= 1e-6 * (1.0 + std::abs(e.raw_complex)));
    }
}

TEST_CASE("estimates carry their weight and series labels") {
    const TimeSeries s = random_series(16, 12);
    const auto ws = default_weights();
    const auto e = polyspectral_mean(s, ws[0]);
    CHECK(e.weight == "spec_band_lo");
    CHECK(e.order == 1);
    CHECK(e.series_label == s.label);
}

TEST_CASE("series shorter than order plus two are rejected") {
    const WeightFunction u1{1, WeightKind::unit, {}, ""};
    const WeightFunction u2{2, WeightKind::unit, {}, ""};
    CHECK_THROWS_AS(polyspectral_mean(random_series(2, 13), u1), InvalidLength);
    CHECK_THROWS_AS(polyspectral_mean(random_series(3, 14), u2), InvalidLength);
    CHECK_NOTHROW(polyspectral_mean(random_series(3, 15), u1));
    CHECK_NOTHROW(polyspectral_mean(random_series(4, 16), u2));
}

TEST_CASE("the brute-force oracle refuses oversized input") {
    const WeightFunction u1{1, WeightKind::unit, {}, ""};
    CHECK_THROWS_AS(brute_force_polyspectral_mean(random_series(300, 17), u1), OracleSizeError);
}
