#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/rng.hpp"

namespace polyclust {

/// Weight families for spectral (1-D) and bispectral (2-D) means. Every kind
/// is even, g(-lambda) = g(lambda) componentwise, so estimates come out real.
enum class WeightKind {
    unit,            // 1 everywhere (either order)
    band_indicator,  // 1 if a <= |l1| < b              (order 1, params a, b)
    triangular,      // 1 - |l1| / pi                   (order 1)
    cosine_1d,       // cos(l1)                         (order 1)
    disc_indicator,  // 1 if l1^2 + l2^2 < r^2          (order 2, param r)
    radial,          // sqrt(l1^2 + l2^2)               (order 2)
    cosine_sum,      // cos(l1 + l2)                    (order 2)
    cosine_product,  // cos(l1) * cos(l2)               (order 2)
};

inline const char* to_string(WeightKind k) {
    switch (k) {
        case WeightKind::unit: return "unit";
        case WeightKind::band_indicator: return "band_indicator";
        case WeightKind::triangular: return "triangular";
        case WeightKind::cosine_1d: return "cosine_1d";
        case WeightKind::disc_indicator: return "disc_indicator";
        case WeightKind::radial: return "radial";
        case WeightKind::cosine_sum: return "cosine_sum";
        case WeightKind::cosine_product: return "cosine_product";
    }
    return "?";
}

inline WeightKind weight_kind_from_string(const std::string& s) {
    if (s == "unit") return WeightKind::unit;
    if (s == "band_indicator") return WeightKind::band_indicator;
    if (s == "triangular") return WeightKind::triangular;
    if (s == "cosine_1d") return WeightKind::cosine_1d;
    if (s == "disc_indicator") return WeightKind::disc_indicator;
    if (s == "radial") return WeightKind::radial;
    if (s == "cosine_sum") return WeightKind::cosine_sum;
    if (s == "cosine_product") return WeightKind::cosine_product;
    throw WeightArityError("unknown weight kind '" + s + "'");
}

/// Natural arity of a kind; 0 means any order.
inline int kind_arity(WeightKind k) {
    switch (k) {
        case WeightKind::unit: return 0;
        case WeightKind::band_indicator:
        case WeightKind::triangular:
        case WeightKind::cosine_1d: return 1;
        default: return 2;
    }
}

struct WeightFunction {
    int order = 1;  // k of the polyspectral mean this weight belongs to
    WeightKind kind = WeightKind::unit;
    std::vector<double> params;
    std::string label;  // feature-column name; derived from kind when empty

    std::string name() const {
        if (!label.empty()) return label;
        std::string n = to_string(kind);
        if (!params.empty()) {
            n += "(";
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (i > 0) n += ",";
                n += std::to_string(params[i]);
            }
            n += ")";
        }
        return n;
    }
};

inline void validate_weight(const WeightFunction& g) {
    if (g.order != 1 && g.order != 2) {
        throw WeightArityError("weight order must be 1 or 2, got " + std::to_string(g.order));
    }
    const int arity = kind_arity(g.kind);
    if (arity != 0 && arity != g.order) {
        throw WeightArityError(std::string("weight kind ") + to_string(g.kind) +
                               " has arity " + std::to_string(arity) +
                               " but order is " + std::to_string(g.order));
    }
    if (g.kind == WeightKind::band_indicator && g.params.size() != 2) {
        throw WeightArityError("band_indicator needs params (a, b)");
    }
    if (g.kind == WeightKind::disc_indicator && g.params.size() != 1) {
        throw WeightArityError("disc_indicator needs param (r)");
    }
}

/// Evaluates g at a frequency tuple already folded into [-pi, pi]^k.
inline double eval_weight(const WeightFunction& g, std::span<const double> lambda) {
    if (static_cast<int>(lambda.size()) != g.order) {
        throw WeightArityError("weight of order " + std::to_string(g.order) + " evaluated at " +
                               std::to_string(lambda.size()) + " frequencies");
    }
    validate_weight(g);
    switch (g.kind) {
        case WeightKind::unit:
            return 1.0;
        case WeightKind::band_indicator: {
            const double a = std::abs(lambda[0]);
            return (g.params[0] <= a && a < g.params[1]) ? 1.0 : 0.0;
        }
        case WeightKind::triangular:
            return 1.0 - std::abs(lambda[0]) / kPi;
        case WeightKind::cosine_1d:
            return std::cos(lambda[0]);
        case WeightKind::disc_indicator: {
            const double r = g.params[0];
            return (lambda[0] * lambda[0] + lambda[1] * lambda[1] < r * r) ? 1.0 : 0.0;
        }
        case WeightKind::radial:
            return std::sqrt(lambda[0] * lambda[0] + lambda[1] * lambda[1]);
        case WeightKind::cosine_sum:
            return std::cos(lambda[0] + lambda[1]);
        case WeightKind::cosine_product:
            return std::cos(lambda[0]) * std::cos(lambda[1]);
    }
    return 0.0;
}

/// The shipped weight set: low/high band indicators, triangular and cosine
/// windows for the spectral means; disc indicator, radial, and the two cosine
/// interaction forms for the bispectral means. Labels double as the feature
/// column names.
inline std::vector<WeightFunction> default_weights() {
    return {
        {1, WeightKind::band_indicator, {0.0, kPi / 2.0}, "spec_band_lo"},
        {1, WeightKind::band_indicator, {kPi / 2.0, kPi}, "spec_band_hi"},
        {1, WeightKind::triangular, {}, "spec_triangular"},
        {1, WeightKind::cosine_1d, {}, "spec_cosine"},
        {2, WeightKind::disc_indicator, {kPi / 2.0}, "bispec_disc"},
        {2, WeightKind::radial, {}, "bispec_radial"},
        {2, WeightKind::cosine_sum, {}, "bispec_cosine_sum"},
        {2, WeightKind::cosine_product, {}, "bispec_cosine_product"},
    };
}

} // namespace polyclust
