#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include <hrg/address.hpp>
#include <hrg/errors.hpp>

namespace hrg {

/// Rule producing the per-level connection constants c_k.
///
/// Kinds: an explicit finite list; the parametric family
/// c_k = max(c_min, a * log k) with a > 0 and c_min > 2 log 2 (the rule is only
/// meaningful for large k, so small levels are clamped to c_min); and the
/// linear family c_k = intercept + slope * k.
class CRule {
public:
    enum class Kind { List, ALog, Linear };

    static CRule list(std::vector<double> values) {
        if (values.empty()) throw ConfigError("c list must not be empty");
        for (double v : values)
            if (!(v > 0.0)) throw ConfigError("every c_k must be positive");
        CRule r;
        r.kind_ = Kind::List;
        r.values_ = std::move(values);
        return r;
    }

    static CRule a_log(double a, double c_min) {
        if (!(a > 0.0)) throw ConfigError("a_log rule requires a > 0");
        if (!(c_min > 2.0 * std::log(2.0)))
            throw ConfigError("a_log rule requires c_min > 2 log 2");
        CRule r;
        r.kind_ = Kind::ALog;
        r.a_ = a;
        r.c_min_ = c_min;
        return r;
    }

    static CRule linear(double intercept, double slope) {
        if (!(slope >= 0.0)) throw ConfigError("linear rule requires slope >= 0");
        if (!(intercept + slope > 0.0)) throw ConfigError("linear rule requires c_1 > 0");
        CRule r;
        r.kind_ = Kind::Linear;
        r.a_ = slope;
        r.c_min_ = intercept;
        return r;
    }

    Kind kind() const noexcept { return kind_; }
    bool analytic() const noexcept { return kind_ != Kind::List; }
    double a() const noexcept { return a_; }
    double c_min() const noexcept { return c_min_; }
    double slope() const noexcept { return a_; }
    double intercept() const noexcept { return c_min_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// c_k, 1-indexed. List rules are undefined past their length.
    double at(std::uint32_t k) const {
        if (k == 0) throw ConfigError("c_k index is 1-based");
        if (kind_ == Kind::List) {
            if (k > values_.size()) throw ConfigError("c list shorter than requested level");
            return values_[k - 1];
        }
        if (kind_ == Kind::Linear) return c_min_ + a_ * static_cast<double>(k);
        return std::max(c_min_, a_ * std::log(static_cast<double>(k)));
    }

    /// Materialize c_1..c_K.
    std::vector<double> prefix(std::uint32_t K) const {
        std::vector<double> out(K);
        for (std::uint32_t k = 1; k <= K; ++k) out[k - 1] = at(k);
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        if (kind_ == Kind::List) {
            j["kind"] = "list";
            j["values"] = values_;
        } else if (kind_ == Kind::Linear) {
            j["kind"] = "linear";
            j["intercept"] = c_min_;
            j["slope"] = a_;
        } else {
            j["kind"] = "a_log";
            j["a"] = a_;
            j["c_min"] = c_min_;
        }
        return j;
    }

    static CRule from_json(const nlohmann::json& j) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "list") return list(j.at("values").get<std::vector<double>>());
        if (kind == "a_log") return a_log(j.at("a").get<double>(), j.at("c_min").get<double>());
        if (kind == "linear")
            return linear(j.at("intercept").get<double>(), j.at("slope").get<double>());
        throw ConfigError("unknown c rule kind: " + kind);
    }

private:
    Kind kind_ = Kind::List;
    std::vector<double> values_;
    double a_ = 0.0;
    double c_min_ = 0.0;
};

inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Full experiment specification: (N, K, c rule, master seed).
struct GraphConfig {
    std::uint32_t order = 2;  // N
    std::uint32_t depth = 1;  // K
    CRule c = CRule::list({2.0});
    std::uint64_t seed = 0;

    HierSpace space() const { return HierSpace(order, depth); }

    double c_at(std::uint32_t k) const { return c.at(k); }

    /// Connection probability at distance class k: c_k / N^(2k-1).
    double edge_prob(std::uint32_t k) const {
        const long double denom = std::pow(static_cast<long double>(order), 2.0L * k - 1.0L);
        return static_cast<double>(static_cast<long double>(c_at(k)) / denom);
    }

    void validate() const {
        (void)space(); // N, K, N^K bounds
        for (std::uint32_t k = 1; k <= depth; ++k) {
            const double ck = c_at(k);
            if (!(ck > 0.0)) throw ConfigError("c_" + std::to_string(k) + " must be positive");
            if (edge_prob(k) > 1.0)
                throw ConfigError("c_" + std::to_string(k) + " / N^(2k-1) exceeds 1: not a probability");
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["N"] = order;
        j["K"] = depth;
        j["c"] = c.to_json();
        j["seed"] = seed;
        return j;
    }

    static GraphConfig from_json(const nlohmann::json& j) {
        GraphConfig cfg;
        cfg.order = j.at("N").get<std::uint32_t>();
        cfg.depth = j.at("K").get<std::uint32_t>();
        cfg.c = CRule::from_json(j.at("c"));
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.validate();
        return cfg;
    }

    /// Hash of the canonical serialized form; embedded in every output.
    std::string fingerprint() const {
        const std::uint64_t h = fnv1a64(to_json().dump());
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf);
    }
};

} // namespace hrg
