#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include <hrg/config.hpp>
#include <hrg/errors.hpp>

namespace hrg::theory {

inline constexpr double kCriticalSlack = 1e-9;
inline constexpr double k2Pi = 6.283185307179586476925286766559;

/// Unique root beta in (0, 1) of beta = 1 - exp(-lambda * beta), lambda > 1.
///
/// Bisection on [eps, 1]: f(t) = 1 - exp(-lambda t) - t has f(eps) > 0 for
/// lambda > 1 and f(1) = -exp(-lambda) < 0, so the bracket always holds. A few
/// damped (Newton) steps polish the root; the residual stays below 1e-12.
inline double solve_fixed_point(double lambda) {
    if (!(lambda > 1.0 + kCriticalSlack))
        throw DomainError("no positive fixed point: lambda = " + std::to_string(lambda) +
                          " is not above 1");
    auto f = [lambda](double t) { return -std::expm1(-lambda * t) - t; };
    double lo = 1e-9, hi = 1.0;
    for (int i = 0; i < 120 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    double beta = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double deriv = lambda * std::exp(-lambda * beta) - 1.0;
        if (deriv == 0.0) break;
        const double next = beta - f(beta) / deriv;
        if (next > 0.0 && next <= 1.0) beta = next;
    }
    return beta;
}

/// Recursion beta_k = fixed point of (c_k * beta_{k-1}^2), beta_0 = 1.
/// On breakdown (lambda_k <= 1) the partial chain up to the failing level is
/// kept and the level recorded.
struct BetaRecursion {
    std::vector<double> beta;    // beta_1..beta_m
    std::vector<double> lambda;  // lambda_1..lambda_m
    std::optional<std::uint32_t> breakdown_level;

    bool ok() const noexcept { return !breakdown_level.has_value(); }
    void require() const {
        if (breakdown_level)
            throw RecursionBreakdown(*breakdown_level,
                                     lambda.empty() ? 0.0 : lambda.back());
    }
    double product(std::uint32_t upto) const {
        double p = 1.0;
        for (std::uint32_t k = 1; k <= upto && k <= beta.size(); ++k) p *= beta[k - 1];
        return p;
    }
};

inline BetaRecursion beta_recursion(std::span<const double> c, std::uint32_t K) {
    BetaRecursion r;
    double prev = 1.0; // beta_0
    for (std::uint32_t k = 1; k <= K; ++k) {
        if (k > c.size()) throw ConfigError("c sequence shorter than K");
        const double lambda = c[k - 1] * prev * prev;
        r.lambda.push_back(lambda);
        if (!(lambda > 1.0 + kCriticalSlack)) {
            r.breakdown_level = k;
            return r;
        }
        prev = solve_fixed_point(lambda);
        r.beta.push_back(prev);
    }
    return r;
}

inline BetaRecursion beta_recursion(const CRule& rule, std::uint32_t K) {
    const auto c = rule.prefix(K);
    return beta_recursion(std::span<const double>(c), K);
}

// ---------------------------------------------------------------------------
// Percolation criterion
// ---------------------------------------------------------------------------

enum class Verdict { Percolates, DoesNotPercolate, Undetermined };
enum class Tristate { Yes, No, Unknown };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Percolates: return "percolates";
        case Verdict::DoesNotPercolate: return "does_not_percolate";
        default: return "undetermined";
    }
}
inline std::string to_string(Tristate t) {
    switch (t) {
        case Tristate::Yes: return "yes";
        case Tristate::No: return "no";
        default: return "unknown";
    }
}

/// Convergence analysis of sum(exp(-c_k)) plus the hypothesis and
/// sufficient-condition flags that accompany it.
struct CriterionReport {
    Verdict verdict = Verdict::Undetermined;
    double partial_sum = 0.0;       // sum of exp(-c_k) over the examined prefix
    std::uint32_t partial_terms = 0;
    Tristate c_nondecreasing_to_inf = Tristate::Unknown;
    bool c1_above_2log2 = false;
    bool c2_above_8log2 = false;
    // Sufficient conditions: sum c_k^-delta < inf for some delta;
    // liminf c_k / k > 0; liminf (c_{k+1} - c_k) > 0.
    Tristate cond_sum_c_power = Tristate::Unknown;
    Tristate cond_liminf_c_over_k = Tristate::Unknown;
    Tristate cond_liminf_increments = Tristate::Unknown;
    std::string detail;
};

inline CriterionReport percolation_criterion(const CRule& rule, std::uint32_t tail_limit = 64) {
    CriterionReport rep;
    const std::uint32_t terms =
        rule.kind() == CRule::Kind::List
            ? std::min<std::uint32_t>(tail_limit, static_cast<std::uint32_t>(rule.values().size()))
            : tail_limit;
    for (std::uint32_t k = 1; k <= terms; ++k) {
        const double ck = rule.at(k);
        if (!(ck > 0.0)) throw DomainError("criterion requires positive c_k");
        rep.partial_sum += std::exp(-ck);
    }
    rep.partial_terms = terms;
    rep.c1_above_2log2 = rule.at(1) > 2.0 * std::log(2.0);
    rep.c2_above_8log2 = (rule.kind() != CRule::Kind::List || rule.values().size() >= 2) &&
                         rule.at(2) > 8.0 * std::log(2.0);

    if (rule.kind() == CRule::Kind::ALog) {
        // exp(-c_k) = min(exp(-c_min), k^-a) up to the clamp point, so the tail
        // behaves like sum k^-a: convergent iff a > 1.
        rep.verdict = rule.a() > 1.0 ? Verdict::Percolates : Verdict::DoesNotPercolate;
        rep.c_nondecreasing_to_inf = Tristate::Yes;
        rep.cond_sum_c_power = Tristate::No;        // sum (a log k)^-delta diverges for every delta
        rep.cond_liminf_c_over_k = Tristate::No;    // (a log k)/k -> 0
        rep.cond_liminf_increments = Tristate::No;  // a log((k+1)/k) -> 0
        rep.detail = "tail of sum exp(-c_k) behaves like sum k^-a with a = " +
                     std::to_string(rule.a());
        return rep;
    }

    if (rule.kind() == CRule::Kind::Linear) {
        // Geometric tail exp(-b) * exp(-s k) when s > 0; constant terms otherwise.
        const bool grows = rule.slope() > 0.0;
        rep.verdict = grows ? Verdict::Percolates : Verdict::DoesNotPercolate;
        rep.c_nondecreasing_to_inf = grows ? Tristate::Yes : Tristate::No;
        rep.cond_sum_c_power = grows ? Tristate::Yes : Tristate::No;
        rep.cond_liminf_c_over_k = grows ? Tristate::Yes : Tristate::No;
        rep.cond_liminf_increments = grows ? Tristate::Yes : Tristate::No;
        rep.detail = grows ? "geometric tail: sum exp(-c_k) converges for slope > 0"
                           : "constant c_k: sum exp(-c_k) diverges";
        return rep;
    }

    // Finite lists cannot decide a tail property; report the prefix only.
    rep.verdict = Verdict::Undetermined;
    bool nondecreasing = true;
    for (std::size_t i = 1; i < rule.values().size(); ++i)
        if (rule.values()[i] < rule.values()[i - 1]) nondecreasing = false;
    rep.c_nondecreasing_to_inf = nondecreasing ? Tristate::Unknown : Tristate::No;
    rep.detail = "finite c list: convergence of sum exp(-c_k) is undetermined beyond " +
                 std::to_string(terms) + " terms";
    return rep;
}

// ---------------------------------------------------------------------------
// Lemma-style numeric verification of the fixed-point chain
// ---------------------------------------------------------------------------

/// Per-level checks: beta_k > 1/2, lambda_k > 1, and the two exponential
/// bounds 1 - beta_k <= C exp(-lambda_k) and 1 - beta_k <= C1 exp(-c_{k-1})
/// with C = exp(2/e), C1 = C exp(16/e).
struct ChainBoundRow {
    std::uint32_t level = 0;
    double c = 0.0, lambda = 0.0, beta = 0.0;
    bool beta_above_half = false;
    bool boundary_half = false; // |beta - 1/2| within 1e-9: boundary case, not a failure
    bool lambda_above_one = false;
    double bound_lambda = 0.0;  // C exp(-lambda_k)
    bool bound_lambda_ok = false;
    std::optional<double> bound_prev_c; // C1 exp(-c_{k-1}), k >= 2
    bool bound_prev_c_ok = true;
};

struct ChainBoundReport {
    std::vector<ChainBoundRow> rows;
    bool hypotheses_nondecreasing = true;
    bool hypotheses_c1 = false;
    bool hypotheses_c2 = false;
    std::optional<std::uint32_t> breakdown_level;
    bool all_pass = true; // every non-boundary check passed on every level

    static double constant_c() { return std::exp(2.0 / std::exp(1.0)); }
    static double constant_c1() { return std::exp(18.0 / std::exp(1.0)); }
};

inline ChainBoundReport lemma21_verify(std::span<const double> c, std::uint32_t K) {
    if (c.size() < K) throw ConfigError("c sequence shorter than K");
    ChainBoundReport rep;
    rep.hypotheses_c1 = c[0] > 2.0 * std::log(2.0);
    rep.hypotheses_c2 = K >= 2 && c[1] > 8.0 * std::log(2.0);
    for (std::uint32_t k = 1; k + 1 <= K; ++k)
        if (c[k] < c[k - 1]) rep.hypotheses_nondecreasing = false;

    const double C = ChainBoundReport::constant_c();
    const double C1 = ChainBoundReport::constant_c1();
    const auto rec = beta_recursion(c, K);
    rep.breakdown_level = rec.breakdown_level;
    for (std::uint32_t k = 1; k <= rec.beta.size(); ++k) {
        ChainBoundRow row;
        row.level = k;
        row.c = c[k - 1];
        row.lambda = rec.lambda[k - 1];
        row.beta = rec.beta[k - 1];
        row.boundary_half = std::abs(row.beta - 0.5) <= 1e-9;
        row.beta_above_half = row.beta > 0.5;
        row.lambda_above_one = row.lambda > 1.0;
        row.bound_lambda = C * std::exp(-row.lambda);
        row.bound_lambda_ok = (1.0 - row.beta) <= row.bound_lambda;
        if (k >= 2) {
            row.bound_prev_c = C1 * std::exp(-c[k - 2]);
            row.bound_prev_c_ok = (1.0 - row.beta) <= *row.bound_prev_c;
        }
        if (!(row.beta_above_half || row.boundary_half) || !row.lambda_above_one ||
            !row.bound_lambda_ok || !row.bound_prev_c_ok)
            rep.all_pass = false;
        rep.rows.push_back(row);
    }
    if (rec.breakdown_level) rep.all_pass = false;
    return rep;
}

// ---------------------------------------------------------------------------
// Connection-probability formulas
// ---------------------------------------------------------------------------

/// Probability that two fixed distinct (k-1)-balls inside a k-ball are
/// connected within it, with the elementary bracket
/// c_k/N - (c_k/N)^2 / 2 <= p <= c_k/N.
struct BallConnection {
    double exact = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

inline BallConnection ball_connection_prob(std::uint64_t N, std::uint32_t k, double ck) {
    if (N < 2) throw DomainError("N must be >= 2");
    if (k < 1) throw DomainError("distance class k must be >= 1");
    const long double ldN = static_cast<long double>(N);
    const long double denom = std::pow(ldN, 2.0L * k - 1.0L);
    if (!(ck > 0.0) || static_cast<long double>(ck) > denom)
        throw DomainError("c_k / N^(2k-1) is not a valid probability");
    BallConnection out;
    const double cn = static_cast<double>(static_cast<long double>(ck) / ldN);
    out.upper = cn;
    out.lower = cn - 0.5 * cn * cn;
    if (k == 1) {
        out.exact = cn;
        return out;
    }
    const double p = static_cast<double>(static_cast<long double>(ck) / denom);
    const double m = static_cast<double>(std::pow(ldN, 2.0L * (k - 1.0L)));
    out.exact = -std::expm1(m * std::log1p(-p));
    return out;
}

/// Probability of a 1-step connection between two k-balls at distance j > k,
/// with its large-N approximation c_j / N^(2(j-k)-1).
struct ExternalConnection {
    double exact = 0.0;
    double asymptotic = 0.0;
    double ratio = 0.0;
};

inline ExternalConnection kball_external_prob(std::uint64_t N, std::uint32_t k, std::uint32_t j,
                                              double cj) {
    if (j < k + 1) throw DomainError("external class j must exceed ball level k");
    if (N < 2) throw DomainError("N must be >= 2");
    const long double ldN = static_cast<long double>(N);
    const long double denom = std::pow(ldN, 2.0L * j - 1.0L);
    if (!(cj > 0.0) || static_cast<long double>(cj) > denom)
        throw DomainError("c_j / N^(2j-1) is not a valid probability");
    ExternalConnection out;
    const double p = static_cast<double>(static_cast<long double>(cj) / denom);
    const double m = static_cast<double>(std::pow(ldN, 2.0L * k));
    out.exact = -std::expm1(m * std::log1p(-p));
    out.asymptotic = static_cast<double>(static_cast<long double>(cj) /
                                         std::pow(ldN, 2.0L * (j - k) - 1.0L));
    out.ratio = out.exact / out.asymptotic;
    return out;
}

// ---------------------------------------------------------------------------
// Law of Y^(k): 1-step connections from a point to points at distance k
// ---------------------------------------------------------------------------

inline double poisson_pmf(double c, std::uint64_t j) {
    return std::exp(-c + static_cast<double>(j) * std::log(c) -
                    std::lgamma(static_cast<double>(j) + 1.0));
}

inline double binomial_pmf(double n, double p, std::uint64_t j) {
    const double x = static_cast<double>(j);
    const double lc = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
    return std::exp(lc + x * std::log(p) + (n - x) * std::log1p(-p));
}

/// Exact Binomial(N^k - N^(k-1), c_k/N^(2k-1)) law of Y^(k) alongside its
/// limiting predictions: Pois(c_1) for k = 1, rare single links for k > 1.
struct YPrediction {
    std::vector<double> pmf;       // exact binomial pmf, 0..cutoff
    std::vector<double> limit_pmf; // Poisson pmf over the same range (k = 1 only)
    double p_positive_exact = 0.0;
    double p_positive_limit = 0.0;   // c_k / N^(k-1) for k > 1; 1 - exp(-c_1) for k = 1
    double p_one_given_positive = 0.0;
    double tv_binomial_poisson = 0.0; // k = 1 only
};

inline YPrediction y_predictions(std::uint64_t N, std::uint32_t k, double ck,
                                 std::uint64_t pmf_cutoff = 0) {
    if (k < 1) throw DomainError("class k must be >= 1");
    if (N > 0xFFFFFFFFull) throw DomainError("N out of range");
    HierSpace space(static_cast<std::uint32_t>(N), k); // validates N^k bound
    const std::uint64_t n = space.pow_order(k) - space.pow_order(k - 1);
    const long double denom = std::pow(static_cast<long double>(N), 2.0L * k - 1.0L);
    const double p = static_cast<double>(static_cast<long double>(ck) / denom);
    if (!(p > 0.0) || p > 1.0) throw DomainError("invalid connection probability");

    YPrediction out;
    const double mean = static_cast<double>(n) * p;
    std::uint64_t cutoff = pmf_cutoff > 0
                               ? pmf_cutoff
                               : static_cast<std::uint64_t>(mean + 12.0 * std::sqrt(mean + 1.0) + 30.0);
    cutoff = std::min<std::uint64_t>(cutoff, n);
    out.pmf.resize(cutoff + 1);
    for (std::uint64_t j = 0; j <= cutoff; ++j)
        out.pmf[j] = binomial_pmf(static_cast<double>(n), p, j);
    out.p_positive_exact = -std::expm1(static_cast<double>(n) * std::log1p(-p));
    out.p_one_given_positive = out.pmf.size() > 1 ? out.pmf[1] / out.p_positive_exact : 0.0;
    if (k == 1) {
        out.limit_pmf.resize(cutoff + 1);
        double tv = 0.0;
        for (std::uint64_t j = 0; j <= cutoff; ++j) {
            out.limit_pmf[j] = poisson_pmf(ck, j);
            tv += std::abs(out.pmf[j] - out.limit_pmf[j]);
        }
        out.tv_binomial_poisson = 0.5 * tv; // tails beyond the cutoff are negligible
        out.p_positive_limit = -std::expm1(-ck);
    } else {
        out.p_positive_limit =
            static_cast<double>(static_cast<long double>(ck) /
                                std::pow(static_cast<long double>(N), static_cast<long double>(k - 1)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Degree window: near-c_k degrees follow an approximate j^(-1/2) law
// ---------------------------------------------------------------------------

/// For each integer j with |j - c| < M: the Poisson pmf at j against the
/// bracket [(1-delta) (2 pi j)^(-1/2), (2 pi j)^(-1/2)].
struct DegreeWindowRow {
    std::uint64_t j = 0;
    double pmf = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double ratio = 0.0; // pmf * sqrt(2 pi j)
    bool within = false;
};

struct DegreeWindowReport {
    std::vector<DegreeWindowRow> rows;
    bool bracket_holds = false;
    /// Smallest integer c <= scan limit at which the bracket holds for the
    /// same (M, delta); unset if none found within the limit.
    std::optional<std::uint32_t> min_c_for_bracket;
};

inline bool degree_window_holds_at(double c, double M, double delta) {
    const std::int64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(c - M)) + 1);
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(c + M)) - 1;
    for (std::int64_t j = lo; j <= hi; ++j) {
        if (std::abs(static_cast<double>(j) - c) >= M) continue;
        const double ratio = poisson_pmf(c, static_cast<std::uint64_t>(j)) *
                             std::sqrt(k2Pi * static_cast<double>(j));
        if (!(ratio >= 1.0 - delta && ratio <= 1.0)) return false;
    }
    return true;
}

inline DegreeWindowReport degree_window(double c, double M, double delta,
                                        std::uint32_t scan_limit = 2000) {
    if (!(c > 0.0) || !(M > 0.0) || !(delta > 0.0 && delta < 1.0))
        throw DomainError("degree window requires c > 0, M > 0, 0 < delta < 1");
    DegreeWindowReport rep;
    rep.bracket_holds = true;
    const std::int64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(c - M)) + 1);
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(c + M)) - 1;
    for (std::int64_t j = lo; j <= hi; ++j) {
        if (std::abs(static_cast<double>(j) - c) >= M) continue;
        DegreeWindowRow row;
        row.j = static_cast<std::uint64_t>(j);
        row.pmf = poisson_pmf(c, row.j);
        row.upper = 1.0 / std::sqrt(k2Pi * static_cast<double>(j));
        row.lower = (1.0 - delta) * row.upper;
        row.ratio = row.pmf / row.upper;
        row.within = row.pmf >= row.lower && row.pmf <= row.upper;
        if (!row.within) rep.bracket_holds = false;
        rep.rows.push_back(row);
    }
    for (std::uint32_t cc = 1; cc <= scan_limit; ++cc) {
        if (degree_window_holds_at(static_cast<double>(cc), M, delta)) {
            rep.min_c_for_bracket = cc;
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// CLT constants and average-distance predictions
// ---------------------------------------------------------------------------

/// Per-level central-limit constants. -mu_k is the slope of
/// 1 - t - exp(-lambda_k t) at t = beta_k, so mu_k = 1 - lambda_k (1 - beta_k);
/// sigma2_k = beta_k (1 - beta_k) / mu_k^2. The cascade variance carries the
/// prefactor (prod_{j<k} beta_j)^2.
struct CltRow {
    std::uint32_t level = 0;
    double mu = 0.0;
    double sigma2 = 0.0;
    double prefactor = 1.0;
};

inline std::vector<CltRow> clt_constants(std::span<const double> c, std::uint32_t K) {
    const auto rec = beta_recursion(c, K);
    rec.require();
    std::vector<CltRow> rows;
    double prod_before = 1.0;
    for (std::uint32_t k = 1; k <= K; ++k) {
        CltRow row;
        row.level = k;
        const double beta = rec.beta[k - 1];
        const double lambda = rec.lambda[k - 1];
        row.mu = 1.0 - lambda * (1.0 - beta);
        row.sigma2 = beta * (1.0 - beta) / (row.mu * row.mu);
        row.prefactor = prod_before * prod_before;
        rows.push_back(row);
        prod_before *= beta;
    }
    return rows;
}

/// Predicted mean graph distance between random cascade points of a k-ball:
/// (log N)^k / prod_{j<=k} log(lambda_j). N may be fractional; it only enters
/// through log N.
inline double avg_distance_prediction(double N, std::span<const double> c, std::uint32_t k) {
    if (!(N >= 2.0)) throw DomainError("N must be >= 2");
    if (k < 1) throw DomainError("level k must be >= 1");
    const auto rec = beta_recursion(c, k);
    rec.require();
    double denom = 1.0;
    for (std::uint32_t j = 1; j <= k; ++j) {
        if (!(rec.lambda[j - 1] > 1.0))
            throw DomainError("log argument <= 1 at level " + std::to_string(j));
        denom *= std::log(rec.lambda[j - 1]);
    }
    return std::pow(std::log(N), static_cast<double>(k)) / denom;
}

// ---------------------------------------------------------------------------
// TheoryProfile: everything above, per level, serializable
// ---------------------------------------------------------------------------

struct TheoryLevel {
    std::uint32_t level = 0;
    double c = 0.0;
    double lambda = 0.0;
    double beta = 0.0;
    std::optional<double> gamma;    // plain fixed point of c_k, when c_k > 1
    double mu = 0.0;
    double sigma2 = 0.0;
    double product_beta = 0.0;      // prod_{j<=level} beta_j
    std::optional<double> distance_prediction;
};

struct TheoryProfile {
    std::vector<TheoryLevel> levels;
    CriterionReport criterion;
    std::optional<std::uint32_t> breakdown_level;
};

inline TheoryProfile build_theory_profile(const GraphConfig& cfg, std::uint32_t tail_limit = 64) {
    TheoryProfile prof;
    prof.criterion = percolation_criterion(cfg.c, tail_limit);
    const auto c = cfg.c.prefix(cfg.depth);
    const auto rec = beta_recursion(std::span<const double>(c), cfg.depth);
    prof.breakdown_level = rec.breakdown_level;
    double prod = 1.0;
    for (std::uint32_t k = 1; k <= rec.beta.size(); ++k) {
        TheoryLevel lvl;
        lvl.level = k;
        lvl.c = c[k - 1];
        lvl.lambda = rec.lambda[k - 1];
        lvl.beta = rec.beta[k - 1];
        if (lvl.c > 1.0 + kCriticalSlack) lvl.gamma = solve_fixed_point(lvl.c);
        lvl.mu = 1.0 - lvl.lambda * (1.0 - lvl.beta);
        lvl.sigma2 = lvl.beta * (1.0 - lvl.beta) / (lvl.mu * lvl.mu);
        prod *= lvl.beta;
        lvl.product_beta = prod;
        lvl.distance_prediction =
            avg_distance_prediction(static_cast<double>(cfg.order), std::span<const double>(c), k);
        prof.levels.push_back(lvl);
    }
    return prof;
}

inline nlohmann::ordered_json to_json(const CriterionReport& rep) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(rep.verdict);
    j["partial_sum"] = rep.partial_sum;
    j["partial_terms"] = rep.partial_terms;
    j["c_nondecreasing_to_inf"] = to_string(rep.c_nondecreasing_to_inf);
    j["c1_above_2log2"] = rep.c1_above_2log2;
    j["c2_above_8log2"] = rep.c2_above_8log2;
    j["cond_sum_c_power"] = to_string(rep.cond_sum_c_power);
    j["cond_liminf_c_over_k"] = to_string(rep.cond_liminf_c_over_k);
    j["cond_liminf_increments"] = to_string(rep.cond_liminf_increments);
    j["detail"] = rep.detail;
    return j;
}

inline nlohmann::ordered_json to_json(const ChainBoundReport& rep) {
    nlohmann::ordered_json j;
    j["constant_c"] = ChainBoundReport::constant_c();
    j["constant_c1"] = ChainBoundReport::constant_c1();
    j["hypotheses_nondecreasing"] = rep.hypotheses_nondecreasing;
    j["hypotheses_c1"] = rep.hypotheses_c1;
    j["hypotheses_c2"] = rep.hypotheses_c2;
    j["all_pass"] = rep.all_pass;
    if (rep.breakdown_level) j["breakdown_level"] = *rep.breakdown_level;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) {
        nlohmann::ordered_json row;
        row["level"] = r.level;
        row["c"] = r.c;
        row["lambda"] = r.lambda;
        row["beta"] = r.beta;
        row["beta_above_half"] = r.beta_above_half;
        row["boundary_half"] = r.boundary_half;
        row["lambda_above_one"] = r.lambda_above_one;
        row["bound_lambda"] = r.bound_lambda;
        row["bound_lambda_ok"] = r.bound_lambda_ok;
        if (r.bound_prev_c) {
            row["bound_prev_c"] = *r.bound_prev_c;
            row["bound_prev_c_ok"] = r.bound_prev_c_ok;
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

inline nlohmann::ordered_json to_json(const TheoryProfile& prof) {
    nlohmann::ordered_json j;
    auto levels = nlohmann::ordered_json::array();
    for (const auto& l : prof.levels) {
        nlohmann::ordered_json row;
        row["level"] = l.level;
        row["c"] = l.c;
        row["lambda"] = l.lambda;
        row["beta"] = l.beta;
        if (l.gamma) row["gamma"] = *l.gamma;
        row["mu"] = l.mu;
        row["sigma2"] = l.sigma2;
        row["product_beta"] = l.product_beta;
        if (l.distance_prediction) row["distance_prediction"] = *l.distance_prediction;
        levels.push_back(row);
    }
    j["levels"] = levels;
    j["criterion"] = to_json(prof.criterion);
    if (prof.breakdown_level) j["breakdown_level"] = *prof.breakdown_level;
    return j;
}

} // namespace hrg::theory
