// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[WARN].
// Warn-grade criteria (conjecture-level claims) never fail the run.
// Exit code = number of failed hard criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <hrg/hrg.hpp>

#include "oracles.hpp"

using namespace hrg;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            bool warn_only = false) {
    const char* tag = pass ? "[PASS]" : (warn_only ? "[WARN]" : "[FAIL]");
    std::printf("%s criterion %2d: %s — %s\n", tag, id, name.c_str(), detail.c_str());
    if (!pass && !warn_only) ++failures;
}

GraphConfig make_cfg(std::uint32_t N, std::uint32_t K, std::vector<double> c, std::uint64_t seed) {
    GraphConfig cfg;
    cfg.order = N;
    cfg.depth = K;
    cfg.c = CRule::list(std::move(c));
    cfg.seed = seed;
    return cfg;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1. Fixed-point solver against an independent bisection oracle.
void criterion1() {
    StreamRng rng(20240601);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double lambda = 1.01 + (50.0 - 1.01) * rng.next_double();
        const double impl = theory::solve_fixed_point(lambda);
        const double orc = oracle::bisect_beta(lambda);
        worst = std::max(worst, std::abs(impl - orc));
    }
    const double closed = std::abs(theory::solve_fixed_point(2.0 * std::log(2.0)) - 0.5);
    report(1, "fixed-point oracle agreement", worst <= 1e-10 && closed <= 1e-12,
           fmt("max |impl - bisection| = %.3g over 100 random lambda; |beta(2 ln 2) - 1/2| = %.3g",
               worst, closed));
}

// 2. Exponential chain bounds for c_k = 3 + k through level 50.
void criterion2() {
    std::vector<double> c;
    for (int k = 1; k <= 50; ++k) c.push_back(3.0 + k);
    const auto rep = theory::lemma21_verify(std::span<const double>(c), 50);
    bool ok = rep.rows.size() == 50 && !rep.breakdown_level.has_value();
    double worst_margin = 1e300;
    for (const auto& row : rep.rows) {
        ok = ok && row.beta > 0.5 && row.lambda > 1.0 && row.bound_lambda_ok && row.bound_prev_c_ok;
        worst_margin = std::min(worst_margin, row.bound_lambda / (1.0 - row.beta));
    }
    report(2, "chain bounds for c_k = 3 + k, K = 50", ok,
           fmt("all levels: beta > 1/2, lambda > 1, both exponential bounds; tightest bound ratio %.3f",
               worst_margin));
}

// 3. Percolation criterion on the parametric log family.
void criterion3() {
    bool ok = true;
    std::string detail;
    for (double a : {1.1, 2.0, 5.0}) {
        const auto r = theory::percolation_criterion(CRule::a_log(a, 6.0));
        ok = ok && r.verdict == theory::Verdict::Percolates;
    }
    for (double a : {0.5, 0.9, 1.0}) {
        const auto r = theory::percolation_criterion(CRule::a_log(a, 6.0));
        ok = ok && r.verdict == theory::Verdict::DoesNotPercolate;
    }
    report(3, "criterion on c_k = a log k", ok,
           "percolates for a in {1.1, 2, 5}, not for a in {0.5, 0.9, 1.0}");
}

// 4. Giant-component frequency and size at N = 2000, c = 3.
void criterion4() {
    const auto cfg = make_cfg(2000, 1, {3.0}, 41);
    const auto rep = mc::estimate_percolation(cfg, 500, 1);
    const double beta = theory::solve_fixed_point(3.0);
    const double freq = rep.rows[0].observed;
    const double se = std::sqrt(beta * (1.0 - beta) / 500.0);
    double mean_fraction = 0.0;
    for (const auto& t : rep.records) mean_fraction += static_cast<double>(t.cascade_points[0]);
    mean_fraction /= 500.0 * 2000.0;
    const bool ok_freq = std::abs(freq - beta) <= 3.0 * se;
    const bool ok_mean = std::abs(mean_fraction - beta) / beta <= 0.02;
    report(4, "giant-component frequency, N=2000 c=3", ok_freq && ok_mean,
           fmt("freq %.4f vs beta %.4f (3SE = %.4f); mean fraction %.4f (gap %.2f%%)", freq, beta,
               3.0 * se, mean_fraction, 100.0 * std::abs(mean_fraction - beta) / beta));
}

// 5. Depth-2 cascade percolation and cascade size at N = 100, c = (5,5).
void criterion5() {
    const auto cfg = make_cfg(100, 2, {5.0, 5.0}, 52);
    const auto rep = mc::estimate_percolation(cfg, 300, 2);
    const std::vector<double> c{5.0, 5.0};
    const auto rec = theory::beta_recursion(std::span<const double>(c), 2);
    const double prod = rec.product(2);
    const double freq = rep.rows[0].observed;
    const double se = std::sqrt(prod * (1.0 - prod) / 300.0);
    double size_sum = 0.0;
    int present = 0;
    for (const auto& t : rep.records) {
        if (t.cascade_points[1] > 0) {
            size_sum += static_cast<double>(t.cascade_points[1]) / 1e4;
            ++present;
        }
    }
    const double mean_size = present > 0 ? size_sum / present : 0.0;
    const bool ok_freq = std::abs(freq - prod) <= 3.0 * se;
    const bool ok_size = std::abs(mean_size - prod) / prod <= 0.03;
    report(5, "cascade percolation at depth 2, N=100 c=(5,5)", ok_freq && ok_size,
           fmt("chain freq %.4f vs %.4f (3SE = %.4f); mean C/N^2 %.4f (gap %.2f%%)", freq, prod,
               3.0 * se, mean_size, 100.0 * std::abs(mean_size - prod) / prod));
}

// 6. Degree law: TV distance to Pois(3) under 1e5 vertex samples.
void criterion6() {
    const auto cfg = make_cfg(1000, 1, {3.0}, 6);
    const auto rep = mc::degree_experiment(cfg, 100, 1);
    const double tv = rep.rows[0].observed;
    const auto samples = rep.aggregates["vertex_samples"].get<std::uint64_t>();
    report(6, "degree law vs Pois(3), N=1000", samples >= 100000 && tv < 0.02,
           fmt("TV = %.5f over %llu samples (threshold 0.02)", tv,
               static_cast<unsigned long long>(samples)));
}

// 7. Rare long edges: Y^(2) at N = 500, c_2 = 4.
void criterion7() {
    const auto cfg = make_cfg(500, 2, {3.0, 4.0}, 7);
    const auto rep = mc::degree_experiment(cfg, 4, 1);
    double freq_pos = -1.0, cond_one = -1.0;
    for (const auto& row : rep.rows) {
        if (row.quantity == "freq_positive" && row.level == 2) freq_pos = row.observed;
        if (row.quantity == "freq_one_given_positive" && row.level == 2) cond_one = row.observed;
    }
    const bool ok_pos = std::abs(freq_pos - 0.008) / 0.008 <= 0.15;
    const bool ok_cond = cond_one > 0.99;
    report(7, "rare long edges, N=500 c_2=4", ok_pos && ok_cond,
           fmt("freq(Y>0) = %.5f vs 0.008 (gap %.1f%%); freq(Y=1|Y>0) = %.4f", freq_pos,
               100.0 * std::abs(freq_pos - 0.008) / 0.008, cond_one));
}

// 8. External 1-step connections land at the next class, N=200 K=3.
void criterion8() {
    const auto cfg = make_cfg(200, 3, {5.0, 5.0, 5.0}, 8);
    const auto rep = mc::external_links_experiment(cfg, 300, 1);
    const double frac = rep.rows[0].observed;
    const auto links = rep.aggregates["links_by_class"].get<std::vector<std::uint64_t>>();
    report(8, "external links at distance exactly 2, N=200 K=3", frac >= 0.95,
           fmt("fraction %.4f (class counts: %llu at 2, %llu at 3)", frac,
               static_cast<unsigned long long>(links[0]),
               static_cast<unsigned long long>(links[1])));
}

// 9. Degree window: analytic bracket at c = 100, |j-100| < 10, delta = 0.1,
//    plus Monte Carlo X_j/N inside the (1 +- 0.2) Poisson bracket at N = 1e5.
void criterion9() {
    const auto window = theory::degree_window(100.0, 10.0, 0.1);
    bool analytic_ok = window.bracket_holds;
    std::string failing;
    for (const auto& row : window.rows)
        if (!row.within) failing += (failing.empty() ? "" : ",") + std::to_string(row.j);

    const auto cfg = make_cfg(100000, 1, {100.0}, 9);
    mc::DegreeOptions opt;
    opt.window_js = {99, 100, 101};
    opt.window_eps = 0.2;
    const auto rep = mc::degree_experiment(cfg, 1, 1, opt);
    bool mc_ok = true;
    for (const auto& row : rep.rows)
        if (row.quantity.rfind("window_fraction_", 0) == 0) mc_ok = mc_ok && row.verdict == "pass";

    std::string detail;
    if (analytic_ok) {
        detail = "analytic bracket holds on the window";
    } else {
        detail = fmt("analytic bracket FAILS at j in {%s} (e.g. pmf(100,91)*sqrt(2pi*91) = %.3f < 0.9); "
                     "bracket first holds at c = %u",
                     failing.c_str(), theory::poisson_pmf(100.0, 91) * std::sqrt(theory::k2Pi * 91.0),
                     window.min_c_for_bracket.value_or(0));
    }
    detail += fmt("; MC X_j/N in bracket for j in {99,100,101}: %s", mc_ok ? "yes" : "no");
    report(9, "degree window (analytic + Monte Carlo)", analytic_ok && mc_ok, detail);
}

// 10. CLT base case: variance and skewness of the centered giant size.
void criterion10() {
    const auto cfg = make_cfg(2000, 1, {3.0}, 10);
    const auto rep = mc::fluctuation_experiment(cfg, 2000, 1);
    const double var = rep.rows[0].observed;
    const double pred = rep.rows[0].predicted;
    const double skew = rep.rows[2].observed;
    const bool ok = std::abs(var - pred) / pred <= 0.15 && std::abs(skew) < 0.3;
    report(10, "CLT base case, N=2000 c=3", ok,
           fmt("variance %.5f vs %.5f (gap %.1f%%); skewness %.3f", var, pred,
               100.0 * std::abs(var - pred) / pred, skew));
}

// 11. Average-distance conjecture (warn-only).
void criterion11() {
    const auto cfg = make_cfg(3000, 1, {8.0}, 11);
    const auto rep = mc::distance_experiment(cfg, 120, 1, 8);
    const double mean = rep.rows[0].observed;
    const double pred = rep.rows[0].predicted;
    const bool ok_mean = std::abs(mean - pred) / pred <= 0.25;

    const auto cfg2 = make_cfg(200, 2, {8.0, 8.0}, 1102);
    const auto rep2 = mc::distance_experiment(cfg2, 30, 2, 8, 1, 400);
    const double ratio = rep2.rows[1].observed;
    const double ratio_pred = rep2.rows[1].predicted;
    const bool ok_ratio = std::abs(ratio - ratio_pred) / ratio_pred <= 0.20;

    report(11, "average-distance conjecture (warn-only)", ok_mean && ok_ratio,
           fmt("mean %.3f vs %.3f (gap %.1f%%); N-scaling ratio %.3f vs %.3f (gap %.1f%%)", mean,
               pred, 100.0 * std::abs(mean - pred) / pred, ratio, ratio_pred,
               100.0 * std::abs(ratio - ratio_pred) / ratio_pred),
           /*warn_only=*/true);
}

// 12. Property suites.
void criterion12() {
    bool ok = true;
    std::string detail;

    // ultrametric: strong triangle + translation invariance, 1e5 triples
    {
        HierSpace sp(5, 6);
        StreamRng rng(1201);
        bool tri = true, trans = true;
        for (int i = 0; i < 100000; ++i) {
            const VertexId a = rng.uniform_below(sp.size());
            const VertexId b = rng.uniform_below(sp.size());
            const VertexId t = rng.uniform_below(sp.size());
            tri = tri && sp.distance(a, b) <= std::max(sp.distance(a, t), sp.distance(t, b));
            trans = trans && sp.distance(sp.add_mod(a, t), sp.add_mod(b, t)) == sp.distance(a, b);
        }
        ok = ok && tri && trans;
        detail += fmt("ultrametric %s; ", tri && trans ? "ok" : "VIOLATED");
    }

    // union-find vs DFS oracle, graphs up to 12 vertices, 1e4 seeds
    {
        StreamRng rng(1202);
        bool agree = true;
        for (int t = 0; t < 10000 && agree; ++t) {
            const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.uniform_below(11));
            HierSpace sp(n, 1);
            std::vector<Edge> edges;
            const double p = rng.next_double();
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = i + 1; j < n; ++j)
                    if (rng.next_double() < p) edges.push_back(Edge{i, j});
            SampledGraph g(sp, {edges});
            ComponentLabeling labeling(g, BallId{1, 0}, 1);
            std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
            for (const auto& e : edges) pairs.emplace_back(e.u, e.v);
            const auto labels = oracle::dfs_components(n, pairs);
            for (std::uint32_t a = 0; a < n && agree; ++a)
                for (std::uint32_t b = a + 1; b < n; ++b)
                    if ((labeling.root_of(a) == labeling.root_of(b)) != (labels[a] == labels[b])) {
                        agree = false;
                        break;
                    }
        }
        ok = ok && agree;
        detail += fmt("union-find vs DFS %s; ", agree ? "ok" : "DISAGREES");
    }

    // elementary bracket on 1e4 random (y, n, m)
    {
        StreamRng rng(1203);
        bool bracket = true;
        for (int i = 0; i < 10000; ++i) {
            const double u = std::exp(std::log(1e-6) * rng.next_double());
            const std::uint64_t m = 2 + rng.uniform_below(1000000);
            const double mu = static_cast<double>(m) * u;
            if (mu > 600.0) continue;
            const double p = -std::expm1(static_cast<double>(m) * std::log1p(-u));
            const double diff = mu - p;
            bracket = bracket && diff > 0.0 && diff < 0.5 * mu * mu;
        }
        ok = ok && bracket;
        detail += fmt("probability bracket %s; ", bracket ? "ok" : "VIOLATED");
    }

    // determinism: byte-identical reports across thread counts
    {
        const auto cfg = make_cfg(100, 2, {4.0, 4.0}, 1204);
        const auto a = mc::estimate_percolation(cfg, 60, 2, 1);
        const auto b = mc::estimate_percolation(cfg, 60, 2, 4);
        const auto da = mc::degree_experiment(cfg, 8, 1);
        const auto db = mc::degree_experiment(cfg, 8, 3);
        const bool det =
            a.to_json().dump() == b.to_json().dump() && da.to_json().dump() == db.to_json().dump();
        ok = ok && det;
        detail += fmt("thread-count determinism %s", det ? "ok" : "BROKEN");
    }

    report(12, "property suites", ok, detail);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("acceptance: %d hard failure(s), %.1f s\n", failures, dt / 1000.0);
    return failures;
}
