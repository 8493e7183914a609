#include "hdf/cli.hpp"

#include "hdf/cartier.hpp"
#include "hdf/census.hpp"
#include "hdf/curve.hpp"
#include "hdf/errors.hpp"
#include "hdf/fq.hpp"
#include "hdf/parallel.hpp"
#include "hdf/poly.hpp"
#include "hdf/report.hpp"
#include "hdf/syz.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hdf {

namespace {

using u64 = std::uint64_t;

// Flag-level problems detected after parsing; mapped to kExitUsage.
struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::pair<u64, u64> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw UsageFailure("range must look like a..b: " + text);
    try {
        u64 lo = std::stoull(text.substr(0, dots));
        u64 hi = std::stoull(text.substr(dots + 2));
        if (lo > hi) throw UsageFailure("empty range: " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageFailure("range must look like a..b: " + text);
    }
}

std::vector<std::uint32_t> primes_in_config(const RunConfig& cfg) {
    if (cfg.p_min == 0) throw UsageFailure(cfg.command + " requires --p or --p-range");
    std::vector<std::uint32_t> out;
    for (u64 p = cfg.p_min; p <= cfg.p_max; ++p) {
        if (cfg.p_min == cfg.p_max) {
            // A single explicit p must itself be an odd prime.
            if (p < 3 || !is_prime_u64(p))
                throw UsageFailure("p must be an odd prime, got " + std::to_string(p));
        }
        if (p < 3 || !is_prime_u64(p)) continue;
        out.push_back(std::uint32_t(p));
    }
    if (out.empty()) throw UsageFailure("no odd primes in the requested range");
    return out;
}

// The parameter residues in [2, p-1] selected by the lambda flag.
std::vector<u64> lambda_values_for(std::uint32_t p, const std::string& selector) {
    const auto ctx = build_extension(p, 1);
    std::vector<u64> out;
    if (selector == "all" || selector == "supersingular-only" || selector == "ordinary-only") {
        for (u64 l = 2; l <= u64(p) - 1; ++l) {
            if (selector != "all") {
                bool ss = is_supersingular(p, ctx->from_int(l));
                if ((selector == "supersingular-only") != ss) continue;
            }
            out.push_back(l);
        }
        return out;
    }
    u64 value = 0;
    try {
        value = std::stoull(selector);
    } catch (const std::logic_error&) {
        throw UsageFailure("bad lambda selector: " + selector);
    }
    if (value < 2 || value >= p)
        throw UsageFailure("lambda must lie in [2, p-1] for p = " + std::to_string(p));
    out.push_back(value);
    return out;
}

// Lowest-degree-first rendering, e.g. "1 + λ" for the parameter polynomials.
std::string ascending_poly_string(const Poly& f, const std::string& var) {
    if (f.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i <= std::size_t(f.degree()); ++i) {
        Fq c = f.coeff(i);
        if (c.is_zero()) continue;
        if (!first) out << " + ";
        first = false;
        std::string cs = c.to_string();
        if (i == 0) {
            out << cs;
        } else {
            if (cs != "1") out << cs << "*";
            out << var;
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

std::string map_display(const RatMap& m) {
    if (m.den().is_one()) return m.num().to_string("x");
    return "(" + m.num().to_string("x") + ") / (" + m.den().to_string("x") + ")";
}

Json coeff_indices(const Poly& f) {
    Json arr = Json::array();
    for (std::size_t i = 0; i <= std::size_t(f.degree()) && !f.is_zero(); ++i)
        arr.push_back(f.coeff(i).index());
    return arr;
}

const char* lead_sign_name(LeadSign s) {
    switch (s) {
        case LeadSign::plus: return "plus";
        case LeadSign::minus: return "minus";
        case LeadSign::mismatch: return "mismatch";
        case LeadSign::degenerate: return "degenerate";
    }
    return "unknown";
}

Json config_echo(const RunConfig& cfg) {
    Json c;
    c["p_min"] = cfg.p_min;
    c["p_max"] = cfg.p_max;
    c["lambda"] = cfg.lambda_selector;
    c["k"] = cfg.k;
    c["f_min"] = cfg.f_min;
    c["f_max"] = cfg.f_max;
    c["weights"] = cfg.weights;
    c["format"] = cfg.format;
    c["threads"] = cfg.threads;
    c["seed"] = cfg.seed;
    c["x"] = cfg.x;
    c["max_iter"] = cfg.max_iter;
    return c;
}

Rational parse_rational(const std::string& tok) {
    auto slash = tok.find('/');
    try {
        if (slash == std::string::npos) return Rational{std::stoull(tok), 1};
        return Rational{std::stoull(tok.substr(0, slash)), std::stoull(tok.substr(slash + 1))};
    } catch (const std::logic_error&) {
        throw UsageFailure("bad rational: " + tok);
    }
}

WeightTuple parse_weights(const std::string& text) {
    std::array<Rational, 4> w;
    std::stringstream ss(text);
    std::string tok;
    std::size_t i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 4) throw UsageFailure("weight tuple needs exactly four entries");
        w[i++] = parse_rational(tok);
    }
    if (i != 4) throw UsageFailure("weight tuple needs exactly four entries");
    try {
        return WeightTuple(w);
    } catch (const BadInput& e) {
        throw UsageFailure(std::string("bad weights: ") + e.what());
    }
}

// ------------------------------------------------------------- commands

void run_verify(const RunConfig& cfg, Json& report) {
    std::vector<std::pair<std::uint32_t, u64>> jobs;
    for (std::uint32_t p : primes_in_config(cfg))
        for (u64 l : lambda_values_for(p, cfg.lambda_selector)) jobs.push_back({p, l});
    std::vector<VerificationReport> results(jobs.size());
    parallel_for(jobs.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        auto [p, l] = jobs[i];
        results[i] = verify_conjecture(p, build_extension(p, 1)->from_int(l));
    });
    for (const auto& r : results) {
        Json item;
        item["p"] = r.p;
        item["lambda"] = r.lambda;
        item["supersingular"] = r.supersingular;
        item["routes_agree"] = r.routes_agree;
        item["full_field"] = r.full_field;
        item["points_checked"] = r.points_checked;
        item["mismatches"] = r.mismatches;
        item["witnesses"] = r.witnesses;
        item["decomposition_ok"] = r.decomposition_ok;
        item["lead_sign"] = lead_sign_name(r.lead_sign);
        item["pass"] = r.routes_agree && r.full_field && r.decomposition_ok;
        item["seconds"] = r.seconds;
        add_item(report, std::move(item));
    }
}

void run_deta(const RunConfig& cfg, Json& report) {
    auto primes = primes_in_config(cfg);
    std::vector<DetAFactorization> results(primes.size());
    parallel_for(primes.size(), resolve_threads(cfg.threads),
                 [&](std::size_t i) { results[i] = check_detA_factorization(primes[i]); });
    for (std::size_t i = 0; i < primes.size(); ++i) {
        Json item;
        item["p"] = primes[i];
        item["c"] = results[i].c.to_string();
        item["holds"] = results[i].holds;
        item["pass"] = results[i].holds && !results[i].c.is_zero();
        add_item(report, std::move(item));
    }
}

void run_hasse(const RunConfig& cfg, Json& report) {
    auto primes = primes_in_config(cfg);
    struct Row {
        std::string poly;
        std::vector<u64> supersingular;
        bool oracle_agrees = false;
    };
    std::vector<Row> rows(primes.size());
    parallel_for(primes.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        std::uint32_t p = primes[i];
        const auto ctx = build_extension(p, 1);
        Poly h = hasse_poly(p);
        Row row;
        row.poly = ascending_poly_string(h, "λ");
        row.oracle_agrees = true;
        for (u64 l = 2; l <= u64(p) - 1; ++l) {
            Fq lam = ctx->from_int(l);
            bool root = h.eval(lam).is_zero();
            if (root) row.supersingular.push_back(l);
            // Independent criterion: the affine curve has exactly p + 1
            // projective points exactly at the polynomial's roots.
            bool count_flat = LegendreCurve(lam).point_count() == u64(p) + 1;
            if (root != count_flat) row.oracle_agrees = false;
        }
        rows[i] = std::move(row);
    });
    for (std::size_t i = 0; i < primes.size(); ++i) {
        Json item;
        item["p"] = primes[i];
        item["hasse"] = rows[i].poly;
        item["supersingular"] = rows[i].supersingular;
        item["oracle_agrees"] = rows[i].oracle_agrees;
        item["pass"] = rows[i].oracle_agrees;
        add_item(report, std::move(item));
    }
}

void run_census(const RunConfig& cfg, Json& report) {
    if (cfg.f_min == 0) throw UsageFailure("census requires --f or --f-range");
    const bool weighted = !cfg.weights.empty();
    WeightTuple alpha({Rational{0, 1}, Rational{0, 1}, Rational{0, 1}, Rational{0, 1}});
    if (weighted) alpha = parse_weights(cfg.weights);
    for (u64 f = cfg.f_min; f <= cfg.f_max; ++f) {
        Json item;
        item["f"] = f;
        try {
            if (weighted) {
                u64 counted = count_M_alpha(alpha, f);
                u64 display = count_M_alpha_display(alpha, f);
                item["level"] = alpha.level();
                item["Lambda"] = Lambda_alpha(alpha);
                item["count"] = counted;
                item["display_count"] = display;
                item["agree"] = counted == display;
                item["pass"] = counted == display;
            } else {
                item["search_bound"] = preimage_bound(f);
                item["moduli"] = preimage_lambda_prime(f);
                item["count"] = census_Z(f);
                item["pass"] = true;
            }
        } catch (const TooLarge& e) {
            item["error"] = e.what();
            item["pass"] = false;
        }
        add_item(report, std::move(item));
    }
}

void run_orbit(const RunConfig& cfg, Json& report) {
    auto primes = primes_in_config(cfg);
    if (primes.size() != 1) throw UsageFailure("orbit takes a single --p");
    std::uint32_t p = primes[0];
    auto lambdas = lambda_values_for(p, cfg.lambda_selector);
    if (cfg.lambda_selector == "all" || lambdas.size() != 1)
        throw UsageFailure("orbit requires --lambda with a single residue");
    u64 l = lambdas[0];
    if (cfg.k == 0 || cfg.k > 24) throw UsageFailure("extension degree must lie in [1, 24]");
    const auto ctx = build_extension(p, cfg.k);
    ProjPoint x0 = ProjPoint::infinity();
    if (cfg.x.empty()) throw UsageFailure("orbit requires --x (element index or 'inf')");
    if (cfg.x != "inf") {
        u64 idx = 0;
        try {
            idx = std::stoull(cfg.x);
        } catch (const std::logic_error&) {
            throw UsageFailure("bad --x value: " + cfg.x);
        }
        try {
            x0 = ProjPoint(ctx->element_from_index(idx));
        } catch (const BadInput& e) {
            throw UsageFailure(std::string("bad --x value: ") + e.what());
        }
    }
    Json item;
    item["p"] = p;
    item["lambda"] = l;
    item["k"] = cfg.k;
    item["x"] = cfg.x;
    try {
        OrbitResult r = orbit_analysis(p, ctx->from_int(l), x0, cfg.max_iter);
        item["tail"] = r.tail;
        item["cycle"] = r.cycle;
        item["pass"] = true;
    } catch (const Inconclusive& e) {
        item["error"] = e.what();
        item["pass"] = false;
    }
    add_item(report, std::move(item));
}

void run_flow(const RunConfig& cfg, Json& report) {
    auto primes = primes_in_config(cfg);
    if (primes.size() != 1) throw UsageFailure("flow takes a single --p");
    std::uint32_t p = primes[0];
    auto lambdas = lambda_values_for(p, cfg.lambda_selector);
    if (cfg.lambda_selector == "all" || lambdas.size() != 1)
        throw UsageFailure("flow requires --lambda with a single residue");
    u64 l = lambdas[0];
    const auto ctx = build_extension(p, 1);
    Fq lam = ctx->from_int(l);
    RatMap m = flow_map(p, lam);
    Json item;
    item["p"] = p;
    item["lambda"] = l;
    item["degree"] = m.degree();
    item["map"] = map_display(m);
    item["num"] = coeff_indices(m.num());
    item["den"] = coeff_indices(m.den());
    try {
        StructuralParts parts = structural_decompose(m, p, lam);
        Json d;
        d["degenerate"] = parts.degenerate;
        d["f"] = parts.f.to_string("x");
        d["g"] = parts.g.to_string("x");
        d["lead_sign"] = lead_sign_name(parts.lead_sign);
        item["decomposition"] = std::move(d);
        item["pass"] = parts.lead_sign != LeadSign::mismatch;
    } catch (const StructureError& e) {
        item["error"] = e.what();
        item["pass"] = false;
    }
    add_item(report, std::move(item));
}

int render_and_write(const RunConfig& cfg, const Json& report, std::ostream& out,
                     std::ostream& err) {
    std::string rendered;
    if (cfg.format == "json") {
        rendered = render_json(report);
    } else if (cfg.format == "csv") {
        rendered = render_csv(report);
    } else {
        rendered = render_text(report);
    }
    if (cfg.output.empty()) {
        out << rendered;
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "cannot open output file: " << cfg.output << "\n";
            return kExitUsage;
        }
        file << rendered;
    }
    return report_all_passed(report) ? kExitOk : kExitMathFailure;
}

} // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text")
            throw UsageFailure("format must be json, csv, or text");
        // Nested reports do not flatten; tables are the only CSV payload.
        if (cfg.format == "csv" && cfg.command != "census")
            throw UsageFailure("csv output is available for census only");
        Json report = make_report(cfg.command, config_echo(cfg));
        auto t0 = std::chrono::steady_clock::now();
        if (cfg.command == "verify") {
            run_verify(cfg, report);
        } else if (cfg.command == "deta") {
            run_deta(cfg, report);
        } else if (cfg.command == "hasse") {
            run_hasse(cfg, report);
        } else if (cfg.command == "census") {
            run_census(cfg, report);
        } else if (cfg.command == "orbit") {
            run_orbit(cfg, report);
        } else if (cfg.command == "flow") {
            run_flow(cfg, report);
        } else {
            throw UsageFailure("unknown command: " + cfg.command);
        }
        auto t1 = std::chrono::steady_clock::now();
        finalize_report(report, std::chrono::duration<double>(t1 - t0).count());
        return render_and_write(cfg, report, out, err);
    } catch (const UsageFailure& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NotPrime& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitMathFailure;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    u64 p_single = 0;
    std::string p_range, f_range;
    u64 f_single = 0;

    CLI::App app{"two-route exact verification of the characteristic-p flow self-map"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", cfg.format, "output format: json, csv, or text");
        cmd->add_option("--output", cfg.output, "write the report to this file");
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
        cmd->add_option("--seed", cfg.seed, "reserved for future randomized modes");
    };
    auto add_p = [&](CLI::App* cmd) {
        auto* p_opt = cmd->add_option("--p", p_single, "odd prime");
        auto* range_opt = cmd->add_option("--p-range", p_range, "inclusive prime range a..b");
        p_opt->excludes(range_opt);
        range_opt->excludes(p_opt);
    };

    auto* verify = app.add_subcommand("verify", "compare the flow route with the isogeny route");
    add_p(verify);
    verify->add_option("--lambda", cfg.lambda_selector,
                       "parameter selector: all, supersingular-only, ordinary-only, or a residue");
    add_common(verify);

    auto* deta = app.add_subcommand("deta", "factor the Hankel determinant of the parameter");
    add_p(deta);
    add_common(deta);

    auto* hasse = app.add_subcommand("hasse", "Hasse polynomial and supersingular parameters");
    add_p(hasse);
    add_common(hasse);

    auto* census = app.add_subcommand("census", "periodic point counts");
    census->add_option("--f", f_single, "period");
    census->add_option("--f-range", f_range, "inclusive period range a..b");
    census->add_option("--weights", cfg.weights, "weight tuple a/b,c/d,e/f,g/h");
    add_common(census);

    auto* orbit = app.add_subcommand("orbit", "tail and cycle of one starting point");
    add_p(orbit);
    orbit->add_option("--lambda", cfg.lambda_selector, "parameter residue in [2, p-1]");
    orbit->add_option("--x", cfg.x, "start: element index in F_{p^k}, or 'inf'");
    orbit->add_option("--k", cfg.k, "extension degree of the start point field");
    orbit->add_option("--max-iter", cfg.max_iter, "iteration budget");
    add_common(orbit);

    auto* flow = app.add_subcommand("flow", "coefficients and decomposition of the flow map");
    add_p(flow);
    flow->add_option("--lambda", cfg.lambda_selector, "parameter residue in [2, p-1]");
    add_common(flow);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!p_range.empty()) {
            auto [lo, hi] = parse_range(p_range);
            cfg.p_min = lo;
            cfg.p_max = hi;
        } else if (p_single != 0) {
            cfg.p_min = cfg.p_max = p_single;
        }
        if (!f_range.empty()) {
            auto [lo, hi] = parse_range(f_range);
            cfg.f_min = lo;
            cfg.f_max = hi;
        } else if (f_single != 0) {
            cfg.f_min = cfg.f_max = f_single;
        }
    } catch (const UsageFailure& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return execute(cfg, out, err);
}

} // namespace hdf
