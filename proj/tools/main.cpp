// Command-line front end: exact Q_p arithmetic, square-root existence,
// fixed-point classification, orbit certification, sphere scans, Siegel
// reports and the claim-reproduction suites.

#include "qpdyn/claims.hpp"
#include "qpdyn/json_io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace qpdyn;

namespace {

struct GlobalOpts {
    std::int64_t p = 0;
    std::string a;
    int precision = 64;
    int max_iter = 200;
    int kmax = 100;
    int depth = 0;  // auto
    std::uint64_t seed = 0x5EED;
    std::string format = "text";
    std::string out;
    bool random_tail = false;
};

// Accepts "num", "num/den" or the digit form "v;d0,d1,..." whose last digit
// repeats (append ,0 for a terminating expansion).
PAdicNumber parse_padic(const std::string& text, Prime p, int precision) {
    auto semi = text.find(';');
    if (semi != std::string::npos) {
        std::int64_t v = std::stoll(text.substr(0, semi));
        std::vector<std::int64_t> digits;
        std::stringstream rest(text.substr(semi + 1));
        std::string tok;
        while (std::getline(rest, tok, ',')) digits.push_back(std::stoll(tok));
        if (digits.empty()) throw CLI::ValidationError("digit form needs at least one digit: " + text);
        return PAdicNumber::from_digits(p, v, std::move(digits), precision, DigitTail::RepeatLast);
    }
    auto slash = text.find('/');
    BigInt num(slash == std::string::npos ? text : text.substr(0, slash));
    BigInt den(slash == std::string::npos ? std::string("1") : text.substr(slash + 1));
    return PAdicNumber::from_rational(num, den, p, precision);
}

ScanConfig make_config(const GlobalOpts& g) {
    ScanConfig cfg;
    cfg.orbit.max_iter = g.max_iter;
    cfg.kmax = g.kmax;
    cfg.depth = g.depth;
    cfg.seed = g.seed;
    cfg.precision = g.precision;
    cfg.tail = g.random_tail ? TailPolicy::SeededRandomTail : TailPolicy::ZeroTail;
    return cfg;
}

Prime require_p(const GlobalOpts& g) {
    if (g.p == 0) throw CLI::ValidationError("--p is required for this command");
    return Prime(g.p);
}

MapParams require_params(const GlobalOpts& g) {
    Prime p = require_p(g);
    if (g.a.empty()) throw CLI::ValidationError("--a is required for this command");
    return MapParams(p, parse_padic(g.a, p, g.precision));
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(g.out, std::ios::binary);
        if (!f) throw CLI::ValidationError("cannot open output file: " + g.out);
        f << text;
    }
}

std::string norm_str(const NormValue& n, std::int64_t p) { return n.str(p); }

// S(center, e) / B(center, e); centers 0, -a, x2, x3 or any literal value.
std::pair<char, std::pair<std::string, std::int64_t>> parse_region(const std::string& spec) {
    std::string s;
    for (char ch : spec) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    }
    if (s.size() < 5 || (s[0] != 'S' && s[0] != 'B') || s[1] != '(' || s.back() != ')') {
        throw CLI::ValidationError("region must look like S(center,e) or B(center,e): " + spec);
    }
    std::string inner = s.substr(2, s.size() - 3);
    auto comma = inner.rfind(',');
    if (comma == std::string::npos) {
        throw CLI::ValidationError("region must look like S(center,e) or B(center,e): " + spec);
    }
    return {s[0], {inner.substr(0, comma), std::stoll(inner.substr(comma + 1))}};
}

PAdicNumber resolve_center(const std::string& expr, const MapParams& params, int precision) {
    if (expr == "0") return PAdicNumber::zero(params.p);
    if (expr == "-a") return -params.a;
    if (expr == "x2" || expr == "x3") {
        FixedPointSet fps = fixed_points(params);
        for (const auto& r : fps.records) {
            if ((expr == "x2" && r.which == WhichFixed::X2) ||
                (expr == "x3" && r.which == WhichFixed::X3)) {
                return r.value;
            }
        }
        throw CLI::ValidationError("center " + expr + " does not exist for these parameters (" +
                                   to_string(fps.verdict.case_tag) + ")");
    }
    return parse_padic(expr, params.p, precision);
}

int cmd_sqrt(const GlobalOpts& g, const std::string& target) {
    Prime p = require_p(g);
    Json j;
    std::ostringstream text;
    if (target == "a2p4") {
        MapParams params = require_params(g);
        ExistenceVerdict v = sqrt_a2p4_verdict(params.a);
        j["target"] = "a^2+4";
        j["p"] = p.value();
        j["a"] = params.a.compact();
        j["verdict"] = to_json(v);
        text << "sqrt(a^2+4) at p=" << p.value() << ": exists=" << (v.exists ? "true" : "false")
             << " case=" << to_string(v.case_tag);
        if (v.witness) text << " witness=" << *v.witness;
        text << "\n";
        if (v.exists) {
            PAdicNumber w = params.a * params.a + PAdicNumber::from_integer(4, p, g.precision);
            SqrtPair s = padic_sqrt(w, g.precision);
            j["root"] = s.root.compact();
            j["neg_root"] = s.neg_root.compact();
            text << "root     = " << s.root.str() << "\n";
            text << "neg_root = " << s.neg_root.str() << "\n";
        }
    } else {
        PAdicNumber x = parse_padic(target, p, g.precision);
        bool exists = x.is_exact_zero() || sqrt_exists(x);
        j["target"] = target;
        j["p"] = p.value();
        j["exists"] = exists;
        text << "sqrt(" << target << ") at p=" << p.value() << ": exists="
             << (exists ? "true" : "false") << "\n";
        if (exists) {
            SqrtPair s = padic_sqrt(x, g.precision);
            j["root"] = s.root.compact();
            j["neg_root"] = s.neg_root.compact();
            text << "root     = " << s.root.str() << "\n";
            text << "neg_root = " << s.neg_root.str() << "\n";
        }
    }
    emit(g, g.format == "json" ? j.dump(2) + "\n" : text.str());
    return 0;
}

const char* stratum_name(const MapParams& params) {
    NormValue n = params.a_norm();
    if (n < NormValue::one()) return "|a| < 1";
    if (n == NormValue::one()) return "|a| = 1";
    return "|a| > 1";
}

int cmd_classify(const GlobalOpts& g) {
    MapParams params = require_params(g);
    FixedPointSet fps = fixed_points(params);
    auto formal = formal_pair_kinds(params);

    Json j = to_json(fps, params.p.value());
    j["stratum"] = stratum_name(params);
    if (formal) {
        j["formal_pair_kinds"] = Json::array({to_string(formal->first), to_string(formal->second)});
    }

    std::ostringstream text;
    text << "p=" << params.p.value() << " a=" << params.a.compact() << "  (" << stratum_name(params)
         << ")\n";
    text << "sqrt(a^2+4): exists=" << (fps.verdict.exists ? "true" : "false") << " case="
         << to_string(fps.verdict.case_tag) << "\n";
    for (const auto& r : fps.records) {
        text << "  " << to_string(r.which) << " = " << r.value.compact() << "  |f'| = "
             << norm_str(r.multiplier_norm, params.p.value()) << "  " << to_string(r.kind) << "\n";
    }
    if (fps.records.size() == 1 && formal) {
        text << "  (x2, x3 do not exist in Q_p; multiplier-norm identities give: "
             << to_string(formal->first) << ", " << to_string(formal->second) << ")\n";
    }
    if (fps.existence_undecided) text << "  note: " << fps.note << "\n";
    emit(g, g.format == "json" ? j.dump(2) + "\n" : text.str());
    return 0;
}

int cmd_orbit(const GlobalOpts& g, const std::string& x0_text) {
    MapParams params = require_params(g);
    PAdicNumber x0 = parse_padic(x0_text, params.p, g.precision);
    OrbitConfig cfg{g.max_iter, 16};
    OrbitFate fate = orbit_fate(params, x0, cfg);

    Json j;
    j["p"] = params.p.value();
    j["a"] = params.a.compact();
    j["x0"] = x0.compact();
    j["fate"] = to_json(fate);

    std::ostringstream text;
    text << "orbit of " << x0.compact() << ": " << to_string(fate.kind);
    if (fate.target) text << " -> " << to_string(*fate.target);
    text << " after " << fate.steps_used << " steps\n  " << fate.certificate << "\n";
    emit(g, g.format == "json" ? j.dump(2) + "\n" : text.str());
    return 0;
}

int cmd_scan(const GlobalOpts& g, const std::vector<std::string>& regions) {
    MapParams params = require_params(g);
    ScanConfig cfg = make_config(g);
    std::vector<Sphere> spheres;
    for (const std::string& spec : regions) {
        auto [kind, ce] = parse_region(spec);
        PAdicNumber center = resolve_center(ce.first, params, g.precision);
        if (kind == 'S') {
            spheres.push_back(Sphere{center, ce.second});
        } else {
            // a ball is scanned as its top three spheres
            for (int i = 0; i < 3; ++i) spheres.push_back(Sphere{center, ce.second - i});
        }
    }
    BasinScanResult result = basin_scan(params, spheres, cfg);

    if (g.format == "csv") {
        emit(g, scan_csv(result));
        return 0;
    }
    if (g.format == "json") {
        Json j;
        j["p"] = params.p.value();
        j["a"] = params.a.compact();
        j["scan"] = to_json(result);
        emit(g, j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream text;
    text << "scanned " << result.fates.size() << " points:\n";
    for (const auto& [k, v] : result.counts) text << "  " << k << ": " << v << "\n";
    emit(g, text.str());
    return 0;
}

int cmd_siegel(const GlobalOpts& g, const std::string& which) {
    MapParams params = require_params(g);
    ScanConfig cfg = make_config(g);
    FixedPointSet fps = fixed_points(params);
    const FixedPointRecord* fp = nullptr;
    for (const auto& r : fps.records) {
        if (to_string(r.which) == which) fp = &r;
    }
    if (!fp) throw CLI::ValidationError("fixed point " + which + " not available here");

    NormValue na = params.a_norm();
    std::int64_t boundary = na > NormValue::one() ? -na.exponent() : 0;
    SiegelReport rep = siegel_scan(params, *fp, boundary - 2, boundary, cfg);

    if (g.format == "json") {
        Json j;
        j["p"] = params.p.value();
        j["a"] = params.a.compact();
        j["report"] = to_json(rep, params.p.value());
        emit(g, j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream text;
    text << "Siegel scan around " << which << " = " << fp->value.compact() << " ("
         << to_string(fp->kind) << ")\n";
    for (const auto& r : rep.per_radius) {
        text << "  log_radius " << r.log_radius << ": " << to_string(r.verdict);
        if (r.counterexample) text << "  (" << r.counterexample->compact() << ")";
        text << "\n";
    }
    text << "boundary: " << to_string(rep.boundary_conclusion) << "\n";
    emit(g, text.str());
    return 0;
}

int cmd_reproduce(const GlobalOpts& g, const std::string& suite) {
    ScanConfig cfg = make_config(g);
    SuiteResult result = run_suite(suite, cfg);

    if (g.format == "json") {
        emit(g, to_json(result).dump(2) + "\n");
    } else if (g.format == "csv") {
        emit(g, suite_csv(result));
    } else {
        std::ostringstream text;
        for (const auto& r : result.reports) {
            text << (r.status == ClaimStatus::Pass     ? "[PASS] "
                     : r.status == ClaimStatus::Fail   ? "[FAIL] "
                                                       : "[SKIP] ")
                 << r.claim_id << "  p=" << r.p << " a=" << r.a_compact;
            if (!r.reason.empty()) text << "  (" << r.reason << ")";
            if (!r.witnesses.empty()) {
                text << "\n         witness " << r.witnesses.front().first << " : "
                     << r.witnesses.front().second;
            }
            text << "\n";
        }
        text << result.reports.size() << " claims, " << result.failures << " failed, "
             << result.skipped << " skipped\n";
        emit(g, text.str());
    }
    return result.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact p-adic arithmetic and certified dynamics of x^3 + a x^2 over Q_p"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--p", g.p, "prime base");
    app.add_option("--a", g.a, "map parameter: num, num/den, or v;d0,d1,... (last digit repeats)");
    app.add_option("--precision", g.precision, "guaranteed digits (default 64, min 16)")
        ->check(CLI::Range(16, 4096));
    app.add_option("--max-iter", g.max_iter, "orbit iteration budget (default 200)");
    app.add_option("--kmax", g.kmax, "hitting-time bound (default 100)");
    app.add_option("--depth", g.depth, "sphere enumeration depth (default 3 for p<=7, else 2)");
    app.add_option("--seed", g.seed, "seed for random sphere tails (default 0x5EED)");
    app.add_option("--format", g.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", g.out, "write the report to a file instead of stdout");
    app.add_flag("--random-tail", g.random_tail, "use seeded random digit tails when sampling");

    std::string sqrt_target, orbit_x0, siegel_which = "x2", suite = "all";
    std::vector<std::string> scan_regions;

    CLI::App* c_sqrt = app.add_subcommand("sqrt", "square-root existence and Hensel roots");
    c_sqrt->add_option("target", sqrt_target, "a2p4 | rational (e.g. -3, -5, 21/4)")->required();
    CLI::App* c_classify = app.add_subcommand("classify", "fixed points, multipliers and kinds");
    CLI::App* c_orbit = app.add_subcommand("orbit", "certified fate of one orbit");
    c_orbit->add_option("x0", orbit_x0, "starting point (num/den or v;d0,d1,...)")->required();
    CLI::App* c_scan = app.add_subcommand("scan", "orbit fates over sampled spheres/balls");
    c_scan->add_option("region", scan_regions, "S(center,e) or B(center,e); center 0|-a|x2|x3|value")
        ->required();
    CLI::App* c_siegel = app.add_subcommand("siegel", "sphere-invariance report around a fixed point");
    c_siegel->add_option("which", siegel_which, "x1 | x2 | x3");
    CLI::App* c_repro = app.add_subcommand("reproduce", "run a claim suite");
    c_repro->add_option("suite", suite, "all | section3 | section4 | section5");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_sqrt->parsed()) return cmd_sqrt(g, sqrt_target);
        if (c_classify->parsed()) return cmd_classify(g);
        if (c_orbit->parsed()) return cmd_orbit(g, orbit_x0);
        if (c_scan->parsed()) return cmd_scan(g, scan_regions);
        if (c_siegel->parsed()) return cmd_siegel(g, siegel_which);
        if (c_repro->parsed()) return cmd_reproduce(g, suite);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
