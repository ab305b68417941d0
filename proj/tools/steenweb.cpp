// steenweb: batch front end over the Steenrod, ring and web engines.
// Exit codes: 0 pass, 1 check failed, 2 input error, 3 internal invariant breach.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "steenweb/steenweb.hpp"
#include "steenweb/suites.hpp"

using namespace steenweb;

namespace {

struct Options {
    int prime = 2;
    std::string file;
    std::optional<int> range;
    int k = 4;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 1;
    int count = 100;
    int n = 16;
    int r = 8;
    int bound = 1;
    bool relaxed = false;
    int dmax = 20;
    int kmax = 200;
    int generators = 0;
    int max_exp = 0; // 0: 3 for p = 2, 8 for odd p
    int lmax = 256;
    int pow_max = 32;
};

std::string data_dir()
{
    if (const char* env = std::getenv("STEENWEB_DATA"); env && *env)
        return env;
    return STEENWEB_DEFAULT_DATA;
}

void print_table(const json& j, const std::string& indent = "")
{
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            std::cout << indent << k << ":\n";
            print_table(v, indent + "  ");
        } else {
            std::cout << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

int emit(const Options& o, const json& j, int code)
{
    if (o.format == "table")
        print_table(j);
    else
        std::cout << j.dump(2) << "\n";
    return code;
}

int verdict_code(const Verdict& v) { return v.failed() ? 1 : 0; }

json validation_json(const std::string& name, const ValidationReport& rep)
{
    json f = json::array();
    for (const auto& a : rep.failures) {
        json w = json::array();
        for (auto [d, i] : a.witness)
            w.push_back({d, i});
        f.push_back({{"axiom", a.axiom}, {"witness", w}, {"detail", a.detail}});
    }
    return {{"ring", name}, {"ok", rep.ok()}, {"checked", rep.checked}, {"failures", f}};
}

const ZpAlgebra& need_zp(const AnyAlgebra& A, const char* what)
{
    if (const auto* z = std::get_if<ZpAlgebra>(&A))
        return *z;
    throw Error(Errc::precondition, std::string(what) + " needs a ring over Z_p");
}

const QAlgebra& need_q(const AnyAlgebra& A, const char* what)
{
    if (const auto* q = std::get_if<QAlgebra>(&A))
        return *q;
    throw Error(Errc::precondition, std::string(what) + " needs a ring over Q");
}

int cmd_ring(const std::string& sub, const Options& o)
{
    if (sub == "export-corpus") {
        const std::string dir = o.out.empty() ? data_dir() : o.out;
        suites::export_corpus(dir);
        return emit(o, {{"exported", suites::corpus().size()}, {"web", suites::web_corpus().size()}, {"dir", dir}}, 0);
    }
    if (o.file.empty())
        throw Error(Errc::invalid_argument, "--file is required");
    const AnyAlgebra any = load_ring(o.file);
    if (sub == "validate") {
        return std::visit(
            [&](const auto& A) {
                const auto rep = validate(A);
                return emit(o, validation_json(A.name(), rep), rep.ok() ? 0 : 1);
            },
            any);
    }
    // the remaining analyses assume a structurally valid ring
    const bool valid = std::visit([](const auto& A) { return validate(A).ok(); }, any);
    if (!valid)
        throw Error(Errc::precondition, "ring does not validate; run `ring validate` for the witness");
    if (sub == "minimal-period") {
        return std::visit(
            [&](const auto& A) {
                const int c = o.range.value_or(A.top());
                return emit(o, spectrum_json(A, minimal_period(A, c)), 0);
            },
            any);
    }
    if (sub == "classify") {
        const auto& A = need_q(any, "classify");
        try {
            const auto cls = classify_4periodic(A);
            return emit(o, {{"ring", A.name()}, {"label", cls.label}, {"witness", witness_json(A.field(), cls.witness)}},
                        0);
        } catch (const Error& e) {
            if (e.code() != Errc::not_periodic)
                throw;
            return emit(o, {{"ring", A.name()}, {"label", nullptr}, {"error", to_string(e.code())}}, 1);
        }
    }
    if (sub == "bodd-check") {
        const auto v = check_bodd(need_q(any, "bodd-check"));
        return emit(o, v.to_json(), verdict_code(v));
    }
    if (sub == "gcd-check") {
        const auto v = rational_gcd_periodicity(need_q(any, "gcd-check"), o.k, o.range);
        return emit(o, v.to_json(), verdict_code(v));
    }
    if (sub == "power-of-two") {
        const auto v = check_power_of_two(need_zp(any, "power-of-two"), o.range);
        return emit(o, v.to_json(), verdict_code(v));
    }
    if (sub == "odd-p") {
        const auto v = check_odd_p(need_zp(any, "odd-p"), o.range);
        return emit(o, v.to_json(), verdict_code(v));
    }
    throw Error(Errc::invalid_argument, "unknown ring subcommand " + sub);
}

int cmd_web(const std::string& sub, const Options& o)
{
    const web::SearchOptions search{!o.relaxed};
    if (sub == "analyze") {
        if (o.file.empty())
            throw Error(Errc::invalid_argument, "--file is required");
        const auto M = web::load_model(o.file);
        const auto res = web::find_certificate(M, search);
        const json rec = web::analyze_record(M, res, !o.relaxed);
        return emit(o, rec, rec["status"] == "certified" ? 0 : 1);
    }
    if (sub == "random") {
        json records = json::array();
        long long certified = 0, flagged = 0, failed = 0;
        for (int i = 0; i < o.count; ++i) {
            const auto M = web::random_model(o.n, o.r, suites::model_seed(o.seed, i), o.bound);
            const auto rec = web::analyze_record(M, web::find_certificate(M, search), !o.relaxed);
            const auto status = rec["status"].get<std::string>();
            certified += status == "certified";
            flagged += status == "flagged";
            failed += status == "verification-failed";
            records.push_back(rec);
        }
        json out = {{"params", {{"n", o.n}, {"r", o.r}, {"count", o.count}, {"seed", o.seed}, {"bound", o.bound}}},
                    {"certified", certified},
                    {"flagged", flagged},
                    {"verification_failed", failed},
                    {"records", records}};
        return emit(o, out, flagged || failed ? 1 : 0);
    }
    if (sub == "exhaustive") {
        const auto j = suites::web_exhaustive(o.n, o.r, o.bound);
        return emit(o, j, j["pass"].get<bool>() ? 0 : 1);
    }
    throw Error(Errc::invalid_argument, "unknown web subcommand " + sub);
}

int cmd_verify(const std::string& suite, const Options& o)
{
    json j;
    if (suite == "adem-oracle")
        j = suites::adem_oracle(o.prime, o.dmax, o.generators ? o.generators : (o.prime == 2 ? 4 : 3),
                                 o.max_exp ? o.max_exp : (o.prime == 2 ? 3 : 8));
    else if (suite == "hit-lemma")
        j = suites::hit_lemma(o.prime, o.kmax);
    else if (suite == "sq-decomposition")
        j = suites::sq_decomposition(o.lmax, o.pow_max);
    else if (suite == "power-of-two")
        j = suites::steenrod_periodicity(2, suites::load_corpus(data_dir()), o.count, o.seed);
    else if (suite == "odd-p")
        j = suites::steenrod_periodicity(o.prime, suites::load_corpus(data_dir()), o.count, o.seed);
    else if (suite == "gcd")
        j = suites::gcd_closure(suites::load_corpus(data_dir()));
    else if (suite == "bodd")
        j = suites::bodd(suites::load_corpus(data_dir()));
    else if (suite == "web-exhaustive")
        j = suites::web_exhaustive(o.n, o.r, o.bound);
    else if (suite == "web-random")
        j = suites::web_random(o.count, o.seed);
    else
        throw Error(Errc::invalid_argument, "unknown suite " + suite);
    return emit(o, j, j["pass"].get<bool>() ? 0 : 1);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"steenweb: Steenrod reductions, periodicity checks and fixed-point webs"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c) {
        c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));
        c->add_option("--out", o.out, "output directory (export-corpus)");
    };

    std::string expr;
    auto* reduce = app.add_subcommand("reduce", "reduce an element to admissible form");
    reduce->add_option("expr", expr, "element, e.g. \"Sq2 . Sq2\"")->required();
    reduce->add_option("--prime,--p", o.prime, "prime");

    std::string ring_sub;
    auto* ring = app.add_subcommand("ring", "analyses on a ring file");
    ring->add_option("subcommand", ring_sub)
        ->required()
        ->check(CLI::IsMember({"validate", "minimal-period", "classify", "bodd-check", "gcd-check", "power-of-two",
                               "odd-p", "export-corpus"}));
    ring->add_option("--file", o.file, "ring JSON");
    ring->add_option("--range", o.range, "degree range c");
    ring->add_option("--k", o.k, "period degree for gcd-check");
    common(ring);

    std::string web_sub;
    auto* webc = app.add_subcommand("web", "fixed-point web certificates");
    webc->add_option("subcommand", web_sub)->required()->check(CLI::IsMember({"analyze", "random", "exhaustive"}));
    webc->add_option("--file", o.file, "weight-matrix JSON");
    webc->add_option("--n", o.n, "dimension (random) or maximal dimension (exhaustive)");
    webc->add_option("--r", o.r, "rank (random) or maximal rank (exhaustive)");
    webc->add_option("--count", o.count, "number of random models");
    webc->add_option("--seed", o.seed, "seed");
    webc->add_option("--bound", o.bound, "weight entry bound");
    webc->add_flag("--relaxed", o.relaxed, "do not require r >= 2 log2 n");
    common(webc);

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite)
        ->required()
        ->check(CLI::IsMember({"adem-oracle", "hit-lemma", "sq-decomposition", "power-of-two", "odd-p", "gcd", "bodd",
                               "web-exhaustive", "web-random"}));
    verify->add_option("--prime,--p", o.prime, "prime");
    verify->add_option("--dmax", o.dmax, "maximal total degree (adem-oracle)");
    verify->add_option("--generators", o.generators, "polynomial generators (adem-oracle)");
    verify->add_option("--max-exp", o.max_exp, "maximal test exponent (adem-oracle)");
    verify->add_option("--kmax", o.kmax, "maximal k (hit-lemma)");
    verify->add_option("--lmax", o.lmax, "maximal l (sq-decomposition)");
    verify->add_option("--pow-max", o.pow_max, "maximal power of two (sq-decomposition)");
    verify->add_option("--count", o.count, "random instances");
    verify->add_option("--seed", o.seed, "seed");
    verify->add_option("--n", o.n, "maximal dimension (web-exhaustive)");
    verify->add_option("--r", o.r, "maximal rank (web-exhaustive)");
    verify->add_option("--bound", o.bound, "weight entry bound (web-exhaustive)");
    common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*reduce) {
            const Prime p(o.prime);
            std::cout << format_element(adem_reduce(parse_element(expr, p))) << "\n";
            return 0;
        }
        if (*ring)
            return cmd_ring(ring_sub, o);
        if (*webc)
            return cmd_web(web_sub, o);
        if (*verify)
            return cmd_verify(suite, o);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == Errc::invariant_breach ? 3 : 2;
    } catch (const json::exception& e) {
        std::cerr << "error: parse-error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
