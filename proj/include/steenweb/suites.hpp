#ifndef STEENWEB_SUITES_HPP
#define STEENWEB_SUITES_HPP

// Corpus definition and the batch verification suites behind `steenweb verify` and the
// acceptance run. Every suite returns a JSON summary whose bytes depend only on its arguments.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "decompositions.hpp"
#include "oracle/polynomial_action.hpp"
#include "periodicity.hpp"
#include "random_ring.hpp"
#include "ring_builders.hpp"
#include "ring_io.hpp"
#include "steenrod.hpp"
#include "web_checker.hpp"
#include "web_io.hpp"
#include "web_search.hpp"

namespace steenweb::suites {

/* Tally of one suite: pass/fail counts and the first counterexample. */
class Tally {
public:
    explicit Tally(std::string suite) : suite_(std::move(suite)) {}

    void pass() { ++checked_; }
    void fail(json counterexample)
    {
        ++checked_;
        ++failures_;
        if (first_.is_null())
            first_ = std::move(counterexample);
    }
    void record(bool ok, const std::function<json()>& counterexample)
    {
        if (ok)
            pass();
        else
            fail(counterexample());
    }
    long long failures() const { return failures_; }
    long long checked() const { return checked_; }

    json summary(json params, json extra = json::object()) const
    {
        json j;
        j["suite"] = suite_;
        j["params"] = std::move(params);
        j["checked"] = checked_;
        j["failures"] = failures_;
        j["pass"] = failures_ == 0 && checked_ > 0;
        j["first_counterexample"] = first_;
        for (auto& [k, v] : extra.items())
            j[k] = v;
        return j;
    }

private:
    std::string suite_;
    long long checked_ = 0;
    long long failures_ = 0;
    json first_ = nullptr;
};

// ---- corpus ---------------------------------------------------------------------------------

struct CorpusEntry {
    std::string file; // basename, e.g. cp6_z2.json
    AnyAlgebra ring;
};

namespace detail {

template <class Field>
void add_family(std::vector<CorpusEntry>& out, const Field& f, const std::string& suffix)
{
    auto push = [&](const std::string& stem, GradedAlgebra<Field> A) {
        out.push_back({stem + "_" + suffix + ".json", AnyAlgebra(std::move(A))});
    };
    for (int n = 2; n <= 8; ++n)
        push("s" + std::to_string(n), build_sphere(n, f));
    for (int m = 1; m <= 8; ++m)
        push("cp" + std::to_string(m), build_cp(m, f));
    for (int m = 1; m <= 4; ++m)
        push("hp" + std::to_string(m), build_hp(m, f));
    push("s2xs2", build_product(build_sphere(2, f), build_sphere(2, f)));
    push("s3xs5", build_product(build_sphere(3, f), build_sphere(5, f)));
    push("cp2xs3", build_product(build_cp(2, f), build_sphere(3, f)));
    push("cp2xcp2", build_product(build_cp(2, f), build_cp(2, f)));
    push("s2xhp2", build_product(build_sphere(2, f), build_hp(2, f)));
    push("s3xhp2", build_product(build_sphere(3, f), build_hp(2, f)));
    push("s3xhp1", build_product(build_sphere(3, f), build_hp(1, f)));
    push("hp2xs4", build_product(build_hp(2, f), build_sphere(4, f)));
    const int p = f.characteristic();
    std::vector<std::pair<int, int>> trunc;
    if (p == 2)
        trunc = {{1, 6}, {2, 4}, {4, 3}, {8, 2}};
    else if (p == 3)
        trunc = {{2, 6}, {4, 4}};
    else if (p == 5)
        trunc = {{2, 6}, {4, 3}, {8, 2}};
    else
        trunc = {{2, 5}, {4, 3}, {8, 2}}; // CP^5, HP^3 and the Cayley plane
    for (auto [k, q] : trunc)
        push("trunc" + std::to_string(k) + "_" + std::to_string(q), build_truncated_poly(k, q, f));
}

} // namespace detail

/* The shipped ring corpus, in file-name order. */
inline std::vector<CorpusEntry> corpus()
{
    std::vector<CorpusEntry> out;
    detail::add_family(out, PrimeField(2), "z2");
    detail::add_family(out, PrimeField(3), "z3");
    detail::add_family(out, PrimeField(5), "z5");
    detail::add_family(out, RationalField(), "q");
    out.push_back({"m6g1_q.json", build_connected_sum_M6(1)});
    out.push_back({"m6g2_q.json", build_connected_sum_M6(2)});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.file < b.file; });
    return out;
}

/* Web instances shipped next to the rings (under web/). */
inline std::vector<std::pair<std::string, web::IsotropyModel>> web_corpus()
{
    std::vector<std::pair<std::string, web::IsotropyModel>> out;
    // n = 16, r = 8, W invertible: Gamma is empty, the search takes the Case-1 path
    web::IsotropyModel c1{16, 8, web::IntMatrix(8, std::vector<long long>(8, 0))};
    for (int i = 0; i < 8; ++i)
        c1.W[i][i] = 1;
    c1.W[0][1] = 2;
    c1.W[3][5] = -1;
    out.emplace_back("case1_n16_r8.json", c1);
    // n = 32, r = 10: the products e_i + e_j move two planes each and Gamma spans r - 1
    // dimensions; e_8 + e_9 and e_6 + e_7 have no edge and their joint fixed set is too large for
    // the induction gate, so the search stops at Case 3
    web::IsotropyModel c3{32, 10, web::IntMatrix(10, std::vector<long long>(16, 0))};
    for (int i = 0; i < 10; ++i)
        c3.W[i][i] = 1;
    const int twos[][2] = {{0, 13}, {0, 14}, {0, 15}, {1, 10}, {4, 10}, {4, 12}, {6, 10}, {6, 11},
                           {6, 14}, {7, 10}, {7, 13}, {7, 14}, {8, 10}, {8, 13}, {8, 15}};
    for (auto [i, c] : twos)
        c3.W[i][c] = 2;
    out.emplace_back("case3_n32_r10.json", c3);
    return out;
}

inline void export_corpus(const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "web");
    for (const auto& e : corpus()) {
        std::ofstream o(fs::path(dir) / e.file);
        std::visit([&](const auto& A) { o << ring_to_json(A).dump(1) << "\n"; }, e.ring);
    }
    for (const auto& [name, M] : web_corpus()) {
        std::ofstream o(fs::path(dir) / "web" / name);
        o << web::model_to_json(M).dump() << "\n";
    }
}

/* Every ring file in `dir`, sorted by name. */
inline std::vector<CorpusEntry> load_corpus(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (!fs::is_directory(dir))
        throw Error(Errc::invalid_argument, "corpus directory not found: " + dir);
    for (const auto& ent : fs::directory_iterator(dir))
        if (ent.is_regular_file() && ent.path().extension() == ".json")
            files.push_back(ent.path().filename().string());
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& f : files)
        out.push_back({f, load_ring((fs::path(dir) / f).string())});
    return out;
}

// ---- Steenrod algebra suites -----------------------------------------------------------------

/* Reduced composites against the direct action on Z_p[x_1..x_g]: every pair of admissible
 * monomials of total degree <= dmax, tested on all monomials with exponents <= max_exp. */
inline json adem_oracle(int p, int dmax, int generators, int max_exp)
{
    const Prime prime(p);
    const int scale = degree_scale(prime);
    oracle::PolynomialAction act(p, generators);
    const auto tests = act.test_monomials(max_exp);
    Tally t("adem-oracle");
    const int top = dmax / scale;
    std::vector<std::vector<Exponents>> basis(static_cast<std::size_t>(top + 1));
    for (int d = 1; d <= top; ++d)
        basis[d] = admissible_basis(d, prime);
    long long pairs = 0;
    for (int d1 = 1; d1 <= top; ++d1)
        for (int d2 = 1; d1 + d2 <= top; ++d2)
            for (const auto& a : basis[d1])
                for (const auto& b : basis[d2]) {
                    ++pairs;
                    Exponents comp = a;
                    comp.insert(comp.end(), b.begin(), b.end());
                    const auto reduced = adem_reduce(SteenrodElement::monomial(prime, comp));
                    bool ok = reduced.is_canonical();
                    oracle::Monomial bad;
                    for (const auto& m : tests) {
                        if (!ok)
                            break;
                        const oracle::Polynomial f{{m, 1}};
                        if (act.apply_element(reduced, f) != act.apply_monomial(comp, f)) {
                            ok = false;
                            bad = m;
                        }
                    }
                    t.record(ok, [&] {
                        return json{{"composite", format_element(SteenrodElement::monomial(prime, comp))},
                                    {"reduced", format_element(reduced)},
                                    {"test_monomial", bad}};
                    });
                }
    return t.summary({{"p", p}, {"dmax", dmax}, {"generators", generators}, {"max_exponent", max_exp}},
                     {{"pairs", pairs}, {"test_monomials", tests.size()}});
}

/* Hit decompositions for every k <= kmax and every valid m. */
inline json hit_lemma(int p, int kmax)
{
    const Prime prime(p);
    Tally t("hit-lemma");
    long long base_cases = 0;
    for (int k = 1; k <= kmax; ++k) {
        const auto s = split_k(k, prime);
        for (long long m = 1; m <= s.lambda; ++m) {
            std::string what;
            bool ok = true;
            try {
                if (s.mu == 0 && m == s.lambda) {
                    ++base_cases;
                } else {
                    const auto lc = leading_coefficient_check(prime, k, m);
                    ok = lc.direct == lc.closed_form && lc.direct != 0;
                    if (!ok)
                        what = "leading coefficient";
                }
                const auto h = hit_decompose(prime, k, m);
                if (ok && !verify_hit_decomposition(h)) {
                    ok = false;
                    what = "identity does not reduce to P^k";
                }
            } catch (const Error& e) {
                ok = false;
                what = e.what();
            }
            t.record(ok, [&] { return json{{"k", k}, {"m", m}, {"reason", what}}; });
        }
    }
    return t.summary({{"p", p}, {"kmax", kmax}}, {{"base_cases", base_cases}});
}

/* Binomial coefficient parity by exact integer arithmetic. */
inline int binom_parity_exact(long long n, long long k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    boost::multiprecision::cpp_int b = 1;
    for (long long i = 1; i <= k; ++i)
        b = b * (n - k + i) / i;
    return static_cast<int>(b % 2);
}

/* Sq^l decomposes for l not a power of two; for powers of two no product Sq^a Sq^b with a+b = l
 * reaches Sq^l, checked both through the reduced expansions and by the exact Adem leading
 * coefficients. */
inline json sq_decomposition(int lmax, int pow_max)
{
    const Prime two(2);
    Tally t("sq-decomposition");
    long long relations = 0, indecomposable = 0;
    for (int l = 1; l <= lmax; ++l) {
        const auto dec = sq_power_of_two_decomposition(l);
        if (dec.power_of_two)
            continue;
        ++relations;
        bool ok = !dec.terms.empty();
        for (auto [i, a] : dec.terms)
            ok = ok && i > 0 && i < l && (a == 0 || a == 1);
        ok = ok && adem_reduce(sq_relation_element(dec)) == SteenrodElement::generator(two, l);
        t.record(ok, [&] { return json{{"l", l}, {"relation", format_element(sq_relation_element(dec))}}; });
    }
    for (int l = 1; l <= pow_max; l *= 2) {
        ++indecomposable;
        bool ok = true;
        json witness = nullptr;
        for (int a = 1; a < l; ++a) {
            const int b = l - a;
            const auto red = adem_reduce(SteenrodElement::monomial(two, {a, b}));
            const int coeff = red.coefficient({l});
            // leading Adem term of Sq^a Sq^b (a < 2b) is binom(b - 1, a) Sq^{a+b}
            const int exact = a < 2 * b ? binom_parity_exact(b - 1, a) : 0;
            if (coeff != 0 || exact != 0) {
                ok = false;
                witness = {{"a", a}, {"b", b}, {"coefficient", coeff}, {"exact", exact}};
                break;
            }
        }
        t.record(ok, [&] { return json{{"l", l}, {"pair", witness}}; });
    }
    return t.summary({{"lmax", lmax}, {"pow_max", pow_max}},
                     {{"relations_checked", relations}, {"powers_checked", indecomposable}});
}

// ---- periodicity suites ----------------------------------------------------------------------

/* Power-of-two (p = 2) or 2 lambda p^r (odd p) minimal degrees on the corpus rings over Z_p plus
 * `count` seeded random rings. */
inline json steenrod_periodicity(int p, const std::vector<CorpusEntry>& corpus_rings, int count,
                                 std::uint64_t seed)
{
    const std::string name = p == 2 ? "power-of-two" : "odd-p";
    Tally t(name);
    long long applicable = 0, inapplicable = 0, corpus_used = 0;
    std::map<int, long long> minimal_degrees;
    auto run = [&](const ZpAlgebra& A, const std::string& label) {
        const auto rep = validate(A);
        if (!rep.ok()) {
            t.fail({{"ring", label}, {"reason", "ring does not validate"}});
            return;
        }
        const Verdict v = p == 2 ? check_power_of_two(A) : check_odd_p(A);
        if (v.result == "inapplicable") {
            ++inapplicable;
            return;
        }
        ++applicable;
        ++minimal_degrees[v.witness["l"].get<int>()];
        t.record(v.passed(), [&] { return json{{"ring", label}, {"verdict", v.to_json()}}; });
    };
    for (const auto& e : corpus_rings)
        if (const auto* A = std::get_if<ZpAlgebra>(&e.ring); A && A->field().characteristic() == p) {
            ++corpus_used;
            run(*A, e.file);
        }
    for (int i = 0; i < count; ++i) {
        const std::uint64_t s = seed * 1000003ULL + static_cast<std::uint64_t>(i);
        const auto A = random_ring(PrimeField(p), s, 12);
        run(A, A.name());
    }
    json degs = json::object();
    for (auto [l, c] : minimal_degrees)
        degs[std::to_string(l)] = c;
    return t.summary({{"p", p}, {"random_count", count}, {"seed", seed}},
                     {{"corpus_rings", corpus_used},
                      {"applicable", applicable},
                      {"inapplicable", inapplicable},
                      {"minimal_degrees", degs}});
}

/* Difference closure of D on every rational corpus ring and every k with 3k <= n and a nonzero
 * degree-k inducer. */
inline json gcd_closure(const std::vector<CorpusEntry>& corpus_rings)
{
    Tally t("gcd-closure");
    long long rings = 0;
    for (const auto& e : corpus_rings) {
        const auto* A = std::get_if<QAlgebra>(&e.ring);
        if (!A)
            continue;
        bool used = false;
        for (int k = 1; 3 * k <= A->top(); ++k) {
            if (!A->dim(k) || !find_inducer(*A, k, A->top(), true))
                continue;
            used = true;
            const auto v = rational_gcd_periodicity(*A, k);
            t.record(v.passed(), [&] { return json{{"ring", e.file}, {"verdict", v.to_json()}}; });
        }
        rings += used;
    }
    return t.summary(json::object(), {{"rings_with_witness", rings}});
}

/* b_odd = 0 on corpus rings meeting the corollary's hypotheses. */
inline json bodd(const std::vector<CorpusEntry>& corpus_rings)
{
    Tally t("bodd");
    long long inapplicable = 0;
    for (const auto& e : corpus_rings) {
        const auto* A = std::get_if<QAlgebra>(&e.ring);
        if (!A)
            continue;
        const auto v = check_bodd(*A);
        if (v.result == "inapplicable") {
            ++inapplicable;
            continue;
        }
        t.record(v.passed(), [&] { return json{{"ring", e.file}, {"verdict", v.to_json()}}; });
    }
    return t.summary(json::object(), {{"inapplicable", inapplicable}});
}

// ---- web suites -------------------------------------------------------------------------------

/* Every full-rank model with n <= nmax, r <= rmax, entries in [-bound, bound] up to column order:
 * pair properties for all involution pairs, and certificate search (rank bound relaxed) with
 * independent re-verification when n = 0 mod 4. */
inline json web_exhaustive(int nmax, int rmax, int bound)
{
    Tally t("web-exhaustive");
    long long models = 0, pairs = 0, certified = 0, flagged = 0;
    std::map<std::string, long long> cases;
    for (int n = 2; n <= nmax; n += 2)
        for (int r = 1; r <= std::min(rmax, n / 2); ++r)
            web::exhaustive_models(n, r, bound, [&](const web::IsotropyModel& M) {
                ++models;
                // moved planes per involution from integer dot products, one plane at a time
                const web::Involution top = web::Involution{1} << M.r;
                std::vector<web::PlaneMask> moved(top, 0);
                for (web::Involution v = 0; v < top; ++v)
                    for (int c = 0; c < M.planes(); ++c) {
                        long long dot = 0;
                        for (int i = 0; i < M.r; ++i)
                            dot += ((v >> i) & 1) * M.W[i][c];
                        if (dot % 2)
                            moved[v] |= web::PlaneMask{1} << c;
                    }
                const web::ModelView view(M);
                auto codim = [&](web::Involution v) { return 2 * std::popcount(moved[v]); };
                bool ok = true;
                json why = nullptr;
                for (web::Involution s = 1; s < top && ok; ++s)
                    for (web::Involution u = s + 1; u < top && ok; ++u) {
                        ++pairs;
                        const bool transverse = (view.neg(s) & view.neg(u)) == 0;
                        const int joint = 2 * std::popcount(moved[s] | moved[u]);
                        const bool additive = joint == codim(s) + codim(u);
                        const bool parity = (codim(s ^ u) - codim(s) - codim(u)) % 4 == 0;
                        if (transverse != additive || !parity) {
                            ok = false;
                            why = {{"sigma", web::involution_string(s, M.r)},
                                   {"tau", web::involution_string(u, M.r)},
                                   {"transverse", transverse},
                                   {"additive", additive},
                                   {"parity", parity}};
                        }
                    }
                if (ok && M.n % 4 == 0) {
                    const auto res = web::find_certificate(M, {false});
                    if (const auto* c = std::get_if<web::Certificate>(&res)) {
                        const auto rep = web::verify_certificate(M, *c, false);
                        ++cases[c->leaf().label];
                        if (rep.ok()) {
                            ++certified;
                        } else {
                            ok = false;
                            why = {{"certificate", web::certificate_to_json(*c)}, {"failures", rep.failures}};
                        }
                    } else {
                        ++flagged;
                        ++cases["flagged:" + std::get<web::Flagged>(res).reason];
                    }
                }
                t.record(ok, [&] { return json{{"model", web::model_to_json(M)}, {"detail", why}}; });
            });
    json cj = json::object();
    for (const auto& [k, v] : cases)
        cj[k] = v;
    return t.summary({{"nmax", nmax}, {"rmax", rmax}, {"bound", bound}},
                     {{"models", models}, {"pairs", pairs}, {"certified", certified}, {"flagged", flagged},
                      {"outcomes", cj}});
}

inline std::uint64_t model_seed(std::uint64_t seed, long long i)
{
    return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i);
}

/* Seeded models cycling n over `dims` with r = ceil(2 log2 n); each instance ends certified or
 * flagged, and every Case-5 trace must satisfy the chain claims. */
inline json web_random(int count, std::uint64_t seed, const std::vector<int>& dims = {16, 32, 64},
                       bool with_records = false)
{
    Tally t("web-random");
    long long certified = 0, flagged = 0, case5 = 0;
    std::map<std::string, long long> cases;
    json records = json::array();
    for (int i = 0; i < count; ++i) {
        const int n = dims[static_cast<std::size_t>(i) % dims.size()];
        const int r = web::required_rank(n);
        const auto M = web::random_model(n, r, model_seed(seed, i), 1 + i % 2);
        const auto res = web::find_certificate(M);
        bool ok = true;
        json why = nullptr;
        if (const auto* c = std::get_if<web::Certificate>(&res)) {
            const auto rep = web::verify_certificate(M, *c, true);
            const auto& leaf = c->leaf();
            ++cases[leaf.label];
            if (leaf.trace) {
                ++case5;
                const auto& tr = *leaf.trace;
                if (!(tr.claim_dims && tr.claim_halving && tr.claim_terminal)) {
                    ok = false;
                    why = {{"trace", web::trace_to_json(tr, leaf.model.r)}};
                }
            }
            if (!rep.ok()) {
                ok = false;
                why = {{"failures", rep.failures}};
            }
            certified += ok;
        } else {
            ++flagged;
            ++cases["flagged:" + std::get<web::Flagged>(res).reason];
        }
        if (with_records)
            records.push_back(web::analyze_record(M, res, true));
        t.record(ok, [&] { return json{{"index", i}, {"model", web::model_to_json(M)}, {"detail", why}}; });
    }
    json cj = json::object();
    for (const auto& [k, v] : cases)
        cj[k] = v;
    json extra = {{"certified", certified},
                  {"flagged", flagged},
                  {"accounted", certified + flagged + t.failures() == count},
                  {"flagged_rate", count ? static_cast<double>(flagged) / count : 0.0},
                  {"case5_traces", case5},
                  {"outcomes", cj}};
    if (with_records)
        extra["records"] = records;
    return t.summary({{"count", count}, {"seed", seed}, {"dims", dims}}, extra);
}

} // namespace steenweb::suites

#endif // STEENWEB_SUITES_HPP
