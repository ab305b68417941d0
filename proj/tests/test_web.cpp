#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>

#include "steenweb/suites.hpp"
#include "steenweb/web_checker.hpp"
#include "steenweb/web_io.hpp"
#include "steenweb/web_model.hpp"
#include "steenweb/web_search.hpp"

using namespace steenweb;
using namespace steenweb::web;

namespace {

IsotropyModel model(int n, IntMatrix W)
{
    IsotropyModel M{n, static_cast<int>(W.size()), std::move(W)};
    check_model(M);
    return M;
}

Errc code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::invariant_breach;
}

// columns mod 2 run through every nonzero vector of Z_2^m once, plus one even column 2 e_1
IsotropyModel complete_model(int m)
{
    const int planes = 1 << m;
    IntMatrix W(m, std::vector<long long>(planes, 0));
    W[0][0] = 2;
    for (int c = 1; c < planes; ++c)
        for (int i = 0; i < m; ++i)
            W[i][c] = (c >> i) & 1;
    return model(2 * planes, W);
}

const IsotropyModel& web_instance(const std::string& file)
{
    static std::map<std::string, IsotropyModel> cache;
    auto it = cache.find(file);
    if (it == cache.end())
        it = cache.emplace(file, load_model(std::string(STEENWEB_DATA_DIR) + "/web/" + file)).first;
    return it->second;
}

std::vector<Involution> all_elements(int r)
{
    std::vector<Involution> out;
    for (Involution v = 0; v < (Involution{1} << r); ++v)
        out.push_back(v);
    return out;
}

} // namespace

TEST(FixedSet, WorkedExample)
{
    const auto M = model(8, {{1, 0, 1, 1}, {0, 1, 1, 0}});
    EXPECT_EQ(check::signs(M, 0b01), (std::vector<int>{-1, 1, -1, -1}));
    const auto F = fixed_set(M, {0b01});
    EXPECT_EQ(F.fixed_planes, PlaneMask{0b0010});
    EXPECT_EQ(F.codim, 6);
    EXPECT_EQ(F.dim, 2);
    EXPECT_EQ(F.dim_ker, 1);
}

TEST(FixedSet, TrivialSubgroupFixesEverything)
{
    const auto M = model(8, {{1, 0, 1, 1}, {0, 1, 1, 0}});
    for (const std::vector<Involution>& H : {std::vector<Involution>{}, std::vector<Involution>{0}}) {
        const auto F = fixed_set(M, H);
        EXPECT_EQ(F.fixed_planes, M.all_planes());
        EXPECT_EQ(F.codim, 0);
        EXPECT_EQ(F.dim, 8);
        EXPECT_EQ(F.dim_ker, 0);
    }
}

TEST(FixedSet, AgreesWithPlaneWiseChecker)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto M = random_model(16, 4, seed, 2);
        const ModelView view(M);
        for (Involution a : all_elements(4))
            for (Involution b : all_elements(4)) {
                const auto F = view.fixed_set({a, b});
                const auto f = check::fixed(M, {a, b});
                EXPECT_EQ(F.dim, 2 * check::count(f));
                EXPECT_EQ(F.dim_ker, check::dim_ker(M, f));
            }
    }
}

TEST(FixedSet, MonotoneInTheSubgroup)
{
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto M = random_model(24, 5, seed, 1);
        const ModelView view(M);
        for (int t = 0; t < 20; ++t) {
            std::vector<Involution> H{static_cast<Involution>(rng() % 32)};
            auto bigger = H;
            bigger.push_back(static_cast<Involution>(rng() % 32));
            const auto small = view.fixed_set(H), large = view.fixed_set(bigger);
            EXPECT_LE(small.codim, large.codim);
            EXPECT_LE(small.dim_ker, large.dim_ker);
        }
    }
}

TEST(FixedSet, CodimensionParityOfProducts)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto M = random_model(20, 5, seed, 2);
        const ModelView view(M);
        for (Involution s : all_elements(5))
            for (Involution u : all_elements(5)) {
                const int c = view.codim(s ^ u) - view.codim(s) - view.codim(u);
                EXPECT_EQ(((c % 4) + 4) % 4, 0) << s << " " << u;
            }
    }
}

TEST(Transversality, Examples)
{
    const auto M = model(4, {{1, 0}, {0, 1}});
    EXPECT_EQ(check::signs(M, 0b01), (std::vector<int>{-1, 1}));
    EXPECT_EQ(check::signs(M, 0b10), (std::vector<int>{1, -1}));
    EXPECT_TRUE(is_transverse(M, 0b01, 0b10));
    EXPECT_EQ(check::signs(M, 0b11), (std::vector<int>{-1, -1}));
    EXPECT_FALSE(is_transverse(M, 0b11, 0b10));
}

TEST(Transversality, SignsAndCodimensionAgreeOnAllPairs)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto M = random_model(16, 4, seed, 2);
        for (Involution s : all_elements(4))
            for (Involution t : all_elements(4)) {
                const auto a = check::signs(M, s), b = check::signs(M, t);
                bool disjoint = true;
                for (std::size_t c = 0; c < a.size(); ++c)
                    disjoint = disjoint && !(a[c] < 0 && b[c] < 0);
                EXPECT_EQ(is_transverse(M, s, t), disjoint);
            }
    }
}

TEST(Gamma, SingleVertexInstance)
{
    // e_1 flips planes 0..3: codim 8, and the remaining columns have full rank
    const auto M = model(16, {{1, 1, 1, 1, 2, 0, 0, 0},
                              {0, 1, 0, 0, 1, 1, 0, 0},
                              {0, 0, 1, 0, 0, 0, 1, 0},
                              {0, 0, 0, 1, 0, 0, 0, 1}});
    const auto g = build_gamma(M);
    EXPECT_NE(std::find(g.vertices.begin(), g.vertices.end(), Involution{1}), g.vertices.end());
    const auto F = fixed_set(M, {1});
    EXPECT_EQ(F.codim, 8);
    EXPECT_EQ(F.dim_ker, 0);
}

TEST(Gamma, EmptyForTheStandardWeights)
{
    const auto M = model(8, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    EXPECT_TRUE(build_gamma(M).vertices.empty());
}

TEST(Gamma, MatchesTheDefinition)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto M = random_model(16, 5, seed, 1);
        const auto g = build_gamma(M);
        const std::set<Involution> verts(g.vertices.begin(), g.vertices.end());
        for (Involution v = 1; v < 32; ++v)
            EXPECT_EQ(verts.count(v) == 1, check::gamma_member(M, v)) << v;
        std::set<std::pair<Involution, Involution>> edges(g.edges.begin(), g.edges.end());
        for (std::size_t a = 0; a < g.vertices.size(); ++a)
            for (std::size_t b = a + 1; b < g.vertices.size(); ++b) {
                const auto u = g.vertices[a], v = g.vertices[b];
                EXPECT_EQ(edges.count({u, v}) == 1, !is_transverse(M, u, v));
            }
    }
}

TEST(Gate, SmallFixedSetRecurses)
{
    // h = e_9 moves planes 8..15; the fixed columns span a rank-8 lattice
    IntMatrix W(10, std::vector<long long>(16, 0));
    for (int c = 0; c < 8; ++c)
        W[c][c] = 1;
    for (int c = 8; c < 16; ++c) {
        W[8][c] = 1;
        if (c == 9)
            W[9][c] = 1;
        else if (c > 9)
            W[c - 10][c] = 1;
    }
    const auto M = model(32, W);
    const Involution h = Involution{1} << 8;
    const auto g = induction_gate(M, {h});
    EXPECT_EQ(g.dim, 16);
    EXPECT_EQ(g.d, 2);
    ASSERT_TRUE(g.recurse);
    EXPECT_EQ(g.step.to.n, 16);
    EXPECT_EQ(g.step.to.r, 8);
    EXPECT_EQ(matmul(g.step.basis, g.step.to.W), restrict_columns(M, fixed_set(M, {h}).fixed_planes));
}

TEST(Gate, LargeFixedSetStops)
{
    IntMatrix W(10, std::vector<long long>(16, 0));
    for (int c = 0; c < 8; ++c)
        W[c][c] = 1;
    W[0][8] = W[1][8] = 1;
    W[2][9] = 1;
    for (int c = 10; c < 16; ++c) {
        W[8][c] = 1;
        W[9][c] = c == 10;
    }
    const auto M = model(32, W);
    const auto g = induction_gate(M, {Involution{1} << 8});
    EXPECT_EQ(g.dim, 20);
    EXPECT_EQ(g.d, 2);
    EXPECT_FALSE(g.recurse);
    EXPECT_FALSE(g.blocked);
}

TEST(Gate, Preconditions)
{
    const auto M = model(8, {{1, 0, 1, 1}, {0, 1, 1, 0}});
    EXPECT_EQ(code_of([&] { induction_gate(M, {0}); }), Errc::precondition);
    EXPECT_EQ(code_of([&] { induction_gate(M, {0b01}); }), Errc::precondition); // dim 2
}

TEST(LatticeSplit, FactorsTheWeights)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto M = random_model(12, 4, seed, 3);
        for (auto& row : M.W)
            for (auto& x : row)
                x *= 1 + static_cast<long long>(seed % 3);
        const auto s = lattice_split(M.W);
        EXPECT_EQ(matmul(s.basis, s.reduced), M.W);
        EXPECT_EQ(static_cast<int>(s.reduced.size()), 4);
        if (seed % 3) {
            EXPECT_FALSE(s.unimodular);
        }
    }
}

TEST(Generators, RandomModelInfeasibleAndDeterministic)
{
    EXPECT_EQ(code_of([] { random_model(8, 7, 1, 1); }), Errc::infeasible);
    EXPECT_EQ(to_string(Errc::infeasible), "infeasible-parameters");
    const auto a = random_model(8, 4, 1, 1), b = random_model(8, 4, 1, 1);
    EXPECT_EQ(a.W, b.W);
    EXPECT_EQ(integer_rank(a.W), 4);
}

TEST(Generators, ExhaustiveCountsColumnMultisets)
{
    // independent count: multisets of 2 nonzero columns in {-1,0,1}^2 whose rank is 2
    std::vector<std::pair<int, int>> cols;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            if (a || b)
                cols.emplace_back(a, b);
    long long expected = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t j = i; j < cols.size(); ++j)
            expected += cols[i].first * cols[j].second - cols[i].second * cols[j].first != 0;
    long long seen = 0;
    const long long visited = exhaustive_models(4, 2, 1, [&](const IsotropyModel& M) {
        ++seen;
        EXPECT_EQ(integer_rank(M.W), 2);
    });
    EXPECT_EQ(visited, seen);
    EXPECT_EQ(seen, expected);
}

TEST(Generators, ExhaustiveSmallModelsReverify)
{
    long long certified = 0;
    exhaustive_models(8, 3, 1, [&](const IsotropyModel& M) {
        const auto res = find_certificate(M, {false});
        if (const auto* c = std::get_if<Certificate>(&res)) {
            EXPECT_TRUE(verify_certificate(M, *c, false).ok());
            ++certified;
        }
    });
    EXPECT_GT(certified, 0);
}

TEST(Search, Preconditions)
{
    const auto M = model(8, {{1, 0, 1, 1}, {0, 1, 1, 0}});
    EXPECT_EQ(code_of([&] { find_certificate(M); }), Errc::precondition); // r < 2 log2 8
    const auto N = model(6, {{1, 0, 1}, {0, 1, 1}});
    EXPECT_EQ(code_of([&] { find_certificate(N, {false}); }), Errc::precondition);
}

TEST(Search, CaseOneInstance)
{
    const auto& M = web_instance("case1_n16_r8.json");
    const auto res = find_certificate(M);
    ASSERT_TRUE(std::holds_alternative<Certificate>(res));
    const auto& c = std::get<Certificate>(res);
    EXPECT_EQ(c.label, "1");
    EXPECT_EQ(c.depth(), 0);
    EXPECT_TRUE(verify_certificate(M, c, true).ok());
    EXPECT_LE(2 * c.pair.k1 + 2 * c.pair.k2, c.ambient_dim);
    EXPECT_TRUE(is_transverse(M, c.pair.a, c.pair.b));
}

TEST(Search, CaseThreeInstance)
{
    const auto& M = web_instance("case3_n32_r10.json");
    const auto res = find_certificate(M);
    ASSERT_TRUE(std::holds_alternative<Certificate>(res));
    const auto& c = std::get<Certificate>(res);
    EXPECT_EQ(c.label, "3");
    EXPECT_TRUE(verify_certificate(M, c, true).ok());
    const auto rec = analyze_record(M, res, true);
    EXPECT_EQ(rec["certificate"]["inequality"], "8 + 8 <= 32");
    EXPECT_EQ(rec["status"], "certified");
}

TEST(Search, CaseOneSubgroupHasCodimZeroModFour)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto M = random_model(16, 6, seed, 1 + static_cast<int>(seed % 2));
        const ModelView view(M);
        const auto sub = case1_subgroup(M);
        EXPECT_GE(static_cast<int>(sub.size()), M.r - 1);
        for (auto v : span_elements(sub, M.r))
            EXPECT_EQ(view.codim(v) % 4, 0);
    }
}

TEST(Search, RandomCertificatesVerifyAndRecursionShrinks)
{
    for (std::uint64_t i = 0; i < 40; ++i) {
        const int n = i % 2 ? 16 : 32;
        const auto M = random_model(n, required_rank(n), suites::model_seed(99, i), 1);
        const auto res = find_certificate(M);
        ASSERT_TRUE(std::holds_alternative<Certificate>(res)) << i;
        const auto& c = std::get<Certificate>(res);
        EXPECT_TRUE(verify_certificate(M, c, true).ok());
        const Certificate* at = &c;
        while (at->inner) {
            EXPECT_TRUE(at->step->to.n < at->model.n || at->step->kind == "effective");
            EXPECT_LE(at->step->to.n, at->model.n);
            at = at->inner.get();
        }
    }
}

TEST(Checker, RejectsTamperedCertificates)
{
    const auto& M = web_instance("case3_n32_r10.json");
    const auto c = std::get<Certificate>(find_certificate(M));
    auto k = c;
    k.pair.k1 += 2;
    EXPECT_FALSE(verify_certificate(M, k, true).ok());
    auto swapped = c;
    swapped.pair.b = swapped.pair.a;
    EXPECT_FALSE(verify_certificate(M, swapped, true).ok());
    auto label = c;
    label.label = "2";
    EXPECT_FALSE(verify_certificate(M, label, true).ok());
}

TEST(CaseFive, CompleteGraphReachesTheChainAndIsFlagged)
{
    // every element moves half the odd planes, so Gamma is complete on all of Z_2^3; the rank
    // bound fails badly here and the chain does not terminate, which the search must report
    const auto M = complete_model(3);
    const auto g = build_gamma(M);
    EXPECT_EQ(g.vertices.size(), 7u);
    EXPECT_EQ(g.edges.size(), 21u);
    const auto res = find_certificate(M, {false});
    ASSERT_TRUE(std::holds_alternative<Flagged>(res));
    const auto& f = std::get<Flagged>(res);
    EXPECT_EQ(f.reason, "search-exhausted");
    EXPECT_NE(std::find(f.notes.begin(), f.notes.end(), "case 5: chain claims fail (k_l = 4)"), f.notes.end());

    const ModelView view(M);
    const auto out = case5_chain(view, {1, 2, 4});
    ASSERT_TRUE(out.trace.has_value());
    EXPECT_EQ(out.trace->k, (std::vector<int>{8, 4}));
    EXPECT_FALSE(out.trace->claim_terminal);
    EXPECT_FALSE(out.failure.empty());
}

TEST(CaseFive, ChainTerminatesAtTwo)
{
    const auto M = model(12, {{1, 2, 0, 0, 0, 1}, {2, 1, 2, 0, 0, 0}, {1, 2, 2, 2, 1, 1}});
    const ModelView view(M);
    const auto out = case5_chain(view, {1, 2, 4});
    ASSERT_TRUE(out.failure.empty()) << out.failure;
    const auto& t = *out.trace;
    EXPECT_EQ(t.m, 3);
    EXPECT_EQ(t.l, 2);
    EXPECT_EQ(t.k, (std::vector<int>{8, 0}));
    EXPECT_EQ(t.j, 2);
    EXPECT_EQ(t.i_star, 1);
    EXPECT_TRUE(t.sweep.empty());
    EXPECT_TRUE(t.claim_dims && t.claim_halving && t.claim_terminal);
    // rho_1 has the largest codimension in the group
    int best = 0;
    for (Involution v = 1; v < 8; ++v)
        best = std::max(best, view.codim(v));
    EXPECT_EQ(t.k.front(), best);
    EXPECT_FALSE(is_transverse(M, t.rho[0], t.rho_j_final));
}

TEST(CaseFive, SweepRestoresTheHalfBound)
{
    const std::vector<IsotropyModel> models = {
        model(28, {{2, 1, 0, 2, 0, 0, 0, 1, 1, 2, 0, 2, 1, 1},
                   {0, 2, 0, 2, 2, 2, 1, 2, 1, 2, 0, 0, 1, 0},
                   {0, 1, 2, 0, 2, 1, 1, 2, 2, 1, 1, 2, 0, 1},
                   {2, 0, 1, 1, 2, 0, 1, 2, 2, 2, 2, 1, 1, 2},
                   {0, 1, 0, 2, 2, 1, 2, 1, 2, 1, 0, 1, 2, 1}}),
        model(12, {{1, 1, 2, 0, 1, 1}, {0, 1, 0, 2, 0, 1}, {0, 0, 1, 2, 1, 1}, {0, 1, 2, 2, 1, 1}, {0, 1, 1, 0, 1, 2}}),
    };
    for (const auto& M : models) {
        const ModelView view(M);
        const auto out = case5_chain(view, {1, 2, 4, 8, 16});
        ASSERT_TRUE(out.failure.empty()) << out.failure;
        const auto& t = *out.trace;
        EXPECT_FALSE(t.sweep.empty());
        // before the sweep some l exceeded k / 2; afterwards none does
        const Involution start = t.rho[t.j - 1];
        bool exceeded = false;
        for (int i = 1; i < t.j; ++i)
            exceeded = exceeded ||
                       4 * std::popcount(view.neg(start) & view.neg(t.rho[i - 1]) & t.R[i - 1]) > t.k[i - 1];
        EXPECT_TRUE(exceeded);
        ASSERT_EQ(static_cast<int>(t.l_vals.size()), t.j - 1);
        for (int i = 1; i < t.j; ++i)
            EXPECT_LE(2 * t.l_vals[i - 1], t.k[i - 1]);
        EXPECT_GT(t.l_vals[t.i_star - 1], 0);
        for (std::size_t h = 0; h + 1 < t.k.size(); ++h)
            EXPECT_GE(t.k[h], 2 * t.k[h + 1]);
    }
}

TEST(WebIo, RoundTripAndParseErrors)
{
    const auto& M = web_instance("case1_n16_r8.json");
    EXPECT_EQ(model_from_json(model_to_json(M)).W, M.W);
    EXPECT_EQ(code_of([] { model_from_string("{\"n\": 4, \"r\": 1"); }), Errc::parse_error);
    EXPECT_EQ(code_of([] { model_from_string("{\"n\": 4, \"r\": 1, \"W\": [[1, 0.5]]}"); }), Errc::parse_error);
    EXPECT_EQ(code_of([] { model_from_string("{\"n\": 4, \"r\": 1}"); }), Errc::parse_error);
}
