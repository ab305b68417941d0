#include <gtest/gtest.h>

#include <random>

#include "steenweb/periodicity.hpp"
#include "steenweb/random_ring.hpp"
#include "steenweb/ring_builders.hpp"
#include "steenweb/suites.hpp"

using namespace steenweb;

namespace {

// Definition unfolded: build y -> x y column by column from the product table, then demand a
// preimage for every target basis vector and an empty kernel.
template <class Field>
bool oracle_inducer(const GradedAlgebra<Field>& A, int k, const Vec<Field>& x, int c)
{
    const Field& f = A.field();
    auto mult = [&](int i) {
        auto m = zero_matrix(f, A.dim(i + k), A.dim(i));
        for (int b = 0; b < A.dim(i); ++b) {
            auto col = A.zero_vector(i + k);
            for (int a = 0; a < A.dim(k); ++a) {
                const auto prod = A.product(k, a, i, b);
                for (int t = 0; t < A.dim(i + k); ++t)
                    col[t] = f.add(col[t], f.mul(x[a], prod[t]));
            }
            for (int t = 0; t < A.dim(i + k); ++t)
                m(t, b) = col[t];
        }
        return m;
    };
    for (int i = 0; i < c - k; ++i) {
        const auto m = mult(i);
        for (int t = 0; t < A.dim(i + k); ++t) {
            auto e = A.zero_vector(i + k);
            e[t] = f.one();
            if (!solve(f, m, e))
                return false;
        }
    }
    for (int i = 1; i <= c - k; ++i)
        if (A.dim(i) && !nullspace(f, mult(i)).empty())
            return false;
    return true;
}

template <class Field>
void compare_all(const GradedAlgebra<Field>& A, std::mt19937_64& rng, int& compared)
{
    const Field& f = A.field();
    for (int c = 1; c <= A.top(); ++c)
        for (int k = 1; k < c; ++k) {
            const int d = A.dim(k);
            std::vector<Vec<Field>> xs{A.zero_vector(k)};
            for (int a = 0; a < d; ++a)
                xs.push_back(A.basis_vector(k, a));
            for (int t = 0; t < 3 && d > 0; ++t) {
                auto v = A.zero_vector(k);
                for (auto& e : v)
                    e = f.from_int(static_cast<long long>(rng() % 5) - 2);
                xs.push_back(v);
            }
            for (const auto& x : xs) {
                ASSERT_EQ(is_inducer(A, k, x, c).ok(), oracle_inducer(A, k, x, c)) << A.name() << " k=" << k << " c=" << c;
                ++compared;
            }
        }
}

} // namespace

TEST(Inducer, Examples)
{
    const auto cp5 = build_cp(5, PrimeField(2));
    EXPECT_TRUE(is_inducer(cp5, 2, {1}, 10).ok());

    const auto s8 = build_sphere(8, RationalField());
    const auto z = is_inducer(s8, 4, {}, 8);
    ASSERT_TRUE(z.ok());
    EXPECT_TRUE(z.witness->zero);

    const auto m6 = build_connected_sum_M6(2);
    const auto x = is_inducer(m6, 2, {Rational(1)}, 6);
    ASSERT_FALSE(x.ok());
    EXPECT_FALSE(oracle_inducer(m6, 2, {Rational(1)}, 6));
    EXPECT_EQ(x.failure->degree, 1);
    EXPECT_EQ(x.failure->direction, "surjective");
    EXPECT_EQ(x.failure->required, 4);
    EXPECT_TRUE(is_inducer(m6, 4, {Rational(1)}, 6).ok());
    EXPECT_TRUE(oracle_inducer(m6, 4, {Rational(1)}, 6));

    EXPECT_THROW(is_inducer(cp5, 2, {1}, 11), Error);
}

TEST(Inducer, OracleAgreementOnCorpus)
{
    std::mt19937_64 rng(17);
    int compared = 0;
    for (const auto& e : suites::corpus())
        std::visit([&](const auto& A) { compare_all(A, rng, compared); }, e.ring);
    EXPECT_GT(compared, 1000);
}

TEST(Inducer, OracleAgreementOnRandomTables)
{
    std::mt19937_64 rng(23);
    int compared = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        switch (s % 3) {
        case 0: compare_all(random_ring(PrimeField(2), s, 12), rng, compared); break;
        case 1: compare_all(random_ring(PrimeField(3), s, 12), rng, compared); break;
        default: compare_all(random_ring(RationalField(), s, 12), rng, compared); break;
        }
    }
    EXPECT_GT(compared, 10000);
}

TEST(MinimalPeriod, Examples)
{
    EXPECT_EQ(minimal_period(build_cp(6, PrimeField(2)), 12).minimal_period, 2);
    EXPECT_EQ(minimal_period(build_hp(3, PrimeField(3)), 12).minimal_period, 4);
    const auto s3hp2 = build_product(build_sphere(3, RationalField()), build_hp(2, RationalField()));
    EXPECT_EQ(minimal_period(s3hp2, 11).minimal_period, 4);
}

TEST(MinimalPeriod, TieBreakIsLexicographic)
{
    // both x and 2x induce periodicity on CP^4 over Z_3; the search must report x
    const auto A = build_cp(4, PrimeField(3));
    const auto S = minimal_period(A, A.top());
    ASSERT_TRUE(S.minimal_nonzero_witness);
    const auto& w = S.minimal_nonzero_witness->coords;
    // every smaller coordinate vector of the same degree fails
    const int k = *S.minimal_nonzero_period;
    const int d = A.dim(k);
    EXPECT_EQ(k, 2);
    EXPECT_EQ(w, Vec<PrimeField>{1});
    EXPECT_TRUE(is_inducer(A, k, Vec<PrimeField>{2}, A.top()).ok());
    for (long long idx = 1;; ++idx) {
        Vec<PrimeField> v(d);
        long long t = idx;
        for (int a = d - 1; a >= 0; --a, t /= 3)
            v[a] = static_cast<int>(t % 3);
        if (v == w)
            break;
        EXPECT_FALSE(is_inducer(A, k, v, A.top()).ok());
    }
}

TEST(Factorization, Examples)
{
    const auto cp6 = build_cp(6, PrimeField(2));
    const Element<PrimeField> x4{4, {1}}, x2{2, {1}};
    const auto v = check_factorization_lemma(cp6, x4, 12, 1, x2, x2);
    EXPECT_TRUE(v.passed());
    EXPECT_TRUE(v.witness["y_inducer"].get<bool>());

    EXPECT_EQ(check_factorization_lemma(cp6, x4, 12, 2, x4, x4).witness["shape"], "trivial-factorization");

    const Element<PrimeField> one{0, {1}}, x8{8, {1}};
    EXPECT_THROW(check_factorization_lemma(cp6, x4, 12, 0, one, one), Error);
    EXPECT_THROW(check_factorization_lemma(cp6, x4, 12, 2, x8, x2), Error);

    const auto t = build_truncated_poly(4, 9, PrimeField(3));
    const Element<PrimeField> y{4, {1}};
    const auto triv = check_factorization_lemma(t, y, t.top(), 2, y, y);
    EXPECT_TRUE(triv.passed());
    EXPECT_EQ(triv.witness["shape"], "trivial-factorization");
}

TEST(Theorems, PowerOfTwoExamples)
{
    const auto a = check_power_of_two(build_cp(8, PrimeField(2)));
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.witness["l"], 2);
    const auto b = check_power_of_two(build_hp(4, PrimeField(2)));
    EXPECT_TRUE(b.passed());
    EXPECT_EQ(b.witness["l"], 4);
    const auto c = check_power_of_two(build_sphere(12, PrimeField(2)));
    EXPECT_EQ(c.result, "inapplicable");
    EXPECT_EQ(c.locus["reason"], "sphere convention");
}

TEST(Theorems, OddPExamples)
{
    const auto a = check_odd_p(build_cp(9, PrimeField(3)));
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.witness["l"], 2);
    EXPECT_EQ(a.witness["lambda"], 1);
    const auto b = check_odd_p(build_hp(5, PrimeField(3)));
    EXPECT_TRUE(b.passed());
    EXPECT_EQ(b.witness["lambda"], 2);
    const auto c = check_odd_p(build_truncated_poly(2, 5, PrimeField(5)));
    EXPECT_TRUE(c.passed());
    EXPECT_EQ(c.witness["l"], 2);
    for (int l = 1; l <= 200; ++l) {
        const auto d = decompose_odd_period(l, 3);
        bool brute = false;
        for (int lambda : {1, 2})
            for (long long pr = 1; pr <= l; pr *= 3)
                brute = brute || 2 * lambda * pr == l;
        EXPECT_EQ(d.ok, brute) << l;
    }
}

TEST(Theorems, GcdExamples)
{
    const auto a = rational_gcd_periodicity(build_hp(4, RationalField()), 4);
    EXPECT_TRUE(a.passed());
    const auto b = rational_gcd_periodicity(build_cp(8, RationalField()), 6);
    EXPECT_TRUE(b.passed());
    const auto D = b.witness["D"].get<std::vector<int>>();
    EXPECT_TRUE(std::binary_search(D.begin(), D.end(), 2));
    EXPECT_EQ(b.witness["gcd"], 2);
    // brute-force D for CP^8: every even degree below 16 carries x^j
    EXPECT_EQ(D, (std::vector<int>{2, 4, 6, 8, 10, 12, 14}));
    for (int k = 1; k <= 4; ++k) {
        const auto s = rational_gcd_periodicity(build_sphere(12, RationalField()), k);
        EXPECT_TRUE(s.passed());
    }
    EXPECT_THROW(rational_gcd_periodicity(build_hp(4, RationalField()), 3), Error);
}

TEST(Theorems, GcdNeedsTheManifoldHypothesis)
{
    // Q[x]/x^4 with |x| = 8 is no closed manifold's rational cohomology; the closure fails
    const auto v = rational_gcd_periodicity(build_truncated_poly(8, 3, RationalField()), 8);
    EXPECT_TRUE(v.failed());
    EXPECT_EQ(v.locus["missing"], 4);
}

TEST(Classification, RoundTrip)
{
    const RationalField q;
    EXPECT_EQ(classify_4periodic(build_hp(3, q)).label, "HP");
    EXPECT_EQ(classify_4periodic(build_cp(4, q)).label, "CP");
    EXPECT_EQ(classify_4periodic(build_sphere(9, q)).label, "sphere");
    EXPECT_EQ(classify_4periodic(build_product(build_sphere(3, q), build_hp(2, q))).label, "S3xHP");
    EXPECT_EQ(classify_4periodic(build_product(build_sphere(2, q), build_hp(2, q))).label, "S2xHP");
    EXPECT_EQ(classify_4periodic(build_connected_sum_M6(3)).label, "M6-family");
    try {
        classify_4periodic(build_product(build_sphere(3, q), build_sphere(5, q)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_periodic);
    }
}

TEST(Corollary, BoddExamples)
{
    const RationalField q;
    const auto a = check_bodd(build_hp(3, q));
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.witness["b_odd"], 0);
    const auto b = check_bodd(build_product(build_sphere(3, q), build_sphere(5, q)));
    EXPECT_EQ(b.result, "inapplicable");
    EXPECT_TRUE(check_bodd(build_sphere(8, q)).passed());
}

TEST(Verdict, JsonShape)
{
    const auto v = check_bodd(build_hp(2, RationalField()));
    const auto j = v.to_json();
    std::vector<std::string> keys;
    for (const auto& [k, _] : j.items())
        keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"check", "ring", "result", "witness", "locus"}));
}
