#ifndef STEENWEB_PERIODICITY_HPP
#define STEENWEB_PERIODICITY_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "ring.hpp"
#include "ring_io.hpp"

namespace steenweb {

// ---- the definition -------------------------------------------------------------------------
//
// x in H^k induces periodicity up to degree c when y -> xy is surjective H^i -> H^{i+k} for
// 0 <= i < c - k and injective for 0 < i <= c - k. The zero element is held to the same
// definition; when 2k <= c that is exactly "H^i = 0 for 0 < i < c".

template <class Field>
struct PeriodicityWitness {
    int k = 0;
    Vec<Field> coords;
    int c = 0;
    bool zero = false;
    bool generic = false;             // found by a random probe rather than the coordinate box
    std::pair<int, int> surjective{0, -1}; // inclusive i-range that was checked
    std::pair<int, int> injective{1, 0};
};

struct FailureLocus {
    int degree = 0;        // source degree i
    std::string direction; // "surjective" or "injective"
    int rank = 0;
    int required = 0;
};

template <class Field>
struct InducerResult {
    std::optional<PeriodicityWitness<Field>> witness;
    std::optional<FailureLocus> failure;
    bool ok() const { return witness.has_value(); }
};

template <class Field>
bool is_zero_vector(const Field& f, const Vec<Field>& v)
{
    return std::all_of(v.begin(), v.end(), [&](const auto& c) { return f.is_zero(c); });
}

template <class Field>
InducerResult<Field> is_inducer(const GradedAlgebra<Field>& A, int k, const Vec<Field>& x, int c)
{
    if (c < 1 || c > A.top())
        throw Error(Errc::invalid_argument, "degree-out-of-range: c = " + std::to_string(c) + " with n = " +
                                                std::to_string(A.top()));
    if (k < 1 || k > A.top())
        throw Error(Errc::invalid_argument, "degree-out-of-range: k = " + std::to_string(k));
    if (static_cast<int>(x.size()) != A.dim(k))
        throw Error(Errc::invalid_argument, "element length does not match d_k");

    const Field& f = A.field();
    InducerResult<Field> out;
    for (int i = 0; i <= c - k; ++i) {
        const bool need_surj = i < c - k;
        const bool need_inj = i > 0;
        if (!need_surj && !need_inj)
            continue;
        const int r = rank(f, A.multiplication_matrix(k, x, i));
        if (need_surj && r != A.dim(i + k)) {
            out.failure = FailureLocus{i, "surjective", r, A.dim(i + k)};
            return out;
        }
        if (need_inj && r != A.dim(i)) {
            out.failure = FailureLocus{i, "injective", r, A.dim(i)};
            return out;
        }
    }
    PeriodicityWitness<Field> w;
    w.k = k;
    w.coords = x;
    w.c = c;
    w.zero = is_zero_vector(f, x);
    w.surjective = {0, c - k - 1};
    w.injective = {1, c - k};
    out.witness = std::move(w);
    return out;
}

/* H^i = 0 for 0 < i < c. */
template <class Field>
bool sphere_up_to(const GradedAlgebra<Field>& A, int c)
{
    for (int i = 1; i < c && i <= A.top(); ++i)
        if (A.dim(i))
            return false;
    return true;
}

// ---- candidate enumeration ------------------------------------------------------------------

constexpr long long max_candidates = 1LL << 20;

/* Rational box coordinates, listed by height: 0, 1, -1, 2, -2. */
inline long long rational_box_value(int digit)
{
    static constexpr int vals[] = {0, 1, -1, 2, -2};
    return vals[digit];
}

/* Number of candidate vectors in a slice of dimension d; -1 if it exceeds max_candidates. */
template <class Field>
long long candidate_count(const Field& f, int d)
{
    const long long base = f.characteristic() == 0 ? 5 : f.characteristic();
    long long total = 1;
    for (int i = 0; i < d; ++i) {
        total *= base;
        if (total > max_candidates)
            return -1;
    }
    return total;
}

/* Candidate number idx in enumeration order; the first coordinate is most significant, so the
 * enumeration order is lexicographic. */
template <class Field>
Vec<Field> candidate(const Field& f, int d, long long idx)
{
    const long long base = f.characteristic() == 0 ? 5 : f.characteristic();
    Vec<Field> v(static_cast<std::size_t>(d), f.zero());
    for (int i = d - 1; i >= 0; --i) {
        const int digit = static_cast<int>(idx % base);
        idx /= base;
        if constexpr (std::is_same_v<Field, RationalField>)
            v[i] = f.from_int(rational_box_value(digit));
        else
            v[i] = f.from_int(digit);
    }
    return v;
}

/* Seeded integer probes for the rational case: the set of inducers is Zariski-open, so when
 * it is nonempty a random integer vector lands in it. */
template <class Field>
std::vector<Vec<Field>> generic_probes(const Field& f, int d, int k)
{
    std::vector<Vec<Field>> out;
    if (d == 0)
        return out;
    std::mt19937_64 rng(0x5eedULL * 1000003ULL + static_cast<unsigned long long>(k) * 7919ULL + d);
    std::uniform_int_distribution<int> dist(-997, 997);
    for (int t = 0; t < 12; ++t) {
        Vec<Field> v(static_cast<std::size_t>(d), f.zero());
        for (auto& c : v)
            c = f.from_int(dist(rng));
        out.push_back(std::move(v));
    }
    return out;
}

template <class Field>
struct PeriodSpectrum {
    int c = 0;
    std::map<int, std::vector<PeriodicityWitness<Field>>> witnesses; // first few per degree
    std::map<int, long long> witness_count;
    std::optional<int> minimal_period;
    std::optional<PeriodicityWitness<Field>> minimal_witness;
    std::optional<int> minimal_nonzero_period;
    std::optional<PeriodicityWitness<Field>> minimal_nonzero_witness;
};

constexpr std::size_t witnesses_kept_per_degree = 4;

/* First inducer of degree k in enumeration order (nonzero only if requested). Over Q falls back
 * to generic probes when the box has no witness. */
template <class Field>
std::optional<PeriodicityWitness<Field>> find_inducer(const GradedAlgebra<Field>& A, int k, int c,
                                                      bool nonzero)
{
    const Field& f = A.field();
    const int d = A.dim(k);
    const long long count = candidate_count(f, d);
    if (count < 0)
        throw Error(Errc::slice_too_large,
                    "slice-too-large: degree " + std::to_string(k) + " has dimension " + std::to_string(d));
    for (long long idx = nonzero ? 1 : 0; idx < count; ++idx) {
        auto r = is_inducer(A, k, candidate(f, d, idx), c);
        if (r.ok())
            return r.witness;
    }
    if constexpr (std::is_same_v<Field, RationalField>) {
        for (const auto& v : generic_probes(f, d, k)) {
            auto r = is_inducer(A, k, v, c);
            if (r.ok()) {
                r.witness->generic = true;
                return r.witness;
            }
        }
    }
    return std::nullopt;
}

template <class Field>
PeriodSpectrum<Field> minimal_period(const GradedAlgebra<Field>& A, std::optional<int> range = std::nullopt)
{
    const int c = range.value_or(A.top());
    if (c < 1 || c > A.top())
        throw Error(Errc::invalid_argument, "degree-out-of-range: c = " + std::to_string(c));
    const Field& f = A.field();
    for (int k = 1; k < c; ++k)
        if (candidate_count(f, A.dim(k)) < 0)
            throw Error(Errc::slice_too_large,
                        "slice-too-large: degree " + std::to_string(k) + " has dimension " + std::to_string(A.dim(k)));
    PeriodSpectrum<Field> S;
    S.c = c;
    for (int k = 1; k < c; ++k) {
        const int d = A.dim(k);
        const long long count = candidate_count(f, d);
        long long found = 0;
        for (long long idx = 0; idx < count; ++idx) {
            auto r = is_inducer(A, k, candidate(f, d, idx), c);
            if (!r.ok())
                continue;
            ++found;
            auto& kept = S.witnesses[k];
            if (kept.size() < witnesses_kept_per_degree)
                kept.push_back(*r.witness);
            if (!S.minimal_period) {
                S.minimal_period = k;
                S.minimal_witness = *r.witness;
            }
            if (!r.witness->zero && !S.minimal_nonzero_period) {
                S.minimal_nonzero_period = k;
                S.minimal_nonzero_witness = *r.witness;
            }
        }
        if constexpr (std::is_same_v<Field, RationalField>) {
            if (found == 0 && d > 0) {
                if (auto w = find_inducer(A, k, c, true)) {
                    found = 1;
                    S.witnesses[k].push_back(*w);
                    if (!S.minimal_period) {
                        S.minimal_period = k;
                        S.minimal_witness = *w;
                    }
                    if (!S.minimal_nonzero_period) {
                        S.minimal_nonzero_period = k;
                        S.minimal_nonzero_witness = *w;
                    }
                }
            }
        }
        if (found)
            S.witness_count[k] = found;
    }
    return S;
}

// ---- verdicts -------------------------------------------------------------------------------

struct Verdict {
    std::string check;
    std::string ring;
    std::string result; // pass | fail | inapplicable
    json witness = json::object();
    json locus = json::object();

    bool passed() const { return result == "pass"; }
    bool failed() const { return result == "fail"; }
    json to_json() const
    {
        return {{"check", check}, {"ring", ring}, {"result", result}, {"witness", witness}, {"locus", locus}};
    }
};

template <class Field>
json vector_json(const Field& f, const Vec<Field>& v)
{
    json a = json::array();
    for (const auto& c : v)
        a.push_back(detail::coeff_to_json(f, c));
    return a;
}

template <class Field>
json witness_json(const Field& f, const PeriodicityWitness<Field>& w)
{
    json j = {{"k", w.k},
              {"c", w.c},
              {"zero", w.zero},
              {"coords", vector_json(f, w.coords)},
              {"surjective_i", {w.surjective.first, w.surjective.second}},
              {"injective_i", {w.injective.first, w.injective.second}}};
    if (w.generic)
        j["generic"] = true;
    return j;
}

inline json locus_json(const FailureLocus& l)
{
    return {{"degree", l.degree}, {"direction", l.direction}, {"rank", l.rank}, {"required", l.required}};
}

template <class Field>
json spectrum_json(const GradedAlgebra<Field>& A, const PeriodSpectrum<Field>& S)
{
    const Field& f = A.field();
    json j;
    j["ring"] = A.name();
    j["c"] = S.c;
    j["minimal_period"] = S.minimal_period ? json(*S.minimal_period) : json(nullptr);
    j["minimal_witness"] = S.minimal_witness ? witness_json(f, *S.minimal_witness) : json(nullptr);
    j["minimal_nonzero_period"] = S.minimal_nonzero_period ? json(*S.minimal_nonzero_period) : json(nullptr);
    json degs = json::object();
    for (const auto& [k, ws] : S.witnesses) {
        json arr = json::array();
        for (const auto& w : ws)
            arr.push_back(vector_json(f, w.coords));
        degs[std::to_string(k)] = {{"count", S.witness_count.count(k) ? S.witness_count.at(k) : 0},
                                   {"examples", arr}};
    }
    j["degrees"] = degs;
    return j;
}

// ---- factorization lemma ------------------------------------------------------------------

/* If x (nonzero, degree k, 2k <= c) induces periodicity up to c and x^r = y z with
 * deg y not divisible by k, then y induces periodicity; for deg y >= k also reports y' with
 * y = x^s y', 0 < deg y' < k. A y of degree sk that is a multiple of x^s is reported as the
 * trivial factorization. */
template <class Field>
Verdict check_factorization_lemma(const GradedAlgebra<Field>& A, const Element<Field>& x, int c, int r,
                                  const Element<Field>& y, const Element<Field>& z)
{
    const Field& f = A.field();
    const int k = x.degree;
    Verdict v{"factorization-lemma", A.name(), "fail"};
    auto violation = [](const std::string& why) { throw Error(Errc::hypothesis_violation, "hypothesis-violation: " + why); };

    if (k < 1 || is_zero_vector(f, x.coords))
        violation("x must be nonzero of positive degree");
    if (2 * k > c)
        violation("need 2k <= c");
    const auto xr = is_inducer(A, k, x.coords, c);
    if (!xr.ok())
        violation("x does not induce periodicity up to c");
    if (r < 1 || r * k > c)
        violation("r must satisfy 1 <= r <= c/k");
    if (y.degree < 0 || z.degree < 0 || y.degree + z.degree != r * k)
        violation("deg y + deg z != r k");
    const auto xpow = A.power(x, r);
    const auto yz = A.multiply(y, z);
    if (!detail::vec_eq(f, xpow.coords, yz.coords))
        violation("x^r != y z");

    v.witness["x"] = witness_json(f, *xr.witness);
    v.witness["r"] = r;
    if (y.degree % k == 0) {
        const int s = y.degree / k;
        const auto xs = A.power(x, s);
        auto col = zero_matrix(f, A.dim(y.degree), 1);
        for (int a = 0; a < A.dim(y.degree); ++a)
            col(a, 0) = xs.coords[a];
        const auto sol = solve(f, col, y.coords);
        if (!sol)
            violation("deg y = 0 mod k and y is not a multiple of x^s");
        v.result = "pass";
        v.witness["shape"] = "trivial-factorization";
        v.witness["s"] = s;
        v.witness["a"] = detail::coeff_to_json(f, (*sol)[0]);
        return v;
    }

    const auto yr = is_inducer(A, y.degree, y.coords, c);
    v.witness["y_degree"] = y.degree;
    v.witness["y"] = vector_json(f, y.coords);
    v.witness["y_inducer"] = yr.ok();
    if (!yr.ok())
        v.locus = locus_json(*yr.failure);
    bool ok = yr.ok();
    if (y.degree > k) {
        const int s = y.degree / k;
        const int dp = y.degree - s * k;
        const auto xs = A.power(x, s);
        const auto M = A.multiplication_matrix(s * k, xs.coords, dp);
        const auto yp = solve(f, M, y.coords);
        if (!yp) {
            ok = false;
            v.locus["y_prime"] = "y is not divisible by x^s";
        } else {
            const auto ypr = is_inducer(A, dp, *yp, c);
            v.witness["y_prime"] = {{"degree", dp}, {"coords", vector_json(f, *yp)}, {"inducer", ypr.ok()}};
            ok = ok && ypr.ok();
            if (!ypr.ok())
                v.locus["y_prime"] = locus_json(*ypr.failure);
        }
    }
    v.result = ok ? "pass" : "fail";
    return v;
}

// ---- the two Steenrod periodicity theorems --------------------------------------------------

struct OddDecomposition {
    int lambda = 0;
    int r = 0;
    bool ok = false;
};

/* l = 2 lambda p^r with lambda | p - 1. */
inline OddDecomposition decompose_odd_period(int l, int p)
{
    OddDecomposition d;
    if (l <= 0 || l % 2)
        return d;
    int half = l / 2;
    while (half % p == 0) {
        half /= p;
        ++d.r;
    }
    d.lambda = half;
    d.ok = (p - 1) % half == 0;
    return d;
}

namespace detail {

inline Verdict minimal_degree_verdict(const std::string& check, const ZpAlgebra& A, std::optional<int> range,
                                      int factor, PeriodSpectrum<PrimeField>* out_spectrum = nullptr)
{
    const int c = range.value_or(A.top());
    Verdict v{check, A.name(), "inapplicable"};
    v.witness["c"] = c;
    if (!A.has_steenrod()) {
        v.locus["reason"] = "no Steenrod action";
        return v;
    }
    if (sphere_up_to(A, c)) {
        v.locus["reason"] = "sphere convention";
        return v;
    }
    auto S = minimal_period(A, c);
    if (out_spectrum)
        *out_spectrum = S;
    if (!S.minimal_nonzero_period || factor * *S.minimal_nonzero_period > c) {
        v.locus["reason"] = "no nonzero witness within range";
        return v;
    }
    const int l = *S.minimal_nonzero_period;
    v.witness["l"] = l;
    v.witness["element"] = witness_json(A.field(), *S.minimal_nonzero_witness);
    v.result = "pending";
    return v;
}

} // namespace detail

/* Minimal nonzero inducing degree l with 2l <= c over Z_2 is a power of two. */
inline Verdict check_power_of_two(const ZpAlgebra& A, std::optional<int> range = std::nullopt)
{
    if (A.field().characteristic() != 2)
        throw Error(Errc::invalid_argument, "power-of-two check needs Z_2 coefficients");
    auto v = detail::minimal_degree_verdict("power-of-two", A, range, 2);
    if (v.result != "pending")
        return v;
    const int l = v.witness["l"].get<int>();
    v.result = is_power_of_two(l) ? "pass" : "fail";
    if (v.failed())
        v.locus["l"] = l;
    return v;
}

/* Minimal nonzero inducing degree l with p l <= c over Z_p is 2 lambda p^r, lambda | p - 1. */
inline Verdict check_odd_p(const ZpAlgebra& A, std::optional<int> range = std::nullopt)
{
    const int p = A.field().characteristic();
    if (p == 2)
        throw Error(Errc::invalid_argument, "odd-p check needs an odd prime");
    auto v = detail::minimal_degree_verdict("odd-p", A, range, p);
    if (v.result != "pending")
        return v;
    const int l = v.witness["l"].get<int>();
    const auto d = decompose_odd_period(l, p);
    v.witness["lambda"] = d.lambda;
    v.witness["r"] = d.r;
    v.result = d.ok ? "pass" : "fail";
    if (v.failed())
        v.locus["l"] = l;
    return v;
}

// ---- rational gcd closure -------------------------------------------------------------------

/* Degrees d in [1, c) carrying a nonzero inducer up to c. */
template <class Field>
std::vector<int> periodicity_degrees(const GradedAlgebra<Field>& A, int c)
{
    std::vector<int> D;
    for (int d = 1; d < c; ++d)
        if (A.dim(d) && find_inducer(A, d, c, true))
            D.push_back(d);
    return D;
}

inline bool difference_closed(const std::vector<int>& D)
{
    for (int a : D)
        for (int b : D)
            if (a > b && !std::binary_search(D.begin(), D.end(), a - b))
                return false;
    return true;
}

inline Verdict rational_gcd_periodicity(const QAlgebra& A, int k, std::optional<int> range = std::nullopt)
{
    const int c = range.value_or(A.top());
    Verdict v{"gcd-closure", A.name(), "fail"};
    v.witness["k"] = k;
    v.witness["c"] = c;
    if (c < 1 || c > A.top())
        throw Error(Errc::invalid_argument, "degree-out-of-range: c = " + std::to_string(c));
    if (sphere_up_to(A, c)) {
        v.result = "pass";
        v.witness["vacuous"] = "sphere convention";
        return v;
    }
    if (k < 1)
        throw Error(Errc::hypothesis_violation, "hypothesis-violation: need k >= 1");
    // 3k <= n is the theorem's hypothesis; the closure computation itself does not need it
    v.witness["three_k_le_n"] = 3 * k <= A.top();
    const auto wk = k < c ? find_inducer(A, k, c, true) : std::nullopt;
    if (!wk)
        throw Error(Errc::hypothesis_violation,
                    "hypothesis-violation: no degree-" + std::to_string(k) + " witness");
    const auto D = periodicity_degrees(A, c);
    const int g = std::gcd(4, k);
    const bool closed = difference_closed(D);
    const bool has_g = std::binary_search(D.begin(), D.end(), g);
    v.witness["element"] = witness_json(A.field(), *wk);
    v.witness["D"] = D;
    v.witness["gcd"] = g;
    v.witness["closed"] = closed;
    v.result = closed && has_g ? "pass" : "fail";
    if (!closed)
        for (int a : D)
            for (int b : D)
                if (a > b && !std::binary_search(D.begin(), D.end(), a - b) && v.locus.empty())
                    v.locus = {{"d1", a}, {"d2", b}};
    if (!has_g)
        v.locus["missing"] = g;
    return v;
}

// ---- 4-periodic classification --------------------------------------------------------------

template <class Field>
std::optional<PeriodicityWitness<Field>> four_periodicity_witness(const GradedAlgebra<Field>& A)
{
    if (A.top() < 4)
        return std::nullopt;
    return find_inducer(A, 4, A.top(), false);
}

namespace detail {

inline bool nonzero_power(const QAlgebra& A, int deg, int e)
{
    if (A.dim(deg) != 1 || deg * e > A.top())
        return false;
    const auto p = A.power(A.basis_element(deg, 0), e);
    return !is_zero_vector(A.field(), p.coords);
}

inline bool dims_match(const QAlgebra& A, const std::vector<int>& want)
{
    return A.dims() == want;
}

} // namespace detail

inline std::string classify_ring(const QAlgebra& A)
{
    const int n = A.top();
    if (sphere_up_to(A, n) && A.dim(n) == 1)
        return "sphere";
    auto pattern = [&](auto one) {
        std::vector<int> d(static_cast<std::size_t>(n + 1), 0);
        for (int i = 0; i <= n; ++i)
            d[i] = one(i) ? 1 : 0;
        return d;
    };
    if (n % 2 == 0 && detail::dims_match(A, pattern([](int i) { return i % 2 == 0; })) &&
        detail::nonzero_power(A, 2, n / 2))
        return "CP";
    if (n % 4 == 0 && detail::dims_match(A, pattern([](int i) { return i % 4 == 0; })) &&
        detail::nonzero_power(A, 4, n / 4))
        return "HP";
    if (n % 4 == 3 && n >= 7 && detail::dims_match(A, pattern([](int i) { return i % 4 == 0 || i % 4 == 3; }))) {
        const int m = (n - 3) / 4;
        const auto ym = A.power(A.basis_element(4, 0), m);
        const auto top = A.multiply(A.basis_element(3, 0), ym);
        if (!is_zero_vector(A.field(), top.coords))
            return "S3xHP";
    }
    if (n % 4 == 2 && n >= 6 && detail::dims_match(A, pattern([](int i) { return i % 4 == 0 || i % 4 == 2; }))) {
        const int m = (n - 2) / 4;
        const auto ym = A.power(A.basis_element(4, 0), m);
        const auto top = A.multiply(A.basis_element(2, 0), ym);
        const auto s2 = A.power(A.basis_element(2, 0), 2);
        if (!is_zero_vector(A.field(), top.coords) && is_zero_vector(A.field(), s2.coords))
            return "S2xHP";
    }
    if (n == 6 && A.dim(3) >= 2 && A.dim(3) % 2 == 0 &&
        detail::dims_match(A, {1, 0, 1, A.dim(3), 1, 0, 1})) {
        const auto x2 = A.power(A.basis_element(2, 0), 2);
        if (is_zero_vector(A.field(), x2.coords) && A.poincare() && validate(A).ok())
            return "M6-family";
    }
    return "other";
}

struct Classification {
    std::string label;
    PeriodicityWitness<RationalField> witness;
};

inline Classification classify_4periodic(const QAlgebra& A)
{
    auto w = four_periodicity_witness(A);
    if (!w)
        throw Error(Errc::not_periodic, "not-4-periodic: " + A.name());
    return {classify_ring(A), *w};
}

// ---- b_odd corollary ------------------------------------------------------------------------

inline Verdict check_bodd(const QAlgebra& A)
{
    Verdict v{"bodd", A.name(), "inapplicable"};
    const int n = A.top();
    if (A.dim(1) != 0) {
        v.locus["reason"] = "d_1 != 0";
        return v;
    }
    if (n % 4 != 0) {
        v.locus["reason"] = "n not divisible by 4";
        return v;
    }
    if (!A.poincare() || validate(A).failed("poincare")) {
        v.locus["reason"] = "no Poincare duality";
        return v;
    }
    const auto w = four_periodicity_witness(A);
    if (!w) {
        v.locus["reason"] = "not 4-periodic";
        return v;
    }
    const int bo = b_odd(A);
    v.witness["element"] = witness_json(A.field(), *w);
    v.witness["b_odd"] = bo;
    v.result = bo == 0 ? "pass" : "fail";
    if (bo)
        v.locus["b_odd"] = bo;
    return v;
}

} // namespace steenweb

#endif // STEENWEB_PERIODICITY_HPP
