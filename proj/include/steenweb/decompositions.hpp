#ifndef STEENWEB_DECOMPOSITIONS_HPP
#define STEENWEB_DECOMPOSITIONS_HPP

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "prime.hpp"
#include "steenrod.hpp"

namespace steenweb {

// ---------------------------------------------------------------------------------------------
// Sq^l as a sum of decomposables when l is not a power of two.

struct SqDecomposition {
    long long l = 0;
    bool power_of_two = false;
    int c = 0;      // l = 2^c + d with d = 0 mod 2^{c+1}
    long long d = 0;
    std::vector<std::pair<int, int>> terms; // (i, a_i): Sq^l = sum a_i Sq^i Sq^{l-i}
};

inline SqDecomposition sq_power_of_two_decomposition(long long l)
{
    if (l < 1)
        throw Error(Errc::invalid_argument, "sq decomposition needs l >= 1");
    SqDecomposition out;
    out.l = l;
    if (is_power_of_two(l)) {
        out.power_of_two = true;
        return out;
    }
    const long long a = l & (-l); // 2^c, the lowest set bit
    out.d = l - a;
    while ((1LL << out.c) < a)
        ++out.c;
    // Sq^a Sq^d = binom(d-1, a) Sq^l + sum_{j>=1} binom(d-1-j, a-2j) Sq^{l-j} Sq^j, and
    // binom(d-1, a) = 1 mod 2 since d-1 has ones in bits 0..c.
    const Prime two(2);
    const auto rel = adem_relation(static_cast<int>(a), static_cast<int>(out.d), two);
    ensure(!rel.empty() && rel.front().second == 0 && rel.front().coeff == 1,
           "leading Adem coefficient for Sq^{2^c} Sq^d must be 1");
    out.terms.emplace_back(static_cast<int>(a), 1);
    for (std::size_t t = 1; t < rel.size(); ++t)
        out.terms.emplace_back(rel[t].first, rel[t].coeff);
    return out;
}

/* The right-hand side sum a_i Sq^i o Sq^{l-i}, unreduced. */
inline SteenrodElement sq_relation_element(const SqDecomposition& dec)
{
    SteenrodElement e(Prime(2));
    for (auto [i, a] : dec.terms)
        e.add_term({i, static_cast<int>(dec.l - i)}, a);
    return e;
}

// ---------------------------------------------------------------------------------------------
// P^k = P^{m p^a} o Q_a + sum_{i<a} P^{p^i} o Q_i  for k = lambda p^a + mu.

struct KSplit {
    int a = 0;
    long long lambda = 0;
    long long mu = 0;
};

inline KSplit split_k(long long k, Prime p)
{
    if (k < 1)
        throw Error(Errc::invalid_argument, "k must be >= 1");
    KSplit s;
    s.a = valuation(k, p.value());
    const long long pa = ipow(p.value(), s.a);
    s.lambda = (k / pa) % p.value();
    s.mu = k - s.lambda * pa;
    return s;
}

struct HitDecomposition {
    int prime = 3;
    long long k = 0;
    long long lambda = 0;
    int a = 0;
    long long mu = 0;
    long long m = 0;
    SteenrodElement leading{Prime(3)};          // Q_a
    std::map<int, SteenrodElement> lower;       // i -> Q_i, paired with P^{p^i}, i < a
};

/* Reduced form of P^{m p^a} o Q_a + sum_i P^{p^i} o Q_i. */
inline SteenrodElement hit_identity(const HitDecomposition& h)
{
    const Prime p(h.prime);
    SteenrodElement rhs = compose(SteenrodElement::generator(p, static_cast<int>(h.m * ipow(h.prime, h.a))),
                                  h.leading);
    for (const auto& [i, q] : h.lower)
        rhs += compose(SteenrodElement::generator(p, static_cast<int>(ipow(h.prime, i))), q);
    return adem_reduce(rhs);
}

inline bool verify_hit_decomposition(const HitDecomposition& h)
{
    return hit_identity(h) == SteenrodElement::generator(Prime(h.prime), static_cast<int>(h.k));
}

namespace detail {

inline void check_hit_args(Prime p, long long k, long long m, const KSplit& s)
{
    if (p.is_two())
        throw Error(Errc::invalid_argument, "hit decomposition needs an odd prime");
    if (m < 1 || m > s.lambda)
        throw Error(Errc::invalid_argument,
                    "invalid-m: m = " + std::to_string(m) + " outside [1, " + std::to_string(s.lambda) +
                        "] for k = " + std::to_string(k));
}

} // namespace detail

struct LeadingCoefficient {
    int direct = 0;      // (-1)^{m p^a} binom((p-1)(k - m p^a) - 1, m p^a) mod p
    int closed_form = 0; // (-1)^m binom(p - (lambda - m) - 1, m) mod p
    int value() const { return direct; }
};

/* c_0 of the Adem relation for P^{m p^a} P^{k - m p^a}, computed by both routes. */
inline LeadingCoefficient leading_coefficient_check(Prime p, long long k, long long m)
{
    const KSplit s = split_k(k, p);
    detail::check_hit_args(p, k, m, s);
    if (s.mu == 0 && m == s.lambda)
        throw Error(Errc::base_case, "base case: P^k = P^{m p^a} needs no Adem relation");
    const long long A = m * ipow(p.value(), s.a);
    const long long B = k - A;
    LeadingCoefficient lc;
    long long direct = binom_mod_p((p.value() - 1) * B - 1, A, p);
    if (A % 2)
        direct = -direct;
    lc.direct = mod(direct, p.value());
    long long closed = binom_mod_p(p.value() - (s.lambda - m) - 1, m, p);
    if (m % 2)
        closed = -closed;
    lc.closed_form = mod(closed, p.value());
    if (lc.direct != lc.closed_form)
        throw Error(Errc::invariant_breach, "leading coefficient routes disagree");
    if (lc.direct == 0)
        throw Error(Errc::invariant_breach, "leading coefficient vanishes");
    return lc;
}

/* Constructive induction on k. Recursive calls on P^{k-j} use m = 1 and are memoized per
 * thread on (p, k). */
inline HitDecomposition hit_decompose(Prime p, long long k, long long m)
{
    const KSplit s = split_k(k, p);
    detail::check_hit_args(p, k, m, s);

    thread_local std::map<std::tuple<int, long long, long long>, HitDecomposition> memo;
    const auto key = std::make_tuple(p.value(), k, m);
    if (auto it = memo.find(key); it != memo.end())
        return it->second;

    HitDecomposition h;
    h.prime = p.value();
    h.k = k;
    h.lambda = s.lambda;
    h.a = s.a;
    h.mu = s.mu;
    h.m = m;
    h.leading = SteenrodElement(p);

    if (s.mu == 0 && m == s.lambda) {
        h.leading = SteenrodElement::identity(p);
        return memo.emplace(key, h).first->second;
    }

    const long long A = m * ipow(p.value(), s.a);
    const long long B = k - A;
    ensure(A < p.value() * B, "Adem relation not applicable in hit_decompose");
    const auto rel = adem_relation(static_cast<int>(A), static_cast<int>(B), p);
    ensure(!rel.empty() && rel.front().second == 0, "missing leading Adem term");
    const int c0 = rel.front().coeff;
    ensure(c0 == leading_coefficient_check(p, k, m).value(), "c_0 mismatch");
    const int inv = inv_mod(c0, p.value());

    // c_0 P^k = P^A P^B - sum_{j>0} c_j P^{k-j} P^j
    h.leading = static_cast<long long>(inv) * SteenrodElement::generator(p, static_cast<int>(B));
    for (std::size_t t = 1; t < rel.size(); ++t) {
        const int j = rel[t].second;
        const long long scale = mod(-static_cast<long long>(inv) * rel[t].coeff, p.value());
        const HitDecomposition sub = hit_decompose(p, k - j, 1);
        ensure(sub.a < s.a, "recursive decomposition must lower the valuation");
        const SteenrodElement pj = SteenrodElement::generator(p, j);
        auto add_lower = [&](int i, const SteenrodElement& q) {
            SteenrodElement term = scale * adem_reduce(compose(q, pj));
            auto [it, inserted] = h.lower.try_emplace(i, term);
            if (!inserted)
                it->second += term;
        };
        add_lower(sub.a, sub.leading);
        for (const auto& [i, q] : sub.lower)
            add_lower(i, q);
    }
    for (auto it = h.lower.begin(); it != h.lower.end();)
        it = it->second.is_zero() ? h.lower.erase(it) : std::next(it);
    return memo.emplace(key, h).first->second;
}

} // namespace steenweb

#endif // STEENWEB_DECOMPOSITIONS_HPP
