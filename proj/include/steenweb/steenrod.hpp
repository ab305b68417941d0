#ifndef STEENWEB_STEENROD_HPP
#define STEENWEB_STEENROD_HPP

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "prime.hpp"

namespace steenweb {

/* Exponent sequence (i_1, ..., i_s) of the composite P^{i_1} o ... o P^{i_s}; the
 * rightmost operation acts first. Entries are >= 1; the empty sequence is the identity. */
using Exponents = std::vector<int>;

/* Degree in "reduced" units: sum of exponents. Topological degree is this times 1 (p = 2)
 * or 2(p-1) (p odd). */
inline long long reduced_degree(const Exponents& e)
{
    long long s = 0;
    for (int i : e)
        s += i;
    return s;
}

inline int degree_scale(Prime p) { return p.is_two() ? 1 : 2 * (p.value() - 1); }

/* Admissible: i_j >= 2 i_{j+1} (p = 2) or i_j >= p i_{j+1} (p odd). */
inline bool is_admissible(const Exponents& e, Prime p)
{
    const int f = p.is_two() ? 2 : p.value();
    for (std::size_t j = 0; j + 1 < e.size(); ++j)
        if (e[j] < f * e[j + 1])
            return false;
    return true;
}

/* The rewriting measure: sum of j * i_j over 1-based positions. */
inline long long moment(const Exponents& e)
{
    long long m = 0;
    for (std::size_t j = 0; j < e.size(); ++j)
        m += static_cast<long long>(j + 1) * e[j];
    return m;
}

class OpMonomial {
public:
    OpMonomial(Prime p, Exponents exps) : prime_(p), exps_(std::move(exps))
    {
        exps_.erase(std::remove(exps_.begin(), exps_.end(), 0), exps_.end());
        for (int i : exps_)
            if (i < 0)
                throw Error(Errc::invalid_argument, "negative Steenrod exponent");
    }
    Prime prime() const { return prime_; }
    const Exponents& exponents() const { return exps_; }
    long long degree() const { return reduced_degree(exps_) * degree_scale(prime_); }
    bool admissible() const { return is_admissible(exps_, prime_); }
    bool is_identity() const { return exps_.empty(); }

private:
    Prime prime_;
    Exponents exps_;
};

/* A Z_p-linear combination of composite monomials in the Bockstein-free Steenrod algebra. */
class SteenrodElement {
public:
    using Terms = std::map<Exponents, int>;

    explicit SteenrodElement(Prime p) : prime_(p) {}

    static SteenrodElement identity(Prime p) { return monomial(p, {}, 1); }
    static SteenrodElement monomial(Prime p, const Exponents& e, long long coeff = 1)
    {
        SteenrodElement r(p);
        r.add_term(e, coeff);
        return r;
    }
    static SteenrodElement generator(Prime p, int i) { return monomial(p, {i}, 1); }

    Prime prime() const { return prime_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    int coefficient(const Exponents& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0 : it->second;
    }

    void add_term(Exponents e, long long coeff)
    {
        e.erase(std::remove(e.begin(), e.end(), 0), e.end());
        for (int i : e)
            if (i < 0)
                throw Error(Errc::invalid_argument, "negative Steenrod exponent");
        const int c = mod(coeff, prime_.value());
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second = (it->second + c) % prime_.value();
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    /* Reduced degree when homogeneous (0 for the zero element). */
    std::optional<long long> reduced_degree() const
    {
        if (terms_.empty())
            return 0;
        const long long d = steenweb::reduced_degree(terms_.begin()->first);
        for (const auto& [e, c] : terms_)
            if (steenweb::reduced_degree(e) != d)
                return std::nullopt;
        return d;
    }
    std::optional<long long> degree() const
    {
        auto d = reduced_degree();
        if (!d)
            return std::nullopt;
        return *d * degree_scale(prime_);
    }
    bool is_homogeneous() const { return reduced_degree().has_value(); }

    bool is_canonical() const
    {
        return std::all_of(terms_.begin(), terms_.end(),
                           [&](const auto& t) { return is_admissible(t.first, prime_); });
    }

    SteenrodElement& operator+=(const SteenrodElement& o)
    {
        check_prime(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }
    SteenrodElement& operator-=(const SteenrodElement& o)
    {
        check_prime(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, -static_cast<long long>(c));
        return *this;
    }
    friend SteenrodElement operator+(SteenrodElement a, const SteenrodElement& b) { return a += b; }
    friend SteenrodElement operator-(SteenrodElement a, const SteenrodElement& b) { return a -= b; }
    friend SteenrodElement operator*(long long s, const SteenrodElement& a)
    {
        SteenrodElement r(a.prime_);
        for (const auto& [e, c] : a.terms_)
            r.add_term(e, s % a.prime_.value() * c);
        return r;
    }

    /* Composition a o b (b acts first); the result is not reduced. */
    friend SteenrodElement compose(const SteenrodElement& a, const SteenrodElement& b)
    {
        a.check_prime(b);
        SteenrodElement r(a.prime_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e = ea;
                e.insert(e.end(), eb.begin(), eb.end());
                r.add_term(std::move(e), static_cast<long long>(ca) * cb);
            }
        return r;
    }

    friend bool operator==(const SteenrodElement& a, const SteenrodElement& b)
    {
        return a.prime_ == b.prime_ && a.terms_ == b.terms_;
    }

private:
    void check_prime(const SteenrodElement& o) const
    {
        if (!(o.prime_ == prime_))
            throw Error(Errc::invalid_argument, "mixed primes in Steenrod arithmetic");
    }

    Prime prime_;
    Terms terms_;
};

/* One summand c * P^{x} P^{y} of an Adem expansion; y == 0 means the single operation P^{x}. */
struct AdemTerm {
    int coeff;
    int first;
    int second;
};

/* Right-hand side of the Adem relation for an inadmissible pair a < 2b (p = 2) or a < pb.
 *   p = 2:  Sq^a Sq^b = sum_{j <= a/2} binom(b-1-j, a-2j) Sq^{a+b-j} Sq^j
 *   p odd:  P^a P^b  = sum_{j <= a/p} (-1)^{a+j} binom((p-1)(b-j)-1, a-pj) P^{a+b-j} P^j */
inline std::vector<AdemTerm> adem_relation(int a, int b, Prime prime)
{
    const int p = prime.value();
    std::vector<AdemTerm> out;
    if (prime.is_two()) {
        if (!(a < 2 * b))
            throw Error(Errc::invalid_argument, "Adem relation needs a < 2b");
        for (int j = 0; 2 * j <= a; ++j) {
            int c = binom_mod_p(b - 1 - j, a - 2 * j, prime);
            if (c)
                out.push_back({c, a + b - j, j});
        }
    } else {
        if (!(a < p * b))
            throw Error(Errc::invalid_argument, "Adem relation needs a < pb");
        for (int j = 0; p * j <= a; ++j) {
            long long c = binom_mod_p(static_cast<long long>(p - 1) * (b - j) - 1, a - p * j, prime);
            if ((a + j) % 2)
                c = -c;
            int cm = mod(c, p);
            if (cm)
                out.push_back({cm, a + b - j, j});
        }
    }
    return out;
}

/* Rewrites monomials to admissible form by repeatedly applying the Adem relation to the
 * leftmost inadmissible adjacent pair. Each application replaces (a, b) at positions (j, j+1)
 * by (a+b-t, t) with t <= a/p < b (or drops the trailing zero), so the moment sum_j j*i_j
 * strictly decreases inside a fixed degree; this bounds the rewriting. Results are memoized
 * per monomial and per pair. Not thread-safe: use one instance per thread. */
class AdemReducer {
public:
    explicit AdemReducer(Prime p) : prime_(p) {}

    Prime prime() const { return prime_; }

    const SteenrodElement::Terms& reduce_monomial(const Exponents& m)
    {
        if (auto it = memo_.find(m); it != memo_.end())
            return it->second;

        const int f = prime_.is_two() ? 2 : prime_.value();
        std::size_t j = 0;
        while (j + 1 < m.size() && m[j] >= f * m[j + 1])
            ++j;

        SteenrodElement result(prime_);
        if (j + 1 >= m.size()) {
            result.add_term(m, 1);
        } else {
            for (const AdemTerm& t : pair_expansion(m[j], m[j + 1])) {
                Exponents next(m.begin(), m.begin() + static_cast<long>(j));
                next.push_back(t.first);
                if (t.second)
                    next.push_back(t.second);
                next.insert(next.end(), m.begin() + static_cast<long>(j) + 2, m.end());
                assert(moment(next) < moment(m));
                const auto& sub = reduce_monomial(next);
                for (const auto& [e, c] : sub)
                    result.add_term(e, static_cast<long long>(c) * t.coeff);
            }
        }
        return memo_.emplace(m, result.terms()).first->second;
    }

    SteenrodElement reduce(const SteenrodElement& e)
    {
        if (!(e.prime() == prime_))
            throw Error(Errc::invalid_argument, "reducer prime mismatch");
        SteenrodElement out(prime_);
        for (const auto& [m, c] : e.terms())
            for (const auto& [m2, c2] : reduce_monomial(m))
                out.add_term(m2, static_cast<long long>(c) * c2);
        return out;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    const std::vector<AdemTerm>& pair_expansion(int a, int b)
    {
        auto key = std::make_pair(a, b);
        if (auto it = pairs_.find(key); it != pairs_.end())
            return it->second;
        return pairs_.emplace(key, adem_relation(a, b, prime_)).first->second;
    }

    Prime prime_;
    std::map<Exponents, SteenrodElement::Terms> memo_;
    std::map<std::pair<int, int>, std::vector<AdemTerm>> pairs_;
};

/* Per-thread reducer for prime p. */
inline AdemReducer& thread_reducer(Prime p)
{
    thread_local std::map<int, AdemReducer> reducers;
    auto it = reducers.find(p.value());
    if (it == reducers.end())
        it = reducers.emplace(p.value(), AdemReducer(p)).first;
    return it->second;
}

/* Canonical admissible form of a homogeneous element. */
inline SteenrodElement adem_reduce(const SteenrodElement& e)
{
    if (!e.is_homogeneous())
        throw Error(Errc::precondition, "adem_reduce needs a homogeneous element");
    return thread_reducer(e.prime()).reduce(e);
}

/* All admissible exponent sequences of the given reduced degree, in lexicographic order. */
inline std::vector<Exponents> admissible_basis(long long reduced_deg, Prime p)
{
    const int f = p.is_two() ? 2 : p.value();
    std::vector<Exponents> out;
    Exponents cur;
    // last entry i_s >= 1; each earlier entry >= f * next. Build left to right with an upper
    // bound implied by the remaining degree.
    auto rec = [&](auto&& self, long long remaining, int min_first) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        // choose next entry x with x <= remaining and x >= 1; previous entry must be >= f * x
        int max_x = static_cast<int>(remaining);
        if (!cur.empty())
            max_x = std::min<long long>(max_x, cur.back() / f);
        for (int x = std::max(1, min_first); x <= max_x; ++x) {
            cur.push_back(x);
            self(self, remaining - x, 1);
            cur.pop_back();
        }
    };
    if (reduced_deg == 0) {
        out.push_back({});
        return out;
    }
    rec(rec, reduced_deg, 1);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------------------------
// Text form:  term := COEFF? OP ('.' OP)* ;  OP := ('Sq'|'P') INT ;  element := term ('+' term)*
// "0" is the zero element; Sq0 / P0 is the identity.

namespace detail {

class ElementParser {
public:
    ElementParser(std::string_view s, Prime p) : s_(s), p_(p) {}

    SteenrodElement parse()
    {
        SteenrodElement out(p_);
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '0') {
            std::size_t save = pos_;
            ++pos_;
            skip_ws();
            if (pos_ == s_.size())
                return out;
            pos_ = save;
        }
        parse_term(out);
        skip_ws();
        while (pos_ < s_.size()) {
            if (s_[pos_] != '+')
                throw ParseError(pos_, "expected '+'");
            ++pos_;
            parse_term(out);
            skip_ws();
        }
        return out;
    }

private:
    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool at_digit() const { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); }

    long long parse_int()
    {
        if (!at_digit())
            throw ParseError(pos_, "expected integer");
        long long v = 0;
        while (at_digit()) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1000000000LL)
                throw ParseError(pos_, "integer too large");
            ++pos_;
        }
        return v;
    }

    int parse_op()
    {
        skip_ws();
        if (s_.substr(pos_, 2) == "Sq") {
            if (!p_.is_two())
                throw ParseError(pos_, "Sq operations need p = 2");
            pos_ += 2;
        } else if (s_.substr(pos_, 1) == "P") {
            if (p_.is_two())
                throw ParseError(pos_, "P operations need an odd prime");
            pos_ += 1;
        } else {
            throw ParseError(pos_, "expected 'Sq' or 'P'");
        }
        return static_cast<int>(parse_int());
    }

    void parse_term(SteenrodElement& out)
    {
        skip_ws();
        long long coeff = 1;
        if (at_digit())
            coeff = parse_int();
        Exponents e;
        e.push_back(parse_op());
        skip_ws();
        while (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            e.push_back(parse_op());
            skip_ws();
        }
        out.add_term(std::move(e), coeff);
    }

    std::string_view s_;
    Prime p_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline SteenrodElement parse_element(std::string_view text, Prime p)
{
    return detail::ElementParser(text, p).parse();
}

inline std::string format_element(const SteenrodElement& e)
{
    if (e.is_zero())
        return "0";
    const std::string op = e.prime().is_two() ? "Sq" : "P";
    std::string out;
    for (const auto& [m, c] : e.terms()) {
        if (!out.empty())
            out += " + ";
        if (c != 1)
            out += std::to_string(c) + " ";
        if (m.empty())
            out += op + "0";
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i)
                out += " . ";
            out += op + std::to_string(m[i]);
        }
    }
    return out;
}

} // namespace steenweb

#endif // STEENWEB_STEENROD_HPP
