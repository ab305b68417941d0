#ifndef STEENWEB_WEB_CHECKER_HPP
#define STEENWEB_WEB_CHECKER_HPP

// Re-verifies certificates from the weight matrix alone. Deliberately shares nothing with the
// search: signs are evaluated plane by plane, ranks go through the generic field linear algebra.

#include <string>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"
#include "web_model.hpp"
#include "web_search.hpp"

namespace steenweb::web {

struct CheckReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

namespace check {

inline std::vector<int> bits_of(Involution v, int r)
{
    std::vector<int> b(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        b[i] = (v >> i) & 1;
    return b;
}

/* -1 on plane c iff sum_i v_i W[i][c] is odd. */
inline std::vector<int> signs(const IsotropyModel& M, Involution v)
{
    const auto b = bits_of(v, M.r);
    std::vector<int> s(static_cast<std::size_t>(M.n / 2));
    for (int c = 0; c < M.n / 2; ++c) {
        long long dot = 0;
        for (int i = 0; i < M.r; ++i)
            dot += b[i] * M.W[i][c];
        s[c] = (dot % 2 == 0) ? 1 : -1;
    }
    return s;
}

inline std::vector<bool> fixed(const IsotropyModel& M, const std::vector<Involution>& H)
{
    std::vector<bool> f(static_cast<std::size_t>(M.n / 2), true);
    for (auto h : H) {
        const auto s = signs(M, h);
        for (std::size_t c = 0; c < s.size(); ++c)
            if (s[c] < 0)
                f[c] = false;
    }
    return f;
}

inline int count(const std::vector<bool>& f)
{
    int k = 0;
    for (bool b : f)
        k += b;
    return k;
}

inline int qrank(const IntMatrix& W, int rows)
{
    const int cols = rows ? static_cast<int>(W[0].size()) : 0;
    if (rows == 0 || cols == 0)
        return 0;
    RationalField Q;
    auto m = zero_matrix(Q, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = Rational(W[i][j]);
    return rank(Q, m);
}

inline int f2rank(const IntMatrix& W, int rows)
{
    const int cols = rows ? static_cast<int>(W[0].size()) : 0;
    if (rows == 0 || cols == 0)
        return 0;
    PrimeField F(2);
    auto m = zero_matrix(F, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = static_cast<int>(((W[i][j] % 2) + 2) % 2);
    return rank(F, m);
}

inline IntMatrix columns(const IsotropyModel& M, const std::vector<bool>& keep)
{
    IntMatrix out(static_cast<std::size_t>(M.r));
    for (int i = 0; i < M.r; ++i)
        for (int c = 0; c < M.n / 2; ++c)
            if (keep[c])
                out[i].push_back(M.W[i][c]);
    return out;
}

inline int dim_ker(const IsotropyModel& M, const std::vector<bool>& f)
{
    return M.r - qrank(columns(M, f), M.r);
}

inline bool gamma_member(const IsotropyModel& M, Involution v)
{
    if (v == 0)
        return false;
    const auto f = fixed(M, {v});
    const int codim = M.n - 2 * count(f);
    return codim % 4 == 0 && dim_ker(M, f) <= 1;
}

inline IntMatrix product(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix out(a.size(), std::vector<long long>(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t t = 0; t < b.size(); ++t)
            for (std::size_t j = 0; j < out[i].size(); ++j)
                out[i][j] += a[i][t] * b[t][j];
    return out;
}

class Checker {
public:
    Checker(bool enforce, CheckReport& rep) : enforce_(enforce), rep_(rep) {}

    void verify(const IsotropyModel& M, const Certificate& c, int depth)
    {
        if (depth > 64) {
            fail("recursion too deep");
            return;
        }
        if (!(c.model == M))
            fail(c.label + ": certificate model differs from the replayed model");
        if (depth == 0 && enforce_ && M.n > 1)
            expect(static_cast<long double>(M.n) * M.n <= std::ldexp(1.0L, M.r), "model misses r >= 2 log2 n");
        if (c.label == "point") {
            expect(M.n == 0, "point certificate on a positive-dimensional model");
            return;
        }
        if (c.label == "recurse") {
            if (!c.step || !c.inner) {
                fail("recurse node without step or inner certificate");
                return;
            }
            const IsotropyModel next = replay(M, *c.step);
            verify(next, *c.inner, depth + 1);
            return;
        }
        verify_pair(M, c);
    }

private:
    void fail(const std::string& s) { rep_.failures.push_back(s); }
    void expect(bool ok, const std::string& s)
    {
        if (!ok)
            fail(s);
    }

    IsotropyModel replay(const IsotropyModel& M, const ReductionStep& s)
    {
        const IsotropyModel& to = s.to;
        expect(s.n_from == M.n && s.r_from == M.r, "step source does not match the model");
        expect(static_cast<int>(to.W.size()) == to.r, "reduced W has the wrong number of rows");
        if (s.kind == "effective") {
            expect(to.n == M.n && to.r == M.r, "effective step changes n or r");
            expect(product(s.basis, to.W) == M.W, "effective step: W != B W'");
            expect(f2rank(to.W, to.r) == to.r, "effective step: involutions still act ineffectively");
            return to;
        }
        if (s.kind != "gate") {
            fail("unknown step kind " + s.kind);
            return to;
        }
        const auto f = fixed(M, s.H);
        const int dim = 2 * count(f);
        expect(dim < M.n, "gate on a trivially acting subgroup");
        expect(dim % 4 == 0, "gate: dim F(H) is not 0 mod 4");
        const int d = dim_ker(M, f);
        expect(d == s.d, "gate: kernel dimension mismatch");
        // dim F(H) <= n / 2^{d/2}
        expect(static_cast<long double>(dim) * dim * std::ldexp(1.0L, d) <=
                   static_cast<long double>(M.n) * M.n,
               "gate: F(H) is large, recursion not justified");
        expect(to.n == dim && to.n < M.n, "gate: reduced model has the wrong dimension");
        expect(to.r == M.r - d, "gate: reduced rank is not r - d");
        std::vector<int> cols;
        for (int c = 0; c < M.n / 2; ++c)
            if (f[c])
                cols.push_back(c);
        expect(cols == s.columns, "gate: kept columns are not the fixed planes");
        expect(to.n > 0, "gate: recursion into a zero-dimensional fixed set");
        expect(product(s.basis, to.W) == columns(M, f), "gate: restricted W != B W''");
        expect(qrank(to.W, to.r) == to.r, "gate: reduced W is rank deficient");
        expect(f2rank(to.W, to.r) == to.r, "gate: reduced involutions act ineffectively");
        expect(static_cast<long double>(to.n) * to.n <= std::ldexp(1.0L, to.r),
               "gate: reduced model misses r >= 2 log2 n");
        return to;
    }

    Involution actor(const Certificate& c, const std::string& name)
    {
        for (const auto& [k, v] : c.actors)
            if (k == name)
                return v;
        fail(c.label + ": missing actor " + name);
        return 0;
    }

    void verify_pair(const IsotropyModel& M, const Certificate& c)
    {
        const auto amb = fixed(M, c.ambient);
        const int dim = 2 * count(amb);
        expect(dim == c.ambient_dim, c.label + ": ambient dimension mismatch");
        expect(dim % 4 == 0, c.label + ": ambient dimension not 0 mod 4");
        const auto sa = signs(M, c.pair.a);
        const auto sb = signs(M, c.pair.b);
        int na = 0, nb = 0, both = 0, either = 0;
        for (int p = 0; p < M.n / 2; ++p) {
            if (!amb[p])
                continue;
            na += sa[p] < 0;
            nb += sb[p] < 0;
            both += sa[p] < 0 && sb[p] < 0;
            either += sa[p] < 0 || sb[p] < 0;
        }
        const int k1 = 2 * na, k2 = 2 * nb;
        expect(k1 == c.pair.k1 && k2 == c.pair.k2, c.label + ": pair codimensions mismatch");
        expect(k1 > 0 && k2 > 0, c.label + ": pair member does not move the ambient");
        expect(both == 0, c.label + ": pair is not transverse");
        expect(2 * either == k1 + k2, c.label + ": codimensions are not additive");
        expect(2 * k1 + 2 * k2 <= dim, c.label + ": 2k1 + 2k2 exceeds the ambient dimension");

        if (c.label == "1") {
            std::vector<Involution> g;
            for (Involution v = 1; v < (Involution{1} << M.r); ++v)
                if (gamma_member(M, v))
                    g.push_back(v);
            IntMatrix rows;
            for (auto v : g) {
                std::vector<long long> row;
                for (int b : bits_of(v, M.r))
                    row.push_back(b);
                rows.push_back(row);
            }
            const int j = rows.empty() ? 0 : f2rank(rows, static_cast<int>(rows.size()));
            expect(j <= M.r - 2, "1: Gamma contains r - 1 independent involutions");
            const Involution nxt = actor(c, "iota_j+1");
            const Involution iota = actor(c, "iota");
            const auto fn = fixed(M, {nxt});
            expect((M.n - 2 * count(fn)) % 4 == 0, "1: iota_j+1 has codim not 0 mod 4");
            expect(!gamma_member(M, nxt), "1: iota_j+1 lies in Gamma");
            expect(c.pair.a == iota && c.pair.b == (iota ^ nxt), "1: pair is not (iota, iota iota_j+1)");
            expect(c.ambient.empty(), "1: ambient must be N");
        } else if (c.label == "2") {
            const Involution s = actor(c, "sigma"), t = actor(c, "tau"), iota = actor(c, "iota");
            expect(gamma_member(M, s) && gamma_member(M, t) && s != t, "2: sigma, tau not distinct vertices");
            expect(dim_ker(M, fixed(M, {s, t})) >= 3, "2: kernel dimension of F(<sigma,tau>) below 3");
            expect(c.ambient == std::vector<Involution>{t}, "2: ambient must be F(tau)");
            expect(c.pair.a == iota && c.pair.b == (iota ^ s), "2: pair is not (iota, iota sigma)");
        } else if (c.label == "3") {
            const Involution s = actor(c, "sigma"), t = actor(c, "tau");
            expect(gamma_member(M, s) && gamma_member(M, t) && s != t, "3: sigma, tau not distinct vertices");
            expect(c.pair.a == s && c.pair.b == t, "3: pair is not (sigma, tau)");
            expect(c.ambient.empty(), "3: ambient must be N");
        } else if (c.label == "4") {
            const Involution s = actor(c, "sigma"), t = actor(c, "tau"), rho = actor(c, "rho");
            expect(gamma_member(M, s) && gamma_member(M, t) && s != t, "4: sigma, tau not distinct vertices");
            expect(!gamma_member(M, s ^ t), "4: sigma tau lies in Gamma");
            expect(c.pair.a == rho && c.pair.b == (rho ^ s ^ t), "4: pair is not (rho, rho sigma tau)");
            expect(c.ambient.empty(), "4: ambient must be N");
        } else if (c.label == "5") {
            verify_case5(M, c);
        } else {
            fail("unknown certificate label " + c.label);
        }
    }

    void verify_case5(const IsotropyModel& M, const Certificate& c)
    {
        if (!c.trace) {
            fail("5: missing trace");
            return;
        }
        const auto& t = *c.trace;
        std::vector<Involution> g;
        for (Involution v = 1; v < (Involution{1} << M.r); ++v)
            if (gamma_member(M, v))
                g.push_back(v);
        const std::size_t group_size = std::size_t{1} << t.m;
        expect(g.size() + 1 == group_size && t.m >= M.r - 1, "5: Gamma is not a subgroup of rank >= r - 1");
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = 0; b < g.size(); ++b) {
                if (a == b)
                    continue;
                expect(gamma_member(M, g[a] ^ g[b]), "5: Gamma not closed under products");
                const auto sa = signs(M, g[a]), sb = signs(M, g[b]);
                bool edge = false;
                for (std::size_t p = 0; p < sa.size(); ++p)
                    edge = edge || (sa[p] < 0 && sb[p] < 0);
                expect(edge, "5: Gamma is not complete");
            }
        expect(t.l == (t.m + 1) / 2, "5: l != floor((m + 1) / 2)");
        expect(static_cast<int>(t.rho.size()) == t.l && static_cast<int>(t.k.size()) == t.l,
               "5: chain length differs from l");
        if (static_cast<int>(t.rho.size()) != t.l || static_cast<int>(t.k.size()) != t.l)
            return;
        // recompute R_h and k_h from the rhos
        std::vector<bool> R(static_cast<std::size_t>(M.n / 2), true);
        std::vector<int> dims{2 * count(R)};
        for (int h = 0; h < t.l; ++h) {
            const auto s = signs(M, t.rho[h]);
            expect(gamma_member(M, t.rho[h]), "5: rho outside Gamma");
            int moved = 0;
            for (std::size_t p = 0; p < s.size(); ++p)
                if (R[p] && s[p] < 0) {
                    ++moved;
                    R[p] = false;
                }
            expect(2 * moved == t.k[h], "5: k_" + std::to_string(h + 1) + " mismatch");
            dims.push_back(2 * count(R));
        }
        bool c1 = true, c2 = true;
        for (int d : dims)
            c1 = c1 && d % 4 == 0;
        for (int h = 0; h + 1 < t.l; ++h)
            c2 = c2 && t.k[h] >= 2 * t.k[h + 1];
        expect(c1 && t.claim_dims, "5: claim dim R_h = 0 mod 4 fails");
        expect(c2 && t.claim_halving, "5: claim k_h >= 2 k_{h+1} fails");
        expect(t.k.back() == 0 && t.claim_terminal, "5: claim k_l = 0 fails");
        // maximality of k_1 over the whole group
        int kmax = 0;
        for (auto v : g) {
            int moved = 0;
            for (int s : signs(M, v))
                moved += s < 0;
            kmax = std::max(kmax, 2 * moved);
        }
        expect(t.k.front() == kmax, "5: k_1 is not maximal");

        expect(t.j >= 2 && t.j <= t.l && t.k[t.j - 1] == 0, "5: j is not an index with k_j = 0");
        for (int h = 0; h + 1 < t.j; ++h)
            expect(t.k[h] > 0, "5: j is not the first zero");
        // l_i from the final rho_j
        auto l_of = [&](int i) {
            std::vector<bool> Rprev(static_cast<std::size_t>(M.n / 2), true);
            for (int h = 0; h + 1 < i; ++h) {
                const auto s = signs(M, t.rho[h]);
                for (std::size_t p = 0; p < s.size(); ++p)
                    if (s[p] < 0)
                        Rprev[p] = false;
            }
            const auto si = signs(M, t.rho[i - 1]), sj = signs(M, t.rho_j_final);
            int both = 0;
            for (std::size_t p = 0; p < si.size(); ++p)
                both += Rprev[p] && si[p] < 0 && sj[p] < 0;
            return 2 * both;
        };
        Involution prod = t.rho[t.j - 1];
        for (auto s : t.sweep)
            prod ^= s;
        expect(prod == t.rho_j_final, "5: sweep does not produce rho_j");
        int last = 0;
        for (int i = 1; i < t.j; ++i) {
            const int li = l_of(i);
            expect(static_cast<int>(t.l_vals.size()) >= i && t.l_vals[i - 1] == li, "5: l_i mismatch");
            expect(2 * li <= t.k[i - 1], "5: l_i exceeds k_i / 2");
            if (li > 0)
                last = i;
        }
        expect(last == t.i_star && last > 0, "5: i* is not the largest index with l_i > 0");
        if (last == 0)
            return;
        const std::vector<Involution> amb(t.rho.begin(), t.rho.begin() + (last - 1));
        expect(c.ambient == amb, "5: ambient is not R_{i*-1}");
        expect(c.pair.a == t.rho_j_final && c.pair.b == (t.rho_j_final ^ t.rho[last - 1]),
               "5: pair is not (rho_j, rho_j rho_i)");
        expect(c.pair.k1 == t.l_vals[last - 1] && c.pair.k2 == t.k[last - 1] - t.l_vals[last - 1],
               "5: pair codimensions are not (l_i, k_i - l_i)");
    }

    bool enforce_;
    CheckReport& rep_;
};

} // namespace check

/* Replays every reduction from the raw model and re-derives every recorded number. */
inline CheckReport verify_certificate(const IsotropyModel& raw, const Certificate& cert,
                                      bool enforce_rank_bound = false)
{
    CheckReport rep;
    check::Checker(enforce_rank_bound, rep).verify(raw, cert, 0);
    return rep;
}

} // namespace steenweb::web

#endif // STEENWEB_WEB_CHECKER_HPP
