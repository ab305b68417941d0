#ifndef STEENWEB_WEB_SEARCH_HPP
#define STEENWEB_WEB_SEARCH_HPP

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "web_model.hpp"

namespace steenweb::web {

struct PairRecord {
    Involution a = 0;
    Involution b = 0;
    int k1 = 0; // codim of F(a|ambient) in the ambient
    int k2 = 0;
};

struct Case5Trace {
    int m = 0;
    int l = 0;
    int j = 0;      // first index with k_j = 0
    int i_star = 0; // largest index with l_i > 0
    std::vector<Involution> group_basis;
    std::vector<Involution> rho;        // rho_1 .. rho_l
    std::vector<int> k;                 // k_1 .. k_l
    std::vector<PlaneMask> R;           // R_0 .. R_l as fixed planes
    std::vector<Involution> sweep;      // rho_i multiplied into rho_j, in sweep order
    Involution rho_j_final = 0;
    std::vector<int> l_vals;            // l_1 .. l_{j-1} after the sweep
    bool claim_dims = false;            // dim R_h = 0 mod 4
    bool claim_halving = false;         // k_h >= 2 k_{h+1}
    bool claim_terminal = false;        // k_l = 0
};

struct Certificate {
    std::string label; // "1".."5", "recurse" or "point"
    IsotropyModel model;

    std::optional<ReductionStep> step;
    std::shared_ptr<const Certificate> inner;

    std::vector<std::pair<std::string, Involution>> actors;
    std::vector<Involution> ambient; // ambient = F(ambient); empty means the whole model
    std::string ambient_name;
    int ambient_dim = 0;
    std::string target;
    PairRecord pair;
    std::optional<Case5Trace> trace;
    std::vector<std::string> notes;

    const Certificate& leaf() const { return inner ? inner->leaf() : *this; }
    int depth() const { return inner ? 1 + inner->depth() : 0; }
};

struct Flagged {
    std::string reason; // "search-exhausted" or "model-degenerate"
    IsotropyModel model;
    std::vector<std::string> notes;
};

using SearchResult = std::variant<Certificate, Flagged>;

struct SearchOptions {
    bool enforce_rank_bound = true;
};

// ---- Z_2 linear algebra on involutions --------------------------------------------------

/* Echelon basis over Z_2 (pivot = highest set bit). */
class F2Span {
public:
    bool contains(Involution v) const { return reduce(v) == 0; }
    bool insert(Involution v)
    {
        v = reduce(v);
        if (!v)
            return false;
        basis_.push_back(v);
        return true;
    }
    int dim() const { return static_cast<int>(basis_.size()); }

private:
    Involution reduce(Involution v) const
    {
        for (auto b : basis_)
            if (v & (Involution{1} << (31 - std::countl_zero(b))))
                v ^= b;
        return v;
    }
    std::vector<Involution> basis_;
};

/* All elements of the span of `gens`, identity included, in lexicographic order. */
inline std::vector<Involution> span_elements(const std::vector<Involution>& gens, int r)
{
    std::vector<Involution> indep;
    F2Span sp;
    for (auto g : gens)
        if (sp.insert(g))
            indep.push_back(g);
    std::vector<Involution> out{0};
    for (auto g : indep) {
        const std::size_t sz = out.size();
        for (std::size_t t = 0; t < sz; ++t)
            out.push_back(out[t] ^ g);
    }
    std::sort(out.begin(), out.end(), [r](Involution a, Involution b) { return lex_key(a, r) < lex_key(b, r); });
    return out;
}

/* Basis of {v : neg(v) misses `planes`}, the involutions acting trivially there. */
inline std::vector<Involution> trivial_basis(const ModelView& view, PlaneMask planes)
{
    std::vector<std::pair<PlaneMask, Involution>> rows;
    for (int i = 0; i < view.r(); ++i)
        rows.emplace_back(view.neg(Involution{1} << i) & planes, Involution{1} << i);
    std::vector<Involution> kernel;
    std::size_t rank = 0;
    for (int bit = 0; bit < 64 && rank < rows.size(); ++bit) {
        const PlaneMask b = PlaneMask{1} << bit;
        if (!(planes & b))
            continue;
        std::size_t sel = rows.size();
        for (std::size_t t = rank; t < rows.size(); ++t)
            if (rows[t].first & b) {
                sel = t;
                break;
            }
        if (sel == rows.size())
            continue;
        std::swap(rows[sel], rows[rank]);
        for (std::size_t t = 0; t < rows.size(); ++t)
            if (t != rank && (rows[t].first & b)) {
                rows[t].first ^= rows[rank].first;
                rows[t].second ^= rows[rank].second;
            }
        ++rank;
    }
    for (std::size_t t = rank; t < rows.size(); ++t)
        kernel.push_back(rows[t].second);
    return kernel;
}

inline bool lex_less(Involution a, Involution b, int r) { return lex_key(a, r) < lex_key(b, r); }

// ---- Case 5 chain ---------------------------------------------------------------------------

struct ChainOutcome {
    std::optional<Case5Trace> trace;
    std::string failure; // empty on success
    bool degenerate = false;
};

/* The chain R_0 = N, R_i = F(<rho_1..rho_i>) with k_i maximal inside subgroups cut down by the
 * mod-4 codimension condition, the replacement sweep, and the final transverse pair. */
inline ChainOutcome case5_chain(const ModelView& view, const std::vector<Involution>& group)
{
    ChainOutcome out;
    const int r = view.r();
    Case5Trace t;
    {
        F2Span sp;
        for (auto g : group)
            if (sp.insert(g))
                t.group_basis.push_back(g);
    }
    t.m = static_cast<int>(t.group_basis.size());
    t.l = (t.m + 1) / 2;
    if (t.m == 0) {
        out.failure = "case 5: trivial group";
        return out;
    }
    std::vector<Involution> G = t.group_basis; // basis of Z_2^{m-(i-1)}
    PlaneMask R = view.all();
    t.R.push_back(R);
    for (int i = 1; i <= t.l; ++i) {
        F2Span chosen;
        for (auto p : t.rho)
            chosen.insert(p);
        Involution best = 0;
        int best_k = -1;
        for (auto v : span_elements(G, r)) {
            if (chosen.contains(v))
                continue;
            const int k = 2 * std::popcount(view.neg(v) & R);
            if (k > best_k) {
                best_k = k;
                best = v;
            }
        }
        if (best_k < 0) {
            out.failure = "case 5: no admissible rho_" + std::to_string(i);
            return out;
        }
        t.rho.push_back(best);
        t.k.push_back(best_k);
        R &= ~view.neg(best);
        t.R.push_back(R);
        if (i == t.l)
            break;
        // next subgroup: kernel of v -> |neg(v) cap R_i| mod 2, or a hyperplane through the rhos
        std::vector<int> phi;
        int s = -1;
        for (std::size_t g = 0; g < G.size(); ++g) {
            phi.push_back(std::popcount(view.neg(G[g]) & R) % 2);
            if (phi.back() && s < 0)
                s = static_cast<int>(g);
        }
        std::vector<Involution> next;
        if (s >= 0) {
            for (std::size_t g = 0; g < G.size(); ++g)
                if (static_cast<int>(g) != s)
                    next.push_back(phi[g] ? G[g] ^ G[s] : G[g]);
        } else {
            F2Span sp;
            for (auto p : t.rho)
                if (sp.insert(p))
                    next.push_back(p);
            std::vector<Involution> completion;
            for (auto g : G)
                if (sp.insert(g))
                    completion.push_back(g);
            if (completion.empty()) {
                out.failure = "case 5: subgroup chain collapsed at step " + std::to_string(i);
                return out;
            }
            completion.pop_back();
            next.insert(next.end(), completion.begin(), completion.end());
        }
        G = std::move(next);
    }

    t.claim_dims = true;
    for (auto mask : t.R)
        t.claim_dims = t.claim_dims && (2 * std::popcount(mask)) % 4 == 0;
    t.claim_halving = true;
    for (std::size_t h = 0; h + 1 < t.k.size(); ++h)
        t.claim_halving = t.claim_halving && t.k[h] >= 2 * t.k[h + 1];
    t.claim_terminal = t.k.back() == 0;

    t.j = 0;
    for (std::size_t h = 0; h < t.k.size(); ++h)
        if (t.k[h] == 0) {
            t.j = static_cast<int>(h) + 1;
            break;
        }
    if (!t.claim_dims || !t.claim_halving || !t.claim_terminal || t.j < 2) {
        out.failure = "case 5: chain claims fail (k_l = " + std::to_string(t.k.back()) + ")";
        out.trace = t;
        return out;
    }

    auto l_of = [&](Involution rj, int i) {
        return 2 * std::popcount(view.neg(rj) & view.neg(t.rho[i - 1]) & t.R[i - 1]);
    };
    Involution rj = t.rho[t.j - 1];
    for (int i = t.j - 1; i >= 1; --i)
        if (2 * l_of(rj, i) > t.k[i - 1]) {
            rj ^= t.rho[i - 1];
            t.sweep.push_back(t.rho[i - 1]);
        }
    t.rho_j_final = rj;
    for (int i = 1; i < t.j; ++i)
        t.l_vals.push_back(l_of(rj, i));
    for (int i = t.j - 1; i >= 1; --i)
        if (t.l_vals[i - 1] > 0) {
            t.i_star = i;
            break;
        }
    out.trace = t;
    if (t.i_star == 0) {
        out.degenerate = true;
        out.failure = "model-degenerate: all l_i vanish for rho_j = " + involution_string(rj, r);
    }
    return out;
}

// ---- the search -------------------------------------------------------------------------------

namespace detail {

class Searcher {
public:
    Searcher(const IsotropyModel& M, const SearchOptions& opt, int depth)
        : M_(M), view_(M), opt_(opt), depth_(depth)
    {
    }

    SearchResult run()
    {
        if (M_.n == 0) {
            Certificate c;
            c.label = "point";
            c.model = M_;
            return c;
        }
        gamma_ = gamma_vertices(view_);
        for (auto attempt : {&Searcher::case1, &Searcher::case2, &Searcher::case3, &Searcher::case4,
                             &Searcher::case5}) {
            if (auto res = (this->*attempt)())
                return std::move(*res);
            if (degenerate_)
                return Flagged{"model-degenerate", M_, notes_};
        }
        return Flagged{"search-exhausted", M_, notes_};
    }

private:
    using Attempt = std::optional<SearchResult>;

    void note(std::string s)
    {
        if (notes_.size() < 32)
            notes_.push_back(std::move(s));
    }

    std::string inv(Involution v) const { return involution_string(v, M_.r); }

    bool in_gamma_set(Involution v) const
    {
        return std::binary_search(gamma_.begin(), gamma_.end(), v,
                                  [this](Involution a, Involution b) { return lex_less(a, b, M_.r); });
    }

    /* Recursion through the induction gate. nullopt: F(H) is large; otherwise the certificate from
     * the reduced model (flagged sub-results are noted and the caller keeps going). */
    std::optional<Certificate> gate(const std::vector<Involution>& H)
    {
        const PlaneMask fixed = view_.fixed(H);
        auto it = gate_cache_.find(fixed);
        if (it != gate_cache_.end())
            return it->second;
        std::optional<Certificate> result;
        auto g = induction_gate(M_, H, opt_.enforce_rank_bound);
        if (g.recurse) {
            if (g.step.to.n >= M_.n)
                throw Error(Errc::invariant_breach, "recursion does not reduce n");
            auto sub = Searcher(g.step.to, opt_, depth_ + 1).run();
            if (auto* cert = std::get_if<Certificate>(&sub)) {
                Certificate c;
                c.label = "recurse";
                c.model = M_;
                c.step = g.step;
                c.inner = std::make_shared<Certificate>(std::move(*cert));
                result = std::move(c);
            } else {
                note("reduced model on F(" + inv(H.front()) + (H.size() > 1 ? ",...)" : ")") +
                     " was flagged: " + std::get<Flagged>(sub).reason);
            }
        }
        gate_cache_.emplace(fixed, result);
        return result;
    }

    void discrepancy(PlaneMask fixed, const char* where)
    {
        const int dk = view_.dim_ker(fixed);
        const int nullity = view_.mod2_nullity(fixed);
        if (dk != nullity)
            note(std::string(where) + ": Q-corank " + std::to_string(dk) + " differs from mod-2 nullity " +
                 std::to_string(nullity) + "; mod-2 data used");
    }

    /* Checks the pair numerically inside F(ambient) and packages it. */
    std::optional<Certificate> emit(const std::string& label, const std::vector<Involution>& ambient,
                                    std::string ambient_name, std::string target, Involution a, Involution b,
                                    std::vector<std::pair<std::string, Involution>> actors)
    {
        const PlaneMask A = view_.fixed(ambient);
        const int dim = 2 * std::popcount(A);
        const PlaneMask na = view_.neg(a) & A;
        const PlaneMask nb = view_.neg(b) & A;
        const int k1 = 2 * std::popcount(na), k2 = 2 * std::popcount(nb);
        if (dim % 4 || k1 == 0 || k2 == 0 || (na & nb) || 2 * k1 + 2 * k2 > dim)
            return std::nullopt;
        Certificate c;
        c.label = label;
        c.model = M_;
        c.actors = std::move(actors);
        c.ambient = ambient;
        c.ambient_name = std::move(ambient_name);
        c.ambient_dim = dim;
        c.target = std::move(target);
        c.pair = {a, b, k1, k2};
        c.notes = notes_;
        return c;
    }

    Attempt wrap(std::optional<Certificate> c)
    {
        if (!c)
            return std::nullopt;
        return SearchResult(std::move(*c));
    }

    // Case 1: Gamma spans at most r - 2 dimensions.
    Attempt case1()
    {
        const int r = M_.r;
        F2Span gspan;
        for (auto v : gamma_)
            gspan.insert(v);
        if (gspan.dim() > r - 2)
            return std::nullopt;
        std::vector<Involution> sub = case1_subgroup(view_);
        std::vector<Involution> cands;
        for (auto v : span_elements(sub, r))
            if (v && !gspan.contains(v))
                cands.push_back(v);
        std::stable_sort(cands.begin(), cands.end(),
                         [this](Involution a, Involution b) { return view_.codim(a) < view_.codim(b); });
        for (auto c : cands) {
            const PlaneMask fixed = view_.fixed({c});
            if (view_.dim_ker(fixed) != 2)
                note("case 1: dim_ker F(" + inv(c) + ") = " + std::to_string(view_.dim_ker(fixed)));
            if (auto rec = gate({c}))
                return SearchResult(std::move(*rec));
            discrepancy(fixed, "case 1");
            const PlaneMask nc = view_.neg(c);
            for (auto iota : span_elements(trivial_basis(view_, fixed), r)) {
                const PlaneMask ni = view_.neg(iota);
                if (!ni || ni == nc)
                    continue;
                if (auto cert = emit("1", {}, "N", "N", iota, iota ^ c, {{"iota_j+1", c}, {"iota", iota}}))
                    return SearchResult(std::move(*cert));
            }
        }
        note("case 1: no candidate produced a pair");
        return std::nullopt;
    }

    // Case 2: a pair in Gamma whose joint fixed set has kernel dimension >= 3.
    Attempt case2()
    {
        for (auto s : gamma_)
            for (auto t : gamma_) {
                if (s == t)
                    continue;
                const PlaneMask fh = view_.fixed({s, t});
                if (view_.dim_ker(fh) < 3)
                    continue;
                if (auto rec = gate({t}))
                    return SearchResult(std::move(*rec));
                if (auto rec = gate({s}))
                    return SearchResult(std::move(*rec));
                discrepancy(fh, "case 2");
                const PlaneMask ft = view_.fixed({t});
                const PlaneMask S = view_.neg(s) & ft;
                for (auto iota : span_elements(trivial_basis(view_, fh), M_.r)) {
                    const PlaneMask x = view_.neg(iota) & ft;
                    if (!x || x == S)
                        continue;
                    if (auto cert = emit("2", {t}, "F(tau)", "F(tau)", iota, iota ^ s,
                                         {{"sigma", s}, {"tau", t}, {"iota", iota}}))
                        return SearchResult(std::move(*cert));
                }
            }
        return std::nullopt;
    }

    // Case 3: two vertices without an edge.
    Attempt case3()
    {
        for (auto s : gamma_)
            for (auto t : gamma_) {
                if (s == t || (view_.neg(s) & view_.neg(t)))
                    continue;
                const PlaneMask fh = view_.fixed({s, t});
                if (view_.dim_ker(fh) > 2)
                    note("case 3: dim_ker F(<" + inv(s) + "," + inv(t) + ">) = " +
                         std::to_string(view_.dim_ker(fh)));
                if (auto rec = gate({s, t}))
                    return SearchResult(std::move(*rec));
                if (auto cert = emit("3", {}, "N", "F(tau)", s, t, {{"sigma", s}, {"tau", t}}))
                    return SearchResult(std::move(*cert));
            }
        return std::nullopt;
    }

    // Case 4: a product of two vertices leaves Gamma.
    Attempt case4()
    {
        for (auto s : gamma_)
            for (auto t : gamma_) {
                if (s == t || in_gamma_set(s ^ t))
                    continue;
                const Involution st = s ^ t;
                const PlaneMask fst = view_.fixed({st});
                if (fst == view_.all())
                    continue;
                if (view_.dim_ker(fst) != 2)
                    note("case 4: dim_ker F(sigma tau) = " + std::to_string(view_.dim_ker(fst)) +
                         " for sigma = " + inv(s) + ", tau = " + inv(t));
                if (auto rec = gate({st}))
                    return SearchResult(std::move(*rec));
                discrepancy(fst, "case 4");
                const PlaneMask nst = view_.neg(st);
                for (auto rho : span_elements(trivial_basis(view_, fst), M_.r)) {
                    const PlaneMask nr = view_.neg(rho);
                    if (!nr || nr == nst)
                        continue;
                    if (auto cert = emit("4", {}, "N", "N", rho, rho ^ st,
                                         {{"sigma", s}, {"tau", t}, {"rho", rho}}))
                        return SearchResult(std::move(*cert));
                }
            }
        return std::nullopt;
    }

    // Case 5: Gamma is complete on a subgroup Z_2^m with m >= r - 1.
    Attempt case5()
    {
        if (gamma_.empty())
            return std::nullopt;
        F2Span sp;
        std::vector<Involution> basis;
        for (auto v : gamma_)
            if (sp.insert(v))
                basis.push_back(v);
        const int m = static_cast<int>(basis.size());
        if (m < M_.r - 1 || gamma_.size() + 1 != (std::size_t{1} << m)) {
            note("case 5: Gamma is not a subgroup of rank >= r - 1");
            return std::nullopt;
        }
        for (std::size_t a = 0; a < gamma_.size(); ++a)
            for (std::size_t b = a + 1; b < gamma_.size(); ++b)
                if (!(view_.neg(gamma_[a]) & view_.neg(gamma_[b]))) {
                    note("case 5: Gamma is not complete");
                    return std::nullopt;
                }
        auto chain = case5_chain(view_, basis);
        if (chain.trace && !chain.trace->rho.empty()) {
            if (auto rec = gate({chain.trace->rho.front()}))
                return SearchResult(std::move(*rec));
        }
        if (!chain.failure.empty()) {
            note(chain.failure);
            degenerate_ = chain.degenerate;
            return std::nullopt;
        }
        const auto& t = *chain.trace;
        std::vector<Involution> amb(t.rho.begin(), t.rho.begin() + (t.i_star - 1));
        const Involution rj = t.rho_j_final;
        const Involution ri = t.rho[t.i_star - 1];
        auto cert = emit("5", amb, "R_{i-1}", "R_{i-1}", rj, rj ^ ri, {{"rho_j", rj}, {"rho_i", ri}});
        if (!cert) {
            note("case 5: final inequality fails");
            return std::nullopt;
        }
        cert->trace = t;
        return SearchResult(std::move(*cert));
    }

public:
    /* Z_2^{r-1} inside the kernel of the sum-of-signs map v -> |neg(v)| mod 2. */
    static std::vector<Involution> case1_subgroup(const ModelView& view)
    {
        const int r = view.r();
        std::vector<Involution> basis;
        int s = -1;
        std::vector<int> phi(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) {
            phi[i] = std::popcount(view.neg(Involution{1} << i)) % 2;
            if (phi[i] && s < 0)
                s = i;
        }
        for (int i = 0; i < r; ++i) {
            if (s < 0) {
                if (i != r - 1)
                    basis.push_back(Involution{1} << i);
            } else if (i != s) {
                basis.push_back(phi[i] ? (Involution{1} << i) | (Involution{1} << s) : Involution{1} << i);
            }
        }
        return basis;
    }

private:
    const IsotropyModel& M_;
    ModelView view_;
    SearchOptions opt_;
    int depth_;
    std::vector<Involution> gamma_;
    std::vector<std::string> notes_;
    std::map<PlaneMask, std::optional<Certificate>> gate_cache_;
    bool degenerate_ = false;
};

} // namespace detail

inline std::vector<Involution> case1_subgroup(const IsotropyModel& M)
{
    return detail::Searcher::case1_subgroup(ModelView(M));
}

inline SearchResult find_certificate(const IsotropyModel& M, SearchOptions opt = {})
{
    check_model(M);
    if (M.n % 4)
        throw Error(Errc::precondition, "certificate search needs n = 0 mod 4");
    if (opt.enforce_rank_bound && M.r < required_rank(M.n))
        throw Error(Errc::precondition, "certificate search needs r >= ceil(2 log2 n) = " +
                                            std::to_string(required_rank(M.n)));
    if (auto eff = make_effective(M)) {
        auto sub = detail::Searcher(eff->to, opt, 1).run();
        if (auto* cert = std::get_if<Certificate>(&sub)) {
            Certificate c;
            c.label = "recurse";
            c.model = M;
            c.step = std::move(*eff);
            c.inner = std::make_shared<Certificate>(std::move(*cert));
            return c;
        }
        auto f = std::get<Flagged>(std::move(sub));
        f.notes.insert(f.notes.begin(), "search ran on the effective quotient");
        return f;
    }
    return detail::Searcher(M, opt, 0).run();
}

} // namespace steenweb::web

#endif // STEENWEB_WEB_SEARCH_HPP
