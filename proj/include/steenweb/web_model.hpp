#ifndef STEENWEB_WEB_MODEL_HPP
#define STEENWEB_WEB_MODEL_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace steenweb::web {

using IntMatrix = std::vector<std::vector<long long>>; // row-major
using Involution = std::uint32_t;                      // v in Z_2^r, coordinate i at bit i
using PlaneMask = std::uint64_t;                       // subset of the n/2 invariant planes

constexpr int max_rank = 20;
constexpr int max_planes = 64;

// ---- exact integer rank -----------------------------------------------------------------

/* Fraction-free Gaussian elimination (Bareiss); every intermediate entry is a minor. */
inline int integer_rank(IntMatrix m)
{
    const int rows = static_cast<int>(m.size());
    if (rows == 0)
        return 0;
    const int cols = static_cast<int>(m[0].size());
    std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            a[i][j] = m[i][j];
    int rk = 0;
    __int128 prev = 1;
    for (int col = 0; col < cols && rk < rows; ++col) {
        int sel = -1;
        for (int r = rk; r < rows; ++r)
            if (a[r][col] != 0) {
                sel = r;
                break;
            }
        if (sel < 0)
            continue;
        std::swap(a[sel], a[rk]);
        for (int r = rk + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c)
                a[r][c] = (a[rk][col] * a[r][c] - a[r][col] * a[rk][c]) / prev;
            a[r][col] = 0;
        }
        prev = a[rk][col];
        ++rk;
    }
    return rk;
}

/* Rank over Z_2 of a set of bit vectors. */
inline int rank_f2(std::vector<std::uint64_t> vs)
{
    int rk = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t b = std::uint64_t{1} << bit;
        auto it = std::find_if(vs.begin() + rk, vs.end(), [&](std::uint64_t v) { return v & b; });
        if (it == vs.end())
            continue;
        std::iter_swap(vs.begin() + rk, it);
        for (std::size_t i = 0; i < vs.size(); ++i)
            if (static_cast<int>(i) != rk && (vs[i] & b))
                vs[i] ^= vs[rk];
        ++rk;
    }
    return rk;
}

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b)
{
    const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    IntMatrix out(n, std::vector<long long>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t)
            for (std::size_t j = 0; j < m; ++j)
                out[i][j] += a[i][t] * b[t][j];
    return out;
}

// ---- lattice split ------------------------------------------------------------------------

struct LatticeSplit {
    IntMatrix basis;   // r x s, lower echelon, columns a Z-basis of the column span
    IntMatrix reduced; // s x m with W = basis * reduced; its columns span Z^s
    bool unimodular = false;
};

/* Column Hermite-style reduction W V^{-1} = [B | 0] by unimodular column operations, tracking V
 * so that W = B * (top s rows of V). */
inline LatticeSplit lattice_split(const IntMatrix& W)
{
    const int r = static_cast<int>(W.size());
    const int m = r ? static_cast<int>(W[0].size()) : 0;
    IntMatrix A = W;
    IntMatrix V(m, std::vector<long long>(m, 0));
    for (int i = 0; i < m; ++i)
        V[i][i] = 1;
    auto swap_cols = [&](int a, int b) {
        for (auto& row : A)
            std::swap(row[a], row[b]);
        std::swap(V[a], V[b]);
    };
    // col_a -= q col_b  <=>  row_b += q row_a in V
    auto sub_col = [&](int a, int b, long long q) {
        for (auto& row : A)
            row[a] -= q * row[b];
        for (int j = 0; j < m; ++j)
            V[b][j] += q * V[a][j];
    };
    int pc = 0;
    for (int i = 0; i < r && pc < m; ++i) {
        for (;;) {
            int best = -1;
            for (int c = pc; c < m; ++c)
                if (A[i][c] != 0 && (best < 0 || std::llabs(A[i][c]) < std::llabs(A[i][best])))
                    best = c;
            if (best < 0)
                break;
            if (best != pc)
                swap_cols(best, pc);
            bool done = true;
            for (int c = pc + 1; c < m; ++c)
                if (A[i][c] != 0) {
                    sub_col(c, pc, A[i][c] / A[i][pc]);
                    done = done && A[i][c] == 0;
                }
            if (done)
                break;
        }
        if (pc < m && A[i][pc] != 0) {
            if (A[i][pc] < 0) {
                for (auto& row : A)
                    row[pc] = -row[pc];
                for (auto& x : V[pc])
                    x = -x;
            }
            ++pc;
        }
    }
    LatticeSplit out;
    out.basis.assign(r, std::vector<long long>(pc, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < pc; ++j)
            out.basis[i][j] = A[i][j];
    out.reduced.assign(V.begin(), V.begin() + pc);
    ensure(matmul(out.basis, out.reduced) == W, "lattice split does not reproduce W");
    out.unimodular = pc == r;
    for (int j = 0; j < pc && out.unimodular; ++j) {
        // lower echelon with pivots on the diagonal when s = r
        out.unimodular = std::llabs(out.basis[j][j]) == 1;
    }
    return out;
}

// ---- the model ------------------------------------------------------------------------------

struct IsotropyModel {
    int n = 0;
    int r = 0;
    IntMatrix W; // r x (n/2)

    int planes() const { return n / 2; }
    PlaneMask all_planes() const
    {
        return planes() == 64 ? ~PlaneMask{0} : ((PlaneMask{1} << planes()) - 1);
    }
    friend bool operator==(const IsotropyModel& a, const IsotropyModel& b)
    {
        return a.n == b.n && a.r == b.r && a.W == b.W;
    }
};

inline IntMatrix restrict_columns(const IsotropyModel& M, PlaneMask cols)
{
    IntMatrix out(M.r);
    for (int i = 0; i < M.r; ++i)
        for (int c = 0; c < M.planes(); ++c)
            if (cols >> c & 1)
                out[i].push_back(M.W[i][c]);
    return out;
}

/* Throws invalid_argument unless the model satisfies its invariants. */
inline void check_model(const IsotropyModel& M)
{
    if (M.n < 0 || M.n % 2)
        throw Error(Errc::invalid_argument, "n must be even and nonnegative");
    if (M.planes() > max_planes)
        throw Error(Errc::invalid_argument, "at most 64 planes are supported");
    if (M.r < 0 || M.r > max_rank)
        throw Error(Errc::invalid_argument, "rank must lie in [0, 20]");
    if (static_cast<int>(M.W.size()) != M.r)
        throw Error(Errc::invalid_argument, "W must have r rows");
    for (const auto& row : M.W)
        if (static_cast<int>(row.size()) != M.planes())
            throw Error(Errc::invalid_argument, "W must have n/2 columns");
    for (int c = 0; c < M.planes(); ++c) {
        bool nz = false;
        for (int i = 0; i < M.r; ++i)
            nz = nz || M.W[i][c] != 0;
        if (!nz)
            throw Error(Errc::invalid_argument, "zero weight column " + std::to_string(c));
    }
    if (integer_rank(M.W) != M.r)
        throw Error(Errc::invalid_argument, "W must have rank r over Q");
}

/* Planes where the coordinate-i involution acts by -1, for each i. */
inline std::vector<PlaneMask> odd_rows(const IsotropyModel& M)
{
    std::vector<PlaneMask> rows(static_cast<std::size_t>(M.r), 0);
    for (int i = 0; i < M.r; ++i)
        for (int c = 0; c < M.planes(); ++c)
            if (M.W[i][c] % 2)
                rows[i] |= PlaneMask{1} << c;
    return rows;
}

/* Sign rule (-1)^{<v, W_c mod 2>}: the set of planes where v acts by -1. */
inline PlaneMask neg_planes(const std::vector<PlaneMask>& rows, Involution v)
{
    PlaneMask m = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (v >> i & 1)
            m ^= rows[i];
    return m;
}

inline PlaneMask neg_planes(const IsotropyModel& M, Involution v) { return neg_planes(odd_rows(M), v); }

/* Lexicographic rank of v in Z_2^r, first coordinate most significant. */
inline std::uint32_t lex_key(Involution v, int r)
{
    std::uint32_t k = 0;
    for (int i = 0; i < r; ++i)
        if (v >> i & 1)
            k |= std::uint32_t{1} << (r - 1 - i);
    return k;
}

inline Involution from_lex_key(std::uint32_t k, int r) { return lex_key(k, r); }

inline std::vector<int> involution_bits(Involution v, int r)
{
    std::vector<int> out(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        out[i] = static_cast<int>(v >> i & 1);
    return out;
}

inline std::string involution_string(Involution v, int r)
{
    std::string s;
    for (int i = 0; i < r; ++i)
        s += (v >> i & 1) ? '1' : '0';
    return s;
}

// ---- fixed sets -----------------------------------------------------------------------------

struct FixedSetDescriptor {
    std::vector<Involution> H;
    PlaneMask fixed_planes = 0;
    int codim = 0;
    int dim = 0;
    int dim_ker = 0;
};

/* Caches dim_ker by fixed-plane mask and neg sets by involution. */
class ModelView {
public:
    explicit ModelView(const IsotropyModel& M) : M_(M), rows_(odd_rows(M)) {}

    const IsotropyModel& model() const { return M_; }
    int n() const { return M_.n; }
    int r() const { return M_.r; }
    PlaneMask all() const { return M_.all_planes(); }

    PlaneMask neg(Involution v) const { return neg_planes(rows_, v); }
    int codim(Involution v) const { return 2 * std::popcount(neg(v)); }

    PlaneMask fixed(const std::vector<Involution>& H) const
    {
        PlaneMask moved = 0;
        for (auto v : H)
            moved |= neg(v);
        return all() & ~moved;
    }

    int dim_ker(PlaneMask fixed_planes) const
    {
        auto it = rank_cache_.find(fixed_planes);
        if (it != rank_cache_.end())
            return it->second;
        const int d = M_.r - integer_rank(restrict_columns(M_, fixed_planes));
        rank_cache_.emplace(fixed_planes, d);
        return d;
    }

    FixedSetDescriptor fixed_set(const std::vector<Involution>& H) const
    {
        FixedSetDescriptor f;
        f.H = H;
        f.fixed_planes = fixed(H);
        f.dim = 2 * std::popcount(f.fixed_planes);
        f.codim = M_.n - f.dim;
        f.dim_ker = dim_ker(f.fixed_planes);
        return f;
    }

    /* Involutions acting trivially on the planes in `fixed_planes` (mod-2 nullspace of the
     * restricted weights), in lexicographic order, identity included. */
    std::vector<Involution> trivial_on(PlaneMask fixed_planes) const
    {
        std::vector<Involution> out;
        for (std::uint32_t k = 0; k < (std::uint32_t{1} << M_.r); ++k) {
            const Involution v = from_lex_key(k, M_.r);
            if ((neg(v) & fixed_planes) == 0)
                out.push_back(v);
        }
        return out;
    }

    int mod2_nullity(PlaneMask fixed_planes) const
    {
        std::vector<std::uint64_t> cols;
        for (int c = 0; c < M_.planes(); ++c)
            if (fixed_planes >> c & 1) {
                std::uint64_t col = 0;
                for (int i = 0; i < M_.r; ++i)
                    if (M_.W[i][c] % 2)
                        col |= std::uint64_t{1} << i;
                cols.push_back(col);
            }
        return M_.r - rank_f2(cols);
    }

private:
    const IsotropyModel& M_;
    std::vector<PlaneMask> rows_;
    mutable std::unordered_map<PlaneMask, int> rank_cache_;
};

inline FixedSetDescriptor fixed_set(const IsotropyModel& M, const std::vector<Involution>& H)
{
    return ModelView(M).fixed_set(H);
}

/* No plane carries -1 for both; checked against codimension additivity. */
inline bool is_transverse(const IsotropyModel& M, Involution s, Involution t)
{
    const ModelView view(M);
    const bool disjoint = (view.neg(s) & view.neg(t)) == 0;
    const bool additive = view.fixed_set({s, t}).codim == view.codim(s) + view.codim(t);
    ensure(disjoint == additive, "transversality characterizations disagree");
    return disjoint;
}

// ---- the graph ------------------------------------------------------------------------------

struct GammaGraph {
    std::vector<Involution> vertices; // lexicographic order
    std::vector<std::pair<Involution, Involution>> edges;
};

inline bool in_gamma(const ModelView& view, Involution v)
{
    if (v == 0)
        return false;
    const PlaneMask neg = view.neg(v);
    if (std::popcount(neg) % 2)
        return false; // codim = 2|neg| must be 0 mod 4
    return view.dim_ker(view.all() & ~neg) <= 1;
}

inline std::vector<Involution> gamma_vertices(const ModelView& view)
{
    std::vector<Involution> out;
    for (std::uint32_t k = 1; k < (std::uint32_t{1} << view.r()); ++k) {
        const Involution v = from_lex_key(k, view.r());
        if (in_gamma(view, v))
            out.push_back(v);
    }
    return out;
}

inline GammaGraph build_gamma(const IsotropyModel& M)
{
    const ModelView view(M);
    GammaGraph g;
    g.vertices = gamma_vertices(view);
    for (std::size_t a = 0; a < g.vertices.size(); ++a)
        for (std::size_t b = a + 1; b < g.vertices.size(); ++b)
            if (view.neg(g.vertices[a]) & view.neg(g.vertices[b]))
                g.edges.emplace_back(g.vertices[a], g.vertices[b]);
    return g;
}

// ---- induction gate -------------------------------------------------------------------------

struct ReductionStep {
    std::string kind;             // "effective" or "gate"
    std::vector<Involution> H;    // subgroup whose fixed set becomes the new model
    int n_from = 0, r_from = 0;
    int d = 0;                    // dim_ker of the restricted action
    std::vector<int> columns;     // kept plane indices of the parent model
    IntMatrix basis;              // parent weights on kept columns = basis * W_new
    IsotropyModel to;
};

struct GateResult {
    bool recurse = false;
    bool blocked = false; // small, but F(H) is a point or its reduced torus is below 2 log2(dim)
    int dim = 0;
    int d = 0;
    ReductionStep step; // when recurse
};

/* 2 log2(dim) <= r, i.e. dim^2 <= 2^r. */
inline bool rank_bound_holds(int dim, int r)
{
    if (dim <= 1)
        return true;
    if (r >= 62)
        return true;
    return static_cast<long double>(dim) * dim <= std::ldexp(1.0L, r);
}

inline int required_rank(int n)
{
    if (n <= 1)
        return 0;
    int r = 0;
    while (!rank_bound_holds(n, r))
        ++r;
    return r;
}

/* dim F(H) <= n / 2^{d/2} means F(H) carries enough symmetry to induct on; then the model
 * is restricted to the fixed planes and the torus replaced by the effective quotient of rank
 * r - d. Zero-dimensional F(H) never recurses, and without the rank bound enforced a reduced
 * model that misses r >= 2 log2(dim) is reported as blocked instead. */
inline GateResult induction_gate(const IsotropyModel& M, const std::vector<Involution>& H,
                                 bool enforce_rank_bound = true)
{
    const ModelView view(M);
    const auto F = view.fixed_set(H);
    if (F.fixed_planes == M.all_planes())
        throw Error(Errc::precondition, "induction gate needs a subgroup acting nontrivially");
    if (F.dim % 4)
        throw Error(Errc::precondition, "induction gate needs dim F(H) = 0 mod 4");
    GateResult g;
    g.dim = F.dim;
    g.d = F.dim_ker;
    const long double lhs = static_cast<long double>(F.dim) * F.dim * std::ldexp(1.0L, F.dim_ker);
    const long double rhs = static_cast<long double>(M.n) * M.n;
    if (lhs > rhs)
        return g;
    if (F.dim == 0 || (!enforce_rank_bound && !rank_bound_holds(F.dim, M.r - F.dim_ker))) {
        g.blocked = true;
        return g;
    }
    g.recurse = true;
    ReductionStep& s = g.step;
    s.kind = "gate";
    s.H = H;
    s.n_from = M.n;
    s.r_from = M.r;
    s.d = F.dim_ker;
    for (int c = 0; c < M.planes(); ++c)
        if (F.fixed_planes >> c & 1)
            s.columns.push_back(c);
    const IntMatrix WF = restrict_columns(M, F.fixed_planes);
    const auto split = lattice_split(WF);
    if (static_cast<int>(split.reduced.size()) != M.r - F.dim_ker)
        throw Error(Errc::invariant_breach, "effectiveness-loss: reduced lattice has the wrong rank");
    s.basis = split.basis;
    s.to = IsotropyModel{F.dim, M.r - F.dim_ker, split.reduced};
    if (enforce_rank_bound && !rank_bound_holds(F.dim, s.to.r))
        throw Error(Errc::invariant_breach, "reduced model violates r >= 2 log2(dim)");
    return g;
}

/* Divides the torus by its ineffective kernel: re-expresses W over a basis of the lattice its
 * columns span. Returns nullopt when W is already effective. */
inline std::optional<ReductionStep> make_effective(const IsotropyModel& M)
{
    if (M.r == 0)
        return std::nullopt;
    const auto split = lattice_split(M.W);
    if (split.unimodular)
        return std::nullopt;
    ReductionStep s;
    s.kind = "effective";
    s.n_from = M.n;
    s.r_from = M.r;
    for (int c = 0; c < M.planes(); ++c)
        s.columns.push_back(c);
    s.basis = split.basis;
    s.to = IsotropyModel{M.n, static_cast<int>(split.reduced.size()), split.reduced};
    return s;
}

// ---- generators ---------------------------------------------------------------------------

inline IsotropyModel random_model(int n, int r, std::uint64_t seed, int weight_bound)
{
    if (n <= 0 || n % 2 || r < 1 || weight_bound < 1 || r > n / 2 || n / 2 > max_planes || r > max_rank)
        throw Error(Errc::infeasible, "infeasible-parameters: n = " + std::to_string(n) +
                                          ", r = " + std::to_string(r));
    std::mt19937_64 rng(seed);
    const auto span = static_cast<std::uint64_t>(2 * weight_bound + 1);
    auto draw = [&] { return static_cast<long long>(rng() % span) - weight_bound; };
    for (int attempt = 0; attempt < 100000; ++attempt) {
        IsotropyModel M{n, r, IntMatrix(r, std::vector<long long>(n / 2, 0))};
        for (int c = 0; c < n / 2; ++c) {
            bool nz = false;
            while (!nz) {
                for (int i = 0; i < r; ++i) {
                    M.W[i][c] = draw();
                    nz = nz || M.W[i][c] != 0;
                }
            }
        }
        if (integer_rank(M.W) == r)
            return M;
    }
    throw Error(Errc::infeasible, "infeasible-parameters: no full-rank sample found");
}

/* All full-rank models with entries in [-b, b] up to column permutation: multisets of nonzero
 * columns, visited in lexicographic order of column indices. Returns the number visited. */
inline long long exhaustive_models(int n, int r, int weight_bound,
                                   const std::function<void(const IsotropyModel&)>& visit)
{
    if (n <= 0 || n % 2 || r < 1 || weight_bound < 1 || r > n / 2)
        throw Error(Errc::infeasible, "infeasible-parameters for exhaustive enumeration");
    std::vector<std::vector<long long>> columns;
    const int base = 2 * weight_bound + 1;
    long long total = 1;
    for (int i = 0; i < r; ++i)
        total *= base;
    for (long long code = 0; code < total; ++code) {
        std::vector<long long> col(static_cast<std::size_t>(r));
        long long c = code;
        bool nz = false;
        for (int i = r - 1; i >= 0; --i) {
            col[i] = c % base - weight_bound;
            c /= base;
            nz = nz || col[i] != 0;
        }
        if (nz)
            columns.push_back(std::move(col));
    }
    const int m = n / 2;
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    long long visited = 0;
    for (;;) {
        IsotropyModel M{n, r, IntMatrix(r, std::vector<long long>(m))};
        for (int c = 0; c < m; ++c)
            for (int i = 0; i < r; ++i)
                M.W[i][c] = columns[idx[c]][i];
        if (integer_rank(M.W) == r) {
            visit(M);
            ++visited;
        }
        int pos = m - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(columns.size()) - 1)
            --pos;
        if (pos < 0)
            break;
        ++idx[pos];
        for (int j = pos + 1; j < m; ++j)
            idx[j] = idx[pos];
    }
    return visited;
}

} // namespace steenweb::web

#endif // STEENWEB_WEB_MODEL_HPP
