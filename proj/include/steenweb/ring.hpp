#ifndef STEENWEB_RING_HPP
#define STEENWEB_RING_HPP

#include <map>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "steenrod.hpp"

namespace steenweb {

/* A homogeneous element: degree plus coordinates in that degree's basis. */
template <class Field>
struct Element {
    int degree = 0;
    Vec<Field> coords;
};

/* Finite graded-commutative algebra with dense per-degree multiplication tables and,
 * over Z_p, optional Steenrod action tables. Basis element 0 of degree 0 is the unit. */
template <class Field>
class GradedAlgebra {
public:
    using value_type = typename Field::value_type;
    using Vector = Vec<Field>;
    using OpMatrix = FMatrix<Field>; // rows: target basis, cols: source basis

    GradedAlgebra(Field field, int top, std::vector<int> dims)
        : field_(std::move(field)), n_(top), dims_(std::move(dims))
    {
        if (n_ < 0 || static_cast<int>(dims_.size()) != n_ + 1)
            throw Error(Errc::invalid_argument, "dims must have length n + 1");
        for (int d : dims_)
            if (d < 0)
                throw Error(Errc::invalid_argument, "negative dimension");
        blocks_.resize(static_cast<std::size_t>(n_ + 1));
        for (int i = 0; i <= n_; ++i) {
            blocks_[i].resize(static_cast<std::size_t>(n_ - i + 1));
            for (int j = 0; i + j <= n_; ++j)
                blocks_[i][j].assign(static_cast<std::size_t>(dims_[i]) * dims_[j] * dims_[i + j], field_.zero());
        }
        labels_.resize(dims_.size());
        for (int i = 0; i <= n_; ++i)
            for (int a = 0; a < dims_[i]; ++a)
                labels_[i].push_back("e" + std::to_string(i) + "_" + std::to_string(a));
    }

    const Field& field() const { return field_; }
    int top() const { return n_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim(int i) const { return i < 0 || i > n_ ? 0 : dims_[i]; }
    int total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

    const std::string& name() const { return name_; }
    void set_name(std::string s) { name_ = std::move(s); }
    bool poincare() const { return poincare_; }
    void set_poincare(bool b) { poincare_ = b; }
    const std::vector<std::vector<std::string>>& labels() const { return labels_; }
    void set_label(int i, int a, std::string s) { labels_.at(i).at(a) = std::move(s); }

    Vector zero_vector(int deg) const { return Vector(static_cast<std::size_t>(dim(deg)), field_.zero()); }
    Vector basis_vector(int deg, int a) const
    {
        auto v = zero_vector(deg);
        v.at(a) = field_.one();
        return v;
    }
    Element<Field> basis_element(int deg, int a) const { return {deg, basis_vector(deg, a)}; }
    Element<Field> unit() const { return basis_element(0, 0); }

    /* Coordinates of e_{i,a} * e_{j,b}; empty when i + j > n. */
    Vector product(int i, int a, int j, int b) const
    {
        if (i + j > n_)
            return {};
        const auto& blk = blocks_[i][j];
        const int d = dims_[i + j];
        const std::size_t base = (static_cast<std::size_t>(a) * dims_[j] + b) * d;
        return Vector(blk.begin() + static_cast<long>(base), blk.begin() + static_cast<long>(base + d));
    }

    const value_type& product_coord(int i, int a, int j, int b, int c) const
    {
        return blocks_[i][j][(static_cast<std::size_t>(a) * dims_[j] + b) * dims_[i + j] + c];
    }

    void set_product(int i, int a, int j, int b, const Vector& coords)
    {
        if (i < 0 || j < 0 || i + j > n_ || a < 0 || a >= dim(i) || b < 0 || b >= dim(j))
            throw Error(Errc::invalid_argument, "product index out of range");
        if (static_cast<int>(coords.size()) != dims_[i + j])
            throw Error(Errc::invalid_argument, "product coordinate length mismatch");
        const std::size_t base = (static_cast<std::size_t>(a) * dims_[j] + b) * dims_[i + j];
        for (std::size_t c = 0; c < coords.size(); ++c)
            blocks_[i][j][base + c] = coords[c];
    }

    /* x * y for homogeneous x of degree i, y of degree j. */
    Vector multiply(int i, const Vector& x, int j, const Vector& y) const
    {
        if (i + j > n_)
            return {};
        Vector out = zero_vector(i + j);
        const int d = dims_[i + j];
        const auto& blk = blocks_[i][j];
        for (int a = 0; a < dims_[i]; ++a) {
            if (field_.is_zero(x[a]))
                continue;
            for (int b = 0; b < dims_[j]; ++b) {
                if (field_.is_zero(y[b]))
                    continue;
                const auto s = field_.mul(x[a], y[b]);
                const std::size_t base = (static_cast<std::size_t>(a) * dims_[j] + b) * d;
                for (int c = 0; c < d; ++c)
                    if (!field_.is_zero(blk[base + c]))
                        out[c] = field_.add(out[c], field_.mul(s, blk[base + c]));
            }
        }
        return out;
    }

    Element<Field> multiply(const Element<Field>& x, const Element<Field>& y) const
    {
        if (x.degree + y.degree > n_)
            return {x.degree + y.degree, {}};
        return {x.degree + y.degree, multiply(x.degree, x.coords, y.degree, y.coords)};
    }

    Element<Field> power(const Element<Field>& x, int r) const
    {
        Element<Field> out = unit();
        for (int t = 0; t < r; ++t) {
            out = multiply(out, x);
            if (out.degree > n_)
                return out;
        }
        return out;
    }

    /* Matrix of y -> x * y from degree i to degree i + k (d_{i+k} x d_i). */
    OpMatrix multiplication_matrix(int k, const Vector& x, int i) const
    {
        auto m = zero_matrix(field_, dim(i + k), dim(i));
        if (i + k > n_ || i < 0)
            return m;
        for (int b = 0; b < dims_[i]; ++b) {
            const auto col = multiply(k, x, i, basis_vector(i, b));
            for (int c = 0; c < dims_[i + k]; ++c)
                m(c, b) = col[c];
        }
        return m;
    }

    // ---- Steenrod action (Z_p only) --------------------------------------------------------

    static constexpr bool supports_steenrod = std::is_same_v<Field, PrimeField>;

    bool has_steenrod() const { return has_steenrod_; }
    void enable_steenrod()
    {
        if constexpr (!supports_steenrod)
            throw Error(Errc::invalid_argument, "Steenrod tables need Z_p coefficients");
        has_steenrod_ = true;
    }

    /* Degree raised by Sq^k (p = 2) or P^k (p odd). */
    int op_shift(int k) const
    {
        const int p = field_.characteristic();
        return p == 2 ? k : 2 * k * (p - 1);
    }

    void set_steenrod(int k, int from, OpMatrix m)
    {
        enable_steenrod();
        if (k < 1 || from < 0 || from + op_shift(k) > n_)
            throw Error(Errc::invalid_argument, "Steenrod table out of range");
        if (m.rows != dim(from + op_shift(k)) || m.cols != dim(from))
            throw Error(Errc::invalid_argument, "Steenrod table shape mismatch");
        steenrod_[{k, from}] = std::move(m);
    }

    const std::map<std::pair<int, int>, OpMatrix>& steenrod_tables() const { return steenrod_; }

    /* Sq^k / P^k applied to x in degree `from`; the zero vector of the target degree, or empty
     * above the top degree. Missing tables act as zero; k = 0 is the identity. */
    Vector apply_op(int k, int from, const Vector& x) const
    {
        if (k == 0)
            return x;
        const int to = from + op_shift(k);
        if (to > n_)
            return {};
        auto it = steenrod_.find({k, from});
        if (it == steenrod_.end())
            return zero_vector(to);
        return apply(field_, it->second, x);
    }

    /* Composite exponent sequence applied to x (rightmost first). Empty if it leaves the range. */
    Vector apply_monomial(const Exponents& e, int from, Vector x) const
    {
        int deg = from;
        for (auto it = e.rbegin(); it != e.rend(); ++it) {
            x = apply_op(*it, deg, x);
            deg += op_shift(*it);
            if (deg > n_)
                return {};
        }
        return x;
    }

private:
    Field field_;
    int n_;
    std::vector<int> dims_;
    // blocks_[i][j] : dims[i] x dims[j] x dims[i+j]
    std::vector<std::vector<std::vector<value_type>>> blocks_;
    std::vector<std::vector<std::string>> labels_;
    std::map<std::pair<int, int>, OpMatrix> steenrod_;
    bool has_steenrod_ = false;
    bool poincare_ = false;
    std::string name_;
};

using ZpAlgebra = GradedAlgebra<PrimeField>;
using QAlgebra = GradedAlgebra<RationalField>;

// ---- invariants -------------------------------------------------------------------------------

template <class Field>
std::vector<int> betti(const GradedAlgebra<Field>& A)
{
    return A.dims();
}

template <class Field>
int b_odd(const GradedAlgebra<Field>& A)
{
    int s = 0;
    for (int i = 1; i <= A.top(); i += 2)
        s += A.dim(i);
    return s;
}

template <class Field>
int euler(const GradedAlgebra<Field>& A)
{
    int s = 0;
    for (int i = 0; i <= A.top(); ++i)
        s += (i % 2 ? -1 : 1) * A.dim(i);
    return s;
}

// ---- validation -------------------------------------------------------------------------------

struct AxiomFailure {
    std::string axiom;
    std::vector<std::pair<int, int>> witness; // (degree, basis index) triple or pair
    std::string detail;
};

struct ValidationReport {
    std::vector<AxiomFailure> failures;
    std::vector<std::string> checked;
    bool ok() const { return failures.empty(); }
    bool failed(const std::string& axiom) const
    {
        for (const auto& f : failures)
            if (f.axiom == axiom)
                return true;
        return false;
    }
};

namespace detail {

constexpr std::size_t max_failures_per_axiom = 16;

template <class Field>
bool vec_eq(const Field& f, const Vec<Field>& a, const Vec<Field>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!f.is_zero(f.sub(a[i], b[i])))
            return false;
    return true;
}

template <class Field>
void add_into(const Field& f, Vec<Field>& acc, const Vec<Field>& v, const typename Field::value_type& s)
{
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] = f.add(acc[i], f.mul(s, v[i]));
}

class FailureSink {
public:
    explicit FailureSink(ValidationReport& r) : r_(r) {}
    void add(const std::string& axiom, std::vector<std::pair<int, int>> w, std::string detail = {})
    {
        auto& n = counts_[axiom];
        if (n++ < max_failures_per_axiom)
            r_.failures.push_back({axiom, std::move(w), std::move(detail)});
    }

private:
    ValidationReport& r_;
    std::map<std::string, std::size_t> counts_;
};

} // namespace detail

template <class Field>
ValidationReport validate(const GradedAlgebra<Field>& A)
{
    ValidationReport report;
    detail::FailureSink sink(report);
    const Field& f = A.field();
    const int n = A.top();

    report.checked.push_back("unit");
    if (A.dim(0) != 1) {
        sink.add("unit", {{0, 0}}, "d_0 must be 1");
        return report; // nothing else is meaningful without a unit
    }
    for (int i = 0; i <= n; ++i)
        for (int b = 0; b < A.dim(i); ++b) {
            const auto e = A.basis_vector(i, b);
            if (!detail::vec_eq(f, A.product(0, 0, i, b), e))
                sink.add("unit", {{0, 0}, {i, b}}, "1 * e != e");
            if (!detail::vec_eq(f, A.product(i, b, 0, 0), e))
                sink.add("unit", {{i, b}, {0, 0}}, "e * 1 != e");
        }

    report.checked.push_back("graded-commutativity");
    for (int i = 0; i <= n; ++i)
        for (int j = i; i + j <= n; ++j)
            for (int a = 0; a < A.dim(i); ++a)
                for (int b = 0; b < A.dim(j); ++b) {
                    auto ab = A.product(i, a, j, b);
                    if ((i * j) % 2)
                        for (auto& c : ab)
                            c = f.neg(c);
                    if (!detail::vec_eq(f, A.product(j, b, i, a), ab))
                        sink.add("graded-commutativity", {{i, a}, {j, b}}, "b*a != (-1)^{|a||b|} a*b");
                }

    report.checked.push_back("associativity");
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            for (int k = 0; i + j + k <= n; ++k)
                for (int a = 0; a < A.dim(i); ++a)
                    for (int b = 0; b < A.dim(j); ++b) {
                        const auto ab = A.product(i, a, j, b);
                        for (int c = 0; c < A.dim(k); ++c) {
                            const auto lhs = A.multiply(i + j, ab, k, A.basis_vector(k, c));
                            const auto rhs = A.multiply(i, A.basis_vector(i, a), j + k, A.product(j, b, k, c));
                            if (!detail::vec_eq(f, lhs, rhs))
                                sink.add("associativity", {{i, a}, {j, b}, {k, c}}, "(ab)c != a(bc)");
                        }
                    }

    if (A.poincare()) {
        report.checked.push_back("poincare");
        if (A.dim(n) != 1) {
            sink.add("poincare", {{n, 0}}, "top degree must be one-dimensional");
        } else {
            for (int i = 0; i <= n; ++i) {
                if (A.dim(i) != A.dim(n - i)) {
                    sink.add("poincare", {{i, 0}, {n - i, 0}}, "d_i != d_{n-i}");
                    continue;
                }
                auto pairing = zero_matrix(f, A.dim(n - i), A.dim(i));
                for (int a = 0; a < A.dim(i); ++a)
                    for (int b = 0; b < A.dim(n - i); ++b)
                        pairing(b, a) = A.product_coord(i, a, n - i, b, 0);
                if (rank(f, pairing) != A.dim(i))
                    sink.add("poincare", {{i, 0}, {n - i, 0}}, "degenerate pairing");
            }
        }
    }

    if constexpr (GradedAlgebra<Field>::supports_steenrod) {
        if (A.has_steenrod()) {
            const int p = f.characteristic();
            const Prime prime(p);
            const bool two = p == 2;

            report.checked.push_back("steenrod-unstable");
            report.checked.push_back("steenrod-top-power");
            for (int j = 0; j <= n; ++j)
                for (int a = 0; a < A.dim(j); ++a) {
                    const auto x = A.basis_vector(j, a);
                    for (int k = 1; j + A.op_shift(k) <= n; ++k) {
                        const auto y = A.apply_op(k, j, x);
                        const bool above = two ? k > j : 2 * k > j;
                        const bool topk = two ? k == j : 2 * k == j;
                        if (above && !detail::vec_eq(f, y, A.zero_vector(j + A.op_shift(k))))
                            sink.add("steenrod-unstable", {{j, a}}, "operation " + std::to_string(k) + " above range");
                        if (topk) {
                            auto pw = A.power({j, x}, two ? 2 : p);
                            if (!detail::vec_eq(f, y, pw.coords))
                                sink.add("steenrod-top-power", {{j, a}}, "top operation is not the p-th power");
                        }
                    }
                }

            report.checked.push_back("cartan");
            for (int i = 0; i <= n; ++i)
                for (int j = 0; i + j <= n; ++j)
                    for (int a = 0; a < A.dim(i); ++a)
                        for (int b = 0; b < A.dim(j); ++b) {
                            const auto x = A.basis_vector(i, a);
                            const auto y = A.basis_vector(j, b);
                            const auto xy = A.product(i, a, j, b);
                            for (int k = 1; i + j + A.op_shift(k) <= n; ++k) {
                                const int to = i + j + A.op_shift(k);
                                auto rhs = A.zero_vector(to);
                                for (int s = 0; s <= k; ++s) {
                                    const int di = i + A.op_shift(s), dj = j + A.op_shift(k - s);
                                    const auto u = A.apply_op(s, i, x);
                                    const auto v = A.apply_op(k - s, j, y);
                                    detail::add_into(f, rhs, A.multiply(di, u, dj, v), f.one());
                                }
                                if (!detail::vec_eq(f, A.apply_op(k, i + j, xy), rhs))
                                    sink.add("cartan", {{i, a}, {j, b}}, "operation " + std::to_string(k));
                            }
                        }

            report.checked.push_back("adem");
            const int fac = two ? 2 : p;
            for (int j = 0; j <= n; ++j)
                for (int a = 0; a < A.dim(j); ++a) {
                    const auto x = A.basis_vector(j, a);
                    for (int bb = 1; j + A.op_shift(bb) <= n; ++bb)
                        for (int aa = 1; aa < fac * bb && j + A.op_shift(aa + bb) <= n; ++aa) {
                            const auto lhs = A.apply_monomial({aa, bb}, j, x);
                            auto rhs = A.zero_vector(j + A.op_shift(aa + bb));
                            for (const auto& t : adem_relation(aa, bb, prime)) {
                                const auto v = A.apply_monomial({t.first, t.second}, j, x);
                                detail::add_into(f, rhs, v, f.from_int(t.coeff));
                            }
                            if (!detail::vec_eq(f, lhs, rhs))
                                sink.add("adem", {{j, a}},
                                         "pair (" + std::to_string(aa) + "," + std::to_string(bb) + ")");
                        }
                }
        }
    }
    return report;
}

/* Re-expresses A in new bases: new_basis[i] row r gives new basis vector r of degree i in
 * old coordinates. Degree 0 must stay the unit. */
template <class Field>
GradedAlgebra<Field> change_basis(const GradedAlgebra<Field>& A, const std::vector<FMatrix<Field>>& new_basis)
{
    const Field& f = A.field();
    const int n = A.top();
    ensure(static_cast<int>(new_basis.size()) == n + 1, "one basis matrix per degree");
    std::vector<FMatrix<Field>> to_new(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        const auto& m = new_basis[i];
        ensure(m.rows == A.dim(i) && m.cols == A.dim(i), "basis matrix shape");
        // old coordinates c -> new coordinates x with x^T M = c^T, i.e. x = (M^T)^{-1} c
        FMatrix<Field> mt = zero_matrix(f, m.cols, m.rows);
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c)
                mt(c, r) = m(r, c);
        auto inv = inverse(f, mt);
        if (!inv)
            throw Error(Errc::invalid_argument, "basis change is singular in degree " + std::to_string(i));
        to_new[i] = *inv;
    }
    auto row = [&](int i, int r) {
        Vec<Field> v(static_cast<std::size_t>(A.dim(i)), f.zero());
        for (int c = 0; c < A.dim(i); ++c)
            v[c] = new_basis[i](r, c);
        return v;
    };
    GradedAlgebra<Field> B(f, n, A.dims());
    B.set_name(A.name());
    B.set_poincare(A.poincare());
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            for (int a = 0; a < A.dim(i); ++a)
                for (int b = 0; b < A.dim(j); ++b) {
                    const auto old = A.multiply(i, row(i, a), j, row(j, b));
                    B.set_product(i, a, j, b, apply(f, to_new[i + j], old));
                }
    if constexpr (GradedAlgebra<Field>::supports_steenrod) {
        if (A.has_steenrod()) {
            B.enable_steenrod();
            for (const auto& [key, m] : A.steenrod_tables()) {
                const auto [k, from] = key;
                const int to = from + A.op_shift(k);
                auto nm = zero_matrix(f, A.dim(to), A.dim(from));
                for (int a = 0; a < A.dim(from); ++a) {
                    const auto img = apply(f, to_new[to], apply(f, m, row(from, a)));
                    for (int c = 0; c < A.dim(to); ++c)
                        nm(c, a) = img[c];
                }
                B.set_steenrod(k, from, std::move(nm));
            }
        }
    }
    return B;
}

} // namespace steenweb

#endif // STEENWEB_RING_HPP
