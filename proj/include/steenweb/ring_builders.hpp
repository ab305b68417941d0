#ifndef STEENWEB_RING_BUILDERS_HPP
#define STEENWEB_RING_BUILDERS_HPP

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "prime.hpp"
#include "ring.hpp"

namespace steenweb {

namespace detail {

/* Whether Field[x]/x^{q+1}, |x| = k, carries the standard unstable action; returns lambda
 * (x = t^lambda with |t| = 2) for odd p, 1 for p = 2. */
template <class Field>
std::optional<int> monogenic_action(const Field& f, int k, int q)
{
    if constexpr (!std::is_same_v<Field, PrimeField>) {
        return std::nullopt;
    } else {
        const int p = f.characteristic();
        if (q == 1)
            return 1; // every positive operation vanishes
        if (p == 2)
            return is_power_of_two(k) ? std::optional<int>(1) : std::nullopt;
        if (k % 2 == 0 && (p - 1) % (k / 2) == 0)
            return k / 2;
        return std::nullopt;
    }
}

} // namespace detail

/* Field[x]/x^{q+1} with |x| = k. Over Z_p, Steenrod tables are attached when the ring carries
 * an unstable action: exterior rings, p = 2 with k a power of two (x behaves as an iterated
 * double of a degree-one class) and odd p with k = 2 lambda, lambda | p - 1 (x = t^lambda with
 * |t| = 2). Other rings come back without tables. */
template <class Field>
GradedAlgebra<Field> build_truncated_poly(int k, int q, const Field& f)
{
    if (k < 1 || q < 1)
        throw Error(Errc::invalid_argument, "truncated polynomial needs k >= 1 and q >= 1");
    if (k * static_cast<long long>(q) > 4096)
        throw Error(Errc::invalid_argument, "truncated polynomial too large");
    if (k % 2 == 1 && q >= 2 && f.characteristic() != 2)
        throw Error(Errc::invalid_argument, "odd-degree generator squares to zero outside characteristic 2");
    const int n = k * q;
    std::vector<int> dims(static_cast<std::size_t>(n + 1), 0);
    for (int i = 0; i <= q; ++i)
        dims[static_cast<std::size_t>(i * k)] = 1;
    GradedAlgebra<Field> A(f, n, dims);
    A.set_poincare(true);
    for (int i = 0; i <= q; ++i) {
        A.set_label(i * k, 0, i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
        for (int j = 0; i + j <= q; ++j)
            A.set_product(i * k, 0, j * k, 0, {f.one()});
    }
    A.set_name("trunc(" + std::to_string(k) + "," + std::to_string(q) + ")/" + f.name());

    if constexpr (std::is_same_v<Field, PrimeField>) {
        const auto act = detail::monogenic_action(f, k, q);
        if (act) {
            A.enable_steenrod();
            const Prime prime(f.characteristic());
            if (q >= 2 && f.characteristic() == 2) {
                // Sq^{kj} x^i = binom(i, j) x^{i+j}
                for (int i = 1; i <= q; ++i)
                    for (int j = 1; i + j <= q; ++j) {
                        const int c = binom_mod_p(i, j, prime);
                        if (c)
                            A.set_steenrod(k * j, i * k, FMatrix<Field>(1, 1, c));
                    }
            } else if (q >= 2) {
                // P^j x^i = binom(lambda i, j) x^{i + j (p-1)/lambda}
                const int lam = *act;
                const int step = (f.characteristic() - 1) / lam;
                for (int i = 1; i <= q; ++i)
                    for (int j = 1; i + j * step <= q; ++j) {
                        const int c = binom_mod_p(static_cast<long long>(lam) * i, j, prime);
                        if (c)
                            A.set_steenrod(j, i * k, FMatrix<Field>(1, 1, c));
                    }
            }
        }
    }
    return A;
}

template <class Field>
GradedAlgebra<Field> build_sphere(int n, const Field& f)
{
    if (n < 1)
        throw Error(Errc::invalid_argument, "sphere dimension must be >= 1");
    auto A = build_truncated_poly(n, 1, f);
    A.set_label(n, 0, "s");
    A.set_name("S" + std::to_string(n) + "/" + f.name());
    return A;
}

template <class Field>
GradedAlgebra<Field> build_cp(int m, const Field& f)
{
    if (m < 1)
        throw Error(Errc::invalid_argument, "CP^m needs m >= 1");
    auto A = build_truncated_poly(2, m, f);
    A.set_name("CP" + std::to_string(m) + "/" + f.name());
    return A;
}

/* At p = 2 this gives Sq^4 y = y^2 with Sq^1, Sq^2, Sq^3 acting trivially on y. */
template <class Field>
GradedAlgebra<Field> build_hp(int m, const Field& f)
{
    if (m < 1)
        throw Error(Errc::invalid_argument, "HP^m needs m >= 1");
    auto A = build_truncated_poly(4, m, f);
    for (int i = 0; i <= m; ++i)
        A.set_label(4 * i, 0, i == 0 ? "1" : i == 1 ? "y" : "y^" + std::to_string(i));
    A.set_name("HP" + std::to_string(m) + "/" + f.name());
    return A;
}

/* Kunneth tensor product. Degree-d basis: pairs (a in A^i, b in B^{d-i}) ordered by i, then a,
 * then b. (a x b)(a' x b') = (-1)^{|b||a'|} aa' x bb'. */
template <class Field>
GradedAlgebra<Field> build_product(const GradedAlgebra<Field>& A, const GradedAlgebra<Field>& B)
{
    if (!(A.field() == B.field()))
        throw Error(Errc::invalid_argument, "product factors must share the coefficient field");
    const Field& f = A.field();
    const int n = A.top() + B.top();
    std::vector<int> dims(static_cast<std::size_t>(n + 1), 0);
    // index[(i, a, j, b)] inside degree i + j
    std::map<std::tuple<int, int, int, int>, int> index;
    for (int d = 0; d <= n; ++d)
        for (int i = 0; i <= d; ++i) {
            const int j = d - i;
            for (int a = 0; a < A.dim(i); ++a)
                for (int b = 0; b < B.dim(j); ++b)
                    index[{i, a, j, b}] = dims[d]++;
        }
    GradedAlgebra<Field> P(f, n, dims);
    P.set_poincare(A.poincare() && B.poincare());
    const std::string an = A.name().substr(0, A.name().find('/'));
    const std::string bn = B.name().substr(0, B.name().find('/'));
    P.set_name(an + "x" + bn + "/" + f.name());
    for (const auto& [key, idx] : index) {
        const auto [i, a, j, b] = key;
        P.set_label(i + j, idx, A.labels()[i][a] + "|" + B.labels()[j][b]);
    }

    auto tensor = [&](int i, const Vec<Field>& u, int j, const Vec<Field>& v) {
        Vec<Field> out(static_cast<std::size_t>(P.dim(i + j)), f.zero());
        for (int a = 0; a < A.dim(i); ++a) {
            if (f.is_zero(u[a]))
                continue;
            for (int b = 0; b < B.dim(j); ++b)
                if (!f.is_zero(v[b]))
                    out[index.at({i, a, j, b})] = f.add(out[index.at({i, a, j, b})], f.mul(u[a], v[b]));
        }
        return out;
    };

    for (const auto& [k1, x] : index)
        for (const auto& [k2, y] : index) {
            const auto [i, a, j, b] = k1;
            const auto [i2, a2, j2, b2] = k2;
            const int d1 = i + j, d2 = i2 + j2;
            if (d1 + d2 > n)
                continue;
            Vec<Field> out(static_cast<std::size_t>(P.dim(d1 + d2)), f.zero());
            if (i + i2 <= A.top() && j + j2 <= B.top()) {
                const auto aa = A.product(i, a, i2, a2);
                auto bb = B.product(j, b, j2, b2);
                if ((j * i2) % 2)
                    for (auto& c : bb)
                        c = f.neg(c);
                out = tensor(i + i2, aa, j + j2, bb);
            }
            P.set_product(d1, x, d2, y, out);
        }

    if constexpr (GradedAlgebra<Field>::supports_steenrod) {
        if (A.has_steenrod() && B.has_steenrod()) {
            P.enable_steenrod();
            for (int k = 1; P.op_shift(k) <= n; ++k)
                for (int d = 0; d + P.op_shift(k) <= n; ++d) {
                    const int to = d + P.op_shift(k);
                    auto m = zero_matrix(f, P.dim(to), P.dim(d));
                    bool nonzero = false;
                    for (const auto& [key, col] : index) {
                        const auto [i, a, j, b] = key;
                        if (i + j != d)
                            continue;
                        for (int s = 0; s <= k; ++s) {
                            const int di = i + A.op_shift(s), dj = j + B.op_shift(k - s);
                            if (di > A.top() || dj > B.top())
                                continue;
                            const auto u = A.apply_op(s, i, A.basis_vector(i, a));
                            const auto v = B.apply_op(k - s, j, B.basis_vector(j, b));
                            const auto t = tensor(di, u, dj, v);
                            for (int r = 0; r < P.dim(to); ++r)
                                if (!f.is_zero(t[r])) {
                                    m(r, col) = f.add(m(r, col), t[r]);
                                    nonzero = true;
                                }
                        }
                    }
                    if (nonzero)
                        P.set_steenrod(k, d, std::move(m));
                }
        }
    }
    return P;
}

/* (S^2 x S^4) # g (S^3 x S^3), rational coefficients only. Basis: 1; x; u_1..u_g, v_1..v_g; z; top. */
inline QAlgebra build_connected_sum_M6(int g, const RationalField& f = RationalField())
{
    if (g < 0)
        throw Error(Errc::invalid_argument, "genus must be >= 0");
    QAlgebra A(f, 6, {1, 0, 1, 2 * g, 1, 0, 1});
    A.set_poincare(true);
    A.set_name("M6(" + std::to_string(g) + ")/Q");
    A.set_label(0, 0, "1");
    A.set_label(2, 0, "x");
    A.set_label(4, 0, "z");
    A.set_label(6, 0, "top");
    for (int i = 0; i < g; ++i) {
        A.set_label(3, i, "u" + std::to_string(i + 1));
        A.set_label(3, g + i, "v" + std::to_string(i + 1));
    }
    const std::vector<int> ds = {0, 2, 3, 4, 6};
    for (int d : ds)
        for (int a = 0; a < A.dim(d); ++a) {
            A.set_product(0, 0, d, a, A.basis_vector(d, a));
            A.set_product(d, a, 0, 0, A.basis_vector(d, a));
        }
    A.set_product(2, 0, 4, 0, {Rational(1)});
    A.set_product(4, 0, 2, 0, {Rational(1)});
    for (int i = 0; i < g; ++i) {
        A.set_product(3, i, 3, g + i, {Rational(1)});
        A.set_product(3, g + i, 3, i, {Rational(-1)});
    }
    return A;
}

} // namespace steenweb

#endif // STEENWEB_RING_BUILDERS_HPP
