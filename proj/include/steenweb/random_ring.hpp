#ifndef STEENWEB_RANDOM_RING_HPP
#define STEENWEB_RANDOM_RING_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"
#include "ring.hpp"
#include "ring_builders.hpp"

namespace steenweb {

namespace detail {

inline int draw(std::mt19937_64& rng, int lo, int hi)
{
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/* One tensor factor whose Steenrod structure (over Z_p) is genuine. */
template <class Field>
GradedAlgebra<Field> random_atom(const Field& f, std::mt19937_64& rng, int max_dim)
{
    const int p = f.characteristic();
    for (;;) {
        if (max_dim < 3 || draw(rng, 0, 2) == 0)
            return build_sphere(draw(rng, 1, 8), f);
        std::vector<int> degrees;
        if (p == 2) {
            degrees = {1, 2, 4, 8};
        } else if (p == 0) {
            degrees = {2, 4, 6, 8};
        } else {
            for (int lam = 1; lam <= p - 1 && 2 * lam <= 8; ++lam)
                if ((p - 1) % lam == 0)
                    degrees.push_back(2 * lam);
        }
        const int k = degrees[static_cast<std::size_t>(draw(rng, 0, static_cast<int>(degrees.size()) - 1))];
        const int q = draw(rng, 2, std::min(max_dim - 1, std::max(2, 24 / k)));
        if (q + 1 <= max_dim)
            return build_truncated_poly(k, q, f);
    }
}

template <class Field>
typename Field::value_type random_scalar(const Field& f, std::mt19937_64& rng)
{
    if (f.characteristic() == 0)
        return f.from_int(draw(rng, -2, 2));
    return f.from_int(draw(rng, 0, f.characteristic() - 1));
}

} // namespace detail

/* Product of up to three atoms with total dimension <= max_total_dim, presented in a random
 * basis in every positive degree. Deterministic in (field, seed). */
template <class Field>
GradedAlgebra<Field> random_ring(const Field& f, std::uint64_t seed, int max_total_dim = 12)
{
    std::mt19937_64 rng(seed);
    auto A = detail::random_atom(f, rng, max_total_dim);
    const int factors = detail::draw(rng, 1, 3);
    for (int t = 1; t < factors; ++t) {
        const int room = max_total_dim / A.total_dim();
        if (room < 2)
            break;
        A = build_product(A, detail::random_atom(f, rng, room));
    }
    std::vector<FMatrix<Field>> basis;
    for (int i = 0; i <= A.top(); ++i) {
        const int d = A.dim(i);
        if (i == 0) {
            basis.push_back(identity_matrix(f, d));
            continue;
        }
        for (;;) {
            auto m = zero_matrix(f, d, d);
            for (auto& c : m.data)
                c = detail::random_scalar(f, rng);
            if (rank(f, m) == d) {
                basis.push_back(std::move(m));
                break;
            }
        }
    }
    auto B = change_basis(A, basis);
    B.set_name("random[" + std::to_string(seed) + "]:" + A.name());
    return B;
}

} // namespace steenweb

#endif // STEENWEB_RANDOM_RING_HPP
