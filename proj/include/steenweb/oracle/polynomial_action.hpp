#ifndef STEENWEB_ORACLE_POLYNOMIAL_ACTION_HPP
#define STEENWEB_ORACLE_POLYNOMIAL_ACTION_HPP

// Direct action of the Steenrod operations on Z_p[x_1..x_g]. Generators have degree 1 for p = 2
// (total square Sq(x) = x + x^2) and degree 2 for odd p (total power P(y) = y + y^p). The
// operations on monomials come from the Cartan formula with binomials from Pascal's triangle,
// so nothing here touches the Adem machinery.

#include <map>
#include <vector>

#include "../steenrod.hpp"

namespace steenweb::oracle {

using Monomial = std::vector<int>; // exponent of each generator
using Polynomial = std::map<Monomial, int>;

class PolynomialAction {
public:
    PolynomialAction(int p, int generators) : p_(p), g_(generators) {}

    int prime() const { return p_; }
    int generators() const { return g_; }

    int binom(int n, int k)
    {
        if (k < 0 || n < 0 || k > n)
            return 0;
        while (static_cast<int>(pascal_.size()) <= n) {
            const std::size_t row = pascal_.size();
            std::vector<int> next(row + 1, 1);
            for (std::size_t j = 1; j < row; ++j)
                next[j] = (pascal_[row - 1][j - 1] + pascal_[row - 1][j]) % p_;
            pascal_.push_back(std::move(next));
        }
        return pascal_[n][k];
    }

    /* P^k (or Sq^k) of a single monomial: sum over k_1 + ... + k_g = k of prod binom(a_i, k_i). */
    Polynomial apply_op(int k, const Monomial& m)
    {
        Polynomial out;
        Monomial cur(m.size());
        split(k, 0, m, cur, 1, out);
        return out;
    }

    Polynomial apply_op(int k, const Polynomial& f)
    {
        Polynomial out;
        for (const auto& [m, c] : f)
            for (const auto& [m2, c2] : apply_op(k, m))
                add(out, m2, c * c2);
        return out;
    }

    /* Composite P^{i_1} ... P^{i_s}: the rightmost operation acts first. */
    Polynomial apply_monomial(const Exponents& e, Polynomial f)
    {
        for (auto it = e.rbegin(); it != e.rend(); ++it)
            f = apply_op(*it, f);
        return f;
    }

    Polynomial apply_element(const SteenrodElement& a, const Polynomial& f)
    {
        Polynomial out;
        for (const auto& [e, c] : a.terms())
            for (const auto& [m, c2] : apply_monomial(e, f))
                add(out, m, c * c2);
        return out;
    }

    /* Every monomial with all exponents <= max_exp. */
    std::vector<Monomial> test_monomials(int max_exp) const
    {
        std::vector<Monomial> out;
        Monomial m(static_cast<std::size_t>(g_), 0);
        for (;;) {
            out.push_back(m);
            int i = 0;
            while (i < g_ && m[i] == max_exp)
                m[i++] = 0;
            if (i == g_)
                break;
            ++m[i];
        }
        return out;
    }

private:
    void add(Polynomial& f, const Monomial& m, long long c)
    {
        const int v = static_cast<int>(((c % p_) + p_) % p_);
        if (!v)
            return;
        int& slot = f[m];
        slot = (slot + v) % p_;
        if (!slot)
            f.erase(m);
    }

    void split(int left, std::size_t i, const Monomial& m, Monomial& cur, long long coeff, Polynomial& out)
    {
        if (i == m.size()) {
            if (left == 0)
                add(out, cur, coeff);
            return;
        }
        const int step = p_ == 2 ? 1 : p_ - 1; // x^a -> x^{a + k} (p = 2), y^a -> y^{a + k(p-1)}
        for (int ki = 0; ki <= std::min(left, m[i]); ++ki) {
            const int b = binom(m[i], ki);
            if (!b)
                continue;
            cur[i] = m[i] + ki * step;
            split(left - ki, i + 1, m, cur, coeff * b % p_, out);
        }
        cur[i] = m[i];
    }

    int p_;
    int g_;
    std::vector<std::vector<int>> pascal_;
};

} // namespace steenweb::oracle

#endif // STEENWEB_ORACLE_POLYNOMIAL_ACTION_HPP
