#ifndef STEENWEB_PRIME_HPP
#define STEENWEB_PRIME_HPP

#include <cstdint>
#include <vector>

#include "error.hpp"

namespace steenweb {

inline bool is_prime(long long n)
{
    if (n < 2)
        return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/* A prime modulus, verified on construction. */
class Prime {
public:
    explicit Prime(int p) : p_(p)
    {
        if (p > 46337 || !is_prime(p))
            throw Error(Errc::invalid_argument, "not a supported prime: " + std::to_string(p));
    }
    int value() const noexcept { return p_; }
    operator int() const noexcept { return p_; }
    bool is_two() const noexcept { return p_ == 2; }
    friend bool operator==(Prime a, Prime b) { return a.p_ == b.p_; }

private:
    int p_;
};

inline int mod(long long a, int p)
{
    long long r = a % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

inline int pow_mod(long long base, long long e, int p)
{
    long long result = 1;
    base = mod(base, p);
    while (e > 0) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<int>(result);
}

inline int inv_mod(long long a, int p)
{
    int r = mod(a, p);
    if (r == 0)
        throw Error(Errc::invalid_argument, "zero has no inverse mod " + std::to_string(p));
    return pow_mod(r, p - 2, p);
}

namespace detail {

/* binom(x, y) mod p for 0 <= x, y < p via Pascal's triangle. */
inline int small_binom(int x, int y, int p)
{
    if (y < 0 || y > x)
        return 0;
    long long num = 1, den = 1;
    for (int i = 0; i < y; ++i) {
        num = num * (x - i) % p;
        den = den * (i + 1) % p;
    }
    return static_cast<int>(num * inv_mod(den, p) % p);
}

} // namespace detail

/* Binomial coefficient mod p as the product of base-p digit binomials. */
inline int binom_mod_p(long long x, long long y, Prime prime)
{
    const int p = prime.value();
    if (x < 0 || y < 0 || y > x)
        return 0;
    long long result = 1;
    while (y > 0) {
        int xd = static_cast<int>(x % p), yd = static_cast<int>(y % p);
        if (yd > xd)
            return 0;
        result = result * detail::small_binom(xd, yd, p) % p;
        x /= p;
        y /= p;
    }
    return static_cast<int>(result);
}

inline bool is_power_of_two(long long l) { return l > 0 && (l & (l - 1)) == 0; }

/* p-adic valuation of k > 0. */
inline int valuation(long long k, int p)
{
    int a = 0;
    while (k % p == 0) {
        k /= p;
        ++a;
    }
    return a;
}

inline long long ipow(long long b, int e)
{
    long long r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

} // namespace steenweb

#endif // STEENWEB_PRIME_HPP
