#ifndef STEENWEB_FIELD_HPP
#define STEENWEB_FIELD_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "prime.hpp"

namespace steenweb {

using Rational = boost::multiprecision::cpp_rational;

/* The prime field Z_p; elements are canonical residues in [0, p). */
struct PrimeField {
    using value_type = int;

    explicit PrimeField(Prime prime) : p(prime.value()) {}
    explicit PrimeField(int prime) : p(Prime(prime).value()) {}

    int p;

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p; }
    value_type from_int(long long v) const { return mod(v, p); }
    value_type add(value_type a, value_type b) const { return (a + b) % p; }
    value_type sub(value_type a, value_type b) const { return (a - b + p) % p; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const
    {
        return static_cast<int>(static_cast<long long>(a) * b % p);
    }
    value_type inv(value_type a) const { return inv_mod(a, p); }
    bool is_zero(value_type a) const { return a == 0; }
    bool is_rational() const { return false; }
    int characteristic() const { return p; }
    std::string name() const { return "Z" + std::to_string(p); }
    std::string to_string(value_type a) const { return std::to_string(a); }
    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p == b.p; }
};

/* Exact rationals. */
struct RationalField {
    using value_type = Rational;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long long v) const { return Rational(v); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const
    {
        if (a == 0)
            throw Error(Errc::invalid_argument, "zero has no inverse");
        return 1 / a;
    }
    bool is_zero(const value_type& a) const { return a == 0; }
    bool is_rational() const { return true; }
    int characteristic() const { return 0; }
    std::string name() const { return "Q"; }
    std::string to_string(const value_type& a) const
    {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (denominator(a) == 1)
            return numerator(a).str();
        return numerator(a).str() + "/" + denominator(a).str();
    }
    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

} // namespace steenweb

#endif // STEENWEB_FIELD_HPP
