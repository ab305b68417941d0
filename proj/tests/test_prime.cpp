#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "steenweb/error.hpp"
#include "steenweb/prime.hpp"

using namespace steenweb;
using boost::multiprecision::cpp_int;

namespace {

// exact binomial, reduced afterwards
int exact_binom_mod(int x, int y, int p)
{
    if (y < 0 || y > x)
        return 0;
    cpp_int b = 1;
    for (int i = 1; i <= y; ++i)
        b = b * (x - y + i) / i;
    return static_cast<int>(b % p);
}

} // namespace

TEST(Prime, RejectsComposites)
{
    EXPECT_THROW(Prime(1), Error);
    EXPECT_THROW(Prime(4), Error);
    EXPECT_THROW(Prime(91), Error);
    EXPECT_NO_THROW(Prime(2));
    EXPECT_NO_THROW(Prime(97));
    EXPECT_TRUE(Prime(2).is_two());
}

TEST(Binom, DigitRuleExamples)
{
    EXPECT_EQ(binom_mod_p(5, 2, Prime(3)), 1);
    EXPECT_EQ(binom_mod_p(17, 0, Prime(5)), 1);
    EXPECT_EQ(binom_mod_p(0, 0, Prime(7)), 1);
    EXPECT_EQ(binom_mod_p(1, 2, Prime(2)), 0);
}

TEST(Binom, AgreesWithExactIntegers)
{
    for (int p : {2, 3, 5, 7, 11})
        for (int x = 0; x <= 80; ++x)
            for (int y = 0; y <= x + 2; ++y)
                ASSERT_EQ(binom_mod_p(x, y, Prime(p)), exact_binom_mod(x, y, p)) << x << " " << y << " " << p;
}

TEST(Binom, NegativeTopIsZero)
{
    EXPECT_EQ(binom_mod_p(-1, 0, Prime(3)), 0);
    EXPECT_EQ(binom_mod_p(-1, 2, Prime(2)), 0);
}

TEST(Arithmetic, Helpers)
{
    EXPECT_EQ(mod(-1, 3), 2);
    EXPECT_EQ(valuation(54, 3), 3);
    EXPECT_EQ(valuation(7, 2), 0);
    EXPECT_EQ(pow_mod(2, 10, 7), 1024 % 7);
    for (int a = 1; a < 13; ++a)
        EXPECT_EQ(a * inv_mod(a, 13) % 13, 1);
    EXPECT_TRUE(is_power_of_two(1));
    EXPECT_TRUE(is_power_of_two(64));
    EXPECT_FALSE(is_power_of_two(96));
}
