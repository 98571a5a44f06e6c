#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyprime/errors.hpp"
#include "polyprime/stephens.hpp"

using namespace polyprime;

namespace {

int vp(u64 n, u64 p) {
    int e = 0;
    while (n % p == 0) n /= p, ++e;
    return e;
}

// a prime with equal positive valuation in m and n
bool shares_balanced_prime(u64 m, u64 n) {
    for (u64 p : prime_divisors(m))
        if (vp(m, p) == vp(n, p)) return true;
    return false;
}

double S(int nu) { return default_constant(nu).value.convert_to<double>(); }

}  // namespace

TEST_CASE("stephens constant, single factor") {
    auto e = stephens_constant(8, 2);
    // 1 - (2^8 - 1) 2 / ((2 - 1)(2^10 - 1))
    CHECK(abs(e.value - (Real(1) - Real(510) / Real(1023))) < Real("1e-45"));
}

TEST_CASE("classical Stephens constant") {
    auto e = stephens_constant(1, 1000000);
    // the truncated product is an upper bound; the limit 0.5759599689... lies in the bracket
    const Real c("0.5759599689");
    CHECK(e.value - e.tail_bound <= c);
    CHECK(c <= e.value);
    CHECK(decimal(e.value, 6).substr(0, 8) == "0.575960");
    CHECK(e.tail_bound > 0);
    CHECK(e.tail_bound < Real("1e-6"));
}

TEST_CASE("tail bound brackets a longer product") {
    auto a = stephens_constant(2, 10000);
    auto b = stephens_constant(2, 1000000);
    CHECK(b.value <= a.value);
    CHECK(b.value >= a.value - a.tail_bound);
    CHECK(b.tail_bound < a.tail_bound);
}

TEST_CASE("tail bound at least halves when the bound grows 4x") {
    for (u64 n : {1000ULL, 10000ULL, 100000ULL}) {
        auto a = stephens_constant(8, n), b = stephens_constant(8, 4 * n);
        CHECK(b.tail_bound * 2 <= a.tail_bound);
    }
}

TEST_CASE("chunked evaluation is deterministic") {
    auto a = stephens_constant(3, 300000), b = stephens_constant(3, 300000);
    CHECK(a.value == b.value);
}

TEST_CASE("digit helpers") {
    CHECK(common_prefix_digits("0.37506267", "0.37506299") == 6);
    CHECK(common_prefix_digits("0.5", "0.5") == 1);
    auto e = stephens_constant(8, 100000);
    CHECK(certified_digits(e) >= 5);
}

TEST_CASE("Y_mn closed form") {
    CHECK(y_mn(5, 1, 1).coeff == 1);
    CHECK(y_mn(1, 1, 2).coeff == Rational(-2, 5));
    CHECK(y_mn(8, 3, 1).coeff == Rational(1, 36906));
    CHECK(y_mn(8, 3, 1).nu == 8);
}

TEST_CASE("S_mn") {
    for (u64 m = 1; m <= 12; ++m) CHECK(s_mn(3, m, 1) == y_mn(3, m, 1));
    CHECK(s_mn(1, 2, 1).coeff == Rational(3, 10));
    // relation S_{m,n} = Y_{m,[m,n]/m}
    CHECK(s_mn(1, 2, 2).coeff == Rational(3, 10));
    // the literal product over p | m/(m,n) drops the p = 2 factor here
    CHECK(s_mn_printed(1, 2, 2).coeff == Rational(1, 8));
}

TEST_CASE("relation and literal product agree unless a prime is balanced") {
    for (int nu : {1, 2, 8})
        for (u64 m = 1; m <= 12; ++m)
            for (u64 n = 1; n <= 12; ++n) {
                CHECK(s_mn(nu, m, n) == y_mn(nu, m, lcm(m, n) / m));
                const bool same = s_mn(nu, m, n) == s_mn_printed(nu, m, n);
                CHECK(same == !shares_balanced_prime(m, n));
            }
}

TEST_CASE("oracle sides with the relation where the two forms differ") {
    // S_{m,n} is the series over m | i, mn | ij restricted to... evaluated via Y_{m,[m,n]/m}
    for (auto [m, n] : std::vector<std::pair<u64, u64>>{{2, 2}, {3, 3}, {2, 6}}) {
        const double o = y_mn_oracle(1, m, lcm(m, n) / m, 2000, 500);
        const double rel = s_mn(1, m, n).coeff.convert_to<double>() * S(1);
        const double lit = s_mn_printed(1, m, n).coeff.convert_to<double>() * S(1);
        CHECK(std::abs(o - rel) < 1e-4);
        CHECK(std::abs(o - lit) > 1e-3);
    }
}

TEST_CASE("oracle examples") {
    CHECK(y_mn_oracle(3, 1, 1, 1, 1) == doctest::Approx(1.0));
    CHECK(std::abs(y_mn_oracle(1, 1, 2, 2000, 500) - (-0.4) * S(1)) < 1e-4);
    // the j-tail dominates: about 7e-4 at (200, 100), 3e-7 at (5000, 5000)
    CHECK(std::abs(y_mn_oracle(8, 1, 1, 200, 100) - S(8)) < 1e-3);
    CHECK(std::abs(y_mn_oracle(8, 1, 1, 5000, 5000) - S(8)) < 1e-6);
    CHECK_THROWS_AS(y_mn_oracle(1, 1, 1, 0, 5), InvalidArgument);
}

TEST_CASE("oracle error shrinks with truncation") {
    const double exact = y_mn(1, 2, 3).coeff.convert_to<double>() * S(1);
    const double coarse = std::abs(y_mn_oracle(1, 2, 3, 200, 50) - exact);
    const double fine = std::abs(y_mn_oracle(1, 2, 3, 2000, 500) - exact);
    CHECK(fine < coarse);
    CHECK(fine < 1e-4);
}

TEST_CASE("multiples") {
    StephensMultiple a{2, Rational(1, 3)}, b{2, Rational(1, 6)};
    CHECK((a + b).coeff == Rational(1, 2));
    CHECK((a - b).coeff == Rational(1, 6));
    CHECK((Rational(3) * a).coeff == 1);
    StephensMultiple c{3, 1};
    CHECK_THROWS(a += c);
}
