#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace polyprime {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
// 50 significant decimal digits
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>>;

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimeFactor {
    u64 prime;
    int exponent;
    bool operator==(const PrimeFactor&) const = default;
};

using FactorMap = std::vector<PrimeFactor>;

struct PrimeTable {
    u64 bound = 0;
    std::vector<u64> primes;
};

PrimeTable sieve_primes(u64 bound);

// Calls f(p) for every prime lo <= p <= hi, ascending, one segment at a time.
template <class F>
void for_each_prime(u64 lo, u64 hi, F&& f);

FactorMap factorize(u64 n);
u64 factor_product(const FactorMap& f);

bool is_prime(u64 n);

u64 euler_phi(u64 n);
int mobius(u64 n);
u64 euler_phi(const FactorMap& f);

std::vector<u64> divisors(u64 n);
std::vector<u64> prime_divisors(u64 n);

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);  // throws on overflow

u64 mul_checked(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);

Int phi_n(unsigned n, u64 x);
double phi_n_average_ratio(unsigned n, u64 x);
double zeta(unsigned s);

u64 squarefree_kernel(u64 num, u64 den);
u64 quad_discriminant(u64 num, u64 den);

// lowest terms, "p/q" or "p"
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

// ---------------------------------------------------------------------------

namespace detail {
std::vector<u64> small_primes(u64 limit);
void sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base, std::vector<char>& mark);
}  // namespace detail

template <class F>
void for_each_prime(u64 lo, u64 hi, F&& f) {
    if (hi < 2 || lo > hi) return;
    if (lo < 2) lo = 2;
    u64 r = 1;
    while ((r + 1) * (r + 1) <= hi) ++r;
    const std::vector<u64> base = detail::small_primes(r);
    constexpr u64 seg = u64(1) << 18;
    std::vector<char> mark;
    for (u64 s = lo; s <= hi; s += seg) {
        const u64 e = std::min(hi, s + seg - 1);
        detail::sieve_segment(s, e, base, mark);
        for (u64 k = 0; k <= e - s; ++k)
            if (mark[k]) f(s + k);
        if (e == hi) break;
    }
}

}  // namespace polyprime
