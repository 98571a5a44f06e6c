#include "polyprime/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyprime/errors.hpp"

namespace polyprime {

namespace detail {

std::vector<u64> small_primes(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<char> comp(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) comp[j] = 1;
    }
    return out;
}

void sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base, std::vector<char>& mark) {
    mark.assign(hi - lo + 1, 1);
    for (u64 p : base) {
        if (p * p > hi) break;
        u64 start = std::max(p * p, (lo + p - 1) / p * p);
        for (u64 m = start; m <= hi; m += p) mark[m - lo] = 0;
    }
    for (u64 v = lo; v <= hi && v < 2; ++v) mark[v - lo] = 0;
}

}  // namespace detail

PrimeTable sieve_primes(u64 bound) {
    if (bound < 2) throw InvalidArgument("sieve bound must be at least 2");
    PrimeTable t;
    t.bound = bound;
    // rough upper estimate of pi(bound) to avoid regrowth
    double lb = std::log(double(bound));
    t.primes.reserve(std::size_t(1.26 * double(bound) / lb) + 16);
    for_each_prime(2, bound, [&](u64 p) { t.primes.push_back(p); });
    return t;
}

u64 mulmod(u64 a, u64 b, u64 m) {
    return u64((unsigned __int128)a * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 mul_checked(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw InvalidArgument("integer overflow (value exceeds 64 bits)");
    return r;
}

u64 lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return mul_checked(a / std::gcd(a, b), b);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this base set is deterministic for all 64-bit n
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

namespace {

const std::vector<u64>& trial_primes() {
    static const std::vector<u64> t = detail::small_primes(1000000);
    return t;
}

// Brent's variant of Pollard rho; n odd composite
u64 rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 r = 1;
        constexpr u64 m = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = rho(n);
    split(d, out);
    split(n / d, out);
}

}  // namespace

FactorMap factorize(u64 n) {
    if (n == 0) throw InvalidArgument("cannot factorize 0");
    FactorMap f;
    for (u64 p : trial_primes()) {
        if (p * p > n) break;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (n > 1) {
        std::vector<u64> big;
        split(n, big);
        std::sort(big.begin(), big.end());
        for (u64 p : big) {
            if (!f.empty() && f.back().prime == p)
                ++f.back().exponent;
            else
                f.push_back({p, 1});
        }
    }
    return f;
}

u64 factor_product(const FactorMap& f) {
    u64 r = 1;
    for (auto [p, e] : f)
        for (int i = 0; i < e; ++i) r = mul_checked(r, p);
    return r;
}

u64 euler_phi(const FactorMap& f) {
    u64 r = 1;
    for (auto [p, e] : f) {
        r *= p - 1;
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

int mobius(u64 n) {
    FactorMap f = factorize(n);
    for (auto [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 ? -1 : 1;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> d{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t k = d.size();
        u64 pp = 1;
        for (int i = 1; i <= e; ++i) {
            pp *= p;
            for (std::size_t j = 0; j < k; ++j) d.push_back(d[j] * pp);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> r;
    for (auto [p, e] : factorize(n)) r.push_back(p);
    return r;
}

Int phi_n(unsigned n, u64 x) {
    if (n == 0 || x == 0) throw InvalidArgument("phi_n needs n >= 1 and x >= 1");
    Int r = 1;
    for (auto [p, e] : factorize(x)) {
        Int pn = boost::multiprecision::pow(Int(p), n);
        r *= pn - 1;
        for (int i = 1; i < e; ++i) r *= pn;
    }
    return r;
}

double zeta(unsigned s) {
    if (s < 2) throw InvalidArgument("zeta(s) needs s >= 2");
    // Euler-Maclaurin with K = 64 through the B_8 term; the first omitted term is about
    // s(s+1)...(s+6) K^{-s-7} / 1209600, below 1e-19 for s >= 2
    constexpr int K = 64;
    long double sum = 0;
    for (int k = K - 1; k >= 1; --k) sum += std::pow((long double)k, -(long double)s);
    const long double ks = std::pow((long double)K, -(long double)s), ls = s, k2 = (long double)K * K;
    // rising factorial s(s+1)...(s+j-1)
    auto rise = [&](int j) {
        long double r = 1;
        for (int t = 0; t < j; ++t) r *= ls + t;
        return r;
    };
    sum += K * ks / (ls - 1) + ks / 2 + rise(1) * ks / (12.0L * K) - rise(3) * ks / (720.0L * K * k2) +
           rise(5) * ks / (30240.0L * K * k2 * k2) - rise(7) * ks / (1209600.0L * K * k2 * k2 * k2);
    return double(sum);
}

double phi_n_average_ratio(unsigned n, u64 x) {
    if (n < 2) throw Unsupported("average order of phi_n is only stated for n >= 2");
    if (x == 0) throw InvalidArgument("x must be positive");
    // phi_n over 1..x by a linear sieve, in long double
    std::vector<long double> val(x + 1, 0);
    std::vector<u64> primes;
    std::vector<std::uint32_t> lp(x + 1, 0);
    val[1] = 1;
    long double total = x >= 1 ? 1 : 0;
    for (u64 k = 2; k <= x; ++k) {
        if (lp[k] == 0) {
            lp[k] = std::uint32_t(k);
            primes.push_back(k);
            val[k] = std::pow((long double)k, (long double)n) - 1;
        }
        total += val[k];
        for (u64 p : primes) {
            if (p > lp[k] || p * k > x) break;
            lp[p * k] = std::uint32_t(p);
            long double pn = std::pow((long double)p, (long double)n);
            val[p * k] = (p == lp[k]) ? val[k] * pn : val[k] * (pn - 1);
        }
    }
    long double denom = std::pow((long double)x, (long double)(n + 1)) / ((n + 1) * (long double)zeta(n + 1));
    return double(total / denom);
}

u64 squarefree_kernel(u64 num, u64 den) {
    if (num == 0 || den == 0) throw InvalidArgument("squarefree kernel needs a positive rational");
    u64 g = std::gcd(num, den);
    num /= g;
    den /= g;
    u64 r = 1;
    for (auto [p, e] : factorize(num))
        if (e % 2) r = mul_checked(r, p);
    for (auto [p, e] : factorize(den))
        if (e % 2) r = mul_checked(r, p);
    return r;
}

u64 quad_discriminant(u64 num, u64 den) {
    u64 d = squarefree_kernel(num, den);
    if (d == 1) return 1;
    if (d % 4 == 1) return d;
    return mul_checked(4, d);
}

std::string to_string(const Rational& q) {
    auto n = boost::multiprecision::numerator(q);
    auto d = boost::multiprecision::denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

Rational parse_rational(const std::string& s) {
    auto bad = [&] { return InvalidArgument("not a rational number: '" + s + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto digits = [](const std::string& t, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!digits(s, true)) throw bad();
        return Rational(Int(s));
    }
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!digits(a, true) || !digits(b, false)) throw bad();
    Int den(b);
    if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
    return Rational(Int(a), den);
}

}  // namespace polyprime
