#include "polyprime/stephens.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "polyprime/errors.hpp"

namespace polyprime {

StephensMultiple& StephensMultiple::operator+=(const StephensMultiple& o) {
    if (nu != o.nu) throw InvalidArgument("cannot add multiples of S^(" + std::to_string(nu) + ") and S^(" +
                                          std::to_string(o.nu) + ")");
    coeff += o.coeff;
    return *this;
}

StephensMultiple& StephensMultiple::operator-=(const StephensMultiple& o) {
    if (nu != o.nu) throw InvalidArgument("cannot subtract multiples of different S^(nu)");
    coeff -= o.coeff;
    return *this;
}

StephensMultiple operator+(StephensMultiple a, const StephensMultiple& b) { return a += b; }
StephensMultiple operator-(StephensMultiple a, const StephensMultiple& b) { return a -= b; }
StephensMultiple operator*(const Rational& k, StephensMultiple a) {
    a.coeff *= k;
    return a;
}

namespace {

Real local_factor(int nu, u64 p) {
    Real rp = Real(p);
    Real pn = boost::multiprecision::pow(rp, nu);
    return 1 - (pn - 1) * rp / ((rp - 1) * (pn * rp * rp - 1));
}

}  // namespace

ConstantEstimate stephens_constant(int nu, u64 prime_bound) {
    if (nu < 1) throw InvalidArgument("nu must be at least 1");
    if (prime_bound < 2) throw InvalidArgument("prime bound must be at least 2");
    const PrimeTable tab = sieve_primes(prime_bound);
    const auto& ps = tab.primes;

    // fixed chunking, merged left to right: the result does not depend on the thread count
    constexpr std::size_t chunk = 1 << 15;
    const std::size_t nchunks = (ps.size() + chunk - 1) / chunk;
    std::vector<Real> partial(nchunks, Real(1));
    unsigned nt = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), unsigned(nchunks)));
    auto work = [&](unsigned tid) {
        for (std::size_t c = tid; c < nchunks; c += nt) {
            Real acc = 1;
            const std::size_t e = std::min(ps.size(), (c + 1) * chunk);
            for (std::size_t k = c * chunk; k < e; ++k) acc *= local_factor(nu, ps[k]);
            partial[c] = acc;
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (unsigned t = 0; t < nt; ++t) th.emplace_back(work, t);
        for (auto& t : th) t.join();
    }
    ConstantEstimate est;
    est.nu = nu;
    est.prime_bound = prime_bound;
    est.value = 1;
    for (auto& v : partial) est.value *= v;

    // For p > N: 0 < t_p <= 1/(p(p-1)), so -log(1 - t_p) <= 1/(p^2-p-1) <= kappa/p^2.
    // Sum_{p>N} p^-2 <= -pi(N)/N^2 + 2(1 + 1.2762/ln N)/(N ln N)  (Dusart's bound on pi).
    Real N = Real(prime_bound);
    Real q = N + 1;
    Real kappa = q * q / (q * q - q - 1);
    Real lnN = log(N);
    Real sum_inv_sq = -Real(ps.size()) / (N * N) + 2 * (1 + Real("1.2762") / lnN) / (N * lnN);
    Real T = kappa * sum_inv_sq;
    est.tail_bound = est.value * (1 - exp(-T));
    return est;
}

const ConstantEstimate& default_constant(int nu) {
    static std::mutex mu;
    static std::map<int, ConstantEstimate> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(nu);
    if (it == cache.end()) it = cache.emplace(nu, stephens_constant(nu, 1000000)).first;
    return it->second;
}

std::string decimal(const Real& x, int digits) { return x.str(digits, std::ios_base::fixed); }

namespace {

// significant digits of a positive number below 1, as a string of digits
std::string mantissa(const std::string& fixed) {
    auto dot = fixed.find('.');
    std::string d = dot == std::string::npos ? fixed : fixed.substr(dot + 1);
    std::size_t k = 0;
    while (k < d.size() && d[k] == '0') ++k;
    return d.substr(k);
}

}  // namespace

int common_prefix_digits(const std::string& a, const std::string& b) {
    std::string x = mantissa(a), y = mantissa(b);
    int n = 0;
    while (std::size_t(n) < x.size() && std::size_t(n) < y.size() && x[n] == y[n]) ++n;
    return n;
}

int certified_digits(const ConstantEstimate& est) {
    return common_prefix_digits(decimal(est.value - est.tail_bound, 45), decimal(est.value, 45));
}

namespace {

Rational local_n(int nu, u64 p) {
    Int P = p;
    Int D = boost::multiprecision::pow(P, nu + 3) - boost::multiprecision::pow(P, nu + 2) -
            boost::multiprecision::pow(P, nu + 1) + 1;
    return Rational(-boost::multiprecision::pow(P, nu + 3) * (boost::multiprecision::pow(P, nu) - 1), D);
}

Rational local_m(int nu, u64 p) {
    Int P = p;
    Int D = boost::multiprecision::pow(P, nu + 3) - boost::multiprecision::pow(P, nu + 2) -
            boost::multiprecision::pow(P, nu + 1) + 1;
    return Rational(boost::multiprecision::pow(P, nu + 1) * (P * P - 1), D);
}

}  // namespace

StephensMultiple y_mn(int nu, u64 m, u64 n) {
    if (nu < 1 || m == 0 || n == 0) throw InvalidArgument("Y_mn needs nu, m, n >= 1");
    Rational c(1, boost::multiprecision::pow(Int(m) * Int(n), unsigned(nu + 2)));
    for (u64 p : prime_divisors(n)) c *= local_n(nu, p);
    for (u64 p : prime_divisors(m))
        if (n % p) c *= local_m(nu, p);
    return {nu, c};
}

StephensMultiple s_mn(int nu, u64 m, u64 n) {
    if (nu < 1 || m == 0 || n == 0) throw InvalidArgument("S_mn needs nu, m, n >= 1");
    return y_mn(nu, m, lcm(m, n) / m);
}

StephensMultiple s_mn_printed(int nu, u64 m, u64 n) {
    if (nu < 1 || m == 0 || n == 0) throw InvalidArgument("S_mn needs nu, m, n >= 1");
    u64 g = gcd(m, n), l = lcm(m, n);
    Rational c(1, boost::multiprecision::pow(Int(l), unsigned(nu + 2)));
    for (u64 p : prime_divisors(n / g)) c *= local_n(nu, p);
    for (u64 p : prime_divisors(m / g)) c *= local_m(nu, p);
    return {nu, c};
}

double y_mn_oracle(int nu, u64 m, u64 n, u64 i_max, u64 j_max) {
    if (i_max == 0 || j_max == 0) throw InvalidArgument("truncation limits must be positive");
    if (m == 0 || n == 0) throw InvalidArgument("m, n must be positive");
    const u64 top = mul_checked(i_max, j_max);
    // totients up to i_max * j_max and Moebius up to j_max
    std::vector<std::uint32_t> phi(top + 1);
    for (u64 k = 0; k <= top; ++k) phi[k] = std::uint32_t(k);
    for (u64 p = 2; p <= top; ++p)
        if (phi[p] == p)
            for (u64 k = p; k <= top; k += p) phi[k] -= phi[k] / std::uint32_t(p);
    std::vector<signed char> mu(j_max + 1, 1);
    std::vector<char> comp(j_max + 1, 0);
    for (u64 p = 2; p <= j_max; ++p) {
        if (comp[p]) continue;
        for (u64 k = p; k <= j_max; k += p) {
            if (k > p) comp[k] = 1;
            mu[k] = -mu[k];
        }
        if (p <= j_max / p)
            for (u64 k = p * p; k <= j_max; k += p * p) mu[k] = 0;
    }
    const u64 mn = mul_checked(m, n);
    long double total = 0;
    for (u64 i = m; i <= i_max; i += m) {
        const u64 need = mn / gcd(mn, i);  // mn | ij  <=>  need | j
        long double ip = std::pow((long double)i, (long double)(nu + 1));
        long double row = 0;
        for (u64 j = need; j <= j_max; j += need) {
            if (mu[j] == 0) continue;
            row += mu[j] / ((long double)j * phi[i * j]);
        }
        total += row / ip;
    }
    return double(total);
}

}  // namespace polyprime
