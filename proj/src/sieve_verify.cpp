#include "polyprime/sieve_verify.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "polyprime/errors.hpp"

namespace polyprime {

std::optional<u64> residue(const ExpVec& x, u64 p) {
    if (p < 2) throw InvalidArgument("modulus must be prime");
    u64 num = 1 % p, den = 1 % p;
    for (auto [q, e] : x.entries) {
        if (q % p == 0) return std::nullopt;
        u64 r = powmod(q % p, u64(e > 0 ? e : -e), p);
        if (e > 0)
            num = mulmod(num, r, p);
        else
            den = mulmod(den, r, p);
    }
    return mulmod(num, powmod(den, p - 2, p), p);
}

namespace {

// distinct prime factors of n by trial division against `small` (which covers sqrt(n))
void prime_factors_into(u64 n, const std::vector<u64>& small, std::vector<u64>& out) {
    out.clear();
    for (u64 q : small) {
        if (q * q > n) break;
        if (n % q) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
}

u64 order_from(u64 a, u64 p, const std::vector<u64>& qs) {
    u64 ord = p - 1;
    for (u64 q : qs)
        while (ord % q == 0 && powmod(a, ord / q, p) == 1) ord /= q;
    return ord;
}

std::vector<u64> factors_of_p_minus_1(u64 p) {
    std::vector<u64> qs;
    for (auto [q, e] : factorize(p - 1)) qs.push_back(q);
    return qs;
}

std::vector<u64> all_primes_of(const ArtinInput& in) {
    std::vector<u64> bad;
    for (auto& e : in.a.entries) bad.push_back(e.prime);
    for (auto& b : in.bs)
        for (auto& e : b.entries) bad.push_back(e.prime);
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    return bad;
}

u64 isqrt(u64 x) {
    u64 r = u64(std::sqrt(double(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

}  // namespace

std::optional<u64> order_mod(const ExpVec& a, u64 p) {
    if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
    auto r = residue(a, p);
    if (!r) return std::nullopt;
    return order_from(*r, p, factors_of_p_minus_1(p));
}

std::optional<bool> in_subgroup(const ExpVec& b, const ExpVec& a, u64 p) {
    auto ord = order_mod(a, p);
    auto rb = residue(b, p);
    if (!ord || !rb) return std::nullopt;
    return powmod(*rb, *ord, p) == 1;
}

ScanTally scan_primes(const ArtinInput& in, u64 x) {
    if (!in.torsion_ok) throw PreconditionViolation("inputs are not strongly multiplicatively independent");
    ScanTally total;
    if (x < 2) return total;
    const std::vector<u64> small = detail::small_primes(isqrt(x) + 1);
    const std::vector<u64> bad = all_primes_of(in);

    // fixed ranges, merged in order: the tally does not depend on the thread count
    constexpr u64 span = u64(1) << 20;
    const u64 nranges = (x + span - 1) / span;
    std::vector<ScanTally> part(nranges);
    unsigned nt = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), unsigned(nranges)));
    auto work = [&](unsigned tid) {
        std::vector<u64> qs;
        for (u64 r = tid; r < nranges; r += nt) {
            ScanTally& t = part[r];
            const u64 lo = r * span + 1, hi = std::min(x, (r + 1) * span);
            for_each_prime(lo, hi, [&](u64 p) {
                if (std::binary_search(bad.begin(), bad.end(), p)) {
                    ++t.skipped;
                    return;
                }
                ++t.tested;
                prime_factors_into(p - 1, small, qs);
                const u64 ord = order_from(*residue(in.a, p), p, qs);
                bool member = true;
                for (auto& b : in.bs)
                    if (powmod(*residue(b, p), ord, p) != 1) {
                        member = false;
                        break;
                    }
                const u64 idx = (p - 1) / ord;
                ++t.by_index[idx];
                if (member) {
                    ++t.hits;
                    ++t.member_by_index[idx];
                }
            });
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (unsigned t = 0; t < nt; ++t) th.emplace_back(work, t);
        for (auto& t : th) t.join();
    }
    for (auto& t : part) {
        total.tested += t.tested;
        total.skipped += t.skipped;
        total.hits += t.hits;
        for (auto [k, v] : t.by_index) total.by_index[k] += v;
        for (auto [k, v] : t.member_by_index) total.member_by_index[k] += v;
    }
    return total;
}

u64 count_N(const ArtinInput& in, u64 x, u64 i) {
    if (i == 0) throw InvalidArgument("index must be positive");
    auto t = scan_primes(in, x);
    auto it = t.member_by_index.find(i);
    return it == t.member_by_index.end() ? 0 : it->second;
}

u64 count_P(const ArtinInput& in, u64 x, u64 i, u64 k) {
    if (!in.torsion_ok) throw PreconditionViolation("inputs are not strongly multiplicatively independent");
    if (i == 0 || k == 0) throw InvalidArgument("i and k must be positive");
    if (mobius(k) == 0) throw InvalidArgument("k must be squarefree");
    const std::vector<u64> kq = prime_divisors(k);
    const std::vector<u64> bad = all_primes_of(in);
    u64 count = 0;
    for_each_prime(2, x, [&](u64 p) {
        if (std::binary_search(bad.begin(), bad.end(), p)) return;
        if ((p - 1) % i) return;
        const u64 e = (p - 1) / i;
        const u64 ra = *residue(in.a, p);
        if (powmod(ra, e, p) != 1) return;
        for (auto& b : in.bs)
            if (powmod(*residue(b, p), e, p) != 1) return;
        // a must also be a (q i)-th power residue; that requires q i | p - 1
        for (u64 q : kq)
            if (e % q || powmod(ra, e / q, p) != 1) return;
        ++count;
    });
    return count;
}

VerifyReport empirical_density(const ArtinInput& in, u64 x, KernelRule rule) {
    if (x < 2) throw InvalidArgument("x must be at least 2");
    ScanTally t = scan_primes(in, x);
    VerifyReport r;
    r.x_bound = x;
    r.primes_tested = t.tested;
    r.primes_skipped = t.skipped;
    r.hits = t.hits;
    r.empirical = t.tested ? double(t.hits) / double(t.tested) : 0.0;
    r.predicted = density_exact(in, rule).numeric.convert_to<double>();
    r.abs_diff = std::fabs(r.empirical - r.predicted);
    return r;
}

}  // namespace polyprime
