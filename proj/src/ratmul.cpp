#include "polyprime/ratmul.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "polyprime/errors.hpp"
#include "polyprime/smith.hpp"

namespace polyprime {

i64 ExpVec::exponent_of(u64 p) const {
    for (auto& e : entries)
        if (e.prime == p) return e.exponent;
    return 0;
}

Rational ExpVec::value() const {
    Int num = 1, den = 1;
    for (auto [p, e] : entries) {
        Int pp = boost::multiprecision::pow(Int(p), unsigned(e > 0 ? e : -e));
        (e > 0 ? num : den) *= pp;
    }
    return Rational(num, den);
}

std::string ExpVec::str() const { return to_string(value()); }

ExpVec exponent_vector(u64 numerator, u64 denominator) {
    if (numerator == 0 || denominator == 0) throw InvalidArgument("numerator and denominator must be positive");
    u64 g = std::gcd(numerator, denominator);
    numerator /= g;
    denominator /= g;
    std::map<u64, i64> acc;
    for (auto [p, e] : factorize(numerator)) acc[p] += e;
    for (auto [p, e] : factorize(denominator)) acc[p] -= e;
    ExpVec v;
    for (auto [p, e] : acc)
        if (e) v.entries.push_back({p, e});
    return v;
}

ExpVec exponent_vector(const Rational& q) {
    if (q <= 0) throw InvalidArgument("only positive rationals are accepted, got " + to_string(q));
    Int n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
    if (n > Int(UINT64_MAX) || d > Int(UINT64_MAX)) throw InvalidArgument("rational too large: " + to_string(q));
    return exponent_vector(n.convert_to<u64>(), d.convert_to<u64>());
}

ExpVec parse_expvec(const std::string& s) { return exponent_vector(parse_rational(s)); }

ExpVec operator*(const ExpVec& a, const ExpVec& b) {
    std::map<u64, i64> acc;
    for (auto [p, e] : a.entries) acc[p] += e;
    for (auto [p, e] : b.entries) acc[p] += e;
    ExpVec v;
    for (auto [p, e] : acc)
        if (e) v.entries.push_back({p, e});
    return v;
}

ExpVec pow(const ExpVec& a, i64 k) {
    ExpVec v;
    if (k == 0) return v;
    for (auto [p, e] : a.entries) v.entries.push_back({p, e * k});
    return v;
}

u64 squarefree_kernel(const ExpVec& x) {
    u64 r = 1;
    for (auto [p, e] : x.entries)
        if (e % 2) r = mul_checked(r, p);
    return r;
}

u64 quad_discriminant(const ExpVec& x) {
    u64 d = squarefree_kernel(x);
    if (d == 1) return 1;
    if (d % 4 == 1) return d;
    return mul_checked(4, d);
}

PowerData power_data(const ExpVec& x) {
    if (x.is_one()) throw InvalidArgument("m_x is undefined for x = 1");
    u64 m = 0;
    for (auto [p, e] : x.entries) m = std::gcd(m, u64(e > 0 ? e : -e));
    PowerData d;
    d.m = m;
    for (auto [p, e] : x.entries) d.hat.entries.push_back({p, e / i64(m)});
    while (m % 2 == 0) {
        m /= 2;
        ++d.c;
    }
    return d;
}

namespace {

// rows = elements, columns = union of primes
IntMatrix exponent_matrix(const std::vector<ExpVec>& xs) {
    std::vector<u64> primes;
    for (auto& x : xs)
        for (auto& e : x.entries) primes.push_back(e.prime);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    IntMatrix m(xs.size(), std::vector<i64>(primes.size(), 0));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (auto [p, e] : xs[i].entries) {
            auto k = std::lower_bound(primes.begin(), primes.end(), p) - primes.begin();
            m[i][k] = e;
        }
    return m;
}

}  // namespace

bool is_mult_independent(const std::vector<ExpVec>& xs) {
    if (xs.empty()) return false;
    for (auto& x : xs)
        if (x.is_one()) return false;
    return matrix_rank(exponent_matrix(xs)) == int(xs.size());
}

bool strong_independence(const std::vector<ExpVec>& xs) {
    if (!is_mult_independent(xs)) throw InvalidArgument("inputs are multiplicatively dependent");
    std::vector<ExpVec> hats;
    for (auto& x : xs) hats.push_back(power_data(x).hat);
    for (i64 d : smith_diagonal(exponent_matrix(hats)))
        if (d != 1) return false;
    return true;
}

ArtinInput make_artin_input(const ExpVec& a, const std::vector<ExpVec>& bs) {
    if (bs.empty()) throw Unsupported("at least one b is required (nu >= 1)");
    if (bs.size() > 16) throw Unsupported("nu > 16 is not supported");
    std::vector<ExpVec> all{a};
    all.insert(all.end(), bs.begin(), bs.end());
    for (auto& x : all)
        if (x.is_one()) throw InvalidArgument("inputs must differ from 1");
    if (!is_mult_independent(all)) {
        std::string names = a.str();
        for (auto& b : bs) names += ", " + b.str();
        throw InvalidArgument("multiplicatively dependent inputs: " + names);
    }
    ArtinInput in;
    in.a = a;
    in.bs = bs;
    in.pa = power_data(a);
    for (auto& b : bs) in.pbs.push_back(power_data(b));
    in.torsion_ok = strong_independence(all);
    return in;
}

std::vector<VElement> build_v_group(const ArtinInput& in) {
    if (!in.torsion_ok)
        throw PreconditionViolation("hats do not span a saturated lattice (strong independence fails)");
    const int k = in.nu() + 1;
    std::vector<VElement> v;
    v.reserve(std::size_t(1) << k);
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        VElement e;
        e.mask = mask;
        if (mask & 1u) e.rep = e.rep * in.pa.hat;
        for (int h = 1; h < k; ++h) {
            if (!(mask & (1u << h))) continue;
            e.rep = e.rep * in.pbs[h - 1].hat;
            e.C = std::max(e.C, in.pbs[h - 1].c + 1);
        }
        e.disc = quad_discriminant(e.rep);
        v.push_back(std::move(e));
    }
    return v;
}

}  // namespace polyprime
