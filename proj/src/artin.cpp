#include "polyprime/artin.hpp"

#include <cmath>

#include "polyprime/errors.hpp"

namespace polyprime {

namespace {

void require_torsion(const ArtinInput& in) {
    if (!in.torsion_ok) throw PreconditionViolation("inputs are not strongly multiplicatively independent");
}

u64 pow2(int e) {
    if (e >= 63) throw InvalidArgument("2-adic exponent too large");
    return u64(1) << e;
}

int effective_C(const VElement& x, KernelRule rule) {
    if (rule == KernelRule::proof && x.C > 0) return x.C + 1;
    return x.C;
}

void fill_numeric(DensityResult& r) {
    const ConstantEstimate& s = default_constant(r.nu);
    Real c = Real(r.total.coeff);
    r.numeric = c * s.value;
    r.numeric_error = abs(c) * s.tail_bound;
}

// every tuple (d_0 | orders[0], d_1 | orders[1], ...)
template <class F>
void for_each_divisor_tuple(const std::vector<u64>& orders, F&& f) {
    std::vector<std::vector<u64>> divs;
    for (u64 o : orders) divs.push_back(divisors(o));
    std::vector<std::size_t> idx(orders.size(), 0);
    std::vector<u64> cur(orders.size());
    for (;;) {
        for (std::size_t k = 0; k < orders.size(); ++k) cur[k] = divs[k][idx[k]];
        f(cur);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == divs[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
}

}  // namespace

u64 t_ij(const ArtinInput& in, u64 i, u64 j) {
    require_torsion(in);
    u64 t = gcd(mul_checked(i, j), in.pa.m);
    for (auto& pb : in.pbs) t *= gcd(i, pb.m);
    return t;
}

u64 kernel_size(const ArtinInput& in, u64 i, u64 j, KernelRule rule) {
    require_torsion(in);
    const u64 ij = mul_checked(i, j);
    u64 count = 0;
    for (const VElement& x : build_v_group(in)) {
        if (x.mask == 0) {
            ++count;
            continue;
        }
        if (i % pow2(effective_C(x, rule))) continue;
        if (ij % x.disc) continue;
        if (x.has_a() && ij % pow2(in.pa.c + 1)) continue;
        ++count;
    }
    return count;
}

DegreeData field_degree(const ArtinInput& in, u64 i, u64 j, KernelRule rule) {
    if (i == 0 || j == 0) throw InvalidArgument("i and j must be positive");
    DegreeData d;
    d.i = i;
    d.j = j;
    d.naive = boost::multiprecision::pow(Int(i), unsigned(in.nu() + 1)) * Int(j) * Int(euler_phi(mul_checked(i, j)));
    d.t = t_ij(in, i, j);
    d.ker = kernel_size(in, i, j, rule);
    Int loss = Int(d.t) * Int(d.ker);
    if (d.naive % loss != 0)
        throw InternalInconsistency("degree loss " + loss.str() + " does not divide naive degree " + d.naive.str() +
                                    " at i=" + std::to_string(i) + ", j=" + std::to_string(j));
    d.degree = d.naive / loss;
    return d;
}

DensityResult density_exact(const ArtinInput& in, KernelRule rule) {
    require_torsion(in);
    const int nu = in.nu();
    DensityResult r;
    r.nu = nu;
    r.mode = DensityMode::full;
    r.total = {nu, 0};
    const auto V = build_v_group(in);
    std::vector<u64> orders{in.pa.m};
    for (auto& pb : in.pbs) orders.push_back(pb.m);
    const u64 two_ca = pow2(in.pa.c + 1);

    for_each_divisor_tuple(orders, [&](const std::vector<u64>& tup) {
        const u64 d = tup[0];
        u64 w = euler_phi(d), L = 1;
        std::vector<u64> dh(tup.begin() + 1, tup.end());
        for (u64 x : dh) {
            w *= euler_phi(x);
            L = lcm(L, x);
        }
        auto add = [&](int block, unsigned mask, u64 m, u64 n) {
            DensityTerm t;
            t.block = block;
            t.d = d;
            t.dh = dh;
            t.mask = mask;
            t.weight = w;
            t.m = m;
            t.n = n;
            t.value = Rational(w) * s_mn(nu, m, n);
            r.total += t.value;
            r.terms.push_back(std::move(t));
        };
        add(1, 0, L, d);
        for (const VElement& x : V) {
            if (x.mask == 0) continue;
            const u64 m = lcm(pow2(effective_C(x, rule)), L);
            if (x.has_a())
                add(2, x.mask, m, lcm(lcm(two_ca, d), x.disc));
            else
                add(3, x.mask, m, lcm(d, x.disc));
        }
    });
    fill_numeric(r);
    return r;
}

DensityResult density_limit(int nu, const std::vector<u64>& orders) {
    if (nu < 1) throw InvalidArgument("nu must be at least 1");
    if (orders.size() != std::size_t(nu) + 1)
        throw InvalidArgument("expected " + std::to_string(nu + 1) + " torsion orders (m_a, m_b1, ...), got " +
                              std::to_string(orders.size()));
    for (u64 o : orders)
        if (o == 0) throw InvalidArgument("torsion orders must be positive");
    DensityResult r;
    r.nu = nu;
    r.mode = DensityMode::limit;
    r.total = {nu, 0};
    for_each_divisor_tuple(orders, [&](const std::vector<u64>& tup) {
        DensityTerm t;
        t.d = tup[0];
        t.dh.assign(tup.begin() + 1, tup.end());
        t.weight = euler_phi(t.d);
        u64 L = 1;
        for (u64 x : t.dh) {
            t.weight *= euler_phi(x);
            L = lcm(L, x);
        }
        t.m = L;
        t.n = t.d;
        t.value = Rational(t.weight) * s_mn(nu, L, t.d);
        r.total += t.value;
        r.terms.push_back(std::move(t));
    });
    fill_numeric(r);
    return r;
}

double density_series_oracle(const ArtinInput& in, u64 i_max, u64 j_max, KernelRule rule) {
    require_torsion(in);
    if (i_max == 0 || j_max == 0) throw InvalidArgument("truncation limits must be positive");
    std::vector<int> mu(j_max + 1);
    for (u64 j = 1; j <= j_max; ++j) mu[j] = mobius(j);
    long double total = 0;
    for (u64 i = 1; i <= i_max; ++i) {
        long double row = 0;
        for (u64 j = 1; j <= j_max; ++j) {
            if (mu[j] == 0) continue;
            DegreeData d = field_degree(in, i, j, rule);
            row += mu[j] / d.degree.convert_to<long double>();
        }
        total += row;
    }
    return double(total);
}

}  // namespace polyprime
