#include "polyprime/polyhedral.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "polyprime/errors.hpp"

namespace polyprime {

LinComb& LinComb::operator+=(const LinComb& o) {
    for (auto& [m, v] : o.w) {
        Int& x = w[m];
        x += v;
        if (x == 0) w.erase(m);
    }
    return *this;
}

LinComb& LinComb::operator-=(const LinComb& o) {
    for (auto& [m, v] : o.w) {
        Int& x = w[m];
        x -= v;
        if (x == 0) w.erase(m);
    }
    return *this;
}

LinComb LinComb::scaled(const Int& k) const {
    LinComb r;
    if (k == 0) return r;
    for (auto& [m, v] : w) r.w[m] = v * k;
    return r;
}

Rational LinComb::coeff(int nu) const {
    Rational s = 0;
    for (auto& [m, v] : w) s += Rational(v) * s_mn(nu, m, 1).coeff;
    return s;
}

LinComb delta_terms(const AbGroup& H) {
    if (H.free_rank) throw InvalidArgument("quotient " + H.str() + " is not finite");
    if (H.invariant_factors.size() > 8) throw InvalidArgument("more than 8 invariant factors in " + H.str());
    LinComb out;
    std::function<void(std::size_t, u64, u64)> rec = [&](std::size_t k, u64 l, u64 weight) {
        if (k == H.invariant_factors.size()) {
            out.w[l] += weight;
            return;
        }
        for (u64 d : divisors(H.invariant_factors[k])) rec(k + 1, lcm(l, d), weight * euler_phi(d));
    };
    rec(0, 1, 1);
    return out;
}

StephensMultiple delta_lambda(const AbGroup& H, int nu) { return {nu, delta_terms(H).coeff(nu)}; }

StephensMultiple aggregate_density(const std::vector<DensityTableRow>& rows) {
    StephensMultiple s{8, 0};
    for (auto& r : rows) s += Rational(r.count) * r.deltabar;
    return s;
}

const std::vector<ReferenceRow>& reference_table1() {
    static const std::vector<ReferenceRow> t = {
        {"A8", "Z/9", Rational(1, 363210399)},
        {"A8", "Z/3+Z/3", Rational(1, 6151)},
        {"D8", "Z/6", Rational(9227, 3155463)},
        {"E7+A1", "Z/6", Rational(9227, 3155463)},
        {"A5+A2+A1", "Z/18", Rational(Int(2187), Int("1960736456704"))},
        {"A5+A2+A1", "Z/6+Z/3", Rational(1, 2103642)},
        {"A4^2", "Z/15", Rational(Int(9227), Int("17832794670"))},
        {"E6+A2", "Z/9", Rational(1, 363210399)},
        {"E6+A2", "Z/3+Z/3", Rational(1, 6151)},
        {"A7+A1", "Z/12", Rational(Int(9227), Int("1615597056"))},
        {"D6+A1^2", "Z/6+Z/2", Rational(0)},
        {"D5+A3", "Z/12", Rational(Int(9227), Int("1615597056"))},
        {"D4^2", "Z/6+Z/2", Rational(0)},
        {"A3^2+A1^2", "Z/12+Z/2", Rational(0)},
        {"A2^4", "Z/9+Z/3", Rational(0)},
        {"A2^4", "Z/3+Z/3+Z/3", Rational(0)},
        {"E8", "Z/3", Rational(73813, 73812)},
    };
    return t;
}

Rational reference_aggregate() {
    return Rational(Int("83568208560360063877"), Int("43166735003229880320"));
}

PolyhedralResult deltabar_all(const Universe& u, const std::vector<LatticeClass>& classes) {
    const std::size_t n = u.lattices.size();
    if (u.superlattices.size() != n) throw PreconditionViolation("containment not computed");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return u.lattices[a].e8q.torsion_order() < u.lattices[b].e8q.torsion_order();
    });

    std::map<AbGroup, LinComb> delta_cache;
    std::vector<LinComb> bar(n);
    std::vector<char> done(n, 0);
    for (std::size_t k : order) {
        const Lattice& L = u.lattices[k];
        auto it = delta_cache.find(L.pi);
        if (it == delta_cache.end()) it = delta_cache.emplace(L.pi, delta_terms(L.pi)).first;
        LinComb v = it->second;
        for (int s : u.superlattices[k]) {
            if (!done[s]) throw InternalInconsistency("superlattice evaluated after its sublattice");
            v -= bar[s];
        }
        bar[k] = std::move(v);
        done[k] = 1;
    }

    std::map<std::pair<std::string, std::string>, Rational> tabulated;
    for (auto& r : reference_table1()) tabulated[{r.label, r.H}] = r.value;

    PolyhedralResult res;
    res.aggregate = {8, 0};
    for (const LatticeClass& c : classes) {
        DensityTableRow row;
        row.label = c.type.str();
        row.H = c.H;
        row.count = c.count;
        row.reference_type = c.reference_type;
        row.e8q = u.lattices[c.members[0]].e8q;
        row.delta = delta_lambda(c.H);
        const LinComb& first = bar[c.members[0]];
        for (int m : c.members)
            if (bar[m].w != first.w) {
                row.constant = false;
                break;
            }
        row.deltabar_terms = first;
        row.deltabar = {8, first.coeff()};
        auto p = tabulated.find({row.label, row.H.str()});
        if (p != tabulated.end()) row.reference_value = p->second;
        if (!row.constant) res.anomalies.push_back("deltabar not constant on class " + row.label + " " + row.H.str());
        if (row.deltabar.coeff < 0) res.anomalies.push_back("negative deltabar on " + row.label + " " + row.H.str());
        for (int m : c.members) res.aggregate_terms += bar[m];
        res.rows.push_back(std::move(row));
    }
    res.aggregate = {8, res.aggregate_terms.coeff()};
    if (res.aggregate != aggregate_density(res.rows) && res.anomalies.empty())
        throw InternalInconsistency("aggregate differs from the class-weighted sum");
    const ConstantEstimate& est = default_constant(8);
    res.numeric = Real(res.aggregate.coeff) * est.value;
    res.numeric_error = Real(abs(res.aggregate.coeff)) * est.tail_bound;
    return res;
}

namespace {

struct OracleTable {
    u64 i_max, j_max;
    std::map<u64, double> cache;

    double at(u64 m) {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        return cache[m] = y_mn_oracle(8, m, 1, i_max, j_max);
    }
    double ratio(const LinComb& c) {
        long double s = 0;
        for (auto& [m, v] : c.w) s += (long double)v.convert_to<double>() * at(m);
        return double(s / at(1));
    }
};

Verdict adjudicate(const std::string& label, const std::string& H, const LinComb& terms,
                   const std::optional<Rational>& ref, OracleTable& fine, OracleTable& coarse) {
    Verdict v;
    v.label = label;
    v.H = H;
    v.computed = terms.coeff();
    v.reference = ref;
    if (!ref) return v;
    v.match = v.computed == *ref;
    if (v.match) return v;
    v.oracle = fine.ratio(terms);
    v.oracle_error = std::abs(v.oracle - coarse.ratio(terms));
    const double c = v.computed.convert_to<double>(), r = ref->convert_to<double>();
    v.favours = std::abs(v.oracle - c) <= std::abs(v.oracle - r) ? "computed" : "reference";
    v.separated = std::abs(c - r) > 2 * v.oracle_error;
    return v;
}

}  // namespace

Comparison compare_paper(const PolyhedralResult& r, u64 i_max, u64 j_max) {
    OracleTable fine{i_max, j_max, {}}, coarse{i_max / 2, j_max / 2, {}};
    Comparison cmp;
    for (auto& row : r.rows) {
        if (!row.reference_type) continue;
        cmp.rows.push_back(adjudicate(row.label, row.H.str(), row.deltabar_terms, row.reference_value, fine, coarse));
        const Verdict& v = cmp.rows.back();
        if (!v.reference) continue;
        (v.match ? cmp.matches : cmp.mismatches)++;
    }
    cmp.aggregate = adjudicate("aggregate", "", r.aggregate_terms, reference_aggregate(), fine, coarse);
    return cmp;
}

}  // namespace polyprime
