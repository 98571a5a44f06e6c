#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "polyprime/e8lat.hpp"
#include "polyprime/errors.hpp"

using namespace polyprime;

namespace {

Universe& universe() {
    static Universe u = [] {
        Universe v = enumerate_universe(default_cache_path());
        compute_containment(v);
        return v;
    }();
    return u;
}

std::string label(const Universe& u, const Lattice& l) { return u.types[l.type].str(); }

// Z^9 rows; does the row span of `rows` contain v? Hermite-style elimination with i64.
struct Span9 {
    std::vector<std::array<i64, 9>> rows;  // echelon, pivot columns increasing
    std::vector<int> piv;

    void add(std::array<i64, 9> v) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            int c = piv[k];
            while (v[c]) {
                // Euclid between rows[k] and v on column c
                i64 q = rows[k][c] / v[c];
                for (int j = 0; j < 9; ++j) rows[k][j] -= q * v[j];
                std::swap(rows[k], v);
            }
        }
        for (int c = 0; c < 9; ++c)
            if (v[c]) {
                // insert keeping pivots sorted
                std::size_t at = 0;
                while (at < piv.size() && piv[at] < c) ++at;
                rows.insert(rows.begin() + at, v);
                piv.insert(piv.begin() + at, c);
                // re-reduce later rows against the new one
                auto tail = std::vector<std::array<i64, 9>>(rows.begin() + at + 1, rows.end());
                rows.resize(at + 1);
                piv.resize(at + 1);
                for (auto& t : tail) add(t);
                return;
            }
    }
    bool contains(std::array<i64, 9> v) const {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            int c = piv[k];
            if (v[c] % rows[k][c]) return false;
            i64 q = v[c] / rows[k][c];
            for (int j = 0; j < 9; ++j) v[j] -= q * rows[k][j];
        }
        for (i64 x : v)
            if (x) return false;
        return true;
    }
};

// exponent of Z^9 / <Lambda, (1,...,1)>
u64 exponent_oracle(const Lattice& l, const RootSystemE8& rs) {
    Span9 s;
    for (int b : l.base) {
        std::array<i64, 9> v{};
        for (int j = 0; j < 9; ++j) v[j] = rs.z9[b][j];
        s.add(v);
    }
    std::array<i64, 9> ones;
    ones.fill(1);
    s.add(ones);
    for (u64 e = 1; e <= 64; ++e) {
        bool all = true;
        for (int i = 0; i < 9 && all; ++i) {
            std::array<i64, 9> v{};
            v[i] = i64(e);
            all = s.contains(v);
        }
        if (all) return e;
    }
    return 0;
}

}  // namespace

TEST_CASE("root system") {
    const auto& rs = e8();
    CHECK(rs.roots.size() == 240);
    const int h = rs.highest_root();
    CHECK(rs.height(h) == 29);
    // branch node 3 carries 6, the leaf 4 on it carries 3
    CHECK(rs.roots[h] == Coord{2, 4, 6, 3, 5, 4, 3, 2});
    for (int i = 0; i < 8; ++i) {
        const auto& perm = rs.reflection[i];
        std::set<int> seen;
        for (int r = 0; r < 240; ++r) {
            CHECK(perm[perm[r]] == r);
            seen.insert(perm[r]);
        }
        CHECK(seen.size() == 240);
        CHECK(perm[rs.simple[i]] == rs.neg[rs.simple[i]]);
        CHECK(rs.pairing(rs.simple[i], rs.simple[i]) == 2);
    }
    int pos = 0;
    for (int r = 0; r < 240; ++r) pos += rs.height(r) > 0;
    CHECK(pos == 120);
}

TEST_CASE("z9 embedding") {
    for (auto sign : {Z9Sign::plus, Z9Sign::minus}) {
        const auto& rs = e8(sign);
        const int k = sign == Z9Sign::minus ? -1 : 1;
        CHECK(rs.z9[rs.simple[3]] == std::array<int, 9>{k, k, k, 0, 0, 0, 0, 0, 0});
        CHECK(rs.z9[rs.simple[2]] == std::array<int, 9>{0, 0, 1, -1, 0, 0, 0, 0, 0});
        CHECK(rs.z9[rs.simple[7]] == std::array<int, 9>{0, 0, 0, 0, 0, 0, 1, -1, 0});
        // in Pi = Z^9/(1,...,1) the affine root -theta is e8 - e9 only for the minus sign
        const auto& t = rs.z9[rs.neg[rs.highest_root()]];
        std::array<int, 9> e89{0, 0, 0, 0, 0, 0, 0, 1, -1};
        bool same = true;
        for (int j = 0; j < 9; ++j) same &= t[j] - e89[j] == t[0] - e89[0];
        CHECK(same == (sign == Z9Sign::minus));
    }
}

TEST_CASE("subsystem closure") {
    const auto& rs = e8();
    auto all = subsystem_closure({rs.simple.begin(), rs.simple.end()});
    CHECK(all.type.str() == "E8");
    CHECK(all.membership.count() == 240);
    auto one = subsystem_closure({rs.simple[0]});
    CHECK(one.type.str() == "A1");
    CHECK(one.membership.count() == 2);
    CHECK_THROWS_AS(subsystem_closure({rs.simple[0], rs.neg[rs.simple[0]]}), InvalidArgument);
    // nodes 1,2,3,4,5,6 and 8: E6 + A1
    auto e6a1 = subsystem_closure({rs.simple[0], rs.simple[1], rs.simple[2], rs.simple[3], rs.simple[4],
                                   rs.simple[5], rs.simple[7]});
    CHECK(e6a1.type.str() == "E6+A1");
    CHECK(e6a1.membership.count() == 74);
    // affine diagram: dropping the leaf 4 leaves the chain A8, dropping the branch node 3 leaves A5+A2+A1
    auto drop = [&](int k) {
        std::vector<int> g{rs.neg[rs.highest_root()]};
        for (int i = 0; i < 8; ++i)
            if (i != k) g.push_back(rs.simple[i]);
        return subsystem_closure(g);
    };
    auto s = drop(3);
    CHECK(s.type.str() == "A8");
    CHECK(s.membership.count() == 72);
    CHECK(drop(2).type.str() == "A5+A2+A1");
    CHECK(drop(2).membership.count() == 38);
}

TEST_CASE("type labels") {
    for (std::string s : {"E8", "A5+A2+A1", "A3^2+A1^2", "A2^4", "D4^2", "E6+A2", "D6+A1^2"})
        CHECK(parse_type(s).str() == s);
    CHECK(parse_type("A5+A2+A1").root_count() == 38);
    CHECK(weyl_order(parse_type("E8")) == 696729600);
    CHECK(weyl_order(parse_type("D6+A1^2")) == 92160);
    CHECK_THROWS_AS(parse_type("F4"), InvalidArgument);
}

TEST_CASE("oshima counts") {
    CHECK(oshima_count(1, 2, 362880) == 960);
    CHECK(oshima_count(6, 72, 36864) == 1575);
    CHECK(oshima_count(1, 1, 696729600) == 1);
    // with the tabulated Weyl order 645120 the D6+A1^2 row gives 540; the true order 92160 gives 3780
    CHECK(oshima_count(2, 4, 645120) == 540);
    CHECK(oshima_count(2, 4, 92160) == 3780);
}

TEST_CASE("representatives cover every tabulated type") {
    auto reps = bds_representatives();
    std::set<std::string> seen;
    for (auto& r : reps) seen.insert(r.type.str());
    for (auto& t : reference_types()) CHECK(seen.count(t.label));
    CHECK(seen.count("E6+A1"));
}

TEST_CASE("orbits") {
    for (auto& r : bds_representatives()) {
        if (r.type.str() == "E8") CHECK(enumerate_orbit(r).size() == 1);
        if (r.type.str() == "D8") CHECK(enumerate_orbit(r).size() == 135);
    }
}

TEST_CASE("enumeration totals") {
    auto& u = universe();
    std::map<std::string, u64> n;
    for (auto& l : u.lattices) ++n[label(u, l)];
    CHECK(n["E8"] == 1);
    CHECK(n["A8"] == 960);
    CHECK(n["D8"] == 135);
    CHECK(n["A3^2+A1^2"] == 37800);
    CHECK(n["A2^4"] == 11200);
    CHECK(n["D6+A1^2"] == 3780);
    for (auto& t : type_totals(u)) {
        INFO(t.label);
        if (t.tabulated) CHECK(t.enumerated == t.oshima);
        if (t.tabulated && t.label != "D6+A1^2") CHECK(t.matches);
    }
    u64 total = 0;
    for (auto& c : classify(u)) total += c.count;
    CHECK(total == u.lattices.size());
}

TEST_CASE("quotients") {
    auto& u = universe();
    std::map<std::string, std::string> table4;
    for (auto& t : reference_types()) table4[t.label] = t.e8_quotient;
    for (auto& l : u.lattices) {
        CHECK(l.pi.torsion_order() == 3 * l.e8q.torsion_order());
        CHECK(l.pi.free_rank == 0);
        auto it = table4.find(label(u, l));
        if (it != table4.end() && l.e8q.str() != it->second) FAIL_CHECK(label(u, l) << " " << l.e8q.str());
    }
    const auto& rs = e8();
    auto all = subsystem_closure({rs.simple.begin(), rs.simple.end()});
    CHECK(quotient_pi(all).str() == "Z/3");
    CHECK(quotient_e8(all).is_trivial());
}

TEST_CASE("class counts") {
    std::map<std::pair<std::string, std::string>, u64> got;
    for (auto& c : classify(universe())) got[{c.type.str(), c.H.str()}] = c.count;
    CHECK(got[{"D8", "Z/6"}] == 135);
    CHECK(got[{"A5+A2+A1", "Z/18"}] == 27216);
    CHECK(got[{"A5+A2+A1", "Z/6+Z/3"}] == 13104);
    CHECK(got[{"E6+A2", "Z/9"}] == 756);
    CHECK(got[{"A2^4", "Z/9+Z/3"}] == 10080);
    CHECK(got[{"A8", "Z/9"}] == 645);
    CHECK(got[{"A8", "Z/3+Z/3"}] == 315);
}

TEST_CASE("Pi-quotient exponent oracle") {
    auto& u = universe();
    const auto& rs = e8(u.sign);
    std::map<std::pair<std::string, u64>, u64> by_exp;
    for (auto& l : u.lattices) {
        const std::string t = label(u, l);
        if (t != "A8" && t != "E6+A2" && t != "A2^4") continue;
        const u64 e = exponent_oracle(l, rs);
        CHECK(e == l.pi.invariant_factors.back());
        ++by_exp[{t, e}];
    }
    CHECK(by_exp[{"A8", 9}] == 645);
    CHECK(by_exp[{"A8", 3}] == 315);
    CHECK(by_exp[{"E6+A2", 9}] == 756);
    CHECK(by_exp[{"A2^4", 9}] == 10080);
}

TEST_CASE("both z9 signs give the same classes") {
    auto a = enumerate_universe("", Z9Sign::plus);
    std::map<std::pair<std::string, std::string>, u64> ca, cb;
    for (auto& c : classify(a)) ca[{c.type.str(), c.H.str()}] = c.count;
    for (auto& c : classify(universe())) cb[{c.type.str(), c.H.str()}] = c.count;
    CHECK(ca == cb);
}

TEST_CASE("containment") {
    auto& u = universe();
    std::map<std::pair<std::string, std::string>, ContainmentEdge> e;
    for (auto& x : containment_edges(u)) e[{x.upper, x.lower}] = x;
    auto mult = [&](const char* up, const char* lo) {
        auto it = e.find({up, lo});
        if (it == e.end()) return u64(0);
        CHECK(it->second.uniform);
        return it->second.multiplicity;
    };
    for (const char* t : {"A8", "D8", "E6+A2", "E7+A1", "A4^2"}) CHECK(mult("E8", t) == 1);
    CHECK(mult("D8", "D5+A3") == 1);
    CHECK(mult("D8", "D4^2") == 3);
    CHECK(mult("D8", "D6+A1^2") == 1);
    CHECK(mult("E6+A2", "A2^4") == 4);
    CHECK(mult("E6+A2", "A5+A2+A1") == 1);
    CHECK(mult("E7+A1", "A5+A2+A1") == 1);
    CHECK(mult("E7+A1", "A7+A1") == 1);
    CHECK(mult("E7+A1", "D6+A1^2") == 2);
    CHECK(mult("D5+A3", "A3^2+A1^2") == 2);
    CHECK(mult("D6+A1^2", "A3^2+A1^2") == 1);

    bool uniform = false;
    CHECK(sublattice_count(u, "D8", "D4^2", &uniform) == 35);
    CHECK(uniform);

    // antisymmetry
    for (std::size_t i = 0; i < u.lattices.size(); i += 97)
        for (int s : u.superlattices[i]) {
            CHECK(u.lattices[i].membership.subset_of(u.lattices[s].membership));
            CHECK_FALSE(u.lattices[s].membership == u.lattices[i].membership);
        }
}

TEST_CASE("E6+A1 torsion-free share") {
    u64 orbit = 0;
    CHECK(e6a1_z_ratio(Z9Sign::minus, &orbit) == Rational(27, 40));
    CHECK(orbit > 0);
    CHECK(e6a1_z_ratio(Z9Sign::plus) == Rational(27, 40));
}

TEST_CASE("cache round trip and corruption") {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / "polyprime_test_cache.txt";
    fs::remove(p);
    auto a = enumerate_universe(p.string());
    CHECK_FALSE(a.from_cache);
    REQUIRE(fs::exists(p));
    auto b = enumerate_universe(p.string());
    CHECK(b.from_cache);
    REQUIRE(a.lattices.size() == b.lattices.size());
    for (std::size_t i = 0; i < a.lattices.size(); i += 101) {
        CHECK(a.lattices[i].membership == b.lattices[i].membership);
        CHECK(a.lattices[i].pi == b.lattices[i].pi);
    }

    std::string text;
    {
        std::ifstream in(p);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto corrupt = [&](std::string t) {
        std::ofstream(p) << t;
        CHECK_THROWS_AS(enumerate_universe(p.string()), CacheError);
    };
    corrupt(text.substr(0, text.size() / 2));  // truncated
    std::string t2 = text;
    t2.replace(t2.find("digest ") + 7, 4, "dead");
    corrupt(t2);
    std::string t3 = text;
    auto line = t3.find("\nA8 ");
    REQUIRE(line != std::string::npos);
    t3.replace(line + 1, 2, "D8");  // wrong label
    corrupt(t3);
    fs::remove(p);
}
