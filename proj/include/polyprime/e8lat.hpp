#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polyprime/arith.hpp"
#include "polyprime/smith.hpp"

namespace polyprime {

constexpr int kRoots = 240;

// 240-bit root set
struct RootBits {
    std::array<u64, 4> w{};

    void set(int i) { w[i >> 6] |= u64(1) << (i & 63); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    int count() const;
    bool subset_of(const RootBits& o) const {
        for (int k = 0; k < 4; ++k)
            if (w[k] & ~o.w[k]) return false;
        return true;
    }
    bool operator==(const RootBits&) const = default;
    bool operator<(const RootBits& o) const { return w < o.w; }
};

struct RootBitsHash {
    std::size_t operator()(const RootBits& b) const {
        u64 h = 0x9e3779b97f4a7c15ULL;
        for (u64 x : b.w) h = (h ^ x) * 0xff51afd7ed558ccdULL, h ^= h >> 33;
        return std::size_t(h);
    }
};

using Coord = std::array<int, 8>;

// Image of node 4 in Z^9:
//   plus:  e1+e2+e3
//   minus: -(e1+e2+e3), the default; sends the affine root to e8-e9
// Both give the same quotient classes.
enum class Z9Sign { plus, minus };

struct RootSystemE8 {
    // Node numbering 1..8 stored 0..7: chain 1-2-3-5-6-7-8, node 4 attached to node 3.
    std::array<std::array<int, 8>, 8> cartan{};
    std::vector<Coord> roots;                       // 240, sorted lexicographically
    std::array<std::array<std::uint8_t, kRoots>, 8> reflection{};
    std::array<int, 8> simple{};                    // indices of the simple roots
    std::vector<std::array<int, 9>> z9;             // image of each root in Z^9
    std::vector<std::int16_t> sum;                  // sum[r*240+s] = index of r+s or -1
    std::array<int, kRoots> neg{};
    Z9Sign sign = Z9Sign::minus;

    int index_of(const Coord& c) const;  // -1 if not a root
    int pairing(int r, int s) const;
    int height(int r) const;
    int highest_root() const;
    u64 digest() const;  // FNV-1a over the ordered coordinates
};

RootSystemE8 build_root_system(Z9Sign sign = Z9Sign::minus);
const RootSystemE8& e8(Z9Sign sign = Z9Sign::minus);

struct Component {
    char family;  // 'A', 'D', 'E'
    int rank;
    bool operator==(const Component&) const = default;
};

// Canonical: E before D before A, larger rank first.
struct TypeLabel {
    std::vector<Component> parts;
    std::string str() const;  // "E6+A2", "A3^2+A1^2", "D4^2"
    int rank() const;
    int root_count() const;
    bool operator==(const TypeLabel&) const = default;
};

TypeLabel parse_type(const std::string& s);
u64 weyl_order(const TypeLabel& t);

struct RootSubsystem {
    RootBits membership;
    std::vector<int> simple_roots;
    TypeLabel type;
    int rank = 0;
};

// Membership = roots in the integer span of the generators; simple roots recomputed as the
// indecomposable roots of positive height.
RootSubsystem subsystem_closure(const std::vector<int>& generators, const RootSystemE8& rs = e8());
// Same result when `base` is already a simple system (fast path).
RootSubsystem closure_from_base(const std::vector<int>& base, const RootSystemE8& rs = e8());

std::vector<RootSubsystem> bds_representatives(const RootSystemE8& rs = e8());
std::vector<RootSubsystem> enumerate_orbit(const RootSubsystem& rep, const RootSystemE8& rs = e8());

AbGroup quotient_pi(const RootSubsystem& sub, const RootSystemE8& rs = e8());
AbGroup quotient_e8(const RootSubsystem& sub, const RootSystemE8& rs = e8());
AbGroup quotient_pi(const std::vector<int>& base, const RootSystemE8& rs);
AbGroup quotient_e8(const std::vector<int>& base, const RootSystemE8& rs);

// Tabulated data for the thirteen rank-8 types counted in the reference tables.
struct ReferenceType {
    std::string label;
    u64 out;      // #Out
    u64 hash;     // (#)
    u64 weyl;     // #W_Lambda
    u64 orbit;    // #O
    std::string e8_quotient;
};
const std::vector<ReferenceType>& reference_types();

struct ReferenceClass {
    std::string label;
    std::string pi_quotient;
    u64 count;
};
const std::vector<ReferenceClass>& reference_classes();  // 16 rows

u64 oshima_count(u64 hash, u64 out, u64 weyl);

struct Lattice {
    RootBits membership;
    std::array<std::uint8_t, 8> base{};
    int type = 0;  // index into Universe::types
    AbGroup pi;
    AbGroup e8q;
};

struct Universe {
    Z9Sign sign = Z9Sign::minus;
    std::vector<TypeLabel> types;
    std::vector<Lattice> lattices;  // every rank-8 root sublattice of E8, E8 itself included
    bool from_cache = false;

    std::vector<std::vector<int>> superlattices;  // strict, filled by compute_containment
    std::vector<std::vector<int>> covers;         // immediate superlattices
};

// Enumerates (or loads from cache_path when it validates; writes it otherwise).
// An empty path disables caching.
Universe enumerate_universe(const std::string& cache_path = "", Z9Sign sign = Z9Sign::minus);
void compute_containment(Universe& u);

struct LatticeClass {
    TypeLabel type;
    AbGroup H;
    u64 count = 0;
    std::vector<int> members;
    bool reference_type = false;  // one of the thirteen tabulated types
};

std::vector<LatticeClass> classify(const Universe& u);

struct TypeTotal {
    std::string label;
    u64 enumerated = 0;
    u64 expected = 0;  // 0 when the type is not tabulated
    u64 oshima = 0;
    bool matches = false;
    bool tabulated = false;
};
std::vector<TypeTotal> type_totals(const Universe& u);

// Edge (upper type, lower type) -> number of immediate superlattices of the upper type that
// each lower lattice has; `uniform` is false if that number varies across the lower type.
struct ContainmentEdge {
    std::string upper, lower;
    u64 multiplicity = 0;
    bool uniform = true;
};
std::vector<ContainmentEdge> containment_edges(const Universe& u);

// Number of rank-8 lattices of type `lower` contained in one fixed lattice of type `upper`
// (all lattices, not only covers); uniformity checked.
u64 sublattice_count(const Universe& u, const std::string& upper, const std::string& lower, bool* uniform = nullptr);

// Fraction of E6+A1 sublattices whose Pi-quotient is torsion free.
Rational e6a1_z_ratio(Z9Sign sign = Z9Sign::minus, u64* orbit_size = nullptr);

std::string default_cache_path();

}  // namespace polyprime
