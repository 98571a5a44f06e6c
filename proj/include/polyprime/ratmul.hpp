#pragma once

#include <string>
#include <vector>

#include "polyprime/arith.hpp"

namespace polyprime {

struct ExpEntry {
    u64 prime;
    i64 exponent;
    bool operator==(const ExpEntry&) const = default;
};

// A positive rational as its signed prime-exponent vector; empty means 1.
struct ExpVec {
    std::vector<ExpEntry> entries;

    bool is_one() const { return entries.empty(); }
    bool operator==(const ExpVec&) const = default;
    i64 exponent_of(u64 p) const;
    Rational value() const;
    std::string str() const;  // "16/81"
};

ExpVec exponent_vector(u64 numerator, u64 denominator);
ExpVec exponent_vector(const Rational& q);  // q > 0, numerator and denominator fit in 64 bits
ExpVec parse_expvec(const std::string& s);

ExpVec operator*(const ExpVec& a, const ExpVec& b);
ExpVec pow(const ExpVec& a, i64 k);

u64 squarefree_kernel(const ExpVec& x);
u64 quad_discriminant(const ExpVec& x);

struct PowerData {
    u64 m = 1;
    ExpVec hat;
    int c = 0;
};

PowerData power_data(const ExpVec& x);

bool is_mult_independent(const std::vector<ExpVec>& xs);
bool strong_independence(const std::vector<ExpVec>& xs);

struct ArtinInput {
    ExpVec a;
    std::vector<ExpVec> bs;
    PowerData pa;
    std::vector<PowerData> pbs;
    bool torsion_ok = false;

    int nu() const { return int(bs.size()); }
};

// Validates positivity, x != 1, nu >= 1 and multiplicative independence.
ArtinInput make_artin_input(const ExpVec& a, const std::vector<ExpVec>& bs);

struct VElement {
    unsigned mask = 0;  // bit 0 = a-hat, bit h = b_h-hat
    ExpVec rep;
    int C = 0;
    u64 disc = 1;

    bool has_a() const { return mask & 1u; }
};

std::vector<VElement> build_v_group(const ArtinInput& in);

}  // namespace polyprime
