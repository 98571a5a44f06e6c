#pragma once

#include <map>
#include <optional>

#include "polyprime/artin.hpp"
#include "polyprime/ratmul.hpp"

namespace polyprime {

// x mod p, or nothing when p divides the numerator or denominator of x
std::optional<u64> residue(const ExpVec& x, u64 p);

std::optional<u64> order_mod(const ExpVec& a, u64 p);
std::optional<bool> in_subgroup(const ExpVec& b, const ExpVec& a, u64 p);

// Index [F_p^* : <a>] and whether every b lies in <a>, for one good prime.
struct PrimeObservation {
    u64 p;
    u64 index;
    bool member;
};

struct ScanTally {
    u64 tested = 0;
    u64 skipped = 0;
    u64 hits = 0;
    std::map<u64, u64> by_index;         // all tested primes, keyed by index
    std::map<u64, u64> member_by_index;  // N_{A,i}(x)
};

ScanTally scan_primes(const ArtinInput& in, u64 x);

u64 count_N(const ArtinInput& in, u64 x, u64 i);
u64 count_P(const ArtinInput& in, u64 x, u64 i, u64 k);

struct VerifyReport {
    u64 x_bound = 0;
    u64 primes_tested = 0;
    u64 primes_skipped = 0;
    u64 hits = 0;
    double empirical = 0;
    double predicted = 0;
    double abs_diff = 0;
};

VerifyReport empirical_density(const ArtinInput& in, u64 x, KernelRule rule = KernelRule::statement);

}  // namespace polyprime
