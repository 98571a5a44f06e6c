#pragma once

#include <string>

#include "polyprime/arith.hpp"

namespace polyprime {

// coeff * S^(nu)
struct StephensMultiple {
    int nu = 1;
    Rational coeff = 0;

    StephensMultiple& operator+=(const StephensMultiple& o);
    StephensMultiple& operator-=(const StephensMultiple& o);
    bool operator==(const StephensMultiple&) const = default;
};

StephensMultiple operator+(StephensMultiple a, const StephensMultiple& b);
StephensMultiple operator-(StephensMultiple a, const StephensMultiple& b);
StephensMultiple operator*(const Rational& k, StephensMultiple a);

struct ConstantEstimate {
    int nu = 1;
    u64 prime_bound = 2;
    Real value;       // truncated product over p <= prime_bound
    Real tail_bound;  // true constant lies in [value - tail_bound, value]
};

ConstantEstimate stephens_constant(int nu, u64 prime_bound);

// Cached estimate at the default bound 10^6, used for numeric density values.
const ConstantEstimate& default_constant(int nu);

// Number of leading significant digits of `reference` that every number within
// [est.value - tail_bound, est.value] shares; also the length of the common prefix
// of the two decimal expansions is reported by common_prefix_digits.
int certified_digits(const ConstantEstimate& est);
int common_prefix_digits(const std::string& a, const std::string& b);
std::string decimal(const Real& x, int digits);

StephensMultiple y_mn(int nu, u64 m, u64 n);
StephensMultiple s_mn(int nu, u64 m, u64 n);
// Literal product "p | n/(m,n)", "p | m/(m,n)" form; differs from s_mn when m, n share primes.
StephensMultiple s_mn_printed(int nu, u64 m, u64 n);

double y_mn_oracle(int nu, u64 m, u64 n, u64 i_max, u64 j_max);

}  // namespace polyprime
