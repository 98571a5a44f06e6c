#pragma once

#include <string>
#include <vector>

#include "polyprime/arith.hpp"

namespace polyprime {

using IntMatrix = std::vector<std::vector<i64>>;

// Finite-or-not abelian group Z/d1 + ... + Z/dk + Z^free_rank with d1 | d2 | ... and every d >= 2.
struct AbGroup {
    std::vector<u64> invariant_factors;
    int free_rank = 0;

    bool operator==(const AbGroup&) const = default;
    bool operator<(const AbGroup& o) const {
        if (free_rank != o.free_rank) return free_rank < o.free_rank;
        return invariant_factors < o.invariant_factors;
    }
    u64 torsion_order() const;
    bool is_trivial() const { return invariant_factors.empty() && free_rank == 0; }
    // "1", "Z/3", "Z/6+Z/2", "Z/3+Z"; largest factor first
    std::string str() const;
};

// Diagonal of the Smith normal form (length min(rows, cols), nonnegative, each divides the next
// among the nonzero ones). Entries are int64; overflow throws InternalInconsistency.
std::vector<i64> smith_diagonal(IntMatrix m);

// Z^cols / (row span of m)
AbGroup cokernel(const IntMatrix& m, std::size_t cols);

int matrix_rank(const IntMatrix& m);

AbGroup parse_group(const std::string& s);

}  // namespace polyprime
