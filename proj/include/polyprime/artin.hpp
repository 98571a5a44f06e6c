#pragma once

#include <string>
#include <vector>

#include "polyprime/ratmul.hpp"
#include "polyprime/stephens.hpp"

namespace polyprime {

// Which power of 2 must divide i for a V-element with a b-component to lie in the kernel.
//   statement: 2^{C_x}      (default)
//   proof:     2^{C_x + 1}  (alternative reading, kept for comparison)
enum class KernelRule { statement, proof };

struct DegreeData {
    u64 i = 1, j = 1;
    Int naive;  // i^{nu+1} j phi(ij)
    u64 t = 1;
    u64 ker = 1;
    Int degree;
};

u64 t_ij(const ArtinInput& in, u64 i, u64 j);
u64 kernel_size(const ArtinInput& in, u64 i, u64 j, KernelRule rule = KernelRule::statement);
DegreeData field_degree(const ArtinInput& in, u64 i, u64 j, KernelRule rule = KernelRule::statement);

struct DensityTerm {
    int block = 1;           // 1: plain, 2: x in a-hat V, 3: x in V/<a-hat>, x != 1
    u64 d = 1;               // divisor of m_a
    std::vector<u64> dh;     // divisors of the m_{b_h}
    unsigned mask = 0;       // V-element (blocks 2 and 3)
    u64 weight = 1;          // phi(d) prod phi(d_h)
    u64 m = 1, n = 1;        // S_{m,n}
    StephensMultiple value;  // weight * S_{m,n}
};

enum class DensityMode { full, limit };

struct DensityResult {
    int nu = 1;
    DensityMode mode = DensityMode::full;
    std::vector<DensityTerm> terms;
    StephensMultiple total;
    Real numeric;        // total.coeff * S^(nu) estimate
    Real numeric_error;  // |total.coeff| * tail bound of that estimate
};

DensityResult density_exact(const ArtinInput& in, KernelRule rule = KernelRule::statement);
DensityResult density_limit(int nu, const std::vector<u64>& torsion_orders);

double density_series_oracle(const ArtinInput& in, u64 i_max, u64 j_max,
                             KernelRule rule = KernelRule::statement);

}  // namespace polyprime
