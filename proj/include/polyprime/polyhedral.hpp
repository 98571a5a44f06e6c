#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyprime/e8lat.hpp"
#include "polyprime/stephens.hpp"

namespace polyprime {

// Integer combination sum_m w_m S^(nu)_{m,1}; kept symbolic so it can be fed to the series oracle.
struct LinComb {
    std::map<u64, Int> w;

    LinComb& operator+=(const LinComb& o);
    LinComb& operator-=(const LinComb& o);
    LinComb scaled(const Int& k) const;
    bool is_zero() const { return w.empty(); }
    Rational coeff(int nu = 8) const;
};

// Limit (large discriminant) density with a = z1...z9: sum over divisor tuples of the
// invariant factors of prod phi(d_h) * S_{lcm(d_h), 1}.
LinComb delta_terms(const AbGroup& H);
StephensMultiple delta_lambda(const AbGroup& H, int nu = 8);

struct DensityTableRow {
    std::string label;
    AbGroup e8q;
    AbGroup H;
    u64 count = 0;
    bool reference_type = false;
    StephensMultiple delta;
    StephensMultiple deltabar;
    LinComb deltabar_terms;
    std::optional<Rational> reference_value;
    bool constant = true;  // deltabar identical on every member of the class
};

struct PolyhedralResult {
    std::vector<DensityTableRow> rows;
    StephensMultiple aggregate;
    LinComb aggregate_terms;
    Real numeric;
    Real numeric_error;
    std::vector<std::string> anomalies;
};

// Requires compute_containment(u). Evaluates deltabar lattice by lattice in order of index.
PolyhedralResult deltabar_all(const Universe& u, const std::vector<LatticeClass>& classes);

StephensMultiple aggregate_density(const std::vector<DensityTableRow>& rows);

struct ReferenceRow {
    std::string label;
    std::string H;
    Rational value;
};
const std::vector<ReferenceRow>& reference_table1();
Rational reference_aggregate();

struct Verdict {
    std::string label, H;
    Rational computed;
    std::optional<Rational> reference;
    bool match = false;
    double oracle = 0;        // sum w_m O(m) / O(1)
    double oracle_error = 0;  // difference from the half-size truncation
    std::string favours;      // "computed", "reference" or "" when matched / not adjudicated
    bool separated = false;   // |computed - reference| > 2 * oracle_error
};

struct Comparison {
    std::vector<Verdict> rows;
    Verdict aggregate;
    int matches = 0;
    int mismatches = 0;
};

Comparison compare_paper(const PolyhedralResult& r, u64 i_max = 5000, u64 j_max = 1000);

}  // namespace polyprime
