#include "polyprime/smith.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "polyprime/errors.hpp"

namespace polyprime {

namespace {

i64 add_ov(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw InternalInconsistency("int64 overflow in Smith normal form");
    return r;
}

i64 mul_ov(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw InternalInconsistency("int64 overflow in Smith normal form");
    return r;
}

// row[i] -= q * row[k]
void row_axpy(IntMatrix& m, std::size_t i, std::size_t k, i64 q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < m[i].size(); ++c) m[i][c] = add_ov(m[i][c], -mul_ov(q, m[k][c]));
}

void col_axpy(IntMatrix& m, std::size_t j, std::size_t k, i64 q) {
    if (q == 0) return;
    for (auto& row : m) row[j] = add_ov(row[j], -mul_ov(q, row[k]));
}

i64 floordiv(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::vector<i64> smith_diagonal(IntMatrix m) {
    const std::size_t R = m.size();
    const std::size_t C = R ? m[0].size() : 0;
    for (auto& row : m)
        if (row.size() != C) throw InvalidArgument("ragged matrix");
    const std::size_t n = std::min(R, C);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing block keeps growth down
            std::size_t pi = R, pj = C;
            i64 best = 0;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j) {
                    i64 v = std::llabs(m[i][j]);
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (best == 0) {
                std::vector<i64> d(n, 0);
                for (std::size_t k = 0; k < t; ++k) d[k] = m[k][k];
                return d;
            }
            std::swap(m[t], m[pi]);
            for (auto& row : m) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                row_axpy(m, i, t, floordiv(m[i][t], m[t][t]));
                if (m[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                col_axpy(m, j, t, floordiv(m[t][j], m[t][t]));
                if (m[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // pivot must divide everything left over
            bool divides = true;
            for (std::size_t i = t + 1; i < R && divides; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (m[i][j] % m[t][t] != 0) {
                        for (std::size_t c = 0; c < C; ++c) m[t][c] = add_ov(m[t][c], m[i][c]);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (m[t][t] < 0) m[t][t] = -m[t][t];
    }
    std::vector<i64> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = m[k][k];
    return d;
}

AbGroup cokernel(const IntMatrix& m, std::size_t cols) {
    AbGroup g;
    if (m.empty()) {
        g.free_rank = int(cols);
        return g;
    }
    auto d = smith_diagonal(m);
    int nonzero = 0;
    for (i64 v : d) {
        if (v == 0) continue;
        ++nonzero;
        if (v > 1) g.invariant_factors.push_back(u64(v));
    }
    std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
    g.free_rank = int(cols) - nonzero;
    return g;
}

int matrix_rank(const IntMatrix& m) {
    if (m.empty()) return 0;
    int r = 0;
    for (i64 v : smith_diagonal(m))
        if (v != 0) ++r;
    return r;
}

u64 AbGroup::torsion_order() const {
    u64 r = 1;
    for (u64 d : invariant_factors) r = mul_checked(r, d);
    return r;
}

std::string AbGroup::str() const {
    if (is_trivial()) return "1";
    std::ostringstream o;
    bool first = true;
    for (auto it = invariant_factors.rbegin(); it != invariant_factors.rend(); ++it) {
        if (!first) o << "+";
        o << "Z/" << *it;
        first = false;
    }
    for (int i = 0; i < free_rank; ++i) {
        if (!first) o << "+";
        o << "Z";
        first = false;
    }
    return o.str();
}

AbGroup parse_group(const std::string& s) {
    AbGroup g;
    if (s == "1" || s.empty()) return g;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '+')) {
        if (part == "Z") {
            ++g.free_rank;
        } else if (part.rfind("Z/", 0) == 0) {
            u64 d = std::stoull(part.substr(2));
            if (d < 2) throw InvalidArgument("bad group factor '" + part + "'");
            g.invariant_factors.push_back(d);
        } else {
            throw InvalidArgument("bad group '" + s + "'");
        }
    }
    // normalise to invariant factors, e.g. Z/6+Z/4 -> Z/12+Z/2
    const std::size_t k = g.invariant_factors.size();
    IntMatrix m(k, std::vector<i64>(k, 0));
    for (std::size_t i = 0; i < k; ++i) m[i][i] = i64(g.invariant_factors[i]);
    AbGroup n = cokernel(m, k);
    n.free_rank = g.free_rank;
    return n;
}

}  // namespace polyprime
