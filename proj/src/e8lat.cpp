#include "polyprime/e8lat.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "polyprime/errors.hpp"

namespace polyprime {

int RootBits::count() const {
    int c = 0;
    for (u64 x : w) c += __builtin_popcountll(x);
    return c;
}

// ---------------------------------------------------------------------------
// root system

namespace {

const int kEdges[7][2] = {{0, 1}, {1, 2}, {2, 4}, {4, 5}, {5, 6}, {6, 7}, {2, 3}};

int pair_coords(const std::array<std::array<int, 8>, 8>& C, const Coord& a, const Coord& b) {
    int s = 0;
    for (int i = 0; i < 8; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < 8; ++j) s += a[i] * C[i][j] * b[j];
    }
    return s;
}

}  // namespace

RootSystemE8 build_root_system(Z9Sign sign) {
    RootSystemE8 rs;
    rs.sign = sign;
    for (int i = 0; i < 8; ++i) rs.cartan[i][i] = 2;
    for (auto& e : kEdges) rs.cartan[e[0]][e[1]] = rs.cartan[e[1]][e[0]] = -1;

    std::set<Coord> seen;
    std::vector<Coord> todo;
    for (int i = 0; i < 8; ++i) {
        Coord c{};
        c[i] = 1;
        seen.insert(c);
        todo.push_back(c);
    }
    while (!todo.empty()) {
        Coord v = todo.back();
        todo.pop_back();
        for (int i = 0; i < 8; ++i) {
            int p = 0;
            for (int j = 0; j < 8; ++j) p += v[j] * rs.cartan[j][i];
            if (!p) continue;
            Coord w = v;
            w[i] -= p;
            if (seen.insert(w).second) todo.push_back(w);
        }
    }
    if (seen.size() != kRoots)
        throw InternalInconsistency("E8 closure produced " + std::to_string(seen.size()) + " roots");
    rs.roots.assign(seen.begin(), seen.end());

    std::map<Coord, int> idx;
    for (int r = 0; r < kRoots; ++r) idx[rs.roots[r]] = r;
    for (int i = 0; i < 8; ++i) {
        Coord c{};
        c[i] = 1;
        rs.simple[i] = idx.at(c);
    }
    for (int r = 0; r < kRoots; ++r) {
        Coord n;
        for (int k = 0; k < 8; ++k) n[k] = -rs.roots[r][k];
        rs.neg[r] = idx.at(n);
        for (int i = 0; i < 8; ++i) {
            int p = 0;
            for (int j = 0; j < 8; ++j) p += rs.roots[r][j] * rs.cartan[j][i];
            Coord w = rs.roots[r];
            w[i] -= p;
            rs.reflection[i][r] = std::uint8_t(idx.at(w));
        }
    }
    rs.sum.assign(kRoots * kRoots, -1);
    for (int r = 0; r < kRoots; ++r)
        for (int s = 0; s < kRoots; ++s) {
            Coord t;
            for (int k = 0; k < 8; ++k) t[k] = rs.roots[r][k] + rs.roots[s][k];
            auto it = idx.find(t);
            if (it != idx.end()) rs.sum[r * kRoots + s] = std::int16_t(it->second);
        }

    // images of the simple roots: nodes 1,2,3 -> e1-e2, e2-e3, e3-e4; node 4 -> +-(e1+e2+e3);
    // nodes 5..8 -> e4-e5 .. e7-e8
    std::array<std::array<int, 9>, 8> img{};
    img[0][0] = 1, img[0][1] = -1;
    img[1][1] = 1, img[1][2] = -1;
    img[2][2] = 1, img[2][3] = -1;
    const int s4 = sign == Z9Sign::plus ? 1 : -1;
    img[3][0] = img[3][1] = img[3][2] = s4;
    for (int k = 4; k < 8; ++k) img[k][k - 1] = 1, img[k][k] = -1;
    rs.z9.resize(kRoots);
    for (int r = 0; r < kRoots; ++r) {
        std::array<int, 9> z{};
        for (int k = 0; k < 8; ++k)
            for (int c = 0; c < 9; ++c) z[c] += rs.roots[r][k] * img[k][c];
        rs.z9[r] = z;
    }
    return rs;
}

const RootSystemE8& e8(Z9Sign sign) {
    static const RootSystemE8 plus = build_root_system(Z9Sign::plus);
    static const RootSystemE8 minus = build_root_system(Z9Sign::minus);
    return sign == Z9Sign::plus ? plus : minus;
}

int RootSystemE8::index_of(const Coord& c) const {
    auto it = std::lower_bound(roots.begin(), roots.end(), c);
    if (it == roots.end() || *it != c) return -1;
    return int(it - roots.begin());
}

int RootSystemE8::pairing(int r, int s) const { return pair_coords(cartan, roots[r], roots[s]); }

int RootSystemE8::height(int r) const { return std::accumulate(roots[r].begin(), roots[r].end(), 0); }

int RootSystemE8::highest_root() const {
    int best = 0;
    for (int r = 1; r < kRoots; ++r)
        if (height(r) > height(best)) best = r;
    return best;
}

u64 RootSystemE8::digest() const {
    u64 h = 0xcbf29ce484222325ULL;
    auto eat = [&](int v) {
        h ^= u64(std::uint32_t(v));
        h *= 0x100000001b3ULL;
    };
    for (auto& c : roots)
        for (int v : c) eat(v);
    for (auto& z : z9)
        for (int v : z) eat(v);
    return h;
}

// ---------------------------------------------------------------------------
// type labels

namespace {

int family_order(char f) { return f == 'E' ? 0 : f == 'D' ? 1 : 2; }

void canonicalize(std::vector<Component>& parts) {
    std::sort(parts.begin(), parts.end(), [](const Component& a, const Component& b) {
        if (family_order(a.family) != family_order(b.family)) return family_order(a.family) < family_order(b.family);
        return a.rank > b.rank;
    });
}

int component_roots(const Component& c) {
    switch (c.family) {
        case 'A': return c.rank * (c.rank + 1);
        case 'D': return 2 * c.rank * (c.rank - 1);
        default: return c.rank == 6 ? 72 : c.rank == 7 ? 126 : 240;
    }
}

}  // namespace

std::string TypeLabel::str() const {
    if (parts.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts.size();) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        if (!s.empty()) s += "+";
        s += parts[i].family + std::to_string(parts[i].rank);
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

int TypeLabel::rank() const {
    int r = 0;
    for (auto& c : parts) r += c.rank;
    return r;
}

int TypeLabel::root_count() const {
    int r = 0;
    for (auto& c : parts) r += component_roots(c);
    return r;
}

TypeLabel parse_type(const std::string& s) {
    TypeLabel t;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '+')) {
        if (tok.size() < 2 || (tok[0] != 'A' && tok[0] != 'D' && tok[0] != 'E'))
            throw InvalidArgument("bad root system type '" + s + "'");
        int mult = 1;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            mult = std::stoi(tok.substr(caret + 1));
            tok = tok.substr(0, caret);
        }
        int rank = std::stoi(tok.substr(1));
        for (int k = 0; k < mult; ++k) t.parts.push_back({tok[0], rank});
    }
    canonicalize(t.parts);
    return t;
}

u64 weyl_order(const TypeLabel& t) {
    u64 w = 1;
    for (auto& c : t.parts) {
        u64 f = 1;
        switch (c.family) {
            case 'A':
                for (int k = 2; k <= c.rank + 1; ++k) f *= u64(k);
                break;
            case 'D':
                for (int k = 2; k <= c.rank; ++k) f *= u64(k);
                f <<= (c.rank - 1);
                break;
            default: f = c.rank == 6 ? 51840 : c.rank == 7 ? 2903040 : 696729600;
        }
        w = mul_checked(w, f);
    }
    return w;
}

// ---------------------------------------------------------------------------
// subsystems

namespace {

std::vector<int> positive_closure(const std::vector<int>& base, const RootSystemE8& rs) {
    std::vector<int> pos(base);
    std::array<bool, kRoots> in{};
    for (int b : base) in[b] = true;
    for (std::size_t k = 0; k < pos.size(); ++k)
        for (int b : base) {
            int t = rs.sum[pos[k] * kRoots + b];
            if (t >= 0 && !in[t]) {
                in[t] = true;
                pos.push_back(t);
            }
        }
    return pos;
}

RootBits bits_of(const std::vector<int>& pos, const RootSystemE8& rs) {
    RootBits m;
    for (int r : pos) {
        m.set(r);
        m.set(rs.neg[r]);
    }
    return m;
}

std::vector<std::vector<int>> base_components(const std::vector<int>& base, const RootSystemE8& rs) {
    const std::size_t n = base.size();
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> st{s};
        comp[s] = nc;
        while (!st.empty()) {
            std::size_t u = st.back();
            st.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (comp[v] < 0 && rs.pairing(base[u], base[v]) != 0) {
                    comp[v] = nc;
                    st.push_back(v);
                }
        }
        ++nc;
    }
    std::vector<std::vector<int>> out(nc);
    for (std::size_t k = 0; k < n; ++k) out[comp[k]].push_back(base[k]);
    return out;
}

TypeLabel type_of_base(const std::vector<int>& base, const RootSystemE8& rs) {
    TypeLabel t;
    for (auto& comp : base_components(base, rs)) {
        const int n = int(comp.size());
        const int roots = 2 * int(positive_closure(comp, rs).size());
        Component c{'?', n};
        if (roots == n * (n + 1))
            c.family = 'A';
        else if (n >= 4 && roots == 2 * n * (n - 1))
            c.family = 'D';
        else if ((n == 6 && roots == 72) || (n == 7 && roots == 126) || (n == 8 && roots == 240))
            c.family = 'E';
        else
            throw InternalInconsistency("unrecognised component: rank " + std::to_string(n) + ", " +
                                        std::to_string(roots) + " roots");
        t.parts.push_back(c);
    }
    canonicalize(t.parts);
    return t;
}

// integer row echelon form of the generators, for span membership
struct SpanTester {
    std::vector<Coord> rows;
    std::vector<int> pivot;

    explicit SpanTester(std::vector<Coord> g) {
        int r = 0;
        for (int c = 0; c < 8 && r < int(g.size()); ++c) {
            for (;;) {
                int best = -1;
                for (int i = r; i < int(g.size()); ++i)
                    if (g[i][c] != 0 && (best < 0 || std::abs(g[i][c]) < std::abs(g[best][c]))) best = i;
                if (best < 0) break;
                std::swap(g[r], g[best]);
                bool done = true;
                for (int i = r + 1; i < int(g.size()); ++i) {
                    int q = g[i][c] / g[r][c];
                    for (int k = 0; k < 8; ++k) g[i][k] -= q * g[r][k];
                    if (g[i][c] != 0) done = false;
                }
                if (done) break;
            }
            if (r < int(g.size()) && g[r][c] != 0) {
                rows.push_back(g[r]);
                pivot.push_back(c);
                ++r;
            }
        }
    }

    bool contains(Coord v) const {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            int c = pivot[k];
            if (v[c] % rows[k][c]) return false;
            int q = v[c] / rows[k][c];
            for (int j = 0; j < 8; ++j) v[j] -= q * rows[k][j];
        }
        for (int x : v)
            if (x) return false;
        return true;
    }
};

}  // namespace

RootSubsystem closure_from_base(const std::vector<int>& base, const RootSystemE8& rs) {
    RootSubsystem s;
    s.simple_roots = base;
    s.membership = bits_of(positive_closure(base, rs), rs);
    s.type = type_of_base(base, rs);
    s.rank = int(base.size());
    return s;
}

RootSubsystem subsystem_closure(const std::vector<int>& generators, const RootSystemE8& rs) {
    if (generators.empty()) return RootSubsystem{};
    IntMatrix m;
    std::vector<Coord> g;
    for (int r : generators) {
        if (r < 0 || r >= kRoots) throw InvalidArgument("root index out of range");
        g.push_back(rs.roots[r]);
        m.emplace_back(rs.roots[r].begin(), rs.roots[r].end());
    }
    if (matrix_rank(m) != int(generators.size())) throw InvalidArgument("generating roots are linearly dependent");
    SpanTester span(g);
    RootBits member;
    std::vector<int> pos;
    for (int r = 0; r < kRoots; ++r)
        if (span.contains(rs.roots[r])) {
            member.set(r);
            if (rs.height(r) > 0) pos.push_back(r);
        }
    std::vector<int> base;
    for (int r : pos) {
        bool decomposable = false;
        for (int s : pos) {
            int u = rs.sum[r * kRoots + rs.neg[s]];
            if (u >= 0 && member.test(u) && rs.height(u) > 0) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable) base.push_back(r);
    }
    RootSubsystem s = closure_from_base(base, rs);
    if (!(s.membership == member)) throw InternalInconsistency("span closure and base closure disagree");
    return s;
}

std::vector<RootSubsystem> bds_representatives(const RootSystemE8& rs) {
    std::vector<int> e8base(rs.simple.begin(), rs.simple.end());
    std::vector<RootSubsystem> found{closure_from_base(e8base, rs)};
    std::unordered_map<RootBits, int, RootBitsHash> index{{found[0].membership, 0}};

    for (std::size_t k = 0; k < found.size(); ++k) {
        const std::vector<int> base = found[k].simple_roots;
        for (auto& comp : base_components(base, rs)) {
            // highest root relative to the component's own base: nothing can be added to it
            int top = -1;
            for (int r : positive_closure(comp, rs))
                if (std::all_of(comp.begin(), comp.end(), [&](int b) { return rs.sum[r * kRoots + b] < 0; })) top = r;
            std::vector<int> ext = comp;
            ext.push_back(rs.neg[top]);
            std::vector<int> rest;
            for (int b : base)
                if (std::find(comp.begin(), comp.end(), b) == comp.end()) rest.push_back(b);
            for (std::size_t drop = 0; drop + 1 < ext.size(); ++drop) {
                std::vector<int> nb = rest;
                for (std::size_t x = 0; x < ext.size(); ++x)
                    if (x != drop) nb.push_back(ext[x]);
                RootSubsystem s = closure_from_base(nb, rs);
                if (index.emplace(s.membership, int(found.size())).second) found.push_back(std::move(s));
            }
        }
    }
    // rank 7: one simple root removed
    const std::size_t n8 = found.size();
    for (std::size_t k = 0; k < n8; ++k) {
        const auto base = found[k].simple_roots;
        for (std::size_t drop = 0; drop < base.size(); ++drop) {
            std::vector<int> nb;
            for (std::size_t x = 0; x < base.size(); ++x)
                if (x != drop) nb.push_back(base[x]);
            RootSubsystem s = closure_from_base(nb, rs);
            if (index.emplace(s.membership, int(found.size())).second) found.push_back(std::move(s));
        }
    }
    return found;
}

namespace {

RootBits reflect(const RootBits& m, const std::array<std::uint8_t, kRoots>& perm) {
    RootBits out;
    for (int k = 0; k < 4; ++k) {
        u64 w = m.w[k];
        while (w) {
            int b = __builtin_ctzll(w);
            w &= w - 1;
            out.set(perm[k * 64 + b]);
        }
    }
    return out;
}

// BFS over the orbit; calls f(bits, base) once per new member
template <class F>
void orbit_walk(const RootBits& m0, const std::vector<int>& base0, const RootSystemE8& rs,
                std::unordered_map<RootBits, int, RootBitsHash>& seen, F&& f) {
    std::vector<std::pair<RootBits, std::vector<int>>> frontier{{m0, base0}};
    if (!seen.emplace(m0, 0).second) return;
    f(m0, base0);
    while (!frontier.empty()) {
        std::vector<std::pair<RootBits, std::vector<int>>> next;
        for (auto& [m, base] : frontier)
            for (int i = 0; i < 8; ++i) {
                RootBits r = reflect(m, rs.reflection[i]);
                if (!seen.emplace(r, 0).second) continue;
                std::vector<int> nb(base.size());
                for (std::size_t k = 0; k < base.size(); ++k) nb[k] = rs.reflection[i][base[k]];
                f(r, nb);
                next.emplace_back(r, std::move(nb));
            }
        frontier = std::move(next);
    }
}

}  // namespace

std::vector<RootSubsystem> enumerate_orbit(const RootSubsystem& rep, const RootSystemE8& rs) {
    std::vector<RootSubsystem> out;
    std::unordered_map<RootBits, int, RootBitsHash> seen;
    orbit_walk(rep.membership, rep.simple_roots, rs, seen, [&](const RootBits& m, const std::vector<int>& b) {
        RootSubsystem s;
        s.membership = m;
        s.simple_roots = b;
        s.type = rep.type;
        s.rank = rep.rank;
        out.push_back(std::move(s));
    });
    return out;
}

// ---------------------------------------------------------------------------
// quotients

AbGroup quotient_pi(const std::vector<int>& base, const RootSystemE8& rs) {
    IntMatrix m;
    for (int r : base) m.emplace_back(rs.z9[r].begin(), rs.z9[r].end());
    m.emplace_back(9, 1);
    return cokernel(m, 9);
}

AbGroup quotient_e8(const std::vector<int>& base, const RootSystemE8& rs) {
    IntMatrix m;
    for (int r : base) m.emplace_back(rs.roots[r].begin(), rs.roots[r].end());
    return cokernel(m, 8);
}

AbGroup quotient_pi(const RootSubsystem& sub, const RootSystemE8& rs) { return quotient_pi(sub.simple_roots, rs); }
AbGroup quotient_e8(const RootSubsystem& sub, const RootSystemE8& rs) { return quotient_e8(sub.simple_roots, rs); }

// ---------------------------------------------------------------------------
// tabulated reference data

const std::vector<ReferenceType>& reference_types() {
    static const std::vector<ReferenceType> t = {
        {"A8", 2, 1, 362880, 960, "Z/3"},
        {"D8", 2, 2, 5160960, 135, "Z/2"},
        {"E7+A1", 1, 1, 5806080, 120, "Z/2"},
        {"A5+A2+A1", 4, 2, 8640, 40320, "Z/6"},
        {"A4^2", 8, 2, 14400, 12096, "Z/5"},
        {"E6+A2", 4, 2, 311040, 1120, "Z/3"},
        {"A7+A1", 2, 1, 80640, 4320, "Z/4"},
        {"D6+A1^2", 4, 2, 645120, 540, "Z/2+Z/2"},
        {"D5+A3", 4, 2, 46080, 7560, "Z/4"},
        {"D4^2", 72, 6, 36864, 1575, "Z/2+Z/2"},
        {"A3^2+A1^2", 16, 2, 2304, 37800, "Z/4+Z/2"},
        {"A2^4", 384, 8, 1296, 11200, "Z/3+Z/3"},
        {"E8", 1, 1, 696729600, 1, "1"},
    };
    return t;
}

const std::vector<ReferenceClass>& reference_classes() {
    static const std::vector<ReferenceClass> t = {
        {"A8", "Z/9", 648},
        {"A8", "Z/3+Z/3", 312},
        {"D8", "Z/6", 135},
        {"E7+A1", "Z/6", 120},
        {"A5+A2+A1", "Z/18", 27216},
        {"A5+A2+A1", "Z/6+Z/3", 13104},
        {"A4^2", "Z/15", 12096},
        {"E6+A2", "Z/9", 756},
        {"E6+A2", "Z/3+Z/3", 364},
        {"A7+A1", "Z/12", 4320},
        {"D6+A1^2", "Z/6+Z/2", 540},
        {"D5+A3", "Z/12", 7560},
        {"D4^2", "Z/6+Z/2", 1575},
        {"A3^2+A1^2", "Z/12+Z/2", 37800},
        {"A2^4", "Z/9+Z/3", 10080},
        {"A2^4", "Z/3+Z/3+Z/3", 1120},
    };
    return t;
}

u64 oshima_count(u64 hash, u64 out, u64 weyl) {
    const u64 num = mul_checked(hash, 696729600ULL);
    const u64 den = mul_checked(out, weyl);
    if (den == 0 || num % den) throw InvalidArgument("orbit count formula is not integral for these inputs");
    return num / den;
}

// ---------------------------------------------------------------------------
// universe of rank-8 lattices

std::string default_cache_path() {
    if (const char* p = std::getenv("POLYPRIME_CACHE")) return p;
    return "e8_rank8.cache";
}

namespace {

constexpr const char* kCacheMagic = "polyprime-e8-cache";
constexpr int kCacheVersion = 1;

std::string hex(u64 v) {
    std::ostringstream o;
    o << std::hex << v;
    return o.str();
}

void save_cache(const Universe& u, const RootSystemE8& rs, const std::string& path) {
    std::ofstream f(path + ".tmp");
    if (!f) return;  // caching is best effort
    f << kCacheMagic << " " << kCacheVersion << "\n";
    f << "digest " << hex(rs.digest()) << "\n";
    f << "count " << u.lattices.size() << "\n";
    for (auto& L : u.lattices) {
        f << u.types[L.type].str();
        for (auto b : L.base) f << " " << int(b);
        f << " |";
        for (u64 d : L.pi.invariant_factors) f << " " << d;
        if (L.pi.free_rank) f << " free " << L.pi.free_rank;
        f << "\n";
    }
    f.close();
    std::rename((path + ".tmp").c_str(), path.c_str());
}

bool load_cache(Universe& u, const RootSystemE8& rs, const std::string& path) {
    std::ifstream f(path);
    if (!f) return false;
    auto fail = [&](const std::string& why) {
        return CacheError("E8 cache '" + path + "' rejected (" + why + "); delete it to recompute");
    };
    std::string magic, key;
    int version = 0;
    if (!(f >> magic >> version) || magic != kCacheMagic) throw fail("not a lattice cache");
    if (version != kCacheVersion) throw fail("format version " + std::to_string(version));
    std::string dg;
    if (!(f >> key >> dg) || key != "digest") throw fail("missing digest");
    if (dg != hex(rs.digest())) throw fail("root-order digest mismatch");
    std::size_t n = 0;
    if (!(f >> key >> n) || key != "count") throw fail("missing count");
    std::string line;
    std::getline(f, line);
    std::map<std::string, int> type_id;
    u.lattices.clear();
    u.types.clear();
    u.lattices.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::getline(f, line)) throw fail("truncated");
        std::istringstream ls(line);
        std::string label, bar;
        Lattice L;
        std::vector<int> base(8);
        if (!(ls >> label)) throw fail("bad record");
        for (int i = 0; i < 8; ++i) {
            if (!(ls >> base[i]) || base[i] < 0 || base[i] >= kRoots) throw fail("bad record");
            L.base[i] = std::uint8_t(base[i]);
        }
        if (!(ls >> bar) || bar != "|") throw fail("bad record");
        std::string tok;
        while (ls >> tok) {
            if (tok == "free") {
                if (!(ls >> L.pi.free_rank)) throw fail("bad record");
            } else {
                L.pi.invariant_factors.push_back(std::stoull(tok));
            }
        }
        RootSubsystem s = closure_from_base(base, rs);
        if (s.type.str() != label) throw fail("type label does not match simple roots");
        auto [it, fresh] = type_id.emplace(label, int(u.types.size()));
        if (fresh) u.types.push_back(s.type);
        L.type = it->second;
        L.membership = s.membership;
        L.e8q = quotient_e8(base, rs);
        u.lattices.push_back(std::move(L));
    }
    u.from_cache = true;
    return true;
}

}  // namespace

Universe enumerate_universe(const std::string& cache_path, Z9Sign sign) {
    const RootSystemE8& rs = e8(sign);
    Universe u;
    u.sign = sign;
    if (!cache_path.empty() && load_cache(u, rs, cache_path)) return u;

    std::map<std::string, int> type_id;
    std::unordered_map<RootBits, int, RootBitsHash> seen;
    for (const RootSubsystem& rep : bds_representatives(rs)) {
        if (rep.rank != 8 || seen.count(rep.membership)) continue;
        auto [it, fresh] = type_id.emplace(rep.type.str(), int(u.types.size()));
        if (fresh) u.types.push_back(rep.type);
        const int t = it->second;
        orbit_walk(rep.membership, rep.simple_roots, rs, seen, [&](const RootBits& m, const std::vector<int>& b) {
            Lattice L;
            L.membership = m;
            for (int i = 0; i < 8; ++i) L.base[i] = std::uint8_t(b[i]);
            L.type = t;
            L.pi = quotient_pi(b, rs);
            L.e8q = quotient_e8(b, rs);
            u.lattices.push_back(std::move(L));
        });
    }
    if (!cache_path.empty()) save_cache(u, rs, cache_path);
    return u;
}

void compute_containment(Universe& u) {
    const std::size_t n = u.lattices.size();
    std::vector<u64> index(n);
    for (std::size_t k = 0; k < n; ++k) index[k] = u.lattices[k].e8q.torsion_order();
    // posting lists per (index value, root)
    std::map<u64, std::vector<std::vector<int>>> post;
    for (std::size_t k = 0; k < n; ++k) {
        auto& lists = post[index[k]];
        if (lists.empty()) lists.resize(kRoots);
        for (int r = 0; r < kRoots; ++r)
            if (u.lattices[k].membership.test(r)) lists[r].push_back(int(k));
    }
    u.superlattices.assign(n, {});
    u.covers.assign(n, {});
    for (std::size_t k = 0; k < n; ++k) {
        const Lattice& L = u.lattices[k];
        for (auto& [d, lists] : post) {
            if (d >= index[k] || index[k] % d) continue;
            int best = -1;
            for (int r = 0; r < kRoots; ++r)
                if (L.membership.test(r) && (best < 0 || lists[r].size() < lists[best].size())) best = r;
            for (int c : lists[best])
                if (L.membership.subset_of(u.lattices[c].membership)) u.superlattices[k].push_back(c);
        }
        for (int s : u.superlattices[k]) {
            bool immediate = true;
            for (int t : u.superlattices[k])
                if (t != s && u.lattices[t].membership.subset_of(u.lattices[s].membership)) {
                    immediate = false;
                    break;
                }
            if (immediate) u.covers[k].push_back(s);
        }
    }
}

std::vector<LatticeClass> classify(const Universe& u) {
    std::map<std::pair<std::string, AbGroup>, LatticeClass> acc;
    std::set<std::string> ref;
    for (auto& t : reference_types()) ref.insert(t.label);
    for (std::size_t k = 0; k < u.lattices.size(); ++k) {
        const Lattice& L = u.lattices[k];
        const std::string label = u.types[L.type].str();
        auto& c = acc[{label, L.pi}];
        if (c.count == 0) {
            c.type = u.types[L.type];
            c.H = L.pi;
            c.reference_type = ref.count(label) > 0;
        }
        ++c.count;
        c.members.push_back(int(k));
    }
    std::vector<LatticeClass> out;
    for (auto& [k, v] : acc) out.push_back(std::move(v));
    // order by index of E8/Lambda, then label
    std::sort(out.begin(), out.end(), [&](const LatticeClass& a, const LatticeClass& b) {
        u64 ia = u.lattices[a.members[0]].e8q.torsion_order(), ib = u.lattices[b.members[0]].e8q.torsion_order();
        if (ia != ib) return ia < ib;
        if (a.type.str() != b.type.str()) return a.type.str() < b.type.str();
        return a.H < b.H;
    });
    return out;
}

std::vector<TypeTotal> type_totals(const Universe& u) {
    std::map<std::string, u64> counts;
    for (auto& L : u.lattices) ++counts[u.types[L.type].str()];
    std::vector<TypeTotal> out;
    std::set<std::string> done;
    for (auto& r : reference_types()) {
        TypeTotal t;
        t.label = r.label;
        t.tabulated = true;
        t.enumerated = counts.count(r.label) ? counts[r.label] : 0;
        t.expected = r.orbit;
        t.oshima = oshima_count(r.hash, r.out, weyl_order(parse_type(r.label)));
        t.matches = t.enumerated == t.expected;
        out.push_back(t);
        done.insert(r.label);
    }
    for (auto& [label, c] : counts) {
        if (done.count(label)) continue;
        TypeTotal t;
        t.label = label;
        t.enumerated = c;
        out.push_back(t);
    }
    return out;
}

std::vector<ContainmentEdge> containment_edges(const Universe& u) {
    if (u.covers.size() != u.lattices.size()) throw PreconditionViolation("containment not computed");
    // per lower lattice: counts by upper type
    std::map<std::pair<std::string, std::string>, std::pair<u64, bool>> edges;
    std::map<std::string, std::vector<std::size_t>> by_type;
    for (std::size_t k = 0; k < u.lattices.size(); ++k) by_type[u.types[u.lattices[k].type].str()].push_back(k);
    for (auto& [lower, members] : by_type) {
        std::set<std::string> uppers;
        for (std::size_t k : members)
            for (int c : u.covers[k]) uppers.insert(u.types[u.lattices[c].type].str());
        for (auto& upper : uppers) {
            bool first = true, uniform = true;
            u64 mult = 0;
            for (std::size_t k : members) {
                u64 m = 0;
                for (int c : u.covers[k])
                    if (u.types[u.lattices[c].type].str() == upper) ++m;
                if (first) {
                    mult = m;
                    first = false;
                } else if (m != mult) {
                    uniform = false;
                }
            }
            edges[{upper, lower}] = {mult, uniform};
        }
    }
    std::vector<ContainmentEdge> out;
    for (auto& [k, v] : edges) out.push_back({k.first, k.second, v.first, v.second});
    return out;
}

u64 sublattice_count(const Universe& u, const std::string& upper, const std::string& lower, bool* uniform) {
    if (u.superlattices.size() != u.lattices.size()) throw PreconditionViolation("containment not computed");
    std::map<int, u64> per_upper;
    for (std::size_t k = 0; k < u.lattices.size(); ++k)
        if (u.types[u.lattices[k].type].str() == upper) per_upper[int(k)] = 0;
    for (std::size_t k = 0; k < u.lattices.size(); ++k) {
        if (u.types[u.lattices[k].type].str() != lower) continue;
        for (int s : u.superlattices[k]) {
            auto it = per_upper.find(s);
            if (it != per_upper.end()) ++it->second;
        }
    }
    if (per_upper.empty()) return 0;
    u64 first = per_upper.begin()->second;
    bool uni = true;
    for (auto& [k, v] : per_upper)
        if (v != first) uni = false;
    if (uniform) *uniform = uni;
    return first;
}

Rational e6a1_z_ratio(Z9Sign sign, u64* orbit_size) {
    const RootSystemE8& rs = e8(sign);
    // nodes 1-6 span E6, node 8 is orthogonal to them
    std::vector<int> base{rs.simple[0], rs.simple[1], rs.simple[2], rs.simple[3],
                          rs.simple[4], rs.simple[5], rs.simple[7]};
    RootSubsystem rep = closure_from_base(base, rs);
    if (rep.type.str() != "E6+A1") throw InternalInconsistency("expected E6+A1, got " + rep.type.str());
    u64 total = 0, torsion_free = 0;
    std::unordered_map<RootBits, int, RootBitsHash> seen;
    orbit_walk(rep.membership, rep.simple_roots, rs, seen, [&](const RootBits&, const std::vector<int>& b) {
        ++total;
        if (quotient_pi(b, rs).invariant_factors.empty()) ++torsion_free;
    });
    if (orbit_size) *orbit_size = total;
    return Rational(torsion_free, total);
}

}  // namespace polyprime
