// polyprime command-line front end.
#include <chrono>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyprime/artin.hpp"
#include "polyprime/e8lat.hpp"
#include "polyprime/errors.hpp"
#include "polyprime/polyhedral.hpp"
#include "polyprime/sieve_verify.hpp"
#include "polyprime/stephens.hpp"

using namespace polyprime;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "polyprime/1";

struct Table {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    std::string command;
    json parameters = json::object();
    json exact = json::object();
    json numeric = json::object();
    json data = json::object();
    std::vector<Table> tables;
    std::vector<std::string> notes;  // printed under the tables in text mode
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

void print_text(const Output& out) {
    for (auto& t : out.tables) {
        if (!t.title.empty()) std::cout << t.title << "\n";
        std::vector<std::size_t> w(t.header.size());
        for (std::size_t c = 0; c < w.size(); ++c) w[c] = t.header[c].size();
        for (auto& r : t.rows)
            for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c)
                std::cout << (c ? "  " : "") << std::left << std::setw(int(w[c])) << r[c];
            std::cout << "\n";
        };
        line(t.header);
        for (auto& r : t.rows) line(r);
        std::cout << "\n";
    }
    for (auto& n : out.notes) std::cout << n << "\n";
}

void print_csv(const Output& out) {
    bool first = true;
    for (auto& t : out.tables) {
        if (!first) std::cout << "\n";
        first = false;
        for (std::size_t c = 0; c < t.header.size(); ++c) std::cout << (c ? "," : "") << csv_field(t.header[c]);
        std::cout << "\n";
        for (auto& r : t.rows) {
            for (std::size_t c = 0; c < r.size(); ++c) std::cout << (c ? "," : "") << csv_field(r[c]);
            std::cout << "\n";
        }
    }
}

void emit(const Output& out, const std::string& format, double seconds) {
    if (format == "json") {
        json j;
        j["schema"] = kSchema;
        j["command"] = out.command;
        j["parameters"] = out.parameters;
        j["exact"] = out.exact;
        j["numeric"] = out.numeric;
        j["data"] = out.data;
        j["timing"] = {{"seconds", seconds}};
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        print_csv(out);
    } else {
        print_text(out);
    }
}

std::string sci(const Real& x, int digits = 6) { return x.str(digits, std::ios_base::scientific); }

std::string dstr(double x, int digits = 12) {
    std::ostringstream o;
    o << std::setprecision(digits) << x;
    return o.str();
}

std::vector<u64> parse_list(const std::string& s, const char* what) {
    std::vector<u64> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            unsigned long long x = std::stoull(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            v.push_back(x);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("bad ") + what + " '" + s + "'");
        }
    }
    if (v.empty()) throw InvalidArgument(std::string("empty ") + what);
    return v;
}

// ---------------------------------------------------------------------------

struct StephensArgs {
    int nu = 0;
    u64 bound = 1000000;
};

Output run_stephens(const StephensArgs& a) {
    if (a.nu < 1) throw InvalidArgument("nu must be at least 1");
    if (a.bound < 2) throw InvalidArgument("prime bound must be at least 2");
    ConstantEstimate est = stephens_constant(a.nu, a.bound);
    Output o;
    o.command = "stephens";
    o.parameters = {{"nu", a.nu}, {"prime_bound", a.bound}};
    const int cert = certified_digits(est);
    o.numeric = {{"value", decimal(est.value, 40)},
                 {"tail_bound", sci(est.tail_bound)},
                 {"lower", decimal(est.value - est.tail_bound, 40)},
                 {"certified_digits", cert}};
    o.tables.push_back({"", {"nu", "prime bound", "value", "tail bound", "certified digits"},
                        {{std::to_string(a.nu), std::to_string(a.bound), decimal(est.value, 40), sci(est.tail_bound),
                          std::to_string(cert)}}});
    return o;
}

struct DensityArgs {
    std::string a;
    std::vector<std::string> bs;
    std::string limit;
    int nu = 0;
    u64 x_bound = 0;
    std::string oracle;
    std::string rule = "statement";
};

json term_json(const DensityTerm& t) {
    return {{"block", t.block}, {"d", t.d},         {"dh", t.dh},
            {"mask", t.mask},   {"weight", t.weight}, {"m", t.m},
            {"n", t.n},         {"coeff", to_string(t.value.coeff)}};
}

std::string dh_str(const std::vector<u64>& dh) {
    std::string s;
    for (u64 x : dh) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

Output run_density(const DensityArgs& a) {
    const KernelRule rule = a.rule == "proof" ? KernelRule::proof : KernelRule::statement;
    Output o;
    o.command = "density";
    DensityResult r;
    std::optional<ArtinInput> in;
    if (!a.limit.empty()) {
        if (!a.a.empty() || !a.bs.empty()) throw InvalidArgument("--limit cannot be combined with --a/--b");
        auto orders = parse_list(a.limit, "--limit list");
        const int nu = int(orders.size()) - 1;
        if (a.nu && a.nu != nu)
            throw InvalidArgument("--nu " + std::to_string(a.nu) + " does not match " + std::to_string(orders.size()) +
                                  " torsion orders");
        r = density_limit(nu, orders);
        o.parameters = {{"limit", orders}, {"nu", nu}};
    } else {
        if (a.a.empty() || a.bs.empty()) throw InvalidArgument("need --a and at least one --b, or --limit");
        std::vector<ExpVec> bs;
        for (auto& b : a.bs) bs.push_back(parse_expvec(b));
        in = make_artin_input(parse_expvec(a.a), bs);
        r = density_exact(*in, rule);
        o.parameters = {{"a", a.a}, {"b", a.bs}, {"kernel_rule", a.rule}};
    }
    o.exact["density_over_S"] = to_string(r.total.coeff);
    o.numeric["density"] = decimal(r.numeric, 20);
    o.numeric["error"] = sci(r.numeric_error);
    json terms = json::array();
    Table t{"terms", {"block", "d", "d_h", "x", "weight", "S_{m,n}", "coeff/S"}, {}};
    for (auto& term : r.terms) {
        terms.push_back(term_json(term));
        t.rows.push_back({std::to_string(term.block), std::to_string(term.d), dh_str(term.dh),
                          std::to_string(term.mask), std::to_string(term.weight),
                          "S_{" + std::to_string(term.m) + "," + std::to_string(term.n) + "}",
                          to_string(term.value.coeff)});
    }
    o.data["terms"] = terms;
    o.tables.push_back(t);
    o.notes.push_back("density = " + to_string(r.total.coeff) + " * S^(" + std::to_string(r.nu) +
                      ") ~= " + decimal(r.numeric, 15) + " (+- " + sci(r.numeric_error, 2) + ")");

    if (!a.oracle.empty()) {
        if (!in) throw InvalidArgument("--oracle needs --a/--b");
        auto lim = parse_list(a.oracle, "--oracle limits");
        if (lim.size() != 2) throw InvalidArgument("--oracle expects imax,jmax");
        const double v = density_series_oracle(*in, lim[0], lim[1], rule);
        o.numeric["oracle"] = dstr(v);
        o.parameters["oracle"] = lim;
        o.notes.push_back("series oracle (" + std::to_string(lim[0]) + "," + std::to_string(lim[1]) + ") = " + dstr(v));
    }
    if (a.x_bound) {
        if (!in) throw InvalidArgument("--x-bound needs --a/--b");
        VerifyReport v = empirical_density(*in, a.x_bound, rule);
        o.parameters["x_bound"] = a.x_bound;
        o.data["empirical"] = {{"x_bound", v.x_bound}, {"tested", v.primes_tested}, {"skipped", v.primes_skipped},
                               {"hits", v.hits}};
        o.numeric["empirical"] = dstr(v.empirical, 8);
        o.numeric["abs_diff"] = dstr(v.abs_diff, 4);
        o.notes.push_back("empirical up to " + std::to_string(v.x_bound) + ": " + std::to_string(v.hits) + "/" +
                          std::to_string(v.primes_tested) + " = " + dstr(v.empirical, 8) + " (diff " +
                          dstr(v.abs_diff, 3) + ")");
    }
    return o;
}

// ---------------------------------------------------------------------------

struct E8Args {
    std::string action;
    std::string cache;
    bool no_cache = false;
    std::string sign = "minus";
};

Universe load_universe(const E8Args& a) {
    const Z9Sign sign = a.sign == "plus" ? Z9Sign::plus : Z9Sign::minus;
    std::string path = a.no_cache ? "" : (a.cache.empty() ? default_cache_path() : a.cache);
    return enumerate_universe(path, sign);
}

Output run_e8(const E8Args& a) {
    Output o;
    o.command = "e8 " + a.action;
    o.parameters = {{"sign", a.sign}, {"cache", a.no_cache ? "" : (a.cache.empty() ? default_cache_path() : a.cache)}};
    Universe u = load_universe(a);
    o.data["lattices"] = u.lattices.size();
    o.data["from_cache"] = u.from_cache;

    if (a.action == "enumerate") {
        Table t{"", {"type", "count", "tabulated", "orbit formula", "status"}, {}};
        json rows = json::array();
        for (auto& tt : type_totals(u)) {
            std::string status = !tt.tabulated ? "untabulated" : tt.matches ? "match" : "MISMATCH";
            t.rows.push_back({tt.label, std::to_string(tt.enumerated), tt.tabulated ? std::to_string(tt.expected) : "-",
                              tt.tabulated ? std::to_string(tt.oshima) : "-", status});
            json r = {{"type", tt.label}, {"count", tt.enumerated}};
            if (tt.tabulated) r["tabulated"] = tt.expected, r["orbit_formula"] = tt.oshima;
            r["status"] = status;
            rows.push_back(r);
        }
        o.data["types"] = rows;
        o.tables.push_back(t);
        o.notes.push_back(std::to_string(u.lattices.size()) + " rank-8 lattices" +
                          (u.from_cache ? " (from cache)" : ""));
    } else if (a.action == "quotients") {
        std::map<std::string, std::set<std::string>> seen;
        for (auto& L : u.lattices) seen[u.types[L.type].str()].insert(L.e8q.str());
        Table t{"", {"type", "E8/R", "tabulated", "status"}, {}};
        json rows = json::array();
        std::set<std::string> done;
        auto add = [&](const std::string& label, const std::string* tab) {
            std::string got;
            for (auto& s : seen[label]) got += (got.empty() ? "" : " | ") + s;
            std::string status = !tab ? "untabulated" : (seen[label].size() == 1 && got == *tab) ? "match" : "MISMATCH";
            t.rows.push_back({label, got, tab ? *tab : "-", status});
            rows.push_back({{"type", label}, {"e8_quotient", got}, {"tabulated", tab ? *tab : ""}, {"status", status}});
            done.insert(label);
        };
        for (auto& r : reference_types()) add(r.label, &r.e8_quotient);
        for (auto& [label, s] : seen)
            if (!done.count(label)) add(label, nullptr);
        o.data["types"] = rows;
        o.tables.push_back(t);
    } else if (a.action == "containment") {
        compute_containment(u);
        Table t{"", {"upper", "lower", "multiplicity", "uniform"}, {}};
        json rows = json::array();
        for (auto& e : containment_edges(u)) {
            t.rows.push_back({e.upper, e.lower, std::to_string(e.multiplicity), e.uniform ? "yes" : "no"});
            rows.push_back({{"upper", e.upper}, {"lower", e.lower}, {"multiplicity", e.multiplicity},
                            {"uniform", e.uniform}});
        }
        bool uni = false;
        u64 d4 = sublattice_count(u, "D8", "D4^2", &uni);
        o.data["edges"] = rows;
        o.data["d4sq_per_d8"] = d4;
        o.tables.push_back(t);
        o.notes.push_back("D4^2 sublattices per D8: " + std::to_string(d4) + (uni ? "" : " (not uniform)"));
    } else if (a.action == "table5") {
        std::map<std::pair<std::string, std::string>, u64> tab;
        for (auto& r : reference_classes()) tab[{r.label, parse_group(r.pi_quotient).str()}] = r.count;
        Table t{"", {"type", "E8/R", "H", "count", "tabulated", "status"}, {}};
        json rows = json::array();
        for (auto& c : classify(u)) {
            auto it = tab.find({c.type.str(), c.H.str()});
            std::string status = it == tab.end() ? "untabulated" : it->second == c.count ? "match" : "MISMATCH";
            const std::string e8q = u.lattices[c.members[0]].e8q.str();
            t.rows.push_back({c.type.str(), e8q, c.H.str(), std::to_string(c.count),
                              it == tab.end() ? "-" : std::to_string(it->second), status});
            json r = {{"type", c.type.str()}, {"e8_quotient", e8q}, {"H", c.H.str()}, {"count", c.count}};
            if (it != tab.end()) r["tabulated"] = it->second;
            r["status"] = status;
            rows.push_back(r);
        }
        o.data["classes"] = rows;
        o.tables.push_back(t);
    } else {
        throw InvalidArgument("unknown e8 action '" + a.action + "'");
    }
    return o;
}

struct PolyArgs {
    bool compare = false;
    std::string cache;
    bool no_cache = false;
    std::string oracle = "5000,1000";
};

Output run_polyhedral(const PolyArgs& a) {
    E8Args ea;
    ea.cache = a.cache;
    ea.no_cache = a.no_cache;
    Universe u = load_universe(ea);
    compute_containment(u);
    const auto classes = classify(u);
    PolyhedralResult r = deltabar_all(u, classes);

    Output o;
    o.command = "polyhedral";
    o.parameters = {{"compare_paper", a.compare}};
    std::optional<Comparison> cmp;
    if (a.compare) {
        auto lim = parse_list(a.oracle, "--oracle limits");
        if (lim.size() != 2) throw InvalidArgument("--oracle expects imax,jmax");
        o.parameters["oracle"] = lim;
        cmp = compare_paper(r, lim[0], lim[1]);
    }
    auto verdict_of = [&](const std::string& label, const std::string& H) -> const Verdict* {
        if (!cmp) return nullptr;
        for (auto& v : cmp->rows)
            if (v.label == label && v.H == H) return &v;
        return nullptr;
    };

    Table t{"", {"R", "E8/R", "H", "count", "deltabar/S", "reference", "verdict"}, {}};
    if (a.compare) t.header.insert(t.header.end(), {"oracle", "oracle err", "favours"});
    json rows = json::array();
    for (auto& row : r.rows) {
        std::string ref = row.reference_value ? to_string(*row.reference_value) : "-";
        std::string verdict = !row.reference_value ? "-" : *row.reference_value == row.deltabar.coeff ? "match" : "mismatch";
        std::vector<std::string> line{row.label, row.e8q.str(), row.H.str(), std::to_string(row.count),
                                      to_string(row.deltabar.coeff), ref, verdict};
        json j = {{"type", row.label},
                  {"e8_quotient", row.e8q.str()},
                  {"H", row.H.str()},
                  {"count", row.count},
                  {"tabulated_type", row.reference_type},
                  {"delta", to_string(row.delta.coeff)},
                  {"deltabar", to_string(row.deltabar.coeff)},
                  {"constant_on_class", row.constant}};
        if (row.reference_value) j["reference"] = ref;
        j["verdict"] = verdict;
        if (a.compare) {
            const Verdict* v = verdict_of(row.label, row.H.str());
            if (v && !v->match && v->reference) {
                line.insert(line.end(), {dstr(v->oracle, 14), sci(Real(v->oracle_error), 2), v->favours});
                j["oracle"] = {{"value", dstr(v->oracle, 17)},
                               {"error", dstr(v->oracle_error, 3)},
                               {"favours", v->favours},
                               {"separated", v->separated}};
            } else {
                line.insert(line.end(), {"", "", ""});
            }
        }
        t.rows.push_back(line);
        rows.push_back(j);
    }
    o.tables.push_back(t);
    o.data["rows"] = rows;
    o.data["anomalies"] = r.anomalies;
    o.exact["aggregate_over_S"] = to_string(r.aggregate.coeff);
    o.exact["reference_aggregate_over_S"] = to_string(reference_aggregate());
    o.numeric["aggregate"] = decimal(r.numeric, 15);
    o.numeric["aggregate_error"] = sci(r.numeric_error, 2);
    const Real ref_num = Real(reference_aggregate()) * default_constant(8).value;
    o.numeric["reference_aggregate"] = decimal(ref_num, 15);
    o.notes.push_back("aggregate density = " + to_string(r.aggregate.coeff) + " * S^(8) ~= " + decimal(r.numeric, 12));
    o.notes.push_back("reference           " + to_string(reference_aggregate()) + " * S^(8) ~= " +
                      decimal(ref_num, 12));
    if (cmp) {
        const Verdict& v = cmp->aggregate;
        o.data["aggregate_verdict"] = {{"match", v.match},
                                       {"oracle", dstr(v.oracle, 17)},
                                       {"error", dstr(v.oracle_error, 3)},
                                       {"favours", v.favours},
                                       {"separated", v.separated}};
        o.data["matches"] = cmp->matches;
        o.data["mismatches"] = cmp->mismatches;
        o.notes.push_back(std::to_string(cmp->matches) + " reference rows match, " + std::to_string(cmp->mismatches) +
                          " differ");
        if (!v.match)
            o.notes.push_back("aggregate oracle " + dstr(v.oracle, 12) + " +- " + dstr(v.oracle_error, 2) +
                              ", favours " + v.favours + (v.separated ? "" : " (not separated)"));
    }
    for (auto& an : r.anomalies) o.notes.push_back("anomaly: " + an);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stephens constants, Artin densities and polyhedral-prime densities"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));

    StephensArgs sa;
    auto* st = app.add_subcommand("stephens", "Truncated Euler product for S^(nu) with a rigorous tail bound");
    st->add_option("--nu", sa.nu, "Number of b elements")->required();
    st->add_option("--prime-bound", sa.bound, "Largest prime in the product");

    DensityArgs da;
    auto* de = app.add_subcommand("density", "Exact density of primes with every b in <a>");
    de->add_option("--a", da.a, "Base a (rational)");
    de->add_option("--b", da.bs, "Elements b_1..b_nu (repeatable)");
    de->add_option("--limit", da.limit, "Large-discriminant limit from torsion orders m_a,m_b1,...");
    de->add_option("--nu", da.nu, "Checks the length of --limit");
    de->add_option("--x-bound", da.x_bound, "Also count primes up to this bound");
    de->add_option("--oracle", da.oracle, "Truncated double series imax,jmax");
    de->add_option("--kernel-rule", da.rule, "Kernel membership rule")->check(CLI::IsMember({"statement", "proof"}));

    E8Args ea;
    auto* e8c = app.add_subcommand("e8", "Rank-8 root sublattices of E8");
    e8c->add_option("action", ea.action, "enumerate | quotients | containment | table5")
        ->required()
        ->check(CLI::IsMember({"enumerate", "quotients", "containment", "table5"}));
    e8c->add_option("--cache", ea.cache, "Cache file (default $POLYPRIME_CACHE or ./e8_rank8.cache)");
    e8c->add_flag("--no-cache", ea.no_cache, "Always recompute, never write");
    e8c->add_option("--sign", ea.sign, "Image of node 4 in Z^9")->check(CLI::IsMember({"plus", "minus"}));

    PolyArgs pa;
    auto* po = app.add_subcommand("polyhedral", "Density of polyhedral primes");
    po->add_flag("--compare-tabulated", pa.compare, "Compare with the reference table and adjudicate mismatches");
    po->add_option("--oracle", pa.oracle, "Series truncation imax,jmax used for adjudication");
    po->add_option("--cache", pa.cache, "Cache file");
    po->add_flag("--no-cache", pa.no_cache, "Always recompute, never write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        Output out;
        if (*st)
            out = run_stephens(sa);
        else if (*de)
            out = run_density(da);
        else if (*e8c)
            out = run_e8(ea);
        else
            out = run_polyhedral(pa);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(out, format, secs);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InternalInconsistency& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
