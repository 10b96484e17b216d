// qwcli: JSON front end for the W-algebra computations and verification suites.
// Exit codes: 0 all suites pass, 1 a suite failed or a computation raised, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "qw/classical.hpp"
#include "qw/miura.hpp"
#include "qw/shuffle.hpp"

using namespace qw;

namespace {

constexpr int kSchema = 1;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

std::string scalar(const Fp& x) { return x.str(); }
std::string scalar(const RatF& x) {
    if (x.is_zero()) return "0";
    Poly d = x.denominator();
    std::string n = x.numerator().str();
    if (d == Poly(1)) return n;
    return "(" + n + ")/(" + d.str() + ")";
}

json rpart_json(const RPartition& p) {
    json a = json::array();
    for (auto& c : p.c) a.push_back(c);
    return a;
}

RPartition rpart_parse(const std::string& s) {
    json j;
    try {
        j = json::parse(s);
    } catch (const json::exception&) {
        throw Usage("r-partition must be a nested JSON array, e.g. [[2,1],[]]: " + s);
    }
    if (!j.is_array() || j.empty()) throw Usage("r-partition must be a non-empty array of partitions: " + s);
    RPartition p;
    for (auto& c : j) {
        if (!c.is_array()) throw Usage("r-partition component must be an array: " + s);
        Partition q;
        for (auto& v : c) {
            if (!v.is_number_integer() || v.get<int>() <= 0) throw Usage("parts must be positive integers: " + s);
            if (!q.empty() && v.get<int>() > q.back()) throw Usage("parts must be non-increasing: " + s);
            q.push_back(v.get<int>());
        }
        p.c.push_back(q);
    }
    return p;
}

// generators named on the command line, replaced by rational numbers
struct Specialization {
    std::vector<std::pair<int, mpq_class>> vals;

    void add(const std::string& spec) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw Usage("--specialize expects name=rational: " + spec);
        int g = gen::index_of(spec.substr(0, eq));
        if (g < 0) throw Usage("unknown generator in --specialize: " + spec);
        mpq_class v;
        if (v.set_str(spec.substr(eq + 1), 10) != 0) throw Usage("bad rational in --specialize: " + spec);
        v.canonicalize();
        if (v == 0) throw Usage("generators must specialize to nonzero values: " + spec);
        vals.emplace_back(g, v);
    }
    Poly apply(const Poly& p) const {
        Poly out;
        for (auto& [m, c] : p.terms()) {
            Monomial rest = m;
            mpq_class k = c;
            for (auto& [g, v] : vals) {
                int e = rest.e[g];
                rest.e[g] = 0;
                mpz_class num, den;
                mpz_pow_ui(num.get_mpz_t(), (e >= 0 ? v.get_num() : v.get_den()).get_mpz_t(), std::abs(e));
                mpz_pow_ui(den.get_mpz_t(), (e >= 0 ? v.get_den() : v.get_num()).get_mpz_t(), std::abs(e));
                k *= mpq_class(num, den);
            }
            k.canonicalize();
            out += Poly(rest, k);
        }
        return out;
    }
    RatF apply(const RatF& x) const {
        if (vals.empty() || x.is_zero()) return x;
        Poly d = apply(x.denominator());
        if (d.is_zero()) throw std::domain_error("specialization hits a pole");
        return RatF(apply(x.numerator())) / RatF(d);
    }
};

KOptions kopts(int r, int n, const std::string& mode, uint64_t seed) {
    KOptions o;
    o.r = r;
    o.max_size = n;
    o.mode = mode == "exact" ? Mode::exact : Mode::probe;
    o.seed = seed;
    return o;
}

// one record per suite; the overall verdict is the conjunction
struct Output {
    json config;
    json suites = json::array();
    json result;
    bool pass = true;

    void add(const Report& r) {
        suites.push_back(r.to_json());
        if (!r.pass) pass = false;
    }
    json to_json() const {
        json j = {{"schema", kSchema}, {"config", config}, {"config_hash", fnv1a(config.dump())}, {"pass", pass}};
        if (!suites.empty()) j["suites"] = suites;
        if (!result.is_null()) j["result"] = result;
        return j;
    }
};

Report merged(const std::string& name, const std::vector<Report>& rs) {
    Report m(name);
    for (auto& r : rs) m.merge(r);
    return m;
}

Report verify_suite(const std::string& s, const KOptions& o, int k, int kp) {
    int r = o.r;
    auto ks = [&](int lo) {
        std::vector<int> v;
        if (k > 0) return std::vector<int>{k};
        for (int i = lo; i <= r; ++i) v.push_back(i);
        return v;
    };
    if (s == "heisenberg") return check_heisenberg(o);
    if (s == "rel123") return check_rel123(o);
    if (s == "w-k1") {
        std::vector<Report> rs;
        for (int i : ks(1)) rs.push_back(check_w_relation_k1(o, i));
        return merged("w-k1", rs);
    }
    if (s == "w-full") {
        std::vector<Report> rs;
        for (int i : ks(1))
            for (int j = (kp > 0 ? kp : i); j <= (kp > 0 ? kp : r); ++j) rs.push_back(check_w_relation_full(o, i, j));
        return merged("w-full", rs);
    }
    if (s == "poles") {
        std::vector<Report> rs;
        std::vector<std::pair<int, int>> pairs = {{1, 1}, {2, 1}, {2, 2}};
        if (k > 0) pairs = {{k, kp > 0 ? kp : k}};
        for (auto [a, b] : pairs) rs.push_back(check_pole_structure(o, a, b));
        return merged("poles", rs);
    }
    if (s == "truncation" || s == "verma") {
        Report t = check_truncation_and_verma(o);
        t.name = s;
        return t;
    }
    if (s == "adjoint") return check_adjoint(o);
    if (s == "power") return check_power_formula(o);
    throw Usage("unknown suite " + s);
}

const std::vector<std::string> kVerifySuites = {"heisenberg", "rel123",  "w-k1",    "w-full", "poles",
                                                "truncation", "verma", "adjoint", "power"};

template <class F>
json wmatrix_json(int r, int d, int k, int from, int to) {
    KModule<F> K(r);
    Op<F> W = K.w_op(d, k);
    json entries = json::array();
    for (int n = std::max(from, std::max(0, d)); n <= to; ++n) {
        const Mat<F>& M = W.block(n);
        for (int i = 0; i < M.rows; ++i)
            for (int j = 0; j < M.cols; ++j) {
                if (M(i, j).is_zero()) continue;
                entries.push_back(
                    {{"mu", rpart_json(K.states(n - d)[i])}, {"lambda", rpart_json(K.states(n)[j])}, {"value", scalar(M(i, j))}});
            }
    }
    return entries;
}

std::string vec_key(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

SymPresentation build_family(const std::string& f, int k, int d) {
    if (f == "P") return build_P(k, d);
    if (f == "H") return build_H(k, d);
    if (f == "E") return build_E(k, d);
    if (f == "Q") return build_Q(k, d);
    if (f == "T") return build_T(k, d);
    throw Usage("unknown family " + f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qwcli: deformed W-algebras on fixed-point bases"};
    app.require_subcommand(1);
    app.fallthrough();
    int indent = 2;
    app.add_option("--json-indent", indent, "JSON indentation (-1 for one line)");

    std::string mode = "probe";
    uint64_t seed = 1;
    int r = 1, max_size = 2;
    auto common = [&](CLI::App* c, const std::string& default_mode) {
        mode = default_mode;
        c->add_option("--r", r, "rank")->check(CLI::Range(1, 4));
        c->add_option("--mode", mode, "probe or exact")->check(CLI::IsMember({"probe", "exact"}));
        c->add_option("--seed", seed, "probe seed");
    };

    // verify
    auto* verify = app.add_subcommand("verify", "run relation suites on the level-r module K");
    std::string suite;
    bool all = false;
    int k = 0, kp = 0;
    common(verify, "probe");
    verify->add_option("--suite", suite)->check(CLI::IsMember(kVerifySuites));
    verify->add_flag("--all", all, "run every suite");
    verify->add_option("--max-size", max_size)->check(CLI::Range(0, 6));
    verify->add_option("--k", k, "restrict the current index")->check(CLI::Range(1, 4));
    verify->add_option("--kp", kp, "restrict the second current index")->check(CLI::Range(1, 4));

    // wmatrix
    auto* wmatrix = app.add_subcommand("wmatrix", "matrix block of W_{d,k} on K");
    int d = 0, size_from = 0, size_to = 1;
    wmatrix->add_option("--r", r)->check(CLI::Range(1, 4));
    wmatrix->add_option("--d", d)->required();
    wmatrix->add_option("--k", k)->required()->check(CLI::Range(0, 6));
    wmatrix->add_option("--size-from", size_from)->check(CLI::NonNegativeNumber);
    wmatrix->add_option("--size-to", size_to)->check(CLI::Range(0, 5));
    std::string wmode = "exact";
    wmatrix->add_option("--mode", wmode)->check(CLI::IsMember({"probe", "exact"}));
    wmatrix->add_option("--seed", seed);

    // nekrasov
    auto* nek = app.add_subcommand("nekrasov", "Nekrasov partition function coefficients");
    int quiver = 1, max_inst = 1;
    std::vector<std::string> specs;
    std::string nmode = "exact";
    nek->add_option("--r", r)->check(CLI::Range(1, 3));
    nek->add_option("--quiver-length", quiver)->check(CLI::Range(1, 3));
    nek->add_option("--max-instanton", max_inst)->check(CLI::Range(0, 4));
    nek->add_option("--specialize", specs, "name=rational, repeatable");
    nek->add_option("--mode", nmode)->check(CLI::IsMember({"probe", "exact"}));
    nek->add_option("--seed", seed);

    // ext
    auto* ext = app.add_subcommand("ext", "Ext-operator coefficients and suites");
    std::string lam_s, lamp_s, ext_suite;
    std::string emode;  // exact for a single coefficient, probe for suites
    ext->add_option("--lambda", lam_s, "target r-partition as JSON, e.g. [[1],[]]");
    ext->add_option("--lambda-prime", lamp_s, "source r-partition as JSON");
    ext->add_option("--suite", ext_suite)->check(CLI::IsMember({"routes", "adjoint", "thm43", "main"}));
    ext->add_option("--r", r)->check(CLI::Range(1, 3));
    ext->add_option("--max-size", max_size)->check(CLI::Range(0, 4));
    ext->add_option("--k", k)->check(CLI::Range(1, 3));
    ext->add_option("--mode", emode)->check(CLI::IsMember({"probe", "exact"}));
    ext->add_option("--seed", seed);

    // shuffle
    auto* shuf = app.add_subcommand("shuffle", "shuffle-algebra elements and identities");
    std::string family = "P", shuf_suite;
    int sk = 1, sd = 0, sa = 1, sb = 0, sorder = 2;
    shuf->add_option("--family", family, "P, H, E, Q, or T (T: --k variables, --d power)")
        ->check(CLI::IsMember({"P", "H", "E", "Q", "T"}));
    shuf->add_option("--k", sk)->check(CLI::Range(1, 5));
    shuf->add_option("--d", sd)->check(CLI::Range(-6, 6));
    shuf->add_option("--suite", shuf_suite)->check(CLI::IsMember({"hq"}));
    shuf->add_option("--a", sa)->check(CLI::Range(1, 3));
    shuf->add_option("--b", sb)->check(CLI::Range(-3, 3));
    shuf->add_option("--order", sorder)->check(CLI::Range(1, 3));

    // miura
    auto* miura = app.add_subcommand("miura", "free-field (Fock) oracle");
    std::string msuite = "relations";
    int max_degree = 2, cross = -1;
    common(miura, "probe");
    miura->add_option("--suite", msuite)->check(CLI::IsMember({"relations", "glsl", "mish"}));
    miura->add_option("--max-degree", max_degree)->check(CLI::Range(0, 5));
    miura->add_option("--cross-size", cross, "also run the K-side suites at this size and compare")
        ->check(CLI::Range(-1, 3));

    // classical
    auto* clas = app.add_subcommand("classical", "cohomological limit");
    std::string csuite = "locality", form = "limit";
    int eps_order = -1, ci = -1;
    common(clas, "probe");
    clas->add_option("--suite", csuite)->check(CLI::IsMember({"locality", "limit"}));
    clas->add_option("--max-size", max_size)->check(CLI::Range(0, 4));
    clas->add_option("--eps-order", eps_order, "relative precision of eps-series (>= r+1)")->check(CLI::Range(2, 20));
    clas->add_option("--i", ci, "a single current index")->check(CLI::Range(0, 4));
    clas->add_option("--form", form, "limit or literal")->check(CLI::IsMember({"limit", "literal"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Output out;
    const char* th = std::getenv("QW_THREADS");
    try {
        if (verify->parsed()) {
            if (all == !suite.empty()) throw Usage("verify needs exactly one of --suite or --all");
            out.config = {{"command", "verify"}, {"suite", all ? "all" : suite}, {"r", r},    {"max_size", max_size},
                          {"mode", mode},        {"seed", seed},                   {"k", k},    {"kp", kp}};
            KOptions o = kopts(r, max_size, mode, seed);
            if (all)
                for (auto& s : kVerifySuites) {
                    if (s == "verma") continue;  // same report as truncation
                    out.add(verify_suite(s, o, k, kp));
                }
            else
                out.add(verify_suite(suite, o, k, kp));
        } else if (wmatrix->parsed()) {
            if (size_to < size_from) throw Usage("--size-to must be >= --size-from");
            out.config = {{"command", "wmatrix"}, {"r", r},       {"d", d},        {"k", k},
                          {"size_from", size_from}, {"size_to", size_to}, {"mode", wmode}, {"seed", seed}};
            if (wmode == "exact")
                out.result = wmatrix_json<RatF>(r, d, k, size_from, size_to);
            else {
                ProbeScope sc(seed);
                out.result = wmatrix_json<Fp>(r, d, k, size_from, size_to);
            }
        } else if (nek->parsed()) {
            Specialization sp;
            for (auto& s : specs) sp.add(s);
            out.config = {{"command", "nekrasov"}, {"r", r},       {"quiver_length", quiver}, {"max_instanton", max_inst},
                          {"specialize", specs},   {"mode", nmode}, {"seed", seed}};
            json table = json::object();
            bool ok = true;
            auto fill = [&](auto dir, auto tr) {
                for (auto& [v, x] : dir) {
                    table[vec_key(v)] = scalar(sp.apply(x));
                    if (!(x == tr.at(v))) ok = false;
                }
            };
            if (nmode == "exact") {
                fill(nekrasov_direct<RatF>(r, quiver, max_inst), nekrasov_trace<RatF>(r, quiver, max_inst));
            } else {
                if (!specs.empty()) throw Usage("--specialize needs --mode exact");
                ProbeScope sc(seed);
                auto dir = nekrasov_direct<Fp>(r, quiver, max_inst);
                auto tr = nekrasov_trace<Fp>(r, quiver, max_inst);
                for (auto& [v, x] : dir) {
                    table[vec_key(v)] = scalar(x);
                    if (!(x == tr.at(v))) ok = false;
                }
            }
            out.result = table;
            Report rep("trace-equals-direct");
            rep.check(ok, {{"max_instanton", max_inst}});
            out.add(rep);
        } else if (ext->parsed()) {
            if (emode.empty()) emode = ext_suite.empty() ? "exact" : "probe";
            if (!ext_suite.empty()) {
                out.config = {{"command", "ext"}, {"suite", ext_suite}, {"r", r}, {"max_size", max_size},
                              {"k", k},           {"mode", emode},      {"seed", seed}};
                KOptions o = kopts(r, max_size, emode, seed);
                if (ext_suite == "routes") out.add(check_ext_routes(o));
                if (ext_suite == "adjoint") out.add(check_ext_adjoint(o));
                if (ext_suite == "thm43") out.add(check_thm43(o));
                if (ext_suite == "main") out.add(check_main_theorem(o, k > 0 ? k : 1));
            } else {
                if (lam_s.empty() || lamp_s.empty()) throw Usage("ext needs --lambda and --lambda-prime, or --suite");
                RPartition lam = rpart_parse(lam_s), lamp = rpart_parse(lamp_s);
                if (lam.r() != lamp.r()) throw Usage("--lambda and --lambda-prime must have the same rank");
                int rr = lam.r();
                out.config = {{"command", "ext"}, {"lambda", rpart_json(lam)}, {"lambda_prime", rpart_json(lamp)},
                              {"mode", emode},    {"seed", seed}};
                Monomial m = Monomial::var(gen::m);
                if (emode == "exact") {
                    KModule<RatF> T(rr), S(rr, 1);
                    out.result = {{"a_matrix", scalar(a_matrix(T, S, m, lam, lamp))}};
                } else {
                    ProbeScope sc(seed);
                    KModule<Fp> T(rr), S(rr, 1);
                    out.result = {{"a_matrix", scalar(a_matrix(T, S, m, lam, lamp))}};
                }
            }
        } else if (shuf->parsed()) {
            if (!shuf_suite.empty()) {
                out.config = {{"command", "shuffle"}, {"suite", shuf_suite}, {"a", sa}, {"b", sb}, {"order", sorder}};
                out.add(check_hq_series(sa, sb, sorder));
            } else {
                out.config = {{"command", "shuffle"}, {"family", family}, {"k", sk}, {"d", sd}};
                SymPresentation R = build_family(family, sk, sd);
                SymElement e(R);
                out.result = {{"variables", R.k}, {"rho", R.rho.str()}, {"phi_x", scalar(phi_x(e))}};
                Report w("wheel");
                w.check(wheel_check(e), {{"family", family}, {"k", sk}, {"d", sd}});
                out.add(w);
            }
        } else if (miura->parsed()) {
            out.config = {{"command", "miura"}, {"suite", msuite}, {"r", r},       {"max_degree", max_degree},
                          {"cross_size", cross}, {"mode", mode},   {"seed", seed}};
            KOptions o = kopts(r, max_degree, mode, seed);
            if (msuite == "relations") out.add(check_miura_relations(o, cross));
            if (msuite == "glsl") out.add(check_glsl_map(o));
            if (msuite == "mish") out.add(check_mish(o));
        } else if (clas->parsed()) {
            out.config = {{"command", "classical"}, {"suite", csuite}, {"r", r},       {"max_size", max_size},
                          {"eps_order", eps_order}, {"i", ci},         {"form", form}, {"mode", mode},
                          {"seed", seed}};
            KOptions o = kopts(r, max_size, mode, seed);
            if (csuite == "limit") {
                if (mode == "exact") throw Usage("the limit suite runs in probe mode");
                if (eps_order >= 0 && eps_order < r + 1) throw Usage("--eps-order must be at least r+1");
                out.add(check_classical_limit(o, eps_order));
            } else {
                if (ci > r) throw Usage("--i must be at most r");
                ClassicalForm f = form == "limit" ? ClassicalForm::limit : ClassicalForm::literal;
                for (int i = (ci >= 0 ? ci : 0); i <= (ci >= 0 ? ci : r); ++i) out.add(check_locality(o, i, f));
            }
        }
    } catch (const Usage& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json j = {{"schema", kSchema}, {"config", out.config}, {"error", e.what()}, {"pass", false}};
        std::cout << j.dump(indent) << "\n";
        return 1;
    }
    json j = out.to_json();
    // evaluation is single-threaded; the request is echoed outside the hashed config
    if (th) j["threads_requested"] = th;
    std::cout << j.dump(indent) << "\n";
    return out.pass ? 0 : 1;
}
