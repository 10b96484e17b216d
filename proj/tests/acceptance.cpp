// Acceptance run: one line per criterion, "PASS"/"FAIL", with the measured time against its budget.
// A criterion fails if any of its checks fails or it overruns the budget. Exit code 1 if any fails.

#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "qw/classical.hpp"
#include "qw/miura.hpp"
#include "qw/shuffle.hpp"

using namespace qw;

namespace {

KOptions opts(int r, int n, uint64_t seed = 20261014) {
    KOptions o;
    o.r = r;
    o.max_size = n;
    o.seed = seed;
    return o;
}

struct Tally {
    bool ok = true;
    long checks = 0;
    std::string first_failure;
    std::string note;

    void add(const Report& r) {
        checks += r.checks;
        if (!r.pass) fail(r.name + " " + (r.failures.empty() ? std::string() : r.failures.front().dump()));
    }
    void expect(bool c, const std::string& what) {
        ++checks;
        if (!c) fail(what);
    }
    void fail(const std::string& what) {
        if (ok) first_failure = what;
        ok = false;
    }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Tally&)>& body) {
    Tally t;
    Stopwatch sw;
    try {
        body(t);
    } catch (const std::exception& e) {
        t.fail(std::string("exception: ") + e.what());
    }
    double s = sw.seconds();
    if (s > budget_s) t.fail("over budget");
    if (!t.ok) ++failures;
    std::printf("[%s] %2d %-52s %7ld checks %8.2fs / %gs", t.ok ? "PASS" : "FAIL", id, title, t.checks, s, budget_s);
    if (!t.note.empty()) std::printf("  %s", t.note.c_str());
    if (!t.ok) std::printf("  first failure: %s", t.first_failure.substr(0, 300).c_str());
    std::printf("\n");
    std::fflush(stdout);
}

RatF om(const Monomial& m) { return RatF::one_minus(m); }

}  // namespace

int main() {
    criterion(1, "wheel conditions, k<=4 |d|<=4", 10, [](Tally& t) {
        for (int k = 1; k <= 4; ++k)
            for (int d = -4; d <= 4; ++d) {
                std::string at = std::to_string(k) + "," + std::to_string(d);
                t.expect(wheel_check(build_P(k, d)), "P " + at);
                t.expect(wheel_check(build_H(k, d)), "H " + at);
                t.expect(wheel_check(build_E(k, d)), "E " + at);
                t.expect(wheel_check(build_Q(k, d)), "Q " + at);
                t.expect(wheel_check(build_T(k, d)), "T " + at);
            }
    });

    criterion(2, "exponential families at order 2", 30, [](Tally& t) {
        // (0,1) has no k = 0 shuffle element; it is read with (degree, variables) ordering, i.e. slope 0
        for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {1, -1}}) t.add(check_hq_series(a, b, 2));
        t.add(check_hq_series(1, 0, 3));
        t.note = "(0,1) taken as k=n, d=0 (also run at order 3)";
    });

    criterion(3, "phi functional table, n<=3", 10, [](Tally& t) {
        Monomial q1 = Monomial::q1(), q2 = Monomial::q2();
        for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {1, -1}})
            for (int n = 1; n <= 3; ++n) {
                std::string at = std::to_string(a) + "," + std::to_string(b) + " n=" + std::to_string(n);
                t.expect(phi_functional(build_P(n * a, n * b), n, a, b) == om(q2.pow(n)), "P " + at);
                t.expect(phi_functional(build_H(n * a, n * b), n, a, b) == om(q2), "H " + at);
                RatF e = om(q2) * RatF(Poly(q2.pow(n - 1), (n - 1) % 2 ? -1 : 1));
                t.expect(phi_functional(build_E(n * a, n * b), n, a, b) == e, "E " + at);
                RatF qv = om(Monomial::q(-1)) * om(q2) * om(q1.pow(-n)) / om(q1.inv());
                t.expect(phi_functional(build_Q(n * a, n * b), n, a, b) == qv, "Q " + at);
            }
    });

    criterion(4, "phi_x closed form k<=3 |d|<=3; multiplicativity", 60, [](Tally& t) {
        for (int k = 1; k <= 3; ++k)
            for (int d = -3; d <= 3; ++d)
                t.expect(phi_x(build_P(k, d)) == phi_x_P_expected(k, d), "P " + std::to_string(k) + "," + std::to_string(d));
        auto shifted = [](const RatF& r, int k1) {
            MonoSubst s;
            s.set(gen::x, Monomial::var(gen::x) * Monomial::q(-k1));
            return r.subst(s);
        };
        std::mt19937_64 rng(20261014);
        std::uniform_int_distribution<int> fam(0, 4), kk(1, 2), dd(-2, 2);
        auto pick = [&] {
            int f = fam(rng), k = kk(rng), d = dd(rng);
            switch (f) {
                case 0: return build_P(k, d);
                case 1: return build_H(k, d);
                case 2: return build_E(k, d);
                case 3: return build_Q(k, d);
                default: return build_T(k, d);
            }
        };
        for (int i = 0; i < 12; ++i) {
            SymElement a = pick(), b = pick();
            t.expect(phi_x(shuffle_mul(a, b)) == phi_x(a) * shifted(phi_x(b), a.k), "pair " + std::to_string(i));
        }
    });

    criterion(5, "broken-path identity, 1<=d,k<=5", 30, [](Tally& t) {
        for (int d = 1; d <= 5; ++d)
            for (int k = 1; k <= 5; ++k)
                t.expect(broken_path_identity(d, k), std::to_string(d) + "," + std::to_string(k));
    });

    criterion(6, "Heisenberg relation on K, r<=2 sizes<=3", 60, [](Tally& t) {
        for (int r = 1; r <= 2; ++r) t.add(check_heisenberg(opts(r, 3), 2));
    });

    criterion(7, "p/P relations rel1-3, r<=2 sizes<=3", 120, [](Tally& t) {
        for (int r = 1; r <= 2; ++r) t.add(check_rel123(opts(r, 3), 2, 2));
    });

    criterion(8, "W-current relations", 300, [](Tally& t) {
        for (int r = 1; r <= 2; ++r)
            for (int k = 1; k <= r; ++k) t.add(check_w_relation_k1(opts(r, 3), k, 2));
        t.add(check_w_relation_full(opts(2, 2), 2, 2, 2));
    });

    criterion(9, "pole structure of the W-W shuffle products", 120, [](Tally& t) {
        for (int r = 1; r <= 2; ++r)
            for (auto [k, kp] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}})
                t.add(check_pole_structure(opts(r, 2), k, kp));
    });

    criterion(10, "truncation, W_r product identity, Verma", 120, [](Tally& t) {
        for (int r = 1; r <= 2; ++r) t.add(check_truncation_and_verma(opts(r, 3)));
    });

    criterion(11, "adjointness for P and T", 60, [](Tally& t) {
        for (int r = 1; r <= 2; ++r) t.add(check_adjoint(opts(r, 3), 2, 2));
    });

    criterion(12, "w_op vs power-sum expansion, r=2", 120, [](Tally& t) { t.add(check_power_formula(opts(2, 2), 2, 2)); });

    criterion(13, "Ext commutation relations", 180, [](Tally& t) {
        for (int r = 1; r <= 2; ++r) t.add(check_thm43(opts(r, 3), 2));
    });

    criterion(14, "Ext vs W_k main relation", 300, [](Tally& t) {
        std::string single;
        for (int r = 1; r <= 2; ++r)
            for (int k = 0; k <= r; ++k) {
                Report rep = check_main_theorem(opts(r, r == 1 ? 3 : 2), k);
                t.add(rep);
                bool s = rep.info.value("single_factor", false);
                single += " r" + std::to_string(r) + "k" + std::to_string(k) + "=" + (s ? "yes" : "no");
            }
        t.note = "single-factor form:" + single;
    });

    criterion(15, "Nekrasov trace = direct; Ext adjoint", 120, [](Tally& t) {
        for (int k = 1; k <= 2; ++k) t.add(check_nekrasov(opts(1, 2), k));
        t.add(check_ext_adjoint(opts(1, 3)));
    });

    criterion(16, "Miura oracle, r in {2,3}, degree<=3", 300, [](Tally& t) {
        for (int r = 2; r <= 3; ++r) {
            Report rep = check_miura_relations(opts(r, 3), 2);
            t.add(rep);
            t.expect(rep.info.value("verdicts_agree", false), "verdicts disagree r=" + std::to_string(r));
            ProbeScope sc(20261014 + r);
            FockModule<Fp> B(r);
            for (int d = -2; d <= 2; ++d)
                for (int n = std::max(0, d); n <= 3; ++n)
                    for (int k = r + 1; k <= r + 2; ++k)
                        t.expect(B.w_op(d, k).block(n).is_zero(), "W_k, k>r, r=" + std::to_string(r));
        }
    });

    criterion(17, "classical locality and eps-bridges", 300, [](Tally& t) {
        std::string lit;
        for (int r = 1; r <= 2; ++r) {
            KOptions o = opts(r, r == 1 ? 3 : 2);
            for (int i = 0; i <= r; ++i) {
                t.add(check_locality(o, i));
                bool l = check_locality(o, i, ClassicalForm::literal).pass;
                lit += " r" + std::to_string(r) + "i" + std::to_string(i) + "=" + (l ? "pass" : "fail");
            }
            Report b = check_classical_limit(opts(r, 2));
            t.add(b);
            lit += std::string(" bridge-literal r") + std::to_string(r) + "=" +
                   (b.info.value("literal_form", false) ? "pass" : "fail");
        }
        t.note = "literal form:" + lit;
    });

    criterion(18, "dim K_n = r-partitions = Fock dimension", 5, [](Tally& t) {
        t.add(check_dimensions(3, 6));
        t.add(check_fock_dimensions(3, 6));
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
