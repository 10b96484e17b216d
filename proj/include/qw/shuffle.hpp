#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "report.hpp"
#include "scalars.hpp"

namespace qw {

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(int k) : std::runtime_error("shuffle variable cap exceeded: k=" + std::to_string(k)) {}
};
struct TrueSingularity : std::domain_error {
    explicit TrueSingularity(const std::string& w) : std::domain_error("non-removable singularity: " + w) {}
};

inline int shuffle_cap() { return 6; }

inline long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

inline Monomial zv(int i) { return Monomial::var(gen::z(i)); }

// Sym[ rho / prod (1 - q z_{i+1}/z_i) * prod_{i<j} zeta(z_i/z_j) ]
struct SymPresentation {
    int k = 1;
    Poly rho;
};

inline FactorProduct chain_and_zeta(int k, int offset = 0) {
    FactorProduct f;
    for (int i = 1; i < k; ++i) f.mul_binomial(Monomial::q() * zv(offset + i + 1) / zv(offset + i), -1);
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) f.mul_zeta(zv(offset + i) / zv(offset + j));
    return f;
}

namespace detail {

inline Monomial floor_mono(int k, int d) {
    Monomial m;
    for (int i = 1; i <= k; ++i) m *= zv(i).pow((int)(floor_div((long)i * d, k) - floor_div((long)(i - 1) * d, k)));
    return m;
}

// sum_{s<n} [q^s] z_{a(n-1)+1}...z_{a(n-s)+1} / (z_{a(n-1)}...z_{a(n-s)})
inline Poly inner_sum(int k, int d, bool with_q) {
    int n = std::gcd(k, std::abs(d)), a = k / n;
    Poly s;
    Monomial m;
    for (int t = 0; t < n; ++t) {
        if (t > 0) m *= zv(a * (n - t) + 1) / zv(a * (n - t));
        s += Poly(with_q ? m * Monomial::q(t) : m);
    }
    return s;
}

}  // namespace detail

inline SymPresentation build_P(int k, int d) {
    return {k, detail::inner_sum(k, d, true).mul_mono(detail::floor_mono(k, d))};
}
inline SymPresentation build_H(int k, int d) { return {k, Poly(detail::floor_mono(k, d))}; }
inline SymPresentation build_E(int k, int d) {
    int n = std::gcd(k, std::abs(d));
    Monomial m;
    for (int i = 1; i <= k; ++i) {
        long e = ceil_div((long)i * d, k) - ceil_div((long)(i - 1) * d, k) + (i == k) - (i == 1);
        m *= zv(i).pow((int)e);
    }
    mpq_class sign = (n - 1) % 2 ? -1 : 1;
    return {k, Poly(m * Monomial::q(n - 1), sign)};
}
inline SymPresentation build_Q(int k, int d) {
    Poly pre = Poly(1) - Poly(Monomial::q(-1));
    return {k, pre * detail::inner_sum(k, d, false).mul_mono(detail::floor_mono(k, d))};
}
inline SymPresentation build_T(int d, int k) {
    return {d, Poly(zv(d).pow(k), (k - 1) % 2 ? -1 : 1)};
}

struct SymTerm {
    Poly num;
    FactorProduct fp;
};

// sum over S_k of the terms, i.e. Sym[sum_t num_t * fp_t]
struct SymElement {
    int k = 0;
    std::vector<SymTerm> terms;

    SymElement() = default;
    SymElement(const SymPresentation& p) : k(p.k), terms{{p.rho, chain_and_zeta(p.k)}} {}
    static SymElement constant(const Poly& c) {
        SymElement e;
        e.terms.push_back({c, FactorProduct()});
        return e;
    }

    SymElement scaled(const Poly& c) const {
        SymElement r = *this;
        for (auto& t : r.terms) t.num = t.num * c;
        return r;
    }
    SymElement& operator+=(const SymElement& o) {
        if (terms.empty() && o.k != k) k = o.k;
        if (!o.terms.empty() && o.k != k) throw std::invalid_argument("adding shuffle elements of different k");
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    friend SymElement operator+(SymElement a, const SymElement& b) { return a += b; }
    friend SymElement operator-(SymElement a, const SymElement& b) { return a += b.scaled(Poly(-1)); }
};

inline const std::vector<std::vector<int>>& permutations(int k) {
    static std::vector<std::vector<std::vector<int>>> cache(shuffle_cap() + 1);
    if (k > shuffle_cap()) throw CapExceeded(k);
    auto& c = cache[k];
    if (c.empty()) {
        std::vector<int> p(k);
        std::iota(p.begin(), p.end(), 0);
        do c.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
    }
    return c;
}

inline MonoSubst perm_subst(const std::vector<int>& s) {
    MonoSubst m;
    for (size_t i = 0; i < s.size(); ++i) m.set(gen::z((int)i + 1), zv(s[i] + 1));
    return m;
}

inline SymElement shuffle_mul(const SymElement& a, const SymElement& b) {
    int k = a.k + b.k;
    if (k > shuffle_cap()) throw CapExceeded(k);
    MonoSubst shift;
    for (int i = 1; i <= b.k; ++i) shift.set(gen::z(i), zv(a.k + i));
    FactorProduct cross;
    for (int i = 1; i <= a.k; ++i)
        for (int j = a.k + 1; j <= k; ++j) cross.mul_zeta(zv(i) / zv(j));
    SymElement r;
    r.k = k;
    for (auto& ta : a.terms)
        for (auto& tb : b.terms)
            r.terms.push_back({ta.num * tb.num.subst(shift), ta.fp * tb.fp.subst(shift) * cross});
    return r;
}

// Value at the current probe point (z_i take their context values).
template <class F>
F eval_sym(const SymElement& e) {
    F s(0);
    for (auto& p : permutations(e.k)) {
        MonoSubst ps = perm_subst(p);
        for (auto& t : e.terms) s += RatF::eval_poly<F>(t.num.subst(ps)) * t.fp.subst(ps).eval<F>();
    }
    return s;
}

inline bool sym_equal_probe(const SymElement& a, const SymElement& b, int reps = 3, uint64_t seed = 7) {
    if (a.k != b.k) return a.terms.empty() && b.terms.empty();
    for (int r = 0; r < reps; ++r) {
        ProbeScope scope(seed + 1000003ull * r);
        if (eval_sym<Fp>(a) != eval_sym<Fp>(b)) return false;
    }
    return true;
}

// Expand the product of binomials as a Laurent polynomial; all exponents must be >= 0.
inline Poly expand_factors(const Poly& num, const FactorProduct& f) {
    if (f.is_zero()) return Poly();
    Poly p = num.mul_mono(f.prefactor(), f.constant());
    for (auto& [m, e] : f.factors()) {
        if (e < 0) throw std::logic_error("expand_factors: negative exponent");
        for (int i = 0; i < e && !p.is_zero(); ++i) p = p - p.mul_mono(m);
    }
    return p;
}

// Numerator vanishing at z1/z2, z2/z3, z3/z1 = {q1,q2,1/q} in both orderings.
inline bool wheel_check(const SymElement& a) {
    if (a.k <= 2) return true;
    int k = a.k;
    FactorProduct clear;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) {
            if (i == j) continue;
            clear.mul_binomial(Monomial::q() * zv(i) / zv(j), 1);
            if (i < j) clear.mul_binomial(zv(i) / zv(j), 1);
        }
    Monomial orient[2][2] = {{Monomial::q1(), Monomial::q2()}, {Monomial::q2(), Monomial::q1()}};
    for (auto& o : orient) {
        MonoSubst w;
        w.set(gen::z(1), Monomial());
        w.set(gen::z(2), o[0].inv());
        w.set(gen::z(3), Monomial::q(-1));
        Poly acc;
        for (auto& p : permutations(k)) {
            MonoSubst ps = perm_subst(p);
            for (auto& t : a.terms) {
                FactorProduct f = t.fp.subst(ps) * clear;
                if (f.identity_count() != 0) throw std::logic_error("wheel_check: element not in shuffle form");
                for (auto& [m, e] : f.factors())
                    if (e < 0) throw std::logic_error("wheel_check: unexpected pole " + m.str());
                FactorProduct fw = f.subst(w);
                if (fw.is_zero()) continue;
                acc += expand_factors(t.num.subst(ps).subst(w), fw);
            }
        }
        if (!acc.is_zero()) return false;
    }
    return true;
}

// phi(R) = R(1, q1^{-1}, ..., q1^{1-na}) / prod zeta(q1^{j-i}) * q1^{...} (1-q2)^{na}
inline RatF phi_functional(const SymElement& e, int n, int a0, int b0) {
    int k = n * a0;
    if (e.k != k) throw std::invalid_argument("phi_functional: variable count mismatch");
    MonoSubst pt;
    for (int i = 1; i <= k; ++i) pt.set(gen::z(i), Monomial::q1(-(i - 1)));
    RatF s;
    for (auto& p : permutations(k)) {
        MonoSubst ps = perm_subst(p);
        for (auto& t : e.terms) {
            FactorProduct f = t.fp.subst(ps).subst(pt);
            if (f.is_zero()) continue;
            Poly c = t.num.subst(ps).subst(pt);
            if (c.is_zero()) continue;
            s += RatF(c) * f.to_ratf();
        }
    }
    FactorProduct norm;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) norm.mul_zeta(Monomial::q1(j - i), -1);
    long ex = (long)n * n * a0 * b0 - (long)n * b0 + (long)n * a0 - n;
    norm.mul_mono(Monomial::q1((int)(ex / 2)));
    norm.mul_binomial(Monomial::q2(), k);
    return s * norm.to_ratf();
}

// Iterated limits z_1 -> 1/x, z_2 -> q/x, ..., of R / prod_{i<j} zeta(z_i/z_j).
inline RatF phi_x(const SymElement& e) {
    int k = e.k;
    FactorProduct inv_zeta;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) inv_zeta.mul_zeta(zv(i) / zv(j), -1);
    Monomial X = Monomial::var(gen::x);
    RatF s;
    for (auto& p : permutations(k)) {
        MonoSubst ps = perm_subst(p);
        for (auto& t : e.terms) {
            FactorProduct f = t.fp.subst(ps) * inv_zeta;
            Poly c = t.num.subst(ps);
            bool zero = false;
            for (int i = 1; i <= k && !zero; ++i) {
                MonoSubst st;
                st.set(gen::z(i), Monomial::q(i - 1) / X);
                f = f.subst(st);
                c = c.subst(st);
                if (f.identity_count() < 0)
                    throw TrueSingularity("z" + std::to_string(i) + " -> q^" + std::to_string(i - 1) + "/x");
                zero = f.is_zero() || c.is_zero();
            }
            if (!zero) s += RatF(c) * f.to_ratf();
        }
    }
    return s;
}

// phi^k_x(P_{d,k}) as predicted in closed form
inline RatF phi_x_P_expected(int k, int d) {
    int n = std::gcd(k, std::abs(d));
    long al = (long)k * d + k - d - n;
    FactorProduct f(1, Monomial::q((int)(al / 2)) * Monomial::var(gen::x, -d));
    f.mul_binomial(Monomial::q1(n), 1);
    f.mul_binomial(Monomial::q2(n), 1);
    f.mul_binomial(Monomial::q(-1), k);
    f.mul_binomial(Monomial::q1(), -k);
    f.mul_binomial(Monomial::q2(), -k);
    f.mul_binomial(Monomial::q(-n), -1);
    return f.to_ratf();
}

struct LatticePoint {
    int d, k;
    friend bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.d == b.d && a.k == b.k; }
};

inline long alpha_v(const std::vector<LatticePoint>& v) {
    long a2 = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        for (size_t j = i + 1; j < v.size(); ++j) a2 += 2L * v[i].k * v[j].d;
        long n = std::gcd(v[i].k, std::abs(v[i].d));
        a2 += (long)v[i].k * v[i].d + v[i].k - v[i].d - n;
    }
    return a2 / 2;
}

inline mpq_class z_v(const std::vector<LatticePoint>& v) {
    mpz_class r = 1;
    for (size_t i = 0; i < v.size();) {
        size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        for (size_t m = 2; m <= j - i; ++m) r *= (unsigned long)m;
        i = j;
    }
    for (auto& p : v) r *= std::gcd(p.k, std::abs(p.d));
    return mpq_class(r);
}

// Sum over convex broken paths (0,0) -> (d,k) with slopes k_s/d_s increasing.
inline Poly broken_path_lhs(int d, int k) {
    Poly total;
    std::vector<LatticePoint> path;
    std::function<void(int, int)> rec = [&](int dl, int kl) {
        if (dl == 0 || kl == 0) {
            if (dl || kl) return;
            Monomial m;
            Poly brk(1);
            int D = 0;
            for (size_t s = 0; s < path.size(); ++s) {
                int ds = path[s].d, ks = path[s].k;
                for (int i = 1; i <= ds; ++i)
                    m *= zv(i + D).pow((int)(ceil_div((long)i * ks, ds) - ceil_div((long)(i - 1) * ks, ds)));
                D += ds;
                if (s + 1 < path.size()) brk *= Poly::one_minus(zv(D) / zv(D + 1));
            }
            total += brk.mul_mono(m);
            return;
        }
        for (int ds = 1; ds <= dl; ++ds)
            for (int ks = 1; ks <= kl; ++ks) {
                if (!path.empty() && (long)path.back().k * ds >= (long)ks * path.back().d) continue;
                path.push_back({ds, ks});
                rec(dl - ds, kl - ks);
                path.pop_back();
            }
    };
    rec(d, k);
    return total;
}

inline bool broken_path_identity(int d, int k) {
    return broken_path_lhs(d, k) == Poly(zv(1) * zv(d).pow(k - 1));
}

// Order-<=N consequences of the exponential identities for H, E, Q in slope b/a.
inline Report check_hq_series(int a, int b, int N) {
    Report rep("hq_series(" + std::to_string(a) + "," + std::to_string(b) + ")");
    if (a <= 0) throw std::invalid_argument("check_hq_series: needs a >= 1 (variable count a*n)");
    if (a * N > shuffle_cap()) throw CapExceeded(a * N);
    std::vector<SymElement> P(N + 1);
    for (int j = 1; j <= N; ++j) P[j] = build_P(a * j, b * j);
    // n X_n = sum_j c_j P_j * X_{n-j}
    auto series = [&](std::function<Poly(int)> c) {
        std::vector<SymElement> X(N + 1);
        X[0] = SymElement::constant(Poly(1));
        for (int n = 1; n <= N; ++n) {
            SymElement acc;
            for (int j = 1; j <= n; ++j) acc += shuffle_mul(P[j], X[n - j]).scaled(c(j));
            X[n] = acc.scaled(Poly(mpq_class(1, n)));
        }
        return X;
    };
    auto XH = series([](int) { return Poly(1); });
    auto XE = series([](int) { return Poly(-1); });
    auto XQ = series([](int j) { return Poly(1) - Poly(Monomial::q(-j)); });
    for (int n = 1; n <= N; ++n) {
        SymElement H = build_H(a * n, b * n), E = build_E(a * n, b * n), Q = build_Q(a * n, b * n);
        rep.check(sym_equal_probe(H, XH[n]), {{"family", "H"}, {"n", n}});
        rep.check(sym_equal_probe(E.scaled(Poly(n % 2 ? -1 : 1)), XE[n]), {{"family", "E"}, {"n", n}});
        rep.check(sym_equal_probe(Q, XQ[n]), {{"family", "Q"}, {"n", n}});
    }
    return rep;
}

}  // namespace qw
