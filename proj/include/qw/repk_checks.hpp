#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "repk.hpp"

namespace qw {

struct KOptions {
    int r = 1;
    int max_size = 3;
    Mode mode = Mode::probe;
    uint64_t seed = 1;
};

inline const char* mode_name(Mode m) { return m == Mode::probe ? "probe" : "exact"; }

inline uint64_t probe_seed(uint64_t seed, int rep) { return seed + 1000003ull * (uint64_t)rep; }

// Runs body(K, report) on a fresh module: three probe assignments, or once exactly.
template <template <class> class Mod = KModule, class Body>
Report run_on_module(const std::string& name, const KOptions& o, Body&& body, int torus = 0) {
    Report rep(name);
    rep.info["r"] = o.r;
    rep.info["max_size"] = o.max_size;
    rep.info["mode"] = mode_name(o.mode);
    if (o.mode == Mode::probe) {
        for (int t = 0; t < 3; ++t) {
            ProbeScope sc(probe_seed(o.seed, t));
            Mod<Fp> K(o.r, torus);
            body(K, rep);
        }
    } else {
        Mod<RatF> K(o.r, torus);
        body(K, rep);
    }
    return rep;
}

// Entry-wise comparison of two graded operators on states of size <= max_size.
template <class F>
void compare_ops(Report& rep, const Op<F>& A, const Op<F>& B, int max_size, const json& tag) {
    if (A.shift() != B.shift()) throw std::invalid_argument("comparing operators of different degree");
    const auto& K = A.module();
    for (int n = std::max(0, A.shift()); n <= max_size; ++n) {
        int m = n - A.shift();
        if (m > max_size) continue;
        const Mat<F>& X = A.block(n);
        const Mat<F>& Y = B.block(n);
        for (int i = 0; i < X.rows; ++i)
            for (int j = 0; j < X.cols; ++j) {
                if (X(i, j) == Y(i, j)) {
                    ++rep.checks;
                    continue;
                }
                json t = tag;
                t["mu"] = K.states(m)[i].str();
                t["lambda"] = K.states(n)[j].str();
                rep.fail(t);
            }
    }
}
template <class F>
void expect_zero(Report& rep, const Op<F>& A, int max_size, const json& tag) {
    compare_ops(rep, A, A.module().zero(A.shift()), max_size, tag);
}

namespace detail {

template <class F, template <class> class Mod>
F box_factor(const Mod<F>& K, int n) {
    return (F(1) - K.q1().pow(n)) * (F(1) - K.q2().pow(n));
}

// coefficients of f_{kk'}(z) = prod_{i=max(0,k-k')}^{k-1} zeta(z q^i), orders 0..N-1
template <class F, template <class> class Mod>
std::vector<F> f_series(const Mod<F>& K, int k, int kp, int N) {
    Series<F> s(N, F(1));
    for (int i = std::max(0, k - kp); i < k; ++i) {
        Series<F> z(N);
        F qi = K.q().pow(i), p(1);
        for (int n = 0; n < N; ++n, p *= qi) z[n] = K.zeta_coeff(n) * p;
        s = s * z;
    }
    std::vector<F> out(N);
    for (int n = 0; n < N; ++n) out[n] = s[n];
    return out;
}

template <class F, template <class> class Mod>
F theta(const Mod<F>& K, int s) {
    F t = box_factor(K, 1) / (F(1) - K.q());
    for (int j = 1; j < s; ++j) t *= K.zeta(Monomial::q(j));
    return t;
}

// W_{d1,k} W_{d2,k'} on K_N; a module may supply its own product (e.g. via normal ordering)
template <class F, template <class> class Mod>
Mat<F> w_product(const Mod<F>& K, int d1, int k, int d2, int kp, int N) {
    if constexpr (requires { K.w_product(d1, k, d2, kp, N); })
        return K.w_product(d1, k, d2, kp, N);
    else
        return K.w_op(d1, k).block(N - d2) * K.w_op(d2, kp).block(N);
}

// x^{-a} y^{-b} coefficient of W_k(x) W_k'(y) f_{kk'}(y/x), expanded in y/x, at input size N
template <class F, template <class> class Mod>
Mat<F> ordered_product(const Mod<F>& K, int k, int kp, int a, int b, int N) {
    Mat<F> M(K.dim(N - a - b), K.dim(N));
    if (N - b < 0) return M;
    auto f = f_series(K, k, kp, N - b + 1);
    for (int n = 0; b + n <= N; ++n) {
        if (f[n].is_zero()) continue;
        M += w_product(K, a - n, k, b + n, kp, N).scaled(f[n]);
    }
    return M;
}

template <class F, template <class> class Mod>
Mat<F> w_relation_lhs(const Mod<F>& K, int k, int kp, int a, int b, int N) {
    return ordered_product(K, k, kp, a, b, N) - ordered_product(K, kp, k, b, a, N);
}

struct PoleData {
    std::vector<int> star, dstar;  // (1 - q^* w) and (w - q^** ) factors, w = y/x
    int count() const { return (int)(star.size() + dstar.size()); }
};
inline PoleData poles(int k, int kp) {
    PoleData p;
    for (int i = std::max(0, k - kp) + 1; i <= k; ++i) p.star.push_back(i);
    for (int i = std::max(0, kp - k) + 1; i <= kp; ++i) p.dstar.push_back(i);
    return p;
}

// Laurent coefficients N_d, d = lo..hi, of Den(w) * sum_d <W_{d,k} W_{D-d,k'}> w^d f_{kk'}(w)
template <class F>
struct Numerator {
    int lo = 0, top = 0, hi = 0;  // expected degree range lo..top; hi = top + slack
    std::vector<Mat<F>> c;
    PoleData pd;
    const Mat<F>& at(int d) const { return c[d - lo]; }
};

template <class F, template <class> class Mod>
Numerator<F> numerator(const Mod<F>& K, int k, int kp, int D, int N, int slack, const PoleData* pd = nullptr) {
    Numerator<F> out;
    out.pd = pd ? *pd : poles(k, kp);
    int M = N - D;
    out.lo = -M;
    out.top = N + out.pd.count();
    out.hi = out.top + slack;
    int len = out.hi - out.lo + 1;
    std::vector<Mat<F>> cd(len), S(len);
    for (int d = out.lo; d <= out.hi; ++d)
        cd[d - out.lo] = w_product(K, d, k, D - d, kp, N);
    auto f = f_series(K, k, kp, len);
    for (int d = 0; d < len; ++d) {
        S[d] = Mat<F>(K.dim(M), K.dim(N));
        for (int j = 0; j <= d; ++j)
            if (!f[d - j].is_zero()) S[d] += cd[j].scaled(f[d - j]);
    }
    // Den(w) as a polynomial in w
    std::vector<F> den = {F(1)};
    auto mul_lin = [&](F c0, F c1) {  // times (c0 + c1 w)
        std::vector<F> r(den.size() + 1, F(0));
        for (size_t t = 0; t < den.size(); ++t) {
            r[t] += den[t] * c0;
            r[t + 1] += den[t] * c1;
        }
        den = r;
    };
    for (int s : out.pd.star) mul_lin(F(1), -K.q().pow(s));
    for (int s : out.pd.dstar) mul_lin(-K.q().pow(s), F(1));
    out.c.resize(len);
    for (int d = 0; d < len; ++d) {
        out.c[d] = Mat<F>(K.dim(M), K.dim(N));
        for (int t = 0; t < (int)den.size() && t <= d; ++t) out.c[d] += S[d - t].scaled(den[t]);
    }
    return out;
}

template <class F, template <class> class Mod>
F den_value(const Mod<F>& K, const PoleData& pd, const F& w) {
    F v(1);
    for (int s : pd.star) v *= F(1) - K.q().pow(s) * w;
    for (int s : pd.dstar) v *= w - K.q().pow(s);
    return v;
}

// [W_k(x) W_k'(y) f_{kk'}(y/x)] at y/x = w0, as the x^{-a}y^{-b} ... matrix with a+b = D
template <class F, template <class> class Mod>
Mat<F> bracket_at(const Mod<F>& K, int k, int kp, int D, int N, const F& w0, int slack = 2) {
    if (k == 0) return K.w_op(D, kp).block(N);
    if (kp == 0) return K.w_op(D, k).block(N);
    auto num = numerator(K, k, kp, D, N, slack);
    for (int d = num.top + 1; d <= num.hi; ++d)
        if (!num.at(d).is_zero())
            throw ReconstructionOverflow("k=" + std::to_string(k) + " k'=" + std::to_string(kp) +
                                         " D=" + std::to_string(D) + " N=" + std::to_string(N));
    Mat<F> v(K.dim(N - D), K.dim(N));
    for (int d = num.lo; d <= num.top; ++d) v += num.at(d).scaled(w0.pow(d));
    return v.scaled(F(1) / den_value(K, num.pd, w0));
}

template <class F, template <class> class Mod>
void compare_mats(Report& rep, const Mod<F>& K, const Mat<F>& X, const Mat<F>& Y, int m, int n, const json& tag) {
    for (int i = 0; i < X.rows; ++i)
        for (int j = 0; j < X.cols; ++j) {
            if (X(i, j) == Y(i, j)) {
                ++rep.checks;
                continue;
            }
            json t = tag;
            t["mu"] = K.states(m)[i].str();
            t["lambda"] = K.states(n)[j].str();
            rep.fail(t);
        }
}

}  // namespace detail

// [p_{-n}, p_n] = n (1-q1^n)(1-q2^n)(1-c^n)/(1-q^n), other pairs commute
template <template <class> class Mod = KModule>
Report check_heisenberg(const KOptions& o, int nmax = 2) {
    return run_on_module<Mod>("heisenberg", o, [&](auto& K, Report& rep) {
        using F = typename std::decay_t<decltype(K)>::field;
        for (int n = 1; n <= nmax; ++n) {
            F c = F(n) * detail::box_factor(K, n) * (F(1) - K.c().pow(n)) / (F(1) - K.q().pow(n));
            compare_ops(rep, commutator(K.boson(-n), K.boson(n)), K.identity().scaled(c), o.max_size, {{"n", n}});
            for (int m = 1; m <= nmax; ++m) {
                if (m != n) expect_zero(rep, commutator(K.boson(-m), K.boson(n)), o.max_size, {{"m", -m}, {"n", n}});
                if (m < n) {
                    expect_zero(rep, commutator(K.boson(-m), K.boson(-n)), o.max_size, {{"m", -m}, {"n", -n}});
                    expect_zero(rep, commutator(K.boson(m), K.boson(n)), o.max_size, {{"m", m}, {"n", n}});
                }
            }
        }
    });
}

// exp-family identities on the diagonal row: E_{0,1} = P_{0,1}, 2E_{0,2} = P_{0,1}^2 - P_{0,2}, ...
inline Report check_exp_diagonal(const KOptions& o, int nmax = 3) {
    return run_on_module("exp-diagonal", o, [&](auto& K, Report& rep) {
        using F = typename std::decay_t<decltype(K)>::field;
        // n (-1)^n E_n = -sum_j P_j (-1)^{n-j} E_{n-j}
        for (int n = 1; n <= nmax; ++n) {
            Op<F> rhs = K.zero(0);
            for (int j = 1; j <= n; ++j) {
                F s = (n - j) % 2 ? F(1) : F(-1);
                rhs = rhs + (K.diag_p0(j) * K.e0_diag(n - j)).scaled(s);
            }
            F lhs = n % 2 ? F(-n) : F(n);
            compare_ops(rep, K.e0_diag(n).scaled(lhs), rhs, o.max_size, {{"n", n}});
        }
    });
}

// rel1, rel2 and rel3 between rows 1, 0, -1. The printed normalizations use q for the
// central charge c; at level r both choices are tested and reported.
inline Report check_rel123(const KOptions& o, int dmax = 2, int emax = 2) {
    Report out("rel123");
    out.info["r"] = o.r;
    out.info["mode"] = mode_name(o.mode);
    const std::vector<std::string> names = {"rel1", "rel2[c]", "rel2[q]", "rel3[Qsh,c]", "rel3[Qsh,q]",
                                            "rel3[Qp,c]", "rel3[Qp,q]", "q-exp"};
    std::vector<Report> parts;
    for (auto& n : names) parts.emplace_back(n);
    run_on_module("rel123", o, [&](auto& K, Report&) {
        using F = typename std::decay_t<decltype(K)>::field;
        int N = o.max_size;
        auto row = [&](int d, int b) { return d == 0 ? K.diag_p0(b) : K.P(d, b); };
        for (int d = -dmax; d <= dmax; ++d)
            for (int e = 1; e <= emax; ++e)
                for (int sg : {1, -1}) {
                    F bf = detail::box_factor(K, e);
                    json tag = {{"d", d}, {"e", sg * e}};
                    compare_ops(parts[0], commutator(row(d, 1), K.P(sg * e, 0)), row(d + sg * e, 1).scaled(bf * F(sg)),
                                N, tag);
                    for (int v = 0; v < 2; ++v) {
                        F base = v == 0 ? K.c() : K.q();
                        auto nrm = [&](int x) { return x < 0 ? base.pow(-x) : F(1); };  // 1 / base^{x delta_{x<0}}
                        int de = d + sg * e;
                        Op<F> lhs = commutator(row(d, -1).scaled(nrm(d)), K.P(sg * e, 0).scaled(nrm(sg * e)));
                        Op<F> rhs = row(de, -1).scaled(nrm(de) * bf * F(-sg));
                        compare_ops(parts[1 + v], lhs, rhs, N, tag);
                    }
                }
        // Q_{s,0}: shuffle realization, or the exponential of the bosons p_n = (c/q)^n P_{n,0}
        auto Qsh = [&](int s) { return K.Q(s, 0); };
        auto Qp = [&](int s) { return s > 0 ? K.Q(s, 0).scaled((K.c() / K.q()).pow(s)) : K.Q(s, 0); };
        F pre = detail::box_factor(K, 1) / (F(1) - F(1) / K.q());
        for (int d = -dmax; d <= dmax; ++d)
            for (int dp = -dmax; dp <= dmax; ++dp) {
                int s = d + dp;
                Op<F> lhs = commutator(row(d, 1), row(dp, -1));
                for (int qv = 0; qv < 2; ++qv)
                    for (int v = 0; v < 2; ++v) {
                        F base = v == 0 ? K.c() : K.q();
                        Op<F> Qs = qv == 0 ? Qsh(s) : Qp(s);
                        Op<F> rhs = K.zero(s);
                        if (s >= 0) rhs = rhs + Qs.scaled(dp < 0 ? F(1) / base.pow(-dp) : F(1));
                        if (s <= 0) rhs = rhs - Qs.scaled(dp > 0 ? F(1) / base.pow(dp) : F(1));
                        compare_ops(parts[3 + 2 * qv + v], lhs, rhs.scaled(pre), N, {{"d", d}, {"d'", dp}});
                    }
            }
        // n Q_{+-n} = sum_j (1 - q^{-j}) P_{+-j,0} Q_{+-(n-j)}
        for (int sg : {1, -1})
            for (int n = 1; n <= 2 * dmax; ++n) {
                Op<F> rhs = K.zero(sg * n);
                for (int j = 1; j <= n; ++j)
                    rhs = rhs + (K.P(sg * j, 0) * K.Q(sg * (n - j), 0)).scaled(F(1) - F(1) / K.q().pow(j));
                compare_ops(parts[7], K.Q(sg * n, 0).scaled(F(n)), rhs, N, {{"n", sg * n}});
            }
    });
    json verdicts = json::object();
    for (auto& p : parts) verdicts[p.name] = p.pass;
    out.info["variants"] = verdicts;
    out.info["level_r_form"] = "rel2[c], rel3[Qsh,c]";
    for (int i : {0, 1, 3, 7}) out.merge(parts[i]);
    return out;
}

// k' = 1 relation with delta functions collapsed
template <template <class> class Mod = KModule>
Report check_w_relation_k1(const KOptions& o, int k, int amax = 2) {
    Report rep = run_on_module<Mod>("w-k1", o, [&](auto& K, Report& rep) {
        using F = typename std::decay_t<decltype(K)>::field;
        F th = detail::theta(K, 1);
        for (int a = -amax; a <= amax; ++a)
            for (int b = -amax; b <= amax; ++b)
                for (int N = std::max(0, a + b); N <= o.max_size; ++N) {
                    int M = N - a - b;
                    if (M > o.max_size) continue;
                    Mat<F> lhs = detail::w_relation_lhs(K, k, 1, a, b, N);
                    F c = th * (F(1) / K.q().pow(a) - F(1) / K.q().pow((long)k * b));
                    Mat<F> rhs = K.w_op(a + b, k + 1).block(N).scaled(c);
                    detail::compare_mats(rep, K, lhs, rhs, M, N, {{"a", a}, {"b", b}});
                }
    });
    rep.info["k"] = k;
    return rep;
}

// general (k, k') relation, right side by rational reconstruction at w = q^i
template <template <class> class Mod = KModule>
Report check_w_relation_full(const KOptions& o, int k, int kp, int amax = 2) {
    Report rep = run_on_module<Mod>("w-full", o, [&](auto& K, Report& rep) {
        using F = typename std::decay_t<decltype(K)>::field;
        for (int a = -amax; a <= amax; ++a)
            for (int b = -amax; b <= amax; ++b)
                for (int N = std::max(0, a + b); N <= o.max_size; ++N) {
                    int D = a + b, M = N - D;
                    if (M > o.max_size) continue;
                    Mat<F> lhs = detail::w_relation_lhs(K, k, kp, a, b, N);
                    Mat<F> rhs(K.dim(M), K.dim(N));
                    try {
                        for (int i = std::max(0, kp - k) + 1; i <= kp; ++i) {
                            F c = detail::theta(K, std::min(i, k - kp + i)) / K.q().pow((long)i * a);
                            rhs += detail::bracket_at(K, kp - i, k + i, D, N, K.q().pow(i)).scaled(c);
                        }
                        for (int i = std::max(0, k - kp) + 1; i <= k; ++i) {
                            F c = detail::theta(K, std::min(i, kp - k + i)) / K.q().pow((long)i * b);
                            rhs -= detail::bracket_at(K, k - i, kp + i, D, N, K.q().pow(i)).scaled(c);
                        }
                    } catch (const ReconstructionOverflow& e) {
                        rep.fail({{"a", a}, {"b", b}, {"N", N}, {"error", e.what()}});
                        continue;
                    }
                    detail::compare_mats(rep, K, lhs, rhs, M, N, {{"a", a}, {"b", b}});
                }
    });
    rep.info["k"] = k;
    rep.info["k'"] = kp;
    return rep;
}

// W_k(x) W_k'(y) f_{kk'}(y/x) times the certified denominator is a Laurent polynomial
template <template <class> class Mod = KModule>
Report check_pole_structure(const KOptions& o, int k, int kp, int slack = 2) {
    Report rep = run_on_module<Mod>("poles", o, [&](auto& K, Report& rep) {
        for (int N = 0; N <= o.max_size; ++N)
            for (int M = 0; M <= o.max_size; ++M) {
                auto num = detail::numerator(K, k, kp, N - M, N, slack);
                for (int d = num.top + 1; d <= num.hi; ++d) {
                    const auto& c = num.at(d);
                    for (int i = 0; i < c.rows; ++i)
                        for (int j = 0; j < c.cols; ++j) {
                            if (c(i, j).is_zero()) {
                                ++rep.checks;
                                continue;
                            }
                            rep.fail({{"mu", K.states(M)[i].str()}, {"lambda", K.states(N)[j].str()}, {"degree", d}});
                        }
                }
            }
    });
    rep.info["k"] = k;
    rep.info["k'"] = kp;
    rep.info["slack"] = slack;
    return rep;
}

// W_k = 0 for r < k <= r+2, W_r = u h_-(x) h_+(x), highest weight, boson commutators
template <template <class> class Mod = KModule>
Report check_truncation_and_verma(const KOptions& o) {
    return run_on_module<Mod>("truncation", o, [&](auto& K, Report& rep) {
        using F = typename std::decay_t<decltype(K)>::field;
        int N = o.max_size, r = K.r();
        for (int k = r + 1; k <= r + 2; ++k)
            for (int d = -N; d <= N; ++d) expect_zero(rep, K.w_op(d, k), N, {{"item", "vanishing"}, {"k", k}, {"d", d}});
        for (int d = -N; d <= N; ++d) {
            Op<F> rhs = K.zero(d);
            for (int n = 0; n <= N; ++n) {
                int m = n + d;
                if (m < 0 || m > N) continue;
                Op<F> hm = n == 0 ? K.identity() : K.h_boson(-n);
                Op<F> hp = m == 0 ? K.identity() : K.h_boson(m);
                rhs = rhs + hm * hp;
            }
            compare_ops(rep, K.w_op(d, r), rhs.scaled(K.u_prod()), N, {{"item", "W_r"}, {"d", d}});
        }
        RPartition vac(r);
        for (int k = 0; k <= r + 2; ++k) {
            F ek(0);
            for (int mask = 0; mask < (1 << r); ++mask) {
                if (__builtin_popcount(mask) != k) continue;
                F p(1);
                for (int a = 0; a < r; ++a)
                    if (mask >> a & 1) p *= K.u(a + 1);
                ek += p;
            }
            rep.check(K.w_op(0, k).coeff(vac, vac) == ek, {{"item", "highest weight"}, {"k", k}});
            for (int d = 1; d <= N; ++d) rep.check(K.w_op(d, k).block(0).a.empty(), {{"item", "annihilation"}, {"d", d}});
        }
        for (int k = 1; k <= r; ++k)
            for (int n = 1; n <= 2; ++n)
                for (int d = -N; d <= N; ++d) {
                    F bf = detail::box_factor(K, n) / (F(1) - K.q().pow(n));
                    F cm = -bf * (F(1) - K.q().pow((long)k * n));
                    F cp = bf * (F(1) / K.q().pow((long)k * n) - F(1)) * K.c().pow(n);
                    compare_ops(rep, commutator(K.w_op(d, k), K.boson(-n)), K.w_op(d - n, k).scaled(cm), N,
                                {{"item", "[W,p_-n]"}, {"k", k}, {"n", n}, {"d", d}});
                    compare_ops(rep, commutator(K.w_op(d, k), K.boson(n)), K.w_op(d + n, k).scaled(cp), N,
                                {{"item", "[W,p_n]"}, {"k", k}, {"n", n}, {"d", d}});
                }
    });
}

// <mu|R^->|lam> (mu,mu) = q^{(1-r) deg} <lam|R^<-|mu> (lam,lam). deg is read either as the
// number of variables k or as the degree d; both are reported.
inline Report check_adjoint(const KOptions& o, int kmax = 2, int dmax = 2) {
    Report by_k("adjoint[deg=k]"), by_d("adjoint[deg=d]");
    run_on_module("adjoint", o, [&](auto& K, Report&) {
        using F = typename std::decay_t<decltype(K)>::field;
        std::vector<std::pair<std::string, SymPresentation>> els;
        for (int k = 1; k <= kmax; ++k)
            for (int d = -dmax; d <= dmax; ++d) {
                els.push_back({"P(" + std::to_string(k) + "," + std::to_string(d) + ")", build_P(k, d)});
                if (d >= 1) els.push_back({"T(" + std::to_string(k) + "," + std::to_string(d) + ")", build_T(k, d)});
            }
        for (auto& [name, R] : els) {
            int k = R.k, d = 0;
            for (auto& [m, c] : R.rho.terms()) {
                d = 0;
                for (int i = 1; i <= k; ++i) d += m[gen::z(i)];
            }
            Op<F> lo = K.lower_op(R), up = K.raise_op(R);
            for (int n = k; n <= o.max_size; ++n)
                for (int j = 0; j < K.dim(n); ++j)
                    for (int i = 0; i < K.dim(n - k); ++i) {
                        const auto& lam = K.states(n)[j];
                        const auto& mu = K.states(n - k)[i];
                        F left = lo.block(n)(i, j) * K.inner(mu);
                        F right = up.block(n - k)(j, i) * K.inner(lam);
                        json tag = {{"R", name}, {"mu", mu.str()}, {"lambda", lam.str()}};
                        by_k.check(left == right * K.q().pow((long)(1 - K.r()) * k), tag);
                        by_d.check(left == right * K.q().pow((long)(1 - K.r()) * d), tag);
                    }
        }
    });
    Report out("adjoint");
    out.info["r"] = o.r;
    out.info["mode"] = mode_name(o.mode);
    out.info["deg=k"] = by_k.pass;
    out.info["deg=d"] = by_d.pass;
    out.merge(by_k);
    return out;
}

// W_{d,k} against the P_v expansion and the slope-collected E_v expansion
inline Report check_power_formula(const KOptions& o, int kmax = 2, int dmax = 2) {
    return run_on_module("power", o, [&](auto& K, Report& rep) {
        using F = typename std::decay_t<decltype(K)>::field;
        int N = o.max_size;
        auto Pv = [&](int d, int k) { return d == 0 ? K.diag_p0(k) : K.P(d, k); };
        for (int k = 1; k <= kmax; ++k)
            for (int d = -dmax; d <= dmax; ++d) {
                // ordered sequences of lattice points with sum (d,k); the last factor acts first and
                // lowers by d_t <= N, which bounds the enumeration
                Op<F> viaP = K.zero(d), viaE = K.zero(d);
                std::vector<LatticePoint> cur;
                std::function<void(int, int)> rec = [&](int drem, int krem) {
                    if (krem == 0) {
                        if (drem != 0) return;
                        int t = (int)cur.size();
                        Op<F> prod = K.identity(), eprod = K.identity();
                        bool strict = true;
                        long esign = 0;
                        for (int i = 0; i < t; ++i) {
                            prod = prod * Pv(cur[i].d, cur[i].k);
                            eprod = eprod * K.E(cur[i].d, cur[i].k);
                            esign += cur[i].k - std::gcd(cur[i].k, std::abs(cur[i].d));
                            if (i && (long)cur[i - 1].d * cur[i].k == (long)cur[i].d * cur[i - 1].k) strict = false;
                        }
                        F qa = K.q().pow(alpha_v(cur));
                        F zv = F::from_q(mpq_class(1) / z_v(cur));
                        viaP = viaP + prod.scaled(qa * zv * ((k - t) % 2 ? F(-1) : F(1)));
                        if (strict) viaE = viaE + eprod.scaled(qa * (esign % 2 ? F(-1) : F(1)));
                        return;
                    }
                    for (int kk = 1; kk <= krem; ++kk)
                        for (int dd = -N - dmax; dd <= N + dmax; ++dd) {
                            if (!cur.empty()) {
                                auto& p = cur.back();
                                long lhs = (long)p.d * kk, rhs = (long)dd * p.k;
                                if (lhs > rhs || (lhs == rhs && p.k > kk)) continue;
                            }
                            cur.push_back({dd, kk});
                            rec(drem - dd, krem - kk);
                            cur.pop_back();
                        }
                };
                rec(d, k);
                compare_ops(rep, K.w_op(d, k), viaP, N, {{"form", "power"}, {"d", d}, {"k", k}});
                compare_ops(rep, K.w_op(d, k), viaE, N, {{"form", "elementary"}, {"d", d}, {"k", k}});
            }
    });
}

// dim K_n against the r-colored partition generating function
inline Report check_dimensions(int rmax = 3, int nmax = 6) {
    Report rep("dimensions");
    for (int r = 1; r <= rmax; ++r) {
        std::vector<long> c(nmax + 1, 0);
        c[0] = 1;
        for (int t = 0; t < r; ++t)
            for (int k = 1; k <= nmax; ++k)
                for (int n = k; n <= nmax; ++n) c[n] += c[n - k];
        KModule<RatF> K(r);
        for (int n = 0; n <= nmax; ++n) rep.check(K.dim(n) == c[n], {{"r", r}, {"n", n}, {"dim", K.dim(n)}});
    }
    return rep;
}

}  // namespace qw
