#pragma once

#include <map>
#include <memory>
#include <vector>

#include "repk_checks.hpp"

namespace qw {

// Vector in the colored Fock space: monomials in creation modes, one partition of mode
// numbers per color, applied to the vacuum.
template <class F>
using FockVector = std::map<RPartition, F>;

// The r-colored deformed Heisenberg algebra on its Fock space. Basis vectors are the bare
// monomials b^{i_1}_{-s_1} ... |0>, indexed by r-partitions (the parts of component i are the
// modes of color i). W-currents come from the quantum Miura transformation.
template <class F>
class FockModule : public GradedSpace<F> {
    using Base = GradedSpace<F>;
    using Base::q_;
    using Base::r_;

public:
    using field = F;
    using Base::dim;
    using Base::identity;
    using Base::index;
    using Base::states;
    using Base::val;
    using Base::zero;

    explicit FockModule(int r, int torus = 0) : Base(r), torus_(torus) {}
    virtual ~FockModule() = default;

    int torus() const { return torus_; }
    F u(int a) const { return val(Monomial::var(gen::u(a, torus_))); }
    F u_prod() const {
        F p(1);
        for (int a = 1; a <= r_; ++a) p *= u(a);
        return p;
    }
    F box_factor(int n) const { return (F(1) - this->q1().pow(n)) * (F(1) - this->q2().pow(n)); }

    // [b^i_{-n}, b^j_n] / (n (1-q1^n)(1-q2^n))
    virtual F kappa(int i, int j, int n) const {
        if (i < j) return F(1) - F(1) / q_.pow(n);
        return i == j ? F(1) : F(0);
    }

    // b^i_n applied to a basis monomial: creation appends a mode, annihilation is the
    // derivation with [b^i_n, b^j_{-n}] = -n (1-q1^n)(1-q2^n) kappa(j, i)
    FockVector<F> b_action(int i, int n, const RPartition& s) const {
        if (n == 0 || i < 1 || i > r_) throw std::invalid_argument("b_action index");
        FockVector<F> out;
        if (n < 0) {
            RPartition t = s;
            auto& p = t.c[i - 1];
            p.insert(std::upper_bound(p.begin(), p.end(), -n, std::greater<int>()), -n);
            out[t] = F(1);
            return out;
        }
        F base = -F(n) * box_factor(n);
        for (int j = 1; j <= r_; ++j) {
            const auto& p = s.c[j - 1];
            int mult = (int)std::count(p.begin(), p.end(), n);
            if (mult == 0) continue;
            F c = base * kappa(j, i, n) * F(mult);
            if (c.is_zero()) continue;
            RPartition t = s;
            auto& tp = t.c[j - 1];
            tp.erase(std::find(tp.begin(), tp.end(), n));
            out[t] += c;
        }
        return out;
    }

    Op<F> b(int i, int n) const {
        return memo(b_, {i, n}, [&] {
            return Op<F>(this, n, [this, i, n](int N) {
                Mat<F> m(dim(N - n), dim(N));
                for (int c = 0; c < dim(N); ++c)
                    for (auto& [t, x] : b_action(i, n, states(N)[c])) m(index(t), c) += x;
                return m;
            });
        });
    }

    // p_n = sum_i b^i_n q^{n(i-1)}
    Op<F> boson(int n) const {
        if (n == 0) throw std::invalid_argument("boson index must be nonzero");
        return memo(p_, {n, 0}, [&] {
            Op<F> s = zero(n);
            for (int i = 1; i <= r_; ++i) s = s + b(i, n).scaled(q_.pow((long)n * (i - 1)));
            return s;
        });
    }
    // sum_n h_{-n} z^n = exp(sum p_{-n} z^n / n), likewise for positive modes
    Op<F> h_boson(int n) const {
        if (n == 0) throw std::invalid_argument("boson index must be nonzero");
        return memo(h_, {n, 0}, [&] {
            int sg = n > 0 ? 1 : -1, m = n * sg;
            Op<F> s = boson(n);
            for (int j = 1; j < m; ++j) s = s + boson(sg * j) * h_boson(sg * (m - j));
            return s.scaled(F(1) / F(m));
        });
    }

    // W_k(x) = sum_{i_1<...<i_k} :Lambda^{i_1}(x) Lambda^{i_2}(x/q) ... :, mode x^{-d}
    Op<F> w_op(int d, int k) const {
        if (k < 0) throw std::invalid_argument("w_op needs k >= 0");
        if (k == 0) return d == 0 ? identity() : zero(d);
        if (k > r_) return zero(d);
        return memo(w_, {d, k}, [&] {
            std::vector<int> masks = subsets(k);
            return Op<F>(this, d, [this, d, masks](int N) {
                Mat<F> m(dim(N - d), dim(N));
                for (int mask : masks) m += word_mode(mask, d, N);
                return m;
            });
        });
    }
    // Lambda^i(x), mode x^{-d}
    Op<F> lambda_op(int i, int d) const {
        return memo(l_, {i, d}, [&] {
            return Op<F>(this, d, [this, i, d](int N) { return word_mode(1 << (i - 1), d, N); });
        });
    }

    // W_{d1,k} W_{d2,k'} on degree N through the merged normal-ordered exponential:
    // W_I(x) W_J(y) = :W_I(x) W_J(y): g_IJ(y/x), with g_IJ the exponentiated contraction
    Mat<F> w_product(int d1, int k, int d2, int kp, int N) const {
        int M = N - d1 - d2;
        Mat<F> out(dim(M), dim(N));
        if (M < 0 || N < 0) return out;
        for (int I : subsets(k))
            for (int J : subsets(kp)) {
                auto g = contraction(I, J, std::max(0, d1 + M + 1));
                for (int n = 0; d1 - n >= -M; ++n) {
                    if (g[n].is_zero()) continue;
                    out += pair_mode(I, J, d1 - n, d2 + n, N).scaled(g[n]);
                }
            }
        return out;
    }

    // exp(sum_n c_n w^n / n) for the contraction of W_I(x) against W_J(y), orders 0..len-1
    std::vector<F> contraction(int I, int J, int len) const {
        auto wi = word(I), wj = word(J);
        std::vector<F> c(len, F(0)), g(len, F(0));
        for (int n = 1; n < len; ++n) {
            F s(0);
            for (size_t a = 0; a < wi.size(); ++a)
                for (size_t b = 0; b < wj.size(); ++b)
                    s += q_.pow((long)n * ((long)a - (long)b)) * kappa(wj[b], wi[a], n);
            c[n] = -box_factor(n) * s;
        }
        if (len) g[0] = F(1);
        for (int m = 1; m < len; ++m) {
            F s(0);
            for (int n = 1; n <= m; ++n) s += c[n] * g[m - n];
            g[m] = s / F(m);
        }
        return g;
    }

    // graded pieces E_0..E_emax of exp(sum_n sum_i coef(i, n) b^i_{sign n} / n)
    std::vector<Op<F>> normal_exp(const std::function<F(int, int)>& coef, int sign, int emax) const {
        std::vector<Op<F>> v{identity()};
        for (int m = 1; m <= emax; ++m) {
            Op<F> s = zero(sign * m);
            for (int n = 1; n <= m; ++n) {
                Op<F> X = zero(sign * n);
                for (int i = 1; i <= r_; ++i) {
                    F c = coef(i, n);
                    if (!c.is_zero()) X = X + b(i, sign * n).scaled(c);
                }
                s = s + X * v[m - n];
            }
            v.push_back(s.scaled(F(1) / F(m)));
        }
        return v;
    }

    // subsets {i_1 < ... < i_k} of colors, as bit masks
    std::vector<int> subsets(int k) const {
        std::vector<int> v;
        if (k < 0 || k > r_) return v;
        for (int mask = 0; mask < (1 << r_); ++mask)
            if (__builtin_popcount(mask) == k) v.push_back(mask);
        return v;
    }

private:
    using OpCache = std::map<std::pair<int, int>, Op<F>>;
    template <class Make>
    Op<F> memo(OpCache& c, std::pair<int, int> key, Make make) const {
        auto it = c.find(key);
        if (it != c.end()) return it->second;
        return c.emplace(key, make()).first->second;
    }

    static std::vector<int> word(int mask) {
        std::vector<int> w;
        for (int i = 0; (mask >> i) != 0; ++i)
            if (mask >> i & 1) w.push_back(i + 1);
        return w;
    }

    // creation (sign -1) or annihilation (+1) exponential of the word, graded by degree:
    // color i_j enters with x^{±n} q^{±n(1-j)}, e E_e = sum_n X_n E_{e-n}
    const Op<F>& word_exp(int mask, int sign, int e) const {
        auto& v = exps_[{mask, sign}];
        while ((int)v.size() <= e) {
            int m = (int)v.size();
            if (m == 0) {
                v.push_back(identity());
                continue;
            }
            auto w = word(mask);
            Op<F> s = zero(sign * m);
            for (int n = 1; n <= m; ++n) {
                Op<F> X = zero(sign * n);
                for (int j = 0; j < (int)w.size(); ++j)
                    X = X + b(w[j], sign * n).scaled(sign < 0 ? F(1) / q_.pow((long)n * j) : q_.pow((long)n * j));
                s = s + X * v[m - n];
            }
            v.push_back(s.scaled(F(1) / F(m)));
        }
        return v[e];
    }

    F word_prefactor(int mask) const {
        F p(1);
        for (int i : word(mask)) p *= u(i);
        return p;
    }

    Mat<F> word_mode(int mask, int d, int N) const {
        Mat<F> m(dim(N - d), dim(N));
        if (N - d < 0) return m;
        for (int e = std::max(0, d); e <= N; ++e)
            m += word_exp(mask, -1, e - d).block(N - e) * word_exp(mask, 1, e).block(N);
        return m.scaled(word_prefactor(mask));
    }

    // x^{-a} y^{-b} mode of :W_I(x) W_J(y): on degree N
    Mat<F> pair_mode(int I, int J, int a, int b, int N) const {
        int M = N - a - b;
        Mat<F> m(dim(M), dim(N));
        if (M < 0) return m;
        for (int ey = 0; ey <= N; ++ey)
            for (int ex = 0; ex + ey <= N; ++ex) {
                int cx = ex - a, cy = ey - b;
                if (cx < 0 || cy < 0) continue;
                int mid = N - ex - ey;
                m += word_exp(I, -1, cx).block(mid + cy) * word_exp(J, -1, cy).block(mid) *
                     word_exp(I, 1, ex).block(N - ey) * word_exp(J, 1, ey).block(N);
            }
        return m.scaled(word_prefactor(I) * word_prefactor(J));
    }

    int torus_;
    mutable OpCache b_, p_, h_, w_, l_;
    mutable std::map<std::pair<int, int>, std::vector<Op<F>>> exps_;
};

// Graded dimension of the r-colored Fock space: coefficients of prod_n (1 - t^n)^{-r}
inline std::vector<long> fock_dimensions(int r, int nmax) {
    std::vector<long> c(nmax + 1, 0);
    c[0] = 1;
    for (int color = 0; color < r; ++color)
        for (int n = 1; n <= nmax; ++n)
            for (int s = n; s <= nmax; ++s) c[s] += c[s - n];
    return c;
}

// dim K_n = #{r-partitions of n} = Fock graded dimension
inline Report check_fock_dimensions(int rmax = 3, int nmax = 6) {
    Report rep("dimensions");
    for (int r = 1; r <= rmax; ++r) {
        auto f = fock_dimensions(r, nmax);
        KModule<RatF> K(r);
        FockModule<RatF> B(r);
        for (int n = 0; n <= nmax; ++n) {
            long rp = (long)enumerate_rpartitions(r, n).size();
            rep.check(rp == f[n] && K.dim(n) == f[n] && B.dim(n) == f[n],
                      {{"r", r}, {"n", n}, {"fock", f[n]}, {"rpartitions", rp}});
        }
    }
    return rep;
}

// the b-commutator table, and [b^i_m, p_{-n}], [b^i_{-n}, p_n]
template <template <class> class Mod = FockModule>
Report check_fock_bosons(const KOptions& o, int nmax = 2) {
    return run_on_module<Mod>("fock-bosons", o, [&](auto& B, Report& rep) {
        using F = typename std::decay_t<decltype(B)>::field;
        int r = B.r(), N = o.max_size;
        for (int n = 1; n <= nmax; ++n) {
            F nb = F(n) * B.box_factor(n);
            for (int i = 1; i <= r; ++i) {
                for (int j = 1; j <= r; ++j) {
                    compare_ops(rep, commutator(B.b(i, -n), B.b(j, n)), B.identity().scaled(nb * B.kappa(i, j, n)), N,
                                {{"item", "[b_-n,b_n]"}, {"i", i}, {"j", j}, {"n", n}});
                    for (int m = 1; m <= nmax; ++m)
                        if (m != n) expect_zero(rep, commutator(B.b(i, -m), B.b(j, n)), N, {{"item", "[b_-m,b_n]"}, {"m", m}, {"n", n}});
                    expect_zero(rep, commutator(B.b(i, n), B.b(j, std::max(1, nmax + 1 - n))), N, {{"item", "[b_m,b_n]"}});
                    expect_zero(rep, commutator(B.b(i, -n), B.b(j, -std::max(1, nmax + 1 - n))), N, {{"item", "[b_-m,b_-n]"}});
                }
                compare_ops(rep, commutator(B.b(i, n), B.boson(-n)), B.identity().scaled(-nb), N,
                            {{"item", "[b_n,p_-n]"}, {"i", i}, {"n", n}});
                compare_ops(rep, commutator(B.b(i, -n), B.boson(n)), B.identity().scaled(nb * B.q().pow((long)n * (r - 1))), N,
                            {{"item", "[b_-n,p_n]"}, {"i", i}, {"n", n}});
            }
        }
    });
}

// Lambda^i(x) Lambda^i(y) zeta(y/x) is symmetric in x, y: modes of the difference vanish
inline Report check_lambda_symmetry(const KOptions& o, int amax = 2) {
    return run_on_module<FockModule>("lambda-symmetry", o, [&](auto& B, Report& rep) {
        using F = typename std::decay_t<decltype(B)>::field;
        for (int i = 1; i <= B.r(); ++i)
            for (int a = -amax; a <= amax; ++a)
                for (int b = -amax; b <= amax; ++b)
                    for (int N = std::max(0, a + b); N <= o.max_size; ++N) {
                        int M = N - a - b;
                        if (M > o.max_size) continue;
                        Mat<F> diff(B.dim(M), B.dim(N));
                        for (int n = 0; n <= N - std::min(a, b); ++n) {
                            F z = B.zeta_coeff(n);
                            diff += (B.lambda_op(i, a - n).block(N - b - n) * B.lambda_op(i, b + n).block(N)).scaled(z);
                            diff -= (B.lambda_op(i, b - n).block(N - a - n) * B.lambda_op(i, a + n).block(N)).scaled(z);
                        }
                        rep.check(diff.is_zero(), {{"i", i}, {"a", a}, {"b", b}, {"N", N}});
                    }
    });
}

// W_r(x) = u_1...u_r :exp p(x):, and W_k = 0 for k > r
inline Report check_mish(const KOptions& o) {
    return run_on_module<FockModule>("mish", o, [&](auto& B, Report& rep) {
        using F = typename std::decay_t<decltype(B)>::field;
        int N = o.max_size, r = B.r();
        for (int d = -N; d <= N; ++d) {
            Op<F> rhs = B.zero(d);
            for (int n = 0; n <= N; ++n) {
                int m = n + d;
                if (m < 0 || m > N) continue;
                Op<F> hm = n == 0 ? B.identity() : B.h_boson(-n);
                Op<F> hp = m == 0 ? B.identity() : B.h_boson(m);
                rhs = rhs + hm * hp;
            }
            compare_ops(rep, B.w_op(d, r), rhs.scaled(B.u_prod()), N, {{"item", "W_r"}, {"d", d}});
            for (int k = r + 1; k <= r + 2; ++k) expect_zero(rep, B.w_op(d, k), N, {{"item", "vanishing"}, {"k", k}, {"d", d}});
        }
    });
}

// the W-algebra relation suites shared with repk, run on a module type
template <template <class> class Mod>
std::vector<Report> w_relation_suites(const KOptions& o) {
    std::vector<Report> v;
    v.push_back(check_heisenberg<Mod>(o));
    for (int k = 1; k <= o.r; ++k) v.push_back(check_w_relation_k1<Mod>(o, k));
    for (int k = 1; k <= o.r; ++k)
        for (int kp = k; kp <= o.r; ++kp) v.push_back(check_w_relation_full<Mod>(o, k, kp));
    v.push_back(check_truncation_and_verma<Mod>(o));
    return v;
}

inline std::string suite_key(const Report& r) {
    std::string s = r.name;
    if (r.info.contains("k")) s += ":" + std::to_string(r.info["k"].get<int>());
    if (r.info.contains("k'")) s += "," + std::to_string(r.info["k'"].get<int>());
    return s;
}

// Miura realization against the W-algebra presentation. With cross_size >= 0 the shared
// suites also run on K at sizes <= cross_size and the verdicts are compared.
inline Report check_miura_relations(const KOptions& o, int cross_size = -1) {
    Report out("miura-relations");
    out.info["r"] = o.r;
    out.info["max_degree"] = o.max_size;
    out.info["mode"] = mode_name(o.mode);
    out.merge(check_fock_bosons(o));
    out.merge(check_lambda_symmetry(o));
    out.merge(check_mish(o));
    json verdicts = json::object();
    for (auto& rep : w_relation_suites<FockModule>(o)) {
        verdicts[suite_key(rep)] = rep.pass;
        out.merge(rep);
    }
    out.info["fock_verdicts"] = verdicts;
    if (cross_size >= 0) {
        KOptions ko = o;
        ko.max_size = cross_size;
        json kv = json::object(), fv = json::object();
        bool agree = true;
        auto fock = w_relation_suites<FockModule>(ko);
        auto rep_k = w_relation_suites<KModule>(ko);
        for (size_t i = 0; i < fock.size(); ++i) {
            fv[suite_key(fock[i])] = fock[i].pass;
            kv[suite_key(rep_k[i])] = rep_k[i].pass;
            agree = agree && fock[i].pass == rep_k[i].pass;
        }
        out.info["cross_size"] = cross_size;
        out.info["repk_verdicts"] = kv;
        out.info["fock_verdicts_at_cross_size"] = fv;
        out.info["verdicts_agree"] = agree;
        out.check(agree, {{"item", "verdict agreement"}});
    }
    return out;
}

// h^i_n = b^i_n - p_n (1-q^n)/(1-q^{rn}): the sl_r boson relations, the linear relation,
// [p_m, h^i_n] = 0, and the dressed currents at mode level:
// W~_k(x) = exp[-sum p_{-n} x^n/n g^-_n] W_k(x) exp[-sum p_n x^{-n}/n g^+_n]
inline Report check_glsl_map(const KOptions& o, int nmax = 2) {
    Report rep = run_on_module<FockModule>("glsl", o, [&](auto& B, Report& rep) {
        using F = typename std::decay_t<decltype(B)>::field;
        int r = B.r(), N = o.max_size;
        F q = B.q();
        auto ratio = [&](long a, long b) { return (F(1) - q.pow(a)) / (F(1) - q.pow(b)); };  // exponents may be negative
        auto h = [&](int i, int n) { return B.b(i, n) - B.boson(n).scaled(ratio(n, (long)r * n)); };
        for (int n = 1; n <= nmax; ++n)
            for (int sg : {-1, 1}) {
                Op<F> s = B.zero(sg * n);
                for (int i = 1; i <= r; ++i) s = s + h(i, sg * n).scaled(q.pow(sg * (long)n * (i - 1)));
                expect_zero(rep, s, N, {{"item", "linear relation"}, {"n", sg * n}});
                for (int i = 1; i <= r; ++i)
                    for (int m = 1; m <= nmax; ++m)
                        for (int sm : {-1, 1})
                            expect_zero(rep, commutator(B.boson(sm * m), h(i, sg * n)), N,
                                        {{"item", "[p,h]"}, {"i", i}, {"m", sm * m}, {"n", sg * n}});
            }
        for (int n = 1; n <= nmax; ++n)
            for (int i = 1; i <= r; ++i)
                for (int j = 1; j <= r; ++j) {
                    F c = F(n) * B.box_factor(n) * (F(1) - q.pow((long)(r * (i == j) - 1) * n)) / (F(1) - q.pow((long)r * n));
                    if (i > j) c *= q.pow((long)r * n);
                    compare_ops(rep, commutator(h(i, -n), h(j, n)), B.identity().scaled(c), N,
                                {{"item", "[h_-n,h_n]"}, {"i", i}, {"j", j}, {"n", n}});
                }
        for (int k = 1; k <= r; ++k) {
            auto gm = [&](int n) { return ratio(-(long)k * n, -(long)r * n); };
            auto gp = [&](int n) { return ratio((long)k * n, (long)r * n); };
            auto Em = B.normal_exp([&](int l, int n) { return -gm(n) / q.pow((long)n * (l - 1)); }, -1, N);
            auto Ep = B.normal_exp([&](int l, int n) { return -gp(n) * q.pow((long)n * (l - 1)); }, 1, N);
            // W~ from the h-substituted normal-ordered words
            std::vector<std::vector<Op<F>>> Cw, Aw;
            std::vector<F> pref;
            for (int mask : B.subsets(k)) {
                std::vector<int> pos(r + 1, -1);
                for (int i = 0, j = 0; i < r; ++i)
                    if (mask >> i & 1) pos[i + 1] = j++;
                Cw.push_back(B.normal_exp([&, pos](int l, int n) {
                    F c = -gm(n) / q.pow((long)n * (l - 1));
                    return pos[l] >= 0 ? c + F(1) / q.pow((long)n * pos[l]) : c;
                }, -1, N));
                Aw.push_back(B.normal_exp([&, pos](int l, int n) {
                    F c = -gp(n) * q.pow((long)n * (l - 1));
                    return pos[l] >= 0 ? c + q.pow((long)n * pos[l]) : c;
                }, 1, N));
                F p(1);
                for (int i = 1; i <= r; ++i)
                    if (pos[i] >= 0) p *= B.u(i);
                pref.push_back(p);
            }
            for (int d = -N; d <= N; ++d)
                for (int n = std::max(0, d); n <= N && n - d <= N; ++n) {
                    int M = n - d;
                    Mat<F> lhs(B.dim(M), B.dim(n)), rhs(B.dim(M), B.dim(n));
                    for (size_t t = 0; t < Cw.size(); ++t)
                        for (int e = std::max(0, d); e <= n; ++e)
                            lhs += (Cw[t][e - d].block(n - e) * Aw[t][e].block(n)).scaled(pref[t]);
                    for (int a = 0; a <= M; ++a)
                        for (int e = 0; e <= n; ++e)
                            rhs += Em[a].block(M - a) * B.w_op(d + a - e, k).block(n - e) * Ep[e].block(n);
                    detail::compare_mats(rep, B, lhs, rhs, M, n, {{"item", "dressed current"}, {"k", k}, {"d", d}});
                }
        }
    });
    rep.info["truncation"] = "modes acting on Fock degree <= max_degree; exponential tails cut at that degree";
    return rep;
}

}  // namespace qw
