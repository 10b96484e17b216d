#pragma once

#include <functional>
#include <map>
#include <memory>
#include <tuple>

#include "eps.hpp"
#include "extnek.hpp"
#include "repk_checks.hpp"
#include "series.hpp"

namespace qw {

// Additive value of the linear form sum_g e_g * hbar_g carried by a monomial: the variable
// q1 reads as hbar_1, u_i as ubar_i, m as mbar, and so on.
template <class F>
F lin(const Monomial& m);
template <>
inline Fp lin<Fp>(const Monomial& m) {
    return ProbeContext::current().linear(m);
}
template <>
inline RatF lin<RatF>(const Monomial& m) {
    RatF s(0);
    for (int g = 0; g < kGens; ++g)
        if (m.e[g]) s += RatF((long)m.e[g]) * RatF::mono(Monomial::var(g));
    return s;
}

// Products of linear forms; forms that vanish identically are counted, and a zero of a
// tau-bar factor cancels a pole of a zeta-bar factor with ratio +1.
template <class F>
struct SingLin {
    F num{1}, den{1};
    int ord = 0;

    void mul(const F& a) { num *= a; }
    void mul_lin(const Monomial& m, int e = 1) {
        if (!e) return;
        if (m.is_one()) {
            ord += e;
            return;
        }
        F v = lin<F>(m);
        for (int i = 0; i < std::abs(e); ++i) (e > 0 ? num : den) *= v;
    }
    // zbar(L(m)) = L(q1 m) L(q2 m) / (L(m) L(q m))
    void mul_zbar(const Monomial& m, int e = 1) {
        mul_lin(Monomial::q1() * m, e);
        mul_lin(Monomial::q2() * m, e);
        mul_lin(m, -e);
        mul_lin(Monomial::q() * m, -e);
    }
    F value() const {
        if (ord < 0) throw NonCancellingPole();
        if (ord > 0) return F(0);
        return num / den;
    }
};

template <class F>
using MatSeries = std::vector<Mat<F>>;

template <class F>
MatSeries<F> operator*(const MatSeries<F>& A, const MatSeries<F>& B) {
    int L = (int)std::min(A.size(), B.size());
    MatSeries<F> C(L, Mat<F>(A[0].rows, B[0].cols));
    for (int i = 0; i < L; ++i)
        for (int j = 0; i + j < L; ++j) C[i + j] += A[i] * B[j];
    return C;
}

// epsilon^0 coefficient of rho(e^{eps zbar}): every monomial tends to 1
inline mpq_class rho_leading(const SymPresentation& R) {
    mpq_class s = 0;
    for (auto& [m, c] : R.rho.terms()) s += c;
    return s;
}

// The additive fixed-point action on the cohomology of the moduli space.
template <class F>
class ClassicalModule : public GradedSpace<F> {
    using Base = GradedSpace<F>;
    using Base::r_;

public:
    using field = F;
    using Base::diagonal;
    using Base::dim;
    using Base::identity;
    using Base::index;
    using Base::states;
    using Base::zero;

    // rho-bar = c * prod_i phi(i, zbar_i), each factor a series in t of length order
    struct BarRho {
        int k;
        F c;
        std::function<Series<F>(int, const F&)> phi;
        int order = 1;
    };

    explicit ClassicalModule(int r, int torus = 0)
        : Base(r), torus_(torus), h1_(lin<F>(Monomial::q1())), h2_(lin<F>(Monomial::q2())), h_(h1_ + h2_) {}

    int torus() const { return torus_; }
    F h1() const { return h1_; }
    F h2() const { return h2_; }
    F h() const { return h_; }
    Monomial u_mono(int a) const { return Monomial::var(gen::u(a, torus_)); }
    Monomial chi(const Box& b) const { return box_weight(b, torus_); }
    F ubar(int a) const { return lin<F>(u_mono(a)); }
    F chibar(const Box& b) const { return lin<F>(chi(b)); }

    F zbar(const F& z) const {
        F d = z * (z + h_);
        if (d.is_zero()) throw NonCancellingPole();
        return (z + h1_) * (z + h2_) / d;
    }
    F taubar(const F& z) const {
        F p(1);
        for (int a = 1; a <= r_; ++a) p *= ubar(a) - z;
        return p;
    }

    static BarRho constant_rho(int k, const F& c) {
        return {k, c, [](int, const F&) { return Series<F>(1, F(1)); }, 1};
    }
    // 1 / (zbar_d - y0 - t)
    static BarRho t_rho(int d, const F& y0, int order) {
        return {d, F(1),
                [d, y0, order](int i, const F& z) {
                    if (i != d) return Series<F>(order, F(1));
                    F a = z - y0;
                    if (a.is_zero()) throw NonCancellingPole();
                    Series<F> s(order);
                    F ai = F(1) / a, p = ai;
                    for (int n = 0; n < order; ++n, p *= ai) s[n] = p;
                    return s;
                },
                order};
    }

    // K_n -> K_{n+k}; labels k..1 placed outward
    MatSeries<F> raise_block(const BarRho& R, int n) const {
        int k = R.k;
        MatSeries<F> M(R.order, Mat<F>(dim(n + k), dim(n)));
        for (int col = 0; col < dim(n); ++col) {
            const RPartition& mu = states(n)[col];
            Layer layer;
            for (auto& b : mu.addable()) add(layer, mu.with(b), b, R.phi(k, chibar(b)).scaled(R.c * raise_factor(mu, b)));
            for (int i = k - 1; i >= 1; --i) {
                Layer next;
                for (auto& [key, v] : layer) {
                    auto& [nu, prev] = key;
                    auto placed = skew_boxes(nu, mu);
                    for (auto& b : nu.addable()) {
                        F f = raise_factor(mu, b) * inv_lin(chi(b) / (Monomial::q() * chi(prev)));
                        for (auto& c : placed) f *= zbar_of(chi(b) / chi(c));
                        add(next, nu.with(b), b, (v * R.phi(i, chibar(b))).scaled(f));
                    }
                }
                layer = std::move(next);
            }
            for (auto& [key, v] : layer)
                for (int j = 0; j < R.order; ++j) M[j](index(key.first), col) += v[j];
        }
        return M;
    }
    // K_n -> K_{n-k}; labels 1..k removed inward
    MatSeries<F> lower_block(const BarRho& R, int n) const {
        int k = R.k;
        MatSeries<F> M(R.order, Mat<F>(n >= k ? dim(n - k) : 0, dim(n)));
        if (n < k) return M;
        for (int col = 0; col < dim(n); ++col) {
            const RPartition& lam = states(n)[col];
            Layer layer;
            for (auto& b : lam.removable())
                add(layer, lam.without(b), b, R.phi(1, chibar(b)).scaled(R.c * lower_factor(lam, b)));
            for (int i = 2; i <= k; ++i) {
                Layer next;
                for (auto& [key, v] : layer) {
                    auto& [nu, prev] = key;
                    auto removed = skew_boxes(lam, nu);
                    for (auto& b : nu.removable()) {
                        F f = lower_factor(lam, b) * inv_lin(chi(prev) / (Monomial::q() * chi(b)));
                        for (auto& c : removed) f *= zbar_of(chi(c) / chi(b));
                        add(next, nu.without(b), b, (v * R.phi(i, chibar(b))).scaled(f));
                    }
                }
                layer = std::move(next);
            }
            for (auto& [key, v] : layer)
                for (int j = 0; j < R.order; ++j) M[j](index(key.first), col) += v[j];
        }
        return M;
    }
    Op<F> raise_bar(const BarRho& R) const {
        return Op<F>(this, -R.k, [this, R](int n) { return raise_block(R, n)[0]; });
    }
    Op<F> lower_bar(const BarRho& R) const {
        return Op<F>(this, R.k, [this, R](int n) { return lower_block(R, n)[0]; });
    }

    // Ebar(y0 + t) on |nu> = prod (y0 + t - ubar_i) prod zbar(chibar - y0 - t)
    Series<F> ebar_series(const RPartition& nu, const F& y0, int order) const {
        Series<F> s(order, F(1));
        for (int a = 1; a <= r_; ++a) s *= linear(order, y0 - ubar(a), F(1));
        for (auto& b : nu.boxes()) {
            F c = chibar(b) - y0;
            Series<F> num = linear(order, c + h1_, F(-1)) * linear(order, c + h2_, F(-1));
            Series<F> den = linear(order, c, F(-1)) * linear(order, c + h_, F(-1));
            if (den[0].is_zero()) throw NonCancellingPole();
            s *= num / den;
        }
        return s;
    }
    // ybar^k coefficient of Ebar(ybar)
    Op<F> ebar_diag(int k) const {
        return diagonal([this, k](const RPartition& nu) { return ebar_series(nu, F(0), k + 1)[k]; });
    }

    // t^{r-i} coefficient of [Tbar^<- Ebar Tbar^->](y0 + t) on K_n -> K_{n-d}; with shifted,
    // each block K_n -> K_s -> K_{n-d} is expanded at y0 - hbar (n - s)
    Mat<F> wbar_block(int i, int d, int n, const F& y0 = F(0), bool shifted = false) const {
        int m = n - d, L = r_ - i + 1;
        Mat<F> M(m >= 0 ? dim(m) : 0, dim(n));
        if (m < 0) return M;
        if (i == 0) return d == 0 ? Mat<F>::identity(dim(n)) : M;
        if (i < 0 || i > r_) throw std::invalid_argument("wbar_op needs 0 <= i <= r");
        for (int s = 0; s <= std::min(n, m); ++s) {
            int dl = m - s, dr = n - s;
            F base = shifted ? y0 - F((long)dr) * h_ : y0;
            MatSeries<F> E(L, Mat<F>(dim(s), dim(s)));
            for (int a = 0; a < dim(s); ++a) {
                auto e = ebar_series(states(s)[a], base, L);
                for (int j = 0; j < L; ++j) E[j](a, a) = e[j];
            }
            MatSeries<F> t = E;
            if (dr > 0) t = t * lower_block(t_rho(dr, base, L), n);
            if (dl > 0) t = raise_block(t_rho(dl, base, L), s) * t;
            M += t[L - 1];
        }
        return M;
    }
    Op<F> wbar_op(int i, int d, const F& y0 = F(0), bool shifted = false) const {
        return Op<F>(this, d, [this, i, d, y0, shifted](int n) { return wbar_block(i, d, n, y0, shifted); });
    }

    // leading epsilon order of p_n: lower_bar (n > 0) or raise_bar (n < 0) of rho-bar = n
    Op<F> boson_bar(int n) const {
        if (n == 0) throw std::invalid_argument("boson index must be nonzero");
        auto key = std::make_pair(n, 0);
        auto it = bos_.find(key);
        if (it != bos_.end()) return it->second;
        int a = std::abs(n);
        BarRho R = constant_rho(a, F::from_q(rho_leading(build_P(a, 0))));
        return bos_.emplace(key, n > 0 ? lower_bar(R) : raise_bar(R)).first->second;
    }

private:
    using Key = std::pair<RPartition, Box>;
    using Layer = std::map<Key, Series<F>>;
    using FKey = std::tuple<int, int, int, int, int>;

    static Series<F> linear(int order, const F& a, const F& b) {
        Series<F> s(order, a);
        if (order > 1) s[1] = b;
        return s;
    }
    static void add(Layer& l, const RPartition& p, const Box& b, const Series<F>& v) {
        auto [it, fresh] = l.emplace(Key{p, b}, v);
        if (!fresh) it->second += v;
    }
    static std::vector<Box> skew_boxes(const RPartition& outer, const RPartition& inner) {
        std::vector<Box> v;
        for (auto& b : outer.boxes())
            if (!inner.contains(b)) v.push_back(b);
        return v;
    }
    static F inv_lin(const Monomial& m) {
        SingLin<F> s;
        s.mul_lin(m, -1);
        return s.value();
    }
    static F zbar_of(const Monomial& m) {
        SingLin<F> s;
        s.mul_zbar(m);
        return s.value();
    }
    FKey fkey(const RPartition& p, const Box& b) const { return {p.size(), index(p), b.k, b.i, b.j}; }

    // hbar1 hbar2/(-hbar) zbar(chibar_b - chibar_mu) taubar(chibar_b + hbar)
    F raise_factor(const RPartition& mu, const Box& b) const {
        FKey key = fkey(mu, b);
        auto it = rfac_.find(key);
        if (it != rfac_.end()) return it->second;
        SingLin<F> s;
        s.mul(-h1_ * h2_ / h_);
        for (auto& c : mu.boxes()) s.mul_zbar(chi(b) / chi(c));
        for (int a = 1; a <= r_; ++a) s.mul_lin(u_mono(a) / (Monomial::q() * chi(b)));
        return rfac_.emplace(key, s.value()).first->second;
    }
    // hbar1 hbar2/(-hbar) zbar(chibar_lambda - chibar_b)^{-1} taubar(chibar_b)^{-1}
    F lower_factor(const RPartition& lam, const Box& b) const {
        FKey key = fkey(lam, b);
        auto it = lfac_.find(key);
        if (it != lfac_.end()) return it->second;
        SingLin<F> s;
        s.mul(-h1_ * h2_ / h_);
        for (auto& c : lam.boxes()) s.mul_zbar(chi(c) / chi(b), -1);
        for (int a = 1; a <= r_; ++a) s.mul_lin(u_mono(a) / chi(b), -1);
        return lfac_.emplace(key, s.value()).first->second;
    }

    int torus_;
    F h1_, h2_, h_;
    mutable std::map<FKey, F> rfac_, lfac_;
    mutable std::map<std::pair<int, int>, Op<F>> bos_;
};

// <lambda| Abar |lambda'> without the power of x, lambda on T and lambda' on S
template <class F>
F abar_matrix(const ClassicalModule<F>& T, const ClassicalModule<F>& S, const Monomial& m, const RPartition& lam,
              const RPartition& lamp) {
    SingLin<F> s;
    auto bx = lam.boxes(), bxp = lamp.boxes();
    for (int i = 1; i <= T.r(); ++i) {
        for (auto& b : bx) s.mul_lin(S.u_mono(i) / (m * T.chi(b)));
        for (auto& b : bxp) s.mul_lin(m * T.u_mono(i) / (Monomial::q() * S.chi(b)));
        for (auto& b : bxp) {
            s.mul_lin(S.u_mono(i) / S.chi(b), -1);
            s.mul_lin(S.u_mono(i) / (Monomial::q() * S.chi(b)), -1);
        }
    }
    for (auto& b : bx)
        for (auto& bp : bxp) s.mul_zbar(S.chi(bp) / (m * T.chi(b)));
    for (auto& b : bxp)
        for (auto& c : bxp) s.mul_zbar(S.chi(c) / S.chi(b), -1);
    return s.value();
}

// Phibar = Abar exp[sum_n pbar_n x^{-n} hbar/(hbar1 hbar2)], pbar_n = boson_bar(n)/n^2;
// component (n, n') carries x^{n-n'}
template <class F>
class ClassicalVertex {
public:
    // tail_power: pbar_n = boson_bar(n) / n^tail_power
    ClassicalVertex(const ClassicalModule<F>& T, const ClassicalModule<F>& S, const Monomial& m, int jmax,
                    int tail_power = 2)
        : T_(&T), S_(&S), m_(m) {
        Z_.push_back(S.identity());
        F c = S.h() / (S.h1() * S.h2());
        for (int j = 1; j <= jmax; ++j) {
            std::optional<Op<F>> acc;
            for (int n = 1; n <= j; ++n) {
                // j Z_j = sum_n n a_n Z_{j-n}, a_n = c pbar_n
                F w = c * F((long)n);
                for (int e = 0; e < tail_power; ++e) w /= F((long)n);
                Op<F> t = (S.boson_bar(n) * Z_[j - n]).scaled(w);
                acc = acc ? *acc + t : t;
            }
            Z_.push_back(acc->scaled(F(1) / F((long)j)));
        }
    }
    const ClassicalModule<F>& target() const { return *T_; }
    const ClassicalModule<F>& source() const { return *S_; }

    const Mat<F>& A(int n, int np) const {
        auto key = std::make_pair(n, np);
        auto it = a_.find(key);
        if (it != a_.end()) return it->second;
        Mat<F> M(T_->dim(n), S_->dim(np));
        for (int i = 0; i < M.rows; ++i)
            for (int j = 0; j < M.cols; ++j) M(i, j) = abar_matrix(*T_, *S_, m_, T_->states(n)[i], S_->states(np)[j]);
        return a_.emplace(key, std::move(M)).first->second;
    }
    const Mat<F>& Phi(int n, int np) const {
        auto key = std::make_pair(n, np);
        auto it = phi_.find(key);
        if (it != phi_.end()) return it->second;
        if (np >= (int)Z_.size()) throw std::out_of_range("vertex tail too short");
        Mat<F> M(T_->dim(n), S_->dim(np));
        for (int j = 0; j <= np; ++j) M += A(n, np - j) * Z_[j].block(np);
        return phi_.emplace(key, std::move(M)).first->second;
    }

private:
    const ClassicalModule<F>* T_;
    const ClassicalModule<F>* S_;
    Monomial m_;
    std::vector<Op<F>> Z_;
    mutable std::map<std::pair<int, int>, Mat<F>> a_, phi_;
};

namespace detail {

inline std::vector<long> one_minus_power(int i) {
    std::vector<long> p(i + 1);
    long c = 1;
    for (int j = 0; j <= i; ++j) {
        p[j] = j % 2 ? -c : c;
        c = c * (i - j) / (j + 1);
    }
    return p;
}

// X^e coefficients of [Phibar(x), Wbar_i(y)] (1 - x/y)^i at H'_{n'} -> H_n
template <class F>
bool classical_commutator_vanishes(const ClassicalVertex<F>& v, int i, int n, int np, int nmid, bool shifted,
                                   const F& right_base, json& where) {
    const auto& T = v.target();
    const auto& S = v.source();
    auto poly = one_minus_power(i);
    int deg = i;
    auto C = [&](int d) {
        Mat<F> M(T.dim(n), S.dim(np));
        if (np - d >= 0) M += v.Phi(n, np - d) * S.wbar_block(i, d, np, F(0), shifted);
        if (n + d >= 0) M -= T.wbar_block(i, d, n + d, right_base, shifted) * v.Phi(n + d, np);
        return M;
    };
    for (int e = np - nmid + deg; e <= nmid - n; ++e) {
        Mat<F> M(T.dim(n), S.dim(np));
        for (int j = 0; j <= deg; ++j) M += C(e - j).scaled(F(poly[j]));
        if (!M.is_zero()) {
            where = {{"n", n}, {"n'", np}, {"e", e}};
            return false;
        }
    }
    return true;
}

// sum over blocks of t_left E t_right without the q^{(k-1) d_r} twist
template <class F>
Mat<F> w_unshifted_block(const KModule<F>& K, int d, int k, int n) {
    int m = n - d;
    Mat<F> M(m >= 0 ? K.dim(m) : 0, K.dim(n));
    if (m < 0) return M;
    if (k == 0) return d == 0 ? Mat<F>::identity(K.dim(n)) : M;
    for (int s = 0; s <= std::min(n, m); ++s) {
        int dl = m - s, dr = n - s;
        for (int kl = 0; kl <= k; ++kl)
            for (int kr = 0; kl + kr <= k; ++kr) {
                if ((dl == 0) != (kl == 0) || (dr == 0) != (kr == 0)) continue;
                M += K.t_left(dl, kl).block(s) * K.e0_diag(k - kl - kr).block(s) * K.t_right(dr, kr).block(n);
            }
    }
    return M;
}

inline long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long c = 1;
    for (int j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
    return c;
}

// x = y eps^ord + O(eps^{ord+1}), with the eps^ord coefficient known
inline bool leading_is(const Eps& x, int ord, const Fp& y) {
    if (x.abs_precision() <= ord) return false;
    return x.valuation() >= ord && x.coeff(ord) == y;
}
inline bool leading_matches(const Mat<Eps>& X, int ord, const Mat<Fp>& Y, json& where) {
    for (int i = 0; i < X.rows; ++i)
        for (int j = 0; j < X.cols; ++j)
            if (!leading_is(X(i, j), ord, Y(i, j))) {
                where = {{"row", i}, {"col", j}, {"precision", X(i, j).abs_precision() > ord}};
                return false;
            }
    return true;
}

}  // namespace detail

// literal: Wbar_i expanded at ybar = 0 on both sides. limit: the leading order of the q-side
// relation, where D_x expands each block through K_s at -hbar (n - s) and the m^k twist
// moves the right-hand current to ybar = -mbar.
enum class ClassicalForm { literal, limit };

// Phibar(x) Wbar_i(y) (x-y)^i = Wbar_i(y) Phibar(x) (x-y)^i on the two-torus window
inline Report check_locality(const KOptions& o, int i, ClassicalForm form = ClassicalForm::limit, int tail_power = 2) {
    bool lim = form == ClassicalForm::limit;
    Report out = run_on_module<ClassicalModule>(
        "classical-locality", o,
        [&](auto& T, Report& rep) {
            using F = typename std::decay_t<decltype(T)>::field;
            ClassicalModule<F> S(o.r, 1);
            int nmid = o.max_size + std::max(i, 1);
            ClassicalVertex<F> v(T, S, Monomial::var(gen::m), nmid, tail_power);
            F rb = lim ? -lin<F>(Monomial::var(gen::m)) : F(0);
            for (int n = 0; n <= o.max_size; ++n)
                for (int np = 0; np <= o.max_size; ++np) {
                    json where;
                    bool ok = detail::classical_commutator_vanishes(v, i, n, np, nmid, lim, rb, where);
                    where["i"] = i;
                    rep.check(ok, where);
                }
        },
        0);
    out.info["i"] = i;
    out.info["form"] = lim ? "limit" : "literal";
    return out;
}

// The q-side computations through q_i = e^{eps hbar_i}, u = e^{eps ubar}, y = e^{eps ybar}
// in the renormalized basis eps^{r|lambda|}|lambda>, against the classical values.
inline Report check_classical_limit(const KOptions& o, int eps_order = -1) {
    if (o.mode == Mode::exact) throw std::invalid_argument("classical limit runs in probe mode");
    int r = o.r, N = o.max_size;
    int prec = eps_order > 0 ? eps_order : r + 4;
    Report out = run_on_module<ClassicalModule>(
        "classical-limit", o,
        [&](auto& C, Report& rep) {
            if constexpr (std::is_same_v<typename std::decay_t<decltype(C)>::field, Fp>) {
            int& P = Eps::precision();
            int saved = P;
            P = prec;
            KModule<Eps> K(r);
            ClassicalModule<Fp> S(r, 1);
            const auto& ctx = ProbeContext::current();
            Fp ybar = ctx.additive(gen::y);
            auto renorm = [&](int d) { return r * d; };
            // zeta-bar and tau-bar as leading terms
            for (int t = 0; t < 3; ++t) {
                Monomial w = Monomial::var(gen::w) * Monomial::q1().pow(t);
                Fp z = lin<Fp>(w);
                Eps zq = K.zeta(w);
                rep.check(detail::leading_is(zq, 0, C.zbar(z)), {{"bridge", "zeta"}, {"t", t}});
                Eps tq(1);
                for (int a = 1; a <= r; ++a) tq *= Eps(1) - Eps::mono(w / K.u_mono(a));
                rep.check(detail::leading_is(tq, r, C.taubar(z)), {{"bridge", "tau"}, {"t", t}});
            }
            // p_{+-n} = eps pbar_{+-n} + ...
            for (int n = 1; n <= N; ++n)
                for (int sg : {1, -1}) {
                    int d = sg * n;
                    for (int s = std::max(0, d); s <= N; ++s) {
                        json where;
                        bool ok = detail::leading_matches(K.boson(d).block(s), 1 - renorm(d), C.boson_bar(d).block(s), where);
                        where["bridge"] = "boson";
                        where["n"] = d;
                        where["size"] = s;
                        rep.check(ok, where);
                    }
                }
            // W(x, y D_x) = sum_{k <= r} (-y)^{-k} W_k at order eps^r; D_x moves ybar by -hbar d_r
            // in the block through K_s, d_r = n - s. The same with ybar fixed is recorded only.
            bool literal = true;
            for (int d = -N; d <= N; ++d)
                for (int n = std::max(0, d); n <= N; ++n) {
                    int m = n - d;
                    if (m > N) continue;
                    int base = -renorm(d);
                    std::vector<Mat<Eps>> W;
                    for (int k = 0; k <= r; ++k) W.push_back(K.w_op(d, k).block(n));
                    Mat<Eps> G(K.dim(m), K.dim(n));
                    Eps yk(1), yi = -Eps::mono(Monomial::var(gen::y, -1));
                    for (int k = 0; k <= r; ++k, yk *= yi) G += W[k].scaled(yk);
                    json where, w0;
                    bool ok = detail::leading_matches(G, r + base, C.wbar_block(r, d, n, ybar, true), where);
                    where.update({{"bridge", "generating"}, {"d", d}, {"size", n}});
                    rep.check(ok, where);
                    if (!detail::leading_matches(G, r + base, C.wbar_block(r, d, n, ybar, false), w0)) literal = false;
                    // Wbar_i = lim eps^{-i} sum_k (-1)^k C(r-k, r-i) W_k, lower orders vanishing
                    for (int i = 1; i <= r; ++i) {
                        Mat<Eps> S(K.dim(m), K.dim(n));
                        for (int k = 0; k <= i; ++k) S += W[k].scaled(Eps((k % 2 ? -1 : 1) * detail::binom(r - k, r - i)));
                        json w1, w2;
                        bool ok1 = detail::leading_matches(S, i + base, C.wbar_block(i, d, n, Fp(0), true), w1);
                        w1.update({{"bridge", "limitation"}, {"i", i}, {"d", d}, {"size", n}});
                        rep.check(ok1, w1);
                        if (!detail::leading_matches(S, i + base, C.wbar_block(i, d, n), w2)) literal = false;
                    }
                }
            rep.info["literal_form"] = rep.info.value("literal_form", true) && literal;
            // Abar as the eps^0 term of A in the renormalized basis
            KModule<Eps> KS(r, 1);
            Monomial mm = Monomial::var(gen::m);
            for (int n = 0; n <= N; ++n)
                for (int np = 0; np <= N; ++np)
                    for (auto& lam : K.states(n))
                        for (auto& lp : KS.states(np)) {
                            int ord = -r * (np - n);
                            bool ok = detail::leading_is(a_matrix(K, KS, mm, lam, lp), ord, abar_matrix(C, S, mm, lam, lp));
                            rep.check(ok, {{"bridge", "abar"}, {"lambda", lam.str()}, {"lambda'", lp.str()}});
                        }
            P = saved;
            }
        },
        0);
    out.info["eps_order"] = prec;
    return out;
}

}  // namespace qw
