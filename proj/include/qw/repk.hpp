#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "report.hpp"
#include "scalars.hpp"
#include "shapes.hpp"
#include "shuffle.hpp"

namespace qw {

struct ReconstructionOverflow : std::runtime_error {
    explicit ReconstructionOverflow(const std::string& w) : std::runtime_error("reconstruction overflow: " + w) {}
};

template <class F>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<F> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c, F(0)) {}
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    F& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
    const F& operator()(int i, int j) const { return a[(size_t)i * cols + j]; }

    bool is_zero() const {
        for (auto& x : a)
            if (!x.is_zero()) return false;
        return true;
    }
    Mat& operator+=(const Mat& o) {
        shape_check(o);
        for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        shape_check(o);
        for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat scaled(const F& c) const {
        Mat r = *this;
        for (auto& x : r.a) x = x * c;
        return r;
    }
    friend Mat operator+(Mat x, const Mat& y) { return x += y; }
    friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
        Mat c(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int l = 0; l < x.cols; ++l) {
                const F& v = x(i, l);
                if (v.is_zero()) continue;
                for (int j = 0; j < y.cols; ++j)
                    if (!y(l, j).is_zero()) c(i, j) += v * y(l, j);
            }
        return c;
    }

private:
    void shape_check(const Mat& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch");
    }
};

template <class F>
class GradedSpace;

// Graded operator on K: maps K_n to K_{n - shift}; blocks are built lazily and memoized.
template <class F>
class Op {
public:
    using Gen = std::function<Mat<F>(int)>;

    Op() = default;
    Op(const GradedSpace<F>* K, int shift, Gen g) : p_(std::make_shared<Impl>(K, shift, std::move(g))) {}

    int shift() const { return p_->shift; }
    const GradedSpace<F>& module() const { return *p_->K; }

    const Mat<F>& block(int n) const {
        auto it = p_->cache.find(n);
        if (it != p_->cache.end()) return it->second;
        int m = n - p_->shift;
        Mat<F> b;
        if (n < 0 || m < 0)
            b = Mat<F>(m >= 0 ? p_->K->dim(m) : 0, n >= 0 ? p_->K->dim(n) : 0);
        else
            b = p_->gen(n);
        return p_->cache.emplace(n, std::move(b)).first->second;
    }
    F coeff(const RPartition& mu, const RPartition& lam) const {
        int n = lam.size();
        if (n - mu.size() != shift()) return F(0);
        return block(n)(p_->K->index(mu), p_->K->index(lam));
    }

    friend Op operator*(const Op& A, const Op& B) {
        return Op(A.p_->K, A.shift() + B.shift(), [A, B](int n) { return A.block(n - B.shift()) * B.block(n); });
    }
    friend Op operator+(const Op& A, const Op& B) {
        same_shift(A, B);
        return Op(A.p_->K, A.shift(), [A, B](int n) { return A.block(n) + B.block(n); });
    }
    friend Op operator-(const Op& A, const Op& B) {
        same_shift(A, B);
        return Op(A.p_->K, A.shift(), [A, B](int n) { return A.block(n) - B.block(n); });
    }
    Op scaled(const F& c) const {
        Op A = *this;
        return Op(p_->K, shift(), [A, c](int n) { return A.block(n).scaled(c); });
    }
    friend Op commutator(const Op& A, const Op& B) { return A * B - B * A; }

private:
    struct Impl {
        const GradedSpace<F>* K;
        int shift;
        Gen gen;
        std::map<int, Mat<F>> cache;
        Impl(const GradedSpace<F>* k, int s, Gen g) : K(k), shift(s), gen(std::move(g)) {}
    };
    static void same_shift(const Op& A, const Op& B) {
        if (A.shift() != B.shift()) throw std::invalid_argument("adding operators of different degree");
    }
    std::shared_ptr<Impl> p_;
};

// States indexed by r-partitions in each degree, together with the scalar context
// (q1, q2 and memoized monomial values). Values live in F; create it inside the ProbeScope
// it is used with.
template <class F>
class GradedSpace {
public:
    using field = F;

    explicit GradedSpace(int r) : r_(r) {
        if (r < 1 || r > 4) throw std::invalid_argument("r must be in 1..4");
        q1_ = val(Monomial::q1());
        q2_ = val(Monomial::q2());
        q_ = q1_ * q2_;
    }
    GradedSpace(const GradedSpace&) = delete;
    GradedSpace& operator=(const GradedSpace&) = delete;

    int r() const { return r_; }
    F q1() const { return q1_; }
    F q2() const { return q2_; }
    F q() const { return q_; }
    F c() const { return q_.pow(r_); }

    const std::vector<RPartition>& states(int n) const {
        while ((int)states_.size() <= n) {
            int s = (int)states_.size();
            states_.push_back(enumerate_rpartitions(r_, s));
            std::map<RPartition, int> idx;
            for (int i = 0; i < (int)states_[s].size(); ++i) idx[states_[s][i]] = i;
            index_.push_back(std::move(idx));
        }
        return states_[n];
    }
    int dim(int n) const { return n < 0 ? 0 : (int)states(n).size(); }
    int index(const RPartition& p) const {
        states(p.size());
        auto it = index_[p.size()].find(p);
        if (it == index_[p.size()].end()) throw std::out_of_range("unknown r-partition " + p.str());
        return it->second;
    }

    F val(const Monomial& m) const {
        auto it = mono_.find(m);
        if (it != mono_.end()) return it->second;
        return mono_.emplace(m, F::mono(m)).first->second;
    }
    F zeta(const Monomial& m) const {
        auto it = zeta_.find(m);
        if (it != zeta_.end()) return it->second;
        SingVal<F> s;
        s.mul_zeta(m);
        return zeta_.emplace(m, s.value()).first->second;
    }
    // zeta(y) = 1 + (1-q1)(1-q2) y / ((1-y)(1-qy))
    F zeta_coeff(int n) const {
        if (n == 0) return F(1);
        F s(0);
        for (int j = 0; j < n; ++j) s += q_.pow(j);
        return (F(1) - q1_) * (F(1) - q2_) * s;
    }

    Op<F> identity() const {
        return Op<F>(this, 0, [this](int n) { return Mat<F>::identity(dim(n)); });
    }
    Op<F> zero(int shift) const {
        return Op<F>(this, shift, [this, shift](int n) { return Mat<F>(dim(n - shift), dim(n)); });
    }
    Op<F> diagonal(std::function<F(const RPartition&)> f) const {
        return Op<F>(this, 0, [this, f](int n) {
            Mat<F> m(dim(n), dim(n));
            for (int i = 0; i < dim(n); ++i) m(i, i) = f(states(n)[i]);
            return m;
        });
    }

protected:
    int r_;
    F q1_, q2_, q_;

private:
    mutable std::vector<std::vector<RPartition>> states_;
    mutable std::vector<std::map<RPartition, int>> index_;
    mutable std::unordered_map<Monomial, F, MonomialHash> mono_, zeta_;
};

// The level-r module in the fixed-point basis.
template <class F>
class KModule : public GradedSpace<F> {
    using Base = GradedSpace<F>;
    using Base::q1_;
    using Base::q2_;
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
    using Base::zeta;
    using Base::zeta_coeff;
    using Base::diagonal;

    explicit KModule(int r, int torus = 0) : Base(r), torus_(torus) {}

    int torus() const { return torus_; }
    Monomial u_mono(int a) const { return Monomial::var(gen::u(a, torus_)); }
    F u(int a) const { return val(u_mono(a)); }
    F u_prod() const {
        F p(1);
        for (int a = 1; a <= r_; ++a) p *= u(a);
        return p;
    }
    Monomial chi(const Box& b) const { return box_weight(b, torus_); }

    // 1 / (1 - m), asserted regular
    F inv_one_minus(const Monomial& m) const {
        SingVal<F> s;
        s.mul_binomial(m, -1);
        return s.value();
    }

    // <lambda| R^<- |mu>: SYT sum over lambda/mu, labels k..1 placed outward from mu
    Op<F> raise_op(const SymPresentation& R) const {
        if (R.k < 1) throw std::invalid_argument("raise_op needs k >= 1");
        auto terms = split(R);
        int k = R.k;
        return Op<F>(this, -k, [this, terms, k](int n) {
            Mat<F> M(dim(n + k), dim(n));
            for (int col = 0; col < dim(n); ++col) {
                const RPartition& mu = states(n)[col];
                for (auto& t : terms) {
                    Layer layer;
                    for (auto& b : mu.addable()) add(layer, mu.with(b), b, t.c * pw(b, t.a[k]) * raise_factor(mu, b));
                    for (int i = k - 1; i >= 1; --i) {
                        Layer next;
                        for (auto& [key, v] : layer) {
                            auto& [nu, prev] = key;
                            auto placed = skew_boxes(nu, mu);
                            for (auto& b : nu.addable()) {
                                F f = v * pw(b, t.a[i]) * raise_factor(mu, b) *
                                      inv_one_minus(Monomial::q() * chi(prev) / chi(b));
                                for (auto& c : placed) f *= zeta(chi(b) / chi(c));
                                add(next, nu.with(b), b, f);
                            }
                        }
                        layer = std::move(next);
                    }
                    for (auto& [key, v] : layer) M(index(key.first), col) += v;
                }
            }
            return M;
        });
    }

    // <mu| R^-> |lambda>: labels 1..k removed inward from lambda
    Op<F> lower_op(const SymPresentation& R) const {
        if (R.k < 1) throw std::invalid_argument("lower_op needs k >= 1");
        auto terms = split(R);
        int k = R.k;
        return Op<F>(this, k, [this, terms, k](int n) {
            Mat<F> M(dim(n - k), dim(n));
            for (int col = 0; col < dim(n); ++col) {
                const RPartition& lam = states(n)[col];
                for (auto& t : terms) {
                    Layer layer;
                    for (auto& b : lam.removable())
                        add(layer, lam.without(b), b, t.c * pw(b, t.a[1]) * lower_factor(lam, b));
                    for (int i = 2; i <= k; ++i) {
                        Layer next;
                        for (auto& [key, v] : layer) {
                            auto& [nu, prev] = key;
                            auto removed = skew_boxes(lam, nu);
                            for (auto& b : nu.removable()) {
                                F f = v * pw(b, t.a[i]) * lower_factor(lam, b) *
                                      inv_one_minus(Monomial::q() * chi(b) / chi(prev));
                                for (auto& c : removed) f *= zeta(chi(c) / chi(b));
                                add(next, nu.without(b), b, f);
                            }
                        }
                        layer = std::move(next);
                    }
                    for (auto& [key, v] : layer) M(index(key.first), col) += v;
                }
            }
            return M;
        });
    }

    // P_{0,d} eigenvalues
    F p0_eigen(int d, const RPartition& nu) const {
        if (d == 0) throw std::invalid_argument("diag_p0 needs d != 0");
        int e = std::abs(d);
        F su(0), sc(0);
        for (int a = 1; a <= r_; ++a) su += val(u_mono(a).pow(d));
        for (auto& b : nu.boxes()) sc += val(chi(b).pow(d));
        F box = (F(1) - q1_.pow(e)) * (F(1) - q2_.pow(e));
        if (d > 0) return su - box * sc;
        return -(q_.pow(e) * su - box * sc);
    }
    Op<F> diag_p0(int d) const {
        return memo(p0_, {d, 0}, [&] { return diagonal([this, d](const RPartition& nu) { return p0_eigen(d, nu); }); });
    }

    F e0_eigen(int k, const RPartition& nu) const {
        if (k == 0) return F(1);
        Series<F> s(k + 1, F(1));
        for (int a = 1; a <= r_; ++a) {
            Series<F> f(k + 1, F(1));
            f[1] = -u(a);
            s = s * f;
        }
        for (auto& b : nu.boxes()) {
            Series<F> f(k + 1);
            F x = val(chi(b)), xp(1);
            for (int n = 0; n <= k; ++n, xp *= x) f[n] = zeta_coeff(n) * xp;
            s = s * f;
        }
        return k % 2 ? -s[k] : s[k];
    }
    Op<F> e0_diag(int k) const {
        if (k < 0) throw std::invalid_argument("e0_diag needs k >= 0");
        if (k == 0) return identity();
        return memo(e0_, {k, 0}, [&] { return diagonal([this, k](const RPartition& nu) { return e0_eigen(k, nu); }); });
    }

    Op<F> t_left(int d, int k) const {
        if (d == 0 && k == 0) return identity();
        if (d < 1 || k < 1) return zero(-d);
        return memo(tl_, {d, k}, [&] { return raise_op(build_T(d, k)); });
    }
    Op<F> t_right(int d, int k) const {
        if (d == 0 && k == 0) return identity();
        if (d < 1 || k < 1) return zero(d);
        return memo(tr_, {d, k}, [&] { return lower_op(build_T(d, k)); });
    }

    // W_{d,k} = sum T^<-_{dl,kl} E_{0,k0} T^->_{dr,kr} q^{(k-1) dr}
    Op<F> w_op(int d, int k) const {
        if (k < 0) throw std::invalid_argument("w_op needs k >= 0");
        if (k == 0) return d == 0 ? identity() : zero(d);
        return memo(w_, {d, k}, [&] {
            return Op<F>(this, d, [this, d, k](int n) {
                int m = n - d;
                Mat<F> M(dim(m), dim(n));
                for (int s = 0; s <= std::min(n, m); ++s) {
                    int dl = m - s, dr = n - s;
                    for (int kl = 0; kl <= k; ++kl)
                        for (int kr = 0; kl + kr <= k; ++kr) {
                            if ((dl == 0) != (kl == 0) || (dr == 0) != (kr == 0)) continue;
                            Mat<F> t = t_left(dl, kl).block(s) * e0_diag(k - kl - kr).block(s) * t_right(dr, kr).block(n);
                            M += t.scaled(q_.pow((long)(k - 1) * dr));
                        }
                }
                return M;
            });
        });
    }

    // P_{a,b} etc. on K: a > 0 lowers a boxes, a < 0 raises, a = 0 is diagonal
    Op<F> P(int a, int b) const {
        if (a > 0) return memo(pl_, {a, b}, [&] { return lower_op(build_P(a, b)); });
        if (a < 0) return memo(pr_, {a, b}, [&] { return raise_op(build_P(-a, b)); });
        if (b == 0) throw std::invalid_argument("P_{0,0} is not defined");
        return diag_p0(b);
    }
    Op<F> H(int a, int b) const {
        if (a > 0) return lower_op(build_H(a, b));
        if (a < 0) return raise_op(build_H(-a, b));
        throw std::invalid_argument("H_{0,b} is not realized");
    }
    Op<F> E(int a, int b) const {
        if (a > 0) return lower_op(build_E(a, b));
        if (a < 0) return raise_op(build_E(-a, b));
        if (b >= 0) return e0_diag(b);
        throw std::invalid_argument("E_{0,b} needs b >= 0");
    }
    Op<F> Q(int a, int b) const {
        if (a > 0) return lower_op(build_Q(a, b));
        if (a < 0) return raise_op(build_Q(-a, b));
        if (b == 0) return identity();
        throw std::invalid_argument("Q_{0,b} is not realized");
    }

    // p_{-n} = P_{-n,0}, p_n = q^{n(r-1)} P_{n,0}
    Op<F> boson(int n) const {
        if (n == 0) throw std::invalid_argument("boson index must be nonzero");
        if (n < 0) return P(n, 0);
        return P(n, 0).scaled(q_.pow((long)n * (r_ - 1)));
    }
    Op<F> h_boson(int n) const {
        if (n == 0) throw std::invalid_argument("boson index must be nonzero");
        if (n < 0) return H(n, 0);
        return H(n, 0).scaled(q_.pow((long)n * (r_ - 1)));
    }

    // (|nu>, |nu>)
    F inner(const RPartition& nu) const {
        SingVal<F> s;
        auto bx = nu.boxes();
        for (auto& b : bx) {
            for (int a = 1; a <= r_; ++a) {
                tau_factor(s, chi(b) / u_mono(a), -1);
                s.mul_binomial(Monomial::q() * chi(b) / u_mono(a), -1);
            }
            for (auto& c : bx) s.mul_zeta(chi(b) / chi(c), -1);
        }
        return s.value();
    }

private:
    struct Term {
        F c;
        std::vector<int> a;  // a[label] = exponent of z_label
    };
    using Key = std::pair<RPartition, Box>;
    using Layer = std::map<Key, F>;

    std::vector<Term> split(const SymPresentation& R) const {
        std::vector<Term> out;
        for (auto& [m, c] : R.rho.terms()) {
            Term t{F::from_q(c), std::vector<int>(R.k + 1, 0)};
            Monomial rest = m;
            for (int i = 1; i <= R.k; ++i) {
                t.a[i] = m[gen::z(i)];
                rest.e[gen::z(i)] = 0;
            }
            t.c = t.c * val(rest);
            out.push_back(std::move(t));
        }
        return out;
    }
    static void add(Layer& l, const RPartition& p, const Box& b, const F& v) {
        auto [it, fresh] = l.emplace(Key{p, b}, v);
        if (!fresh) it->second += v;
    }
    static std::vector<Box> skew_boxes(const RPartition& outer, const RPartition& inner) {
        std::vector<Box> v;
        for (auto& b : outer.boxes())
            if (!inner.contains(b)) v.push_back(b);
        return v;
    }
    F pw(const Box& b, int a) const { return a ? val(chi(b).pow(a)) : F(1); }

    using FKey = std::tuple<int, int, int, int, int>;
    FKey fkey(const RPartition& p, const Box& b) const { return {p.size(), index(p), b.k, b.i, b.j}; }

    // (1-q1)(1-q2)/(1-q) zeta(chi_b / chi_mu) tau(q chi_b)
    F raise_factor(const RPartition& mu, const Box& b) const {
        FKey key = fkey(mu, b);
        auto it = rfac_.find(key);
        if (it != rfac_.end()) return it->second;
        SingVal<F> s;
        box_prefactor(s);
        for (auto& c : mu.boxes()) s.mul_zeta(chi(b) / chi(c));
        for (int a = 1; a <= r_; ++a) s.mul_binomial(Monomial::q() * chi(b) / u_mono(a), 1);
        return rfac_.emplace(key, s.value()).first->second;
    }
    // (1-q1)(1-q2)/(q^{r-1}(1-q)) zeta(chi_lambda / chi_b)^{-1} tau(chi_b)^{-1}
    F lower_factor(const RPartition& lam, const Box& b) const {
        FKey key = fkey(lam, b);
        auto it = lfac_.find(key);
        if (it != lfac_.end()) return it->second;
        SingVal<F> s;
        box_prefactor(s);
        s.div(val(Monomial::q(r_ - 1)));
        for (auto& c : lam.boxes()) s.mul_zeta(chi(c) / chi(b), -1);
        for (int a = 1; a <= r_; ++a) tau_factor(s, chi(b) / u_mono(a), -1);
        return lfac_.emplace(key, s.value()).first->second;
    }
    // 1 - z/u vanishing at z = u: written as -(z/u)(1 - u/z), so the limit against the
    // (1 - chi/z) factors of zeta carries a sign
    static void tau_factor(SingVal<F>& s, const Monomial& m, int e) {
        if (m.is_one() && e % 2) s.mul(F(-1));
        s.mul_binomial(m, e);
    }
    void box_prefactor(SingVal<F>& s) const {
        s.mul_binomial(Monomial::q1(), 1);
        s.mul_binomial(Monomial::q2(), 1);
        s.mul_binomial(Monomial::q(), -1);
    }

    using OpCache = std::map<std::pair<int, int>, Op<F>>;
    template <class Make>
    Op<F> memo(OpCache& c, std::pair<int, int> key, Make make) const {
        auto it = c.find(key);
        if (it != c.end()) return it->second;
        return c.emplace(key, make()).first->second;
    }

    int torus_;
    mutable std::map<FKey, F> rfac_, lfac_;
    mutable OpCache p0_, e0_, tl_, tr_, w_, pl_, pr_;
};

}  // namespace qw
