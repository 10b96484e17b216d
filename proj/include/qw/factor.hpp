#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>

#include "monomial.hpp"
#include "ratf.hpp"

namespace qw {

struct NonCancellingPole : std::domain_error {
    NonCancellingPole() : std::domain_error("non-cancelling pole") {}
};

// constant * prefactor * prod (1 - M)^e, with factors (1 - 1) counted separately.
class FactorProduct {
public:
    FactorProduct() = default;
    explicit FactorProduct(const mpq_class& c, const Monomial& m = Monomial()) : c_(c), pre_(m) {}

    static FactorProduct one_minus(const Monomial& m, int e = 1) {
        FactorProduct f;
        f.mul_binomial(m, e);
        return f;
    }
    // zeta(M) = (1 - q1 M)(1 - q2 M) / ((1 - M)(1 - q M))
    static FactorProduct zeta(const Monomial& m, int e = 1) {
        FactorProduct f;
        f.mul_zeta(m, e);
        return f;
    }

    void mul_binomial(const Monomial& m, int e) {
        if (!e) return;
        if (m.is_one()) {
            idc_ += e;
            return;
        }
        Monomial k = m;
        if (m.lead_sign() < 0) {
            if (e & 1) c_ = -c_;
            pre_ *= m.pow(e);
            k = m.inv();
        }
        int& v = f_[k];
        v += e;
        if (!v) f_.erase(k);
    }
    void mul_zeta(const Monomial& m, int e = 1) {
        mul_binomial(Monomial::q1() * m, e);
        mul_binomial(Monomial::q2() * m, e);
        mul_binomial(m, -e);
        mul_binomial(Monomial::q() * m, -e);
    }
    void mul_mono(const Monomial& m) { pre_ *= m; }
    void mul_const(const mpq_class& c) { c_ *= c; }

    FactorProduct& operator*=(const FactorProduct& o) {
        c_ *= o.c_;
        pre_ *= o.pre_;
        idc_ += o.idc_;
        for (auto& [m, e] : o.f_) {
            int& v = f_[m];
            v += e;
            if (!v) f_.erase(m);
        }
        return *this;
    }
    friend FactorProduct operator*(FactorProduct a, const FactorProduct& b) { return a *= b; }
    FactorProduct inv() const {
        if (c_ == 0) throw NonCancellingPole();
        FactorProduct r;
        r.c_ = 1 / c_;
        r.pre_ = pre_.inv();
        r.idc_ = -idc_;
        for (auto& [m, e] : f_) r.f_[m] = -e;
        return r;
    }
    FactorProduct pow(int n) const {
        if (n < 0) return inv().pow(-n);
        FactorProduct r;
        for (int i = 0; i < n; ++i) r *= *this;
        return r;
    }

    FactorProduct subst(const MonoSubst& s) const {
        FactorProduct r(c_, s(pre_));
        r.idc_ = idc_;
        for (auto& [m, e] : f_) r.mul_binomial(s(m), e);
        return r;
    }

    int identity_count() const { return idc_; }
    bool evaluable() const { return idc_ >= 0; }
    bool is_zero() const { return c_ == 0 || idc_ > 0; }
    const mpq_class& constant() const { return c_; }
    const Monomial& prefactor() const { return pre_; }
    const std::map<Monomial, int>& factors() const { return f_; }

    template <class F>
    F eval() const {
        if (idc_ < 0) throw NonCancellingPole();
        if (idc_ > 0 || c_ == 0) return F(0);
        F num = F::from_q(c_) * F::mono(pre_), den(1);
        for (auto& [m, e] : f_) {
            F b = F(1) - F::mono(m);
            if (e > 0)
                num *= b.pow(e);
            else
                den *= b.pow(-e);
        }
        return num / den;
    }
    RatF to_ratf() const {
        if (idc_ < 0) throw NonCancellingPole();
        if (idc_ > 0 || c_ == 0) return RatF();
        RatF r(c_);
        r *= RatF(pre_);
        for (auto& [m, e] : f_) r.mul_binomial(m, e);
        return r;
    }

    std::string str() const {
        std::string s = c_.get_str();
        if (!pre_.is_one()) s += "*" + pre_.str();
        for (auto& [m, e] : f_) s += "*(1-" + m.str() + ")^" + std::to_string(e);
        if (idc_) s += "*(1-1)^" + std::to_string(idc_);
        return s;
    }

private:
    mpq_class c_ = 1;
    Monomial pre_;
    std::map<Monomial, int> f_;
    int idc_ = 0;
};

inline RatF factorproduct_to_scalar(const FactorProduct& f) { return f.to_ratf(); }

using Character = std::map<Monomial, int>;

inline Character& char_add(Character& a, const Character& b, int sign = 1) {
    for (auto& [m, e] : b) {
        int& v = a[m];
        v += sign * e;
        if (!v) a.erase(m);
    }
    return a;
}
inline void char_add_term(Character& a, const Monomial& m, int e) {
    if (!e) return;
    int& v = a[m];
    v += e;
    if (!v) a.erase(m);
}

// total exterior power: prod over weights (1 - w^{-1})^mult
inline FactorProduct wedge_bullet(const Character& c) {
    FactorProduct f;
    for (auto& [m, e] : c) f.mul_binomial(m.inv(), e);
    return f;
}

// Hot-path accumulator for products of binomials with literal zeros/poles tracked.
template <class F>
struct SingVal {
    F num{1}, den{1};
    int ord = 0;

    void mul(const F& a) { num *= a; }
    void div(const F& a) { den *= a; }
    void mul_binomial(const Monomial& m, int e) {
        if (!e) return;
        if (m.is_one()) {
            ord += e;
            return;
        }
        F b = F(1) - F::mono(m);
        if (e > 0)
            for (int i = 0; i < e; ++i) num *= b;
        else
            for (int i = 0; i < -e; ++i) den *= b;
    }
    void mul_zeta(const Monomial& m, int e = 1) {
        mul_binomial(Monomial::q1() * m, e);
        mul_binomial(Monomial::q2() * m, e);
        mul_binomial(m, -e);
        mul_binomial(Monomial::q() * m, -e);
    }
    void mul(const SingVal& o) {
        num *= o.num;
        den *= o.den;
        ord += o.ord;
    }
    F value() const {
        if (ord < 0) throw NonCancellingPole();
        if (ord > 0) return F(0);
        return num / den;
    }
};

}  // namespace qw
