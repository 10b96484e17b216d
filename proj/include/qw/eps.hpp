#pragma once

#include <algorithm>
#include <climits>
#include <string>
#include <vector>

#include "fp.hpp"

namespace qw {

// Laurent series in eps over Fp with tracked precision:
//   eps^v (c0 + c1 eps + ... + c_{n-1} eps^{n-1}) + O(eps^{v+n}),  c0 != 0.
// n == 0 means a zero known to O(eps^v). Generators evaluate to
// exp(eps * a_g) with a_g the additive probe values, so q_i = e^{eps hbar_i}.
class Eps {
public:
    static int& precision() {
        thread_local int n = 10;
        return n;
    }

    Eps() : v_(INT_MAX / 4) {}
    Eps(long c) {
        if (c == 0) {
            v_ = INT_MAX / 4;
            return;
        }
        v_ = 0;
        c_.assign(precision(), Fp(0));
        c_[0] = Fp(c);
    }
    static Eps constant(Fp c) {
        Eps r;
        if (c.is_zero()) return r;
        r.v_ = 0;
        r.c_.assign(precision(), Fp(0));
        r.c_[0] = c;
        return r;
    }
    static Eps from_int(long c) { return Eps(c); }
    static Eps from_q(const mpq_class& q) { return constant(Fp::from_q(q)); }
    // exp(eps * L)
    static Eps exp_linear(Fp L) {
        Eps r;
        int n = precision();
        r.v_ = 0;
        r.c_.resize(n);
        Fp t(1);
        for (int k = 0; k < n; ++k) {
            r.c_[k] = t;
            t = t * L / Fp(k + 1);
        }
        return r;
    }
    static Eps mono(const Monomial& m) { return exp_linear(ProbeContext::current().linear(m)); }
    // eps^k exactly
    static Eps eps_power(int k) {
        Eps r(1);
        r.v_ = k;
        return r;
    }

    bool is_zero() const { return c_.empty(); }
    int valuation() const { return v_; }
    int abs_precision() const { return v_ + (int)c_.size(); }
    // coefficient of eps^k (0 below valuation); requires k < abs_precision
    Fp coeff(int k) const {
        if (k < v_) return Fp(0);
        if (k - v_ >= (int)c_.size()) throw std::out_of_range("eps coefficient beyond precision");
        return c_[k - v_];
    }

    friend Eps operator+(const Eps& a, const Eps& b) { return add(a, b, false); }
    friend Eps operator-(const Eps& a, const Eps& b) { return add(a, b, true); }
    Eps operator-() const {
        Eps r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Eps operator*(const Eps& a, const Eps& b) {
        Eps r;
        if (a.is_zero() || b.is_zero()) {
            r.v_ = std::min(a.v_ + b.v_, INT_MAX / 4);
            return r;
        }
        int n = (int)std::min(a.c_.size(), b.c_.size());
        r.v_ = a.v_ + b.v_;
        r.c_.assign(n, Fp(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        return r;
    }
    Eps inv() const {
        if (is_zero()) throw DivisionByZero();
        int n = (int)c_.size();
        Eps r;
        r.v_ = -v_;
        r.c_.assign(n, Fp(0));
        Fp i0 = c_[0].inv();
        r.c_[0] = i0;
        for (int k = 1; k < n; ++k) {
            Fp s(0);
            for (int j = 1; j <= k; ++j) s += c_[j] * r.c_[k - j];
            r.c_[k] = -s * i0;
        }
        return r;
    }
    friend Eps operator/(const Eps& a, const Eps& b) { return a * b.inv(); }
    Eps& operator+=(const Eps& o) { return *this = *this + o; }
    Eps& operator-=(const Eps& o) { return *this = *this - o; }
    Eps& operator*=(const Eps& o) { return *this = *this * o; }
    Eps& operator/=(const Eps& o) { return *this = *this / o; }
    Eps pow(long e) const {
        if (e < 0) return inv().pow(-e);
        Eps r(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    // equality to the common known precision
    friend bool operator==(const Eps& a, const Eps& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Eps& a, const Eps& b) { return !(a == b); }

    std::string str() const {
        if (is_zero()) return "O(eps^" + std::to_string(v_) + ")";
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            s += (s.empty() ? "" : " + ") + c_[i].str() + "*eps^" + std::to_string(v_ + (int)i);
        }
        return s + " + O(eps^" + std::to_string(abs_precision()) + ")";
    }

private:
    static Eps add(const Eps& a, const Eps& b, bool sub) {
        int pa = a.abs_precision(), pb = b.abs_precision();
        int prec = std::min(pa, pb);
        int lo = std::min(a.is_zero() ? prec : a.v_, b.is_zero() ? prec : b.v_);
        Eps r;
        if (lo >= prec) {
            r.v_ = prec;
            return r;
        }
        std::vector<Fp> c(prec - lo, Fp(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            int k = a.v_ + (int)i;
            if (k < prec) c[k - lo] += a.c_[i];
        }
        for (size_t i = 0; i < b.c_.size(); ++i) {
            int k = b.v_ + (int)i;
            if (k < prec) c[k - lo] += sub ? -b.c_[i] : b.c_[i];
        }
        size_t s = 0;
        while (s < c.size() && c[s].is_zero()) ++s;
        if (s == c.size()) {
            r.v_ = prec;
            return r;
        }
        r.v_ = lo + (int)s;
        // cap relative precision at the configured length
        size_t n = std::min(c.size() - s, (size_t)precision());
        r.c_.assign(c.begin() + s, c.begin() + s + n);
        return r;
    }

    int v_;
    std::vector<Fp> c_;
};

}  // namespace qw
