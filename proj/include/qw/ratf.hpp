#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"

namespace qw {

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero") {}
};

// Exact element of Q(generators): num * prod(1-M)^e / prod(den).
// No gcd: binomial factors cancel literally, the rest is kept as a fraction.
class RatF {
public:
    RatF() = default;
    RatF(long c) : num_(c) {}
    RatF(const mpq_class& c) : num_(c) {}
    RatF(const Monomial& m) : num_(m) {}
    explicit RatF(const Poly& p) { absorb_num(p); }

    static RatF from_int(long c) { return RatF(c); }
    static RatF from_q(const mpq_class& c) { return RatF(c); }
    static RatF mono(const Monomial& m) { return RatF(m); }
    static RatF one_minus(const Monomial& m) {
        RatF r(1);
        r.mul_binomial(m, 1);
        return r;
    }

    bool is_zero() const { return num_.is_zero(); }

    void mul_binomial(const Monomial& m, int e) {
        if (!e || num_.is_zero()) return;
        if (m.is_one()) {
            if (e > 0) {
                *this = RatF();
                return;
            }
            throw DivisionByZero();
        }
        Monomial k = m;
        if (m.lead_sign() < 0) {
            Poly pre(m, -1);
            num_ *= e > 0 ? pre.pow(e) : inv_mono(pre).pow(-e);
            k = m.inv();
        }
        int& v = bin_[k];
        v += e;
        if (!v) bin_.erase(k);
    }

    RatF& operator*=(const RatF& o) {
        if (is_zero()) return *this;
        if (o.is_zero()) return *this = RatF();
        num_ *= o.num_;
        for (auto& [m, e] : o.bin_) {
            int& v = bin_[m];
            v += e;
            if (!v) bin_.erase(m);
        }
        for (auto& p : o.den_) add_den(p);
        return *this;
    }
    friend RatF operator*(RatF a, const RatF& b) { return a *= b; }

    RatF inv() const {
        if (is_zero()) throw DivisionByZero();
        RatF r;
        r.num_ = Poly(1);
        for (auto& p : den_) r.num_ *= p;
        for (auto& [m, e] : bin_) r.bin_[m] = -e;
        r.divide_poly(num_);
        return r;
    }
    RatF& operator/=(const RatF& o) { return *this *= o.inv(); }
    friend RatF operator/(RatF a, const RatF& b) { return a /= b; }

    RatF operator-() const {
        RatF r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatF operator+(const RatF& a, const RatF& b) { return combine(a, b, 1); }
    friend RatF operator-(const RatF& a, const RatF& b) { return combine(a, b, -1); }
    RatF& operator+=(const RatF& o) { return *this = combine(*this, o, 1); }
    RatF& operator-=(const RatF& o) { return *this = combine(*this, o, -1); }

    friend bool operator==(const RatF& a, const RatF& b) { return (a - b).is_zero(); }
    friend bool operator!=(const RatF& a, const RatF& b) { return !(a == b); }

    RatF pow(long n) const {
        if (n < 0) return inv().pow(-n);
        RatF r(1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }

    RatF subst(const MonoSubst& s) const {
        RatF r(num_.subst(s));
        for (auto& [m, e] : bin_) r.mul_binomial(s(m), e);
        for (auto& p : den_) r.divide_poly(p.subst(s));
        return r;
    }

    // expanded numerator and denominator
    Poly numerator() const {
        Poly n = num_;
        for (auto& [m, e] : bin_)
            if (e > 0) n *= Poly::one_minus(m).pow(e);
        return n;
    }
    Poly denominator() const {
        Poly d(1);
        for (auto& [m, e] : bin_)
            if (e < 0) d *= Poly::one_minus(m).pow(-e);
        for (auto& p : den_) d *= p;
        return d;
    }
    std::string str() const {
        Poly d = denominator();
        return numerator().str() + "/" + d.str();
    }

    template <class F>
    F eval() const {
        F r = eval_poly<F>(num_);
        for (auto& [m, e] : bin_) r *= (F(1) - F::mono(m)).pow(e);
        for (auto& p : den_) r /= eval_poly<F>(p);
        return r;
    }
    template <class F>
    static F eval_poly(const Poly& p) {
        F r(0);
        for (auto& [m, c] : p.terms()) r += F::from_q(c) * F::mono(m);
        return r;
    }

    const Poly& raw_num() const { return num_; }

private:
    static Poly inv_mono(const Poly& p) {
        auto& t = p.terms()[0];
        return Poly(t.first.inv(), 1 / t.second);
    }

    // multiply the numerator by p, recognizing c*M*(1-N) shapes
    void absorb_num(const Poly& p) {
        if (p.size() == 2) {
            auto& a = p.terms()[0];
            auto& b = p.terms()[1];
            if (a.second == -b.second) {
                num_ = num_.is_zero() && bin_.empty() ? Poly(a.first, a.second) : num_ * Poly(a.first, a.second);
                mul_binomial(b.first / a.first, 1);
                return;
            }
        }
        num_ = (num_.is_zero() && bin_.empty() && den_.empty()) ? p : num_ * p;
    }
    void divide_poly(const Poly& p) {
        if (p.is_zero()) throw DivisionByZero();
        if (p.is_monomial()) {
            num_ *= inv_mono(p);
            return;
        }
        if (p.size() == 2) {
            auto& a = p.terms()[0];
            auto& b = p.terms()[1];
            if (a.second == -b.second) {
                num_ *= Poly(a.first.inv(), 1 / a.second);
                mul_binomial(b.first / a.first, -1);
                return;
            }
        }
        // cancel against a literal numerator match
        if (num_ == p) {
            num_ = Poly(1);
            return;
        }
        add_den(p);
    }
    void add_den(const Poly& p) { den_.push_back(p); }

    static RatF combine(const RatF& a, const RatF& b, int sign) {
        if (a.is_zero()) return sign > 0 ? b : -b;
        if (b.is_zero()) return a;
        RatF r;
        // common binomial part
        std::map<Monomial, int> common;
        for (auto& [m, e] : a.bin_) {
            auto it = b.bin_.find(m);
            int eb = it == b.bin_.end() ? 0 : it->second;
            int c = std::min(e, eb);
            if (c) common[m] = c;
        }
        for (auto& [m, e] : b.bin_)
            if (!a.bin_.count(m) && e < 0) common[m] = e;
        // common general denominators (multiset union)
        std::vector<Poly> dens = a.den_;
        std::vector<bool> usedA(a.den_.size(), false);
        std::vector<Poly> onlyB;
        for (auto& p : b.den_) {
            bool found = false;
            for (size_t i = 0; i < a.den_.size(); ++i)
                if (!usedA[i] && a.den_[i] == p) {
                    usedA[i] = found = true;
                    break;
                }
            if (!found) onlyB.push_back(p), dens.push_back(p);
        }
        auto part = [&](const RatF& s, bool isA) {
            Poly n = s.num_;
            for (auto& [m, e] : s.bin_) {
                auto it = common.find(m);
                int k = e - (it == common.end() ? 0 : it->second);
                if (k > 0) n *= Poly::one_minus(m).pow(k);
            }
            for (auto& [m, c] : common)
                if (!s.bin_.count(m) && c < 0) n *= Poly::one_minus(m).pow(-c);
            if (isA) {
                for (auto& p : onlyB) n *= p;
            } else {
                for (size_t i = 0; i < a.den_.size(); ++i)
                    if (!usedA[i]) n *= a.den_[i];
            }
            return n;
        };
        Poly n = part(a, true);
        if (sign > 0)
            n += part(b, false);
        else
            n -= part(b, false);
        if (n.is_zero()) return RatF();
        r.num_ = n;
        r.bin_ = common;
        r.den_ = dens;
        return r;
    }

    Poly num_;
    std::map<Monomial, int> bin_;
    std::vector<Poly> den_;
};

}  // namespace qw
