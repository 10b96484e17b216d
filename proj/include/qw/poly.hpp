#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "monomial.hpp"

namespace qw {

// Laurent polynomial with rational coefficients; terms kept sorted, no zeros.
class Poly {
public:
    using Term = std::pair<Monomial, mpq_class>;

    Poly() = default;
    Poly(long c) {
        if (c) t_.push_back({Monomial(), mpq_class(c)});
    }
    Poly(const mpq_class& c) {
        if (c != 0) t_.push_back({Monomial(), c});
    }
    Poly(const Monomial& m, const mpq_class& c = 1) {
        if (c != 0) t_.push_back({m, c});
    }
    // 1 - M
    static Poly one_minus(const Monomial& m) {
        Poly p(1);
        p -= Poly(m);
        return p;
    }

    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    bool is_monomial() const { return t_.size() == 1; }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].first.is_one()); }
    mpq_class constant() const {
        for (auto& [m, c] : t_)
            if (m.is_one()) return c;
        return 0;
    }

    Poly& operator+=(const Poly& o) { return *this = merge(*this, o, 1); }
    Poly& operator-=(const Poly& o) { return *this = merge(*this, o, -1); }
    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, 1); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, -1); }
    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.t_) t.second = -t.second;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.t_.empty() || b.t_.empty()) return Poly();
        if (a.t_.size() == 1 && b.t_.size() == 1) {
            Poly r;
            r.t_.push_back({a.t_[0].first * b.t_[0].first, a.t_[0].second * b.t_[0].second});
            return r;
        }
        std::map<Monomial, mpq_class> acc;
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) acc[ma * mb] += ca * cb;
        Poly r;
        r.t_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.t_.push_back({m, c});
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly mul_mono(const Monomial& m, const mpq_class& c = 1) const {
        Poly r;
        if (c == 0) return r;
        r.t_.reserve(t_.size());
        for (auto& [mm, cc] : t_) r.t_.push_back({mm * m, cc * c});
        // multiplication by a monomial preserves the order
        return r;
    }
    Poly pow(int n) const {
        Poly r(1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }
    Poly subst(const MonoSubst& s) const {
        std::map<Monomial, mpq_class> acc;
        for (auto& [m, c] : t_) acc[s(m)] += c;
        return from_map(acc);
    }
    // Coefficient extraction by exponent of one generator.
    std::map<int, Poly> split_by(int g) const {
        std::map<int, std::map<Monomial, mpq_class>> acc;
        for (auto& [m, c] : t_) acc[m.e[g]][m.without(g)] += c;
        std::map<int, Poly> r;
        for (auto& [k, mp] : acc) r[k] = from_map(mp);
        return r;
    }
    int min_degree(int g) const {
        int d = 1 << 20;
        for (auto& t : t_) d = std::min(d, (int)t.first.e[g]);
        return d;
    }
    int max_degree(int g) const {
        int d = -(1 << 20);
        for (auto& t : t_) d = std::max(d, (int)t.first.e[g]);
        return d;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.t_.size() != b.t_.size()) return a.t_.size() < b.t_.size();
        for (size_t i = 0; i < a.t_.size(); ++i) {
            if (a.t_[i].first != b.t_[i].first) return a.t_[i].first < b.t_[i].first;
            if (a.t_[i].second != b.t_[i].second) return a.t_[i].second < b.t_[i].second;
        }
        return false;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < t_.size(); ++i) {
            auto& [m, c] = t_[i];
            mpq_class a = abs(c);
            if (i == 0) {
                if (c < 0) s += "-";
            } else {
                s += c < 0 ? " - " : " + ";
            }
            if (m.is_one())
                s += a.get_str();
            else if (a == 1)
                s += m.str();
            else
                s += a.get_str() + "*" + m.str();
        }
        return s;
    }

    static Poly from_map(const std::map<Monomial, mpq_class>& acc) {
        Poly r;
        r.t_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.t_.push_back({m, c});
        return r;
    }

private:
    static Poly merge(const Poly& a, const Poly& b, int sign) {
        Poly r;
        r.t_.reserve(a.t_.size() + b.t_.size());
        size_t i = 0, j = 0;
        while (i < a.t_.size() || j < b.t_.size()) {
            if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
                r.t_.push_back(a.t_[i++]);
            } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
                r.t_.push_back({b.t_[j].first, sign > 0 ? b.t_[j].second : mpq_class(-b.t_[j].second)});
                ++j;
            } else {
                mpq_class c = a.t_[i].second;
                if (sign > 0) c += b.t_[j].second; else c -= b.t_[j].second;
                if (c != 0) r.t_.push_back({a.t_[i].first, c});
                ++i, ++j;
            }
        }
        return r;
    }

    std::vector<Term> t_;
};

}  // namespace qw
