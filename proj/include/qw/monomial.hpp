#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qw {

// Fixed generator registry. q = q1*q2 is never a generator.
namespace gen {
enum : int {
    q1 = 0,
    q2,
    u1,
    u2,
    u3,
    u4,
    up1,
    up2,
    up3,
    up4,
    upp1,
    upp2,
    upp3,
    upp4,
    m,
    m2,
    m3,
    x,
    y,
    w,
    z1,
    count = z1 + 10
};
// torus 0, 1, 2 carry u, u', u''
inline int u(int i, int torus = 0) {
    if (i < 1 || i > 4 || torus < 0 || torus > 2) throw std::out_of_range("u index");
    return u1 + 4 * torus + i - 1;
}
inline int mass(int a) {
    if (a < 1 || a > 3) throw std::out_of_range("mass index");
    return a == 1 ? m : m2 + a - 2;
}
inline int z(int i) {
    if (i < 1 || i > 10) throw std::out_of_range("z index");
    return z1 + i - 1;
}
inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {
        "q1",   "q2",   "u1",   "u2",   "u3", "u4", "up1", "up2", "up3", "up4", "upp1", "upp2", "upp3", "upp4", "m", "m2", "m3",
        "x",  "y",  "w",  "z1", "z2", "z3", "z4", "z5", "z6", "z7", "z8", "z9", "z10"};
    return n;
}
inline int index_of(const std::string& s) {
    const auto& n = names();
    for (int i = 0; i < (int)n.size(); ++i)
        if (n[i] == s) return i;
    return -1;
}
}  // namespace gen

constexpr int kGens = gen::count;

struct Monomial {
    std::array<int16_t, kGens> e{};

    Monomial() = default;
    static Monomial var(int g, int p = 1) {
        Monomial r;
        r.e[g] = (int16_t)p;
        return r;
    }
    static Monomial q(int p = 1) {
        Monomial r;
        r.e[gen::q1] = r.e[gen::q2] = (int16_t)p;
        return r;
    }
    static Monomial q1(int p = 1) { return var(gen::q1, p); }
    static Monomial q2(int p = 1) { return var(gen::q2, p); }

    bool is_one() const {
        for (auto v : e)
            if (v) return false;
        return true;
    }
    int operator[](int g) const { return e[g]; }
    Monomial& operator*=(const Monomial& o) {
        for (int i = 0; i < kGens; ++i) e[i] = (int16_t)(e[i] + o.e[i]);
        return *this;
    }
    Monomial& operator/=(const Monomial& o) {
        for (int i = 0; i < kGens; ++i) e[i] = (int16_t)(e[i] - o.e[i]);
        return *this;
    }
    friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }
    friend Monomial operator/(Monomial a, const Monomial& b) { return a /= b; }
    Monomial inv() const {
        Monomial r;
        for (int i = 0; i < kGens; ++i) r.e[i] = (int16_t)-e[i];
        return r;
    }
    Monomial pow(int p) const {
        Monomial r;
        for (int i = 0; i < kGens; ++i) r.e[i] = (int16_t)(e[i] * p);
        return r;
    }
    // first nonzero exponent, 0 for the identity
    int lead_sign() const {
        for (auto v : e)
            if (v) return v > 0 ? 1 : -1;
        return 0;
    }
    int degree_in(int g) const { return e[g]; }
    Monomial without(int g) const {
        Monomial r = *this;
        r.e[g] = 0;
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e != b.e; }
    // Lexicographic in generator order, larger exponent first.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        for (int i = 0; i < kGens; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
        return false;
    }

    std::string str() const {
        std::string s;
        const auto& n = gen::names();
        for (int i = 0; i < kGens; ++i) {
            if (!e[i]) continue;
            if (!s.empty()) s += "*";
            s += n[i];
            if (e[i] != 1) s += "^" + std::to_string(e[i]);
        }
        return s.empty() ? "1" : s;
    }
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const {
        uint64_t h = 1469598103934665603ull;
        for (auto v : m.e) {
            h ^= (uint16_t)v;
            h *= 1099511628211ull;
        }
        return (size_t)h;
    }
};

// Weight helpers: u_k q1^i q2^j
inline Monomial weight(int k, int i, int j, int torus = 0) {
    Monomial r = Monomial::var(gen::u(k, torus));
    r.e[gen::q1] = (int16_t)i;
    r.e[gen::q2] = (int16_t)j;
    return r;
}

// Substitution of generators by monomials (others fixed).
struct MonoSubst {
    std::array<bool, kGens> has{};
    std::array<Monomial, kGens> img{};
    void set(int g, const Monomial& m) {
        has[g] = true;
        img[g] = m;
    }
    Monomial operator()(const Monomial& a) const {
        Monomial r;
        for (int g = 0; g < kGens; ++g) {
            if (!a.e[g]) continue;
            if (has[g])
                r *= img[g].pow(a.e[g]);
            else
                r.e[g] = (int16_t)(r.e[g] + a.e[g]);
        }
        return r;
    }
};

}  // namespace qw
