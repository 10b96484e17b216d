#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "monomial.hpp"
#include "ratf.hpp"

namespace qw {

// Arithmetic modulo the Mersenne prime 2^61 - 1.
class Fp {
public:
    static constexpr uint64_t P = (1ull << 61) - 1;

    Fp() = default;
    Fp(long c) {
        long r = c % (long)P;
        v_ = (uint64_t)(r < 0 ? r + (long)P : r);
    }
    static Fp raw(uint64_t v) {
        Fp r;
        r.v_ = v;
        return r;
    }
    static Fp from_int(long c) { return Fp(c); }
    static Fp from_q(const mpq_class& q) {
        static const mpz_class mp(std::to_string(P));
        mpz_class n = q.get_num() % mp, d = q.get_den() % mp;
        if (n < 0) n += mp;
        Fp a = raw(n.get_ui()), b = raw(d.get_ui());
        return a / b;
    }
    static Fp mono(const Monomial& m);

    uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    friend Fp operator+(Fp a, Fp b) {
        uint64_t s = a.v_ + b.v_;
        if (s >= P) s -= P;
        return raw(s);
    }
    friend Fp operator-(Fp a, Fp b) { return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + P - b.v_); }
    Fp operator-() const { return raw(v_ ? P - v_ : 0); }
    friend Fp operator*(Fp a, Fp b) {
        unsigned __int128 t = (unsigned __int128)a.v_ * b.v_;
        uint64_t lo = (uint64_t)(t & P), hi = (uint64_t)(t >> 61);
        uint64_t s = lo + hi;
        if (s >= P) s -= P;
        return raw(s);
    }
    Fp pow(long e) const {
        if (e < 0) return inv().pow(-e);
        Fp r(1), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    Fp inv() const {
        if (!v_) throw DivisionByZero();
        Fp r(1), b = *this;
        uint64_t e = P - 2;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    friend Fp operator/(Fp a, Fp b) { return a * b.inv(); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }
    std::string str() const { return std::to_string(v_); }

private:
    uint64_t v_ = 0;
};

// Random nonzero assignment of the generators; one per thread.
class ProbeContext {
public:
    static constexpr int kPowRange = 96;

    explicit ProbeContext(uint64_t seed = 1) { reseed(seed); }

    void reseed(uint64_t seed) {
        seed_ = seed;
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 12345);
        for (int g = 0; g < kGens; ++g) {
            val_[g] = draw(rng);
            add_[g] = draw(rng);
        }
        for (int g = 0; g < kGens; ++g) {
            auto& t = table_[g];
            t.assign(2 * kPowRange + 1, Fp(1));
            Fp vi = val_[g].inv();
            for (int k = 1; k <= kPowRange; ++k) {
                t[kPowRange + k] = t[kPowRange + k - 1] * val_[g];
                t[kPowRange - k] = t[kPowRange - k + 1] * vi;
            }
        }
    }
    uint64_t seed() const { return seed_; }
    Fp value(int g) const { return val_[g]; }
    // values used by additive (classical) evaluations
    Fp additive(int g) const { return add_[g]; }
    void set_value(int g, Fp v) {
        val_[g] = v;
        reseed_tables(g);
    }
    void set_additive(int g, Fp v) { add_[g] = v; }

    Fp mono(const Monomial& m) const {
        Fp r(1);
        for (int g = 0; g < kGens; ++g) {
            int e = m.e[g];
            if (!e) continue;
            if (e >= -kPowRange && e <= kPowRange)
                r = r * table_[g][kPowRange + e];
            else
                r = r * val_[g].pow(e);
        }
        return r;
    }
    // linear form sum e_g * add_g
    Fp linear(const Monomial& m) const {
        Fp r(0);
        for (int g = 0; g < kGens; ++g)
            if (m.e[g]) r += Fp((long)m.e[g]) * add_[g];
        return r;
    }

    static ProbeContext& current() {
        if (!cur_) cur_ = &fallback();
        return *cur_;
    }
    static ProbeContext* exchange(ProbeContext* c) {
        ProbeContext* old = cur_;
        cur_ = c;
        return old;
    }

private:
    static Fp draw(std::mt19937_64& rng) {
        for (;;) {
            uint64_t v = rng() & Fp::P;
            if (v > 1 && v < Fp::P - 1) return Fp::raw(v);
        }
    }
    void reseed_tables(int g) {
        auto& t = table_[g];
        Fp vi = val_[g].inv();
        t[kPowRange] = Fp(1);
        for (int k = 1; k <= kPowRange; ++k) {
            t[kPowRange + k] = t[kPowRange + k - 1] * val_[g];
            t[kPowRange - k] = t[kPowRange - k + 1] * vi;
        }
    }
    static ProbeContext& fallback() {
        thread_local ProbeContext c(1);
        return c;
    }

    uint64_t seed_ = 1;
    std::array<Fp, kGens> val_{};
    std::array<Fp, kGens> add_{};
    std::array<std::vector<Fp>, kGens> table_{};
    static thread_local ProbeContext* cur_;
};

inline thread_local ProbeContext* ProbeContext::cur_ = nullptr;

inline Fp Fp::mono(const Monomial& m) { return ProbeContext::current().mono(m); }

// RAII activation of a probe assignment on this thread.
class ProbeScope {
public:
    explicit ProbeScope(uint64_t seed) : ctx_(seed) { old_ = ProbeContext::exchange(&ctx_); }
    ~ProbeScope() { ProbeContext::exchange(old_); }
    ProbeScope(const ProbeScope&) = delete;
    ProbeScope& operator=(const ProbeScope&) = delete;
    ProbeContext& context() { return ctx_; }

private:
    ProbeContext ctx_;
    ProbeContext* old_;
};

// Probe equality of exact values: equal under `reps` independent assignments.
inline bool probe_equal(const RatF& a, const RatF& b, int reps = 3, uint64_t seed = 7) {
    for (int i = 0; i < reps; ++i) {
        ProbeScope s(seed + 1000003ull * i);
        if (a.eval<Fp>() != b.eval<Fp>()) return false;
    }
    return true;
}

}  // namespace qw
