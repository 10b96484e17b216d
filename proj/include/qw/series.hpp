#pragma once

#include <stdexcept>
#include <vector>

namespace qw {

// Power series c_0 + c_1 t + ... truncated at order N (terms t^k, k < N).
template <class R>
class Series {
public:
    Series() = default;
    explicit Series(int N) : c_(N, R(0)) {}
    Series(int N, const R& c0) : c_(N, R(0)) {
        if (N > 0) c_[0] = c0;
    }
    static Series monomial(int N, int k, const R& c) {
        Series s(N);
        if (k < N) s.c_[k] = c;
        return s;
    }

    int order() const { return (int)c_.size(); }
    const R& operator[](int k) const { return c_[k]; }
    R& operator[](int k) { return c_[k]; }
    R at(int k) const { return k >= 0 && k < order() ? c_[k] : R(0); }

    Series& operator+=(const Series& o) {
        check(o);
        for (int k = 0; k < order(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Series& operator-=(const Series& o) {
        check(o);
        for (int k = 0; k < order(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    Series operator-() const {
        Series r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Series operator*(const Series& a, const Series& b) {
        a.check(b);
        int N = a.order();
        Series r(N);
        for (int i = 0; i < N; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; i + j < N; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    Series& operator*=(const Series& o) { return *this = *this * o; }
    Series scaled(const R& s) const {
        Series r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    // requires an invertible constant term
    Series inv() const {
        int N = order();
        if (N == 0) return *this;
        if (c_[0].is_zero()) throw std::domain_error("series inverse needs unit constant term");
        Series r(N);
        R i0 = R(1) / c_[0];
        r.c_[0] = i0;
        for (int k = 1; k < N; ++k) {
            R s(0);
            for (int j = 1; j <= k; ++j) s += c_[j] * r.c_[k - j];
            r.c_[k] = -(s * i0);
        }
        return r;
    }
    friend Series operator/(const Series& a, const Series& b) { return a * b.inv(); }

    // exp of a series with zero constant term: k e_k = sum_j j a_j e_{k-j}
    Series exp() const {
        int N = order();
        if (N && !c_[0].is_zero()) throw std::domain_error("series exp needs zero constant term");
        Series r(N);
        if (!N) return r;
        r.c_[0] = R(1);
        for (int k = 1; k < N; ++k) {
            R s(0);
            for (int j = 1; j <= k; ++j)
                if (!c_[j].is_zero()) s += R(j) * c_[j] * r.c_[k - j];
            r.c_[k] = s / R(k);
        }
        return r;
    }
    // log of a series with constant term 1
    Series log() const {
        int N = order();
        Series r(N);
        if (N < 2) return r;
        // f'/f integrated
        Series d(N);
        for (int k = 1; k < N; ++k) d.c_[k - 1] = R(k) * c_[k];
        Series q = d * inv();
        for (int k = 1; k < N; ++k) r.c_[k] = q.c_[k - 1] / R(k);
        return r;
    }

private:
    void check(const Series& o) const {
        if (o.order() != order()) throw std::invalid_argument("series order mismatch");
    }
    std::vector<R> c_;
};

}  // namespace qw
