#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "monomial.hpp"

namespace qw {

// Row lengths, weakly decreasing. Box (i, j) = (column, row), origin bottom-left.
using Partition = std::vector<int>;

inline int psize(const Partition& p) {
    int s = 0;
    for (int v : p) s += v;
    return s;
}

struct Box {
    int k;  // component, 1-based
    int i, j;
    friend bool operator==(const Box& a, const Box& b) { return a.k == b.k && a.i == b.i && a.j == b.j; }
    friend bool operator<(const Box& a, const Box& b) {
        if (a.k != b.k) return a.k < b.k;
        if (a.j != b.j) return a.j < b.j;
        return a.i < b.i;
    }
};

inline Monomial box_weight(const Box& b, int torus = 0) { return weight(b.k, b.i, b.j, torus); }

struct RPartition {
    std::vector<Partition> c;

    RPartition() = default;
    explicit RPartition(int r) : c(r) {}
    explicit RPartition(std::vector<Partition> comps) : c(std::move(comps)) {}

    int r() const { return (int)c.size(); }
    int size() const {
        int s = 0;
        for (auto& p : c) s += psize(p);
        return s;
    }
    bool contains(const Box& b) const {
        const auto& p = c[b.k - 1];
        return b.j >= 0 && b.j < (int)p.size() && b.i >= 0 && b.i < p[b.j];
    }
    bool contains(const RPartition& o) const {
        for (int k = 0; k < r(); ++k) {
            if (o.c[k].size() > c[k].size()) return false;
            for (size_t j = 0; j < o.c[k].size(); ++j)
                if (o.c[k][j] > c[k][j]) return false;
        }
        return true;
    }
    std::vector<Box> boxes() const {
        std::vector<Box> v;
        for (int k = 0; k < r(); ++k)
            for (int j = 0; j < (int)c[k].size(); ++j)
                for (int i = 0; i < c[k][j]; ++i) v.push_back({k + 1, i, j});
        return v;
    }
    std::vector<Box> addable() const {
        std::vector<Box> v;
        for (int k = 0; k < r(); ++k) {
            const auto& p = c[k];
            for (int j = 0; j <= (int)p.size(); ++j) {
                int len = j < (int)p.size() ? p[j] : 0;
                if (j == 0 || p[j - 1] > len) v.push_back({k + 1, len, j});
            }
        }
        return v;
    }
    std::vector<Box> removable() const {
        std::vector<Box> v;
        for (int k = 0; k < r(); ++k) {
            const auto& p = c[k];
            for (int j = 0; j < (int)p.size(); ++j) {
                int next = j + 1 < (int)p.size() ? p[j + 1] : 0;
                if (p[j] > next) v.push_back({k + 1, p[j] - 1, j});
            }
        }
        return v;
    }
    RPartition with(const Box& b) const {
        RPartition o = *this;
        auto& p = o.c[b.k - 1];
        if (b.j == (int)p.size())
            p.push_back(1);
        else
            ++p[b.j];
        return o;
    }
    RPartition without(const Box& b) const {
        RPartition o = *this;
        auto& p = o.c[b.k - 1];
        if (--p[b.j] == 0) p.pop_back();
        return o;
    }

    friend bool operator==(const RPartition& a, const RPartition& b) { return a.c == b.c; }
    friend bool operator!=(const RPartition& a, const RPartition& b) { return a.c != b.c; }
    friend bool operator<(const RPartition& a, const RPartition& b) {
        int sa = a.size(), sb = b.size();
        if (sa != sb) return sa < sb;
        return a.c < b.c;
    }

    std::string str() const {
        std::string s = "(";
        for (int k = 0; k < r(); ++k) {
            if (k) s += ",";
            if (c[k].empty()) {
                s += "0";
                continue;
            }
            s += "(";
            for (size_t j = 0; j < c[k].size(); ++j) s += (j ? "," : "") + std::to_string(c[k][j]);
            s += ")";
        }
        return s + ")";
    }
};

// Partitions of n, reverse lexicographic: (n), (n-1,1), ...
inline std::vector<Partition> enumerate_partitions(int n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int rem, int maxp) {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rem, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(rem - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

inline std::vector<RPartition> enumerate_rpartitions(int r, int n) {
    std::vector<RPartition> out;
    RPartition cur(r);
    std::function<void(int, int)> rec = [&](int k, int rem) {
        if (k == r - 1) {
            for (auto& p : enumerate_partitions(rem)) {
                cur.c[k] = p;
                out.push_back(cur);
            }
            cur.c[k].clear();
            return;
        }
        for (int s = rem; s >= 0; --s)
            for (auto& p : enumerate_partitions(s)) {
                cur.c[k] = p;
                rec(k + 1, rem - s);
            }
        cur.c[k].clear();
    };
    if (r > 0) rec(0, n);
    return out;
}

inline std::vector<RPartition> enumerate_rpartitions_upto(int r, int n) {
    std::vector<RPartition> out;
    for (int s = 0; s <= n; ++s)
        for (auto& p : enumerate_rpartitions(r, s)) out.push_back(p);
    return out;
}

struct SkewShape {
    RPartition outer, inner;
    bool valid() const { return outer.r() == inner.r() && outer.contains(inner); }
    int size() const { return outer.size() - inner.size(); }
};

// boxes[l-1] carries label l; labels decrease going up and to the right.
struct SYT {
    SkewShape shape;
    std::vector<Box> boxes;
    std::vector<Monomial> weights(int torus = 0) const {
        std::vector<Monomial> w;
        for (auto& b : boxes) w.push_back(box_weight(b, torus));
        return w;
    }
};

// Label 1 sits on a removable corner of the outer shape; recurse inward.
inline std::vector<SYT> enumerate_syt(const SkewShape& s) {
    std::vector<SYT> out;
    if (!s.valid()) return out;
    std::vector<Box> cur;
    std::function<void(const RPartition&)> rec = [&](const RPartition& sh) {
        if (sh == s.inner) {
            out.push_back({s, cur});
            return;
        }
        for (auto& b : sh.removable()) {
            RPartition nx = sh.without(b);
            if (!nx.contains(s.inner)) continue;
            cur.push_back(b);
            rec(nx);
            cur.pop_back();
        }
    };
    rec(s.outer);
    return out;
}

}  // namespace qw
