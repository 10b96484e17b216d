#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "qw/shapes.hpp"

using namespace qw;

namespace {

// all labelings of the skew boxes, filtered by the decreasing rule
long brute_syt_count(const SkewShape& s) {
    std::vector<Box> bx;
    for (auto& b : s.outer.boxes())
        if (!s.inner.contains(b)) bx.push_back(b);
    std::vector<int> lab(bx.size());
    std::iota(lab.begin(), lab.end(), 1);
    long count = 0;
    do {
        std::map<std::tuple<int, int, int>, int> at;
        for (size_t t = 0; t < bx.size(); ++t) at[{bx[t].k, bx[t].i, bx[t].j}] = lab[t];
        bool ok = true;
        for (auto& [key, l] : at) {
            auto [k, i, j] = key;
            auto r = at.find({k, i + 1, j}), u = at.find({k, i, j + 1});
            if (r != at.end() && r->second >= l) ok = false;
            if (u != at.end() && u->second >= l) ok = false;
        }
        count += ok;
    } while (std::next_permutation(lab.begin(), lab.end()));
    return count;
}

long hook_count(const Partition& p) {
    int n = psize(p);
    long num = 1;
    for (int i = 2; i <= n; ++i) num *= i;
    long den = 1;
    for (int j = 0; j < (int)p.size(); ++j)
        for (int i = 0; i < p[j]; ++i) {
            int arm = p[j] - i - 1, leg = 0;
            for (int jj = j + 1; jj < (int)p.size() && p[jj] > i; ++jj) ++leg;
            den *= arm + leg + 1;
        }
    return num / den;
}

// coefficients of prod_k (1-x^k)^{-r}
std::vector<long> gf_counts(int r, int N) {
    std::vector<long> c(N + 1, 0);
    c[0] = 1;
    for (int rep = 0; rep < r; ++rep)
        for (int k = 1; k <= N; ++k)
            for (int n = k; n <= N; ++n) c[n] += c[n - k];
    return c;
}

RPartition rp(std::vector<Partition> c) { return RPartition(std::move(c)); }

}  // namespace

TEST(BoxWeight, Examples) {
    EXPECT_EQ(box_weight({1, 0, 0}), Monomial::var(gen::u1));
    EXPECT_EQ(box_weight({2, 1, 0}), Monomial::var(gen::u(2)) * Monomial::q1());
    EXPECT_EQ(box_weight({1, 0, 3}, true), Monomial::var(gen::u(1, true)) * Monomial::q2(3));
}

TEST(RPartitions, SmallLists) {
    auto a = enumerate_rpartitions(1, 2);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], rp({{2}}));
    EXPECT_EQ(a[1], rp({{1, 1}}));
    auto b = enumerate_rpartitions(2, 1);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0], rp({{1}, {}}));
    EXPECT_EQ(b[1], rp({{}, {1}}));
    EXPECT_EQ(enumerate_rpartitions(2, 3).size(), 10u);
    EXPECT_EQ(enumerate_rpartitions(3, 0).size(), 1u);
}

TEST(RPartitions, GeneratingFunction) {
    for (int r = 1; r <= 3; ++r) {
        auto c = gf_counts(r, 8);
        for (int n = 0; n <= 8; ++n) EXPECT_EQ((long)enumerate_rpartitions(r, n).size(), c[n]) << r << "," << n;
    }
}

TEST(RPartitions, AddRemoveRoundTrip) {
    for (auto& l : enumerate_rpartitions_upto(2, 4)) {
        for (auto& b : l.addable()) {
            RPartition m = l.with(b);
            EXPECT_TRUE(m.contains(l));
            EXPECT_EQ(m.size(), l.size() + 1);
            EXPECT_EQ(m.without(b), l);
        }
        for (auto& b : l.removable()) EXPECT_EQ(l.without(b).with(b), l);
    }
}

TEST(SYT, SpecExamples) {
    EXPECT_EQ(enumerate_syt({rp({{1}}), rp({{}})}).size(), 1u);
    EXPECT_EQ(enumerate_syt({rp({{2, 1}}), rp({{}})}).size(), 2u);
    EXPECT_EQ(enumerate_syt({rp({{1}, {1}}), rp({{}, {}})}).size(), 2u);
    EXPECT_TRUE(enumerate_syt({rp({{1}}), rp({{2}})}).empty());
}

TEST(SYT, HookLengthStraightShapes) {
    for (int n = 1; n <= 6; ++n)
        for (auto& p : enumerate_partitions(n)) {
            SkewShape s{rp({p}), rp({{}})};
            EXPECT_EQ((long)enumerate_syt(s).size(), hook_count(p));
        }
}

TEST(SYT, BruteForceSkew) {
    for (auto& outer : enumerate_rpartitions_upto(2, 5))
        for (auto& inner : enumerate_rpartitions_upto(2, 2)) {
            SkewShape s{outer, inner};
            if (!s.valid()) continue;
            EXPECT_EQ((long)enumerate_syt(s).size(), brute_syt_count(s)) << outer.str() << "/" << inner.str();
        }
}

TEST(SYT, ConsecutiveWeightsNeverDifferByQ) {
    Monomial q = Monomial::q();
    for (int r = 1; r <= 2; ++r)
        for (auto& outer : enumerate_rpartitions_upto(r, 6)) {
            SkewShape s{outer, RPartition(r)};
            for (auto& t : enumerate_syt(s)) {
                auto w = t.weights();
                ASSERT_EQ((int)w.size(), outer.size());
                for (size_t i = 0; i + 1 < w.size(); ++i) EXPECT_NE(w[i], q * w[i + 1]);
            }
        }
}
