#include <gtest/gtest.h>

#include "qw/classical.hpp"

using namespace qw;

namespace {

KOptions opts(int r, int n, uint64_t seed = 41) {
    KOptions o;
    o.r = r;
    o.max_size = n;
    o.seed = seed;
    return o;
}

RatF sym(int g) { return RatF::mono(Monomial::var(g)); }
RPartition one_box() { return RPartition(std::vector<Partition>{{1}}); }

}  // namespace

TEST(Additive, ZetaAndTau) {
    ProbeScope sc(11);
    ClassicalModule<Fp> C(2);
    Fp z = lin<Fp>(Monomial::var(gen::w));
    EXPECT_EQ(C.zbar(z) * z * (z + C.h()), (z + C.h1()) * (z + C.h2()));
    EXPECT_THROW(C.zbar(Fp(0)), NonCancellingPole);
    EXPECT_THROW(C.zbar(-C.h()), NonCancellingPole);
    EXPECT_EQ(C.taubar(Fp(0)), C.ubar(1) * C.ubar(2));
    // large argument: zbar -> 1 like 1 + O(1/z^2)
    Fp big = Fp(1) / Fp(1000003);
    Fp zb = C.zbar(Fp(1) / big);
    EXPECT_NE(zb, Fp(1));
    EXPECT_EQ(lin<Fp>(Monomial::q()), C.h());
}

TEST(Additive, OneBoxRaise) {
    // r = 1: <(1)| P^<-(rho = 1) |0> = hbar1 hbar2/(-hbar) taubar(ubar + hbar) = hbar1 hbar2
    ClassicalModule<RatF> C(1);
    auto P = C.raise_bar(ClassicalModule<RatF>::constant_rho(1, RatF(1)));
    EXPECT_EQ(P.block(0)(0, 0), sym(gen::q1) * sym(gen::q2));
    // and back down: -1 times rho
    auto L = C.lower_bar(ClassicalModule<RatF>::constant_rho(1, RatF(3)));
    EXPECT_EQ(L.block(1)(0, 0), RatF(-3));
}

TEST(Additive, EbarAndVacuumCurrents) {
    ProbeScope sc(12);
    for (int r = 1; r <= 3; ++r) {
        ClassicalModule<Fp> C(r);
        Fp y = lin<Fp>(Monomial::var(gen::y));
        Fp e(1), neg(1);
        for (int a = 1; a <= r; ++a) {
            e *= y - C.ubar(a);
            neg *= -C.ubar(a);
        }
        EXPECT_EQ(C.ebar_series(RPartition(r), y, 1)[0], e);
        // Wbar_r on the vacuum is the ybar^0 term prod(-ubar_i); (-1)^r times it is prod ubar_i
        EXPECT_EQ(C.wbar_block(r, 0, 0)(0, 0), neg);
        // zero mode of Wbar_1 is -(ubar_1 + ... + ubar_r)
        Fp s(0);
        for (int a = 1; a <= r; ++a) s -= C.ubar(a);
        EXPECT_EQ(C.wbar_block(1, 0, 0)(0, 0), s);
        EXPECT_EQ(C.ebar_diag(r).block(0)(0, 0), Fp(1));
        // one box: the series agrees with the rational function at a second point
        RPartition b = RPartition(r);
        b.c[0] = {1};
        Fp c = C.ubar(1) - y;
        Fp val = e * (c + C.h1()) * (c + C.h2()) / (c * (c + C.h()));
        EXPECT_EQ(C.ebar_series(b, y, 1)[0], val);
    }
}

TEST(Additive, Grading) {
    ProbeScope sc(13);
    ClassicalModule<Fp> C(2);
    for (int d = -2; d <= 2; ++d)
        for (int n = std::max(0, d); n <= 2; ++n) {
            auto M = C.wbar_block(2, d, n);
            EXPECT_EQ(M.rows, C.dim(n - d));
            EXPECT_EQ(M.cols, C.dim(n));
        }
    EXPECT_EQ(C.wbar_block(1, 3, 2).rows, 0);
}

TEST(Additive, BosonHeisenberg) {
    // [pbar_{-n}, pbar_n] = r n^3 hbar1 hbar2 for the leading orders of p_{+-n}
    ProbeScope sc(14);
    for (int r = 1; r <= 2; ++r) {
        ClassicalModule<Fp> C(r);
        for (int n = 1; n <= 2; ++n) {
            Op<Fp> c = C.boson_bar(-n) * C.boson_bar(n) - C.boson_bar(n) * C.boson_bar(-n);
            Fp v = Fp(r * n * n * n) * C.h1() * C.h2();
            for (int s = n; s <= 3; ++s) EXPECT_EQ(c.block(s).a, C.identity().scaled(v).block(s).a) << r << n << s;
        }
        EXPECT_TRUE((C.boson_bar(1) * C.boson_bar(2) - C.boson_bar(2) * C.boson_bar(1)).block(3).is_zero());
    }
}

TEST(Vertex, AbarCoefficients) {
    ClassicalModule<RatF> T(1), S(1, 1);
    Monomial m = Monomial::var(gen::m);
    RPartition e(1);
    EXPECT_EQ(abar_matrix(T, S, m, e, e), RatF(1));
    // <0| Abar |(1)> = -(ubar - ubar' - hbar + mbar)/(hbar1 hbar2)
    RatF h1 = sym(gen::q1), h2 = sym(gen::q2);
    RatF want = -(sym(gen::u1) - sym(gen::up1) - h1 - h2 + sym(gen::m)) / (h1 * h2);
    EXPECT_EQ(abar_matrix(T, S, m, e, one_box()), want);
    EXPECT_EQ(abar_matrix(T, S, m, one_box(), e), sym(gen::up1) - sym(gen::m) - sym(gen::u1));
}

TEST(Limit, Bridges) {
    for (int r = 1; r <= 2; ++r) {
        Report rep = check_classical_limit(opts(r, 2));
        EXPECT_TRUE(rep.pass) << rep.to_json().dump();
        // ybar held fixed across the blocks (dropping D_x) does not give the leading order
        EXPECT_FALSE(rep.info["literal_form"].get<bool>());
    }
    EXPECT_TRUE(check_classical_limit(opts(2, 2, 991), 3).pass);
}

TEST(Locality, LimitForm) {
    EXPECT_TRUE(check_locality(opts(1, 3), 1).pass);
    for (int i = 0; i <= 2; ++i) EXPECT_TRUE(check_locality(opts(2, 2), i).pass) << i;
    EXPECT_TRUE(check_locality(opts(2, 2, 77), 2).pass);
}

TEST(Locality, LiteralFormAndWrongTailFail) {
    EXPECT_TRUE(check_locality(opts(2, 1), 0, ClassicalForm::literal).pass);
    EXPECT_FALSE(check_locality(opts(2, 1), 1, ClassicalForm::literal).pass);
    EXPECT_FALSE(check_locality(opts(2, 1), 2, ClassicalForm::literal).pass);
    EXPECT_FALSE(check_locality(opts(1, 2), 1, ClassicalForm::limit, 0).pass);
}

TEST(Locality, ExactRankOne) {
    KOptions o = opts(1, 1);
    o.mode = Mode::exact;
    EXPECT_TRUE(check_locality(o, 1).pass);
    EXPECT_THROW(check_classical_limit(o), std::invalid_argument);
}
