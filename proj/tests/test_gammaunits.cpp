#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "dspace/dkspec.hpp"
#include "dspace/errors.hpp"
#include "dspace/gammaunits.hpp"
#include "dspace/ispace.hpp"

using namespace dspace;

/* shared expensive fixtures; the rings outlive the spectra that point at them */
static const SymRingSpectrum& em_z2() {
    static FinCommRing R = ring_zmod(2);
    static SymRingSpectrum E = em_spectrum(R, 2);
    return E;
}
static const SymRingSpectrum& em_z4() {
    static FinCommRing R = ring_zmod(4);
    static SymRingSpectrum E = em_spectrum(R, 3);
    return E;
}
static const SymRingSpectrum& em_z6() {
    static FinCommRing R = ring_zmod(6);
    static SymRingSpectrum E = em_spectrum(R, 2);
    return E;
}
static const SymRingSpectrum& em_f5() {
    static FinCommRing R = ring_gf(5, 1);
    static SymRingSpectrum E = em_spectrum(R, 2);
    return E;
}
static const SymRingSpectrum& em_d() {
    static FinCommRing R = ring_dual_numbers_f2();
    static SymRingSpectrum E = em_spectrum(R, 2);
    return E;
}

static const UnitsFcp& gl1_z4() {
    static UnitsFcp U = gl1_bullet(em_z4(), 3);
    return U;
}
static const UnitsFcp& gl1_z2() {
    static UnitsFcp U = gl1_bullet(em_z2(), 3);
    return U;
}
static const UnitsFcp& gl1_f5() {
    static UnitsFcp U = gl1_bullet(em_f5(), 3);
    return U;
}
static const GammaSpace& gam_z4() {
    static GammaSpace G = gamma_construct(gl1_z4().fcp, 3, 3, gl1_z4().space);
    return G;
}
static const GammaSpace& gam_z2() {
    static GammaSpace G = gamma_construct(gl1_z2().fcp, 3, 3, gl1_z2().space);
    return G;
}
static const GammaSpace& gam_f5() {
    static GammaSpace G = gamma_construct(gl1_f5().fcp, 2, 3, gl1_f5().space);
    return G;
}

static FinMonoid ring_mult_monoid(const FinCommRing& R) {
    FinMonoid M;
    M.n = R.n;
    M.unit = R.one;
    M.mult = R.mul;
    M.commutative = true;
    return M;
}

/* independent oracle: the Grothendieck group as the abelian group presented by
   one generator per element and relations e_a + e_b - e_{ab}, e_unit */
static FinAb groth_presentation(const FinMonoid& M) {
    Mat rels(M.n, M.n * M.n + 1);
    int c = 0;
    for (int a = 0; a < M.n; ++a)
        for (int b = 0; b < M.n; ++b, ++c) {
            rels.at(a, c) += 1;
            rels.at(b, c) += 1;
            rels.at(M.mult[a][b], c) -= 1;
        }
    rels.at(M.unit, c) = 1;
    return finab_from_presentation(M.n, rels);
}

TEST_CASE("finite monoids: laws, units, group structure") {
    FinCommRing z6 = ring_zmod(6);
    FinMonoid M6 = ring_mult_monoid(z6);
    M6.validate();
    CHECK(M6.units() == std::vector<int>{1, 5});
    CHECK_FALSE(M6.is_group());
    CHECK_THROWS_AS(M6.group_structure(), LawViolation);

    FinMonoid U6;
    U6.n = 2;
    U6.unit = 0;
    U6.mult = {{0, 1}, {1, 0}};
    U6.commutative = true;
    U6.validate();
    CHECK(U6.is_group());
    CHECK(U6.group_structure().inv == std::vector<i64>{2});

    FinMonoid K4; // Klein four-group
    K4.n = 4;
    K4.unit = 0;
    K4.mult = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    K4.commutative = true;
    K4.validate();
    CHECK(K4.is_group());
    CHECK(K4.group_structure().inv == std::vector<i64>{2, 2});

    FinMonoid C4; // cyclic of order 4
    C4.n = 4;
    C4.unit = 0;
    C4.mult = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
    C4.commutative = true;
    C4.validate();
    CHECK(C4.group_structure().inv == std::vector<i64>{4});

    FinMonoid bad = U6;
    bad.mult = {{0, 1}, {0, 0}}; // right unit law fails at 1
    CHECK_THROWS_AS(bad.validate(), LawViolation);

    FinMonoid nonassoc;
    nonassoc.n = 3;
    nonassoc.unit = 0;
    nonassoc.mult = {{0, 1, 2}, {1, 2, 2}, {2, 2, 1}};
    CHECK_THROWS_AS(nonassoc.validate(), LawViolation);

    FinMonoid s3; // symmetric group on three letters
    auto P3 = all_perms(3);
    s3.n = 6;
    s3.unit = perm_index(perm_id(3));
    s3.mult.assign(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) s3.mult[a][b] = perm_index(perm_compose(P3[a], P3[b]));
    s3.commutative = true; // wrongly flagged
    CHECK_THROWS_AS(s3.validate(), LawViolation);
    s3.commutative = false;
    s3.validate();
    CHECK(s3.is_group());
    CHECK_THROWS_AS(s3.group_structure(), LawViolation); // not abelian
}

TEST_CASE("Grothendieck groups by congruence closure match the presentation oracle") {
    // multiplicative monoids of rings have an absorbing zero: trivial completion
    FinMonoid M4 = ring_mult_monoid(ring_zmod(4));
    CHECK(grothendieck_group(M4).trivial());
    CHECK(groth_presentation(M4).trivial());

    FinMonoid M6 = ring_mult_monoid(ring_zmod(6));
    CHECK(grothendieck_group(M6) == groth_presentation(M6));
    CHECK(grothendieck_group(M6).trivial());

    // saturating addition on {0,1,2}: not cancellative, trivial completion
    FinMonoid Sat;
    Sat.n = 3;
    Sat.unit = 0;
    Sat.mult = {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    Sat.commutative = true;
    Sat.validate();
    CHECK(grothendieck_group(Sat).trivial());
    CHECK(groth_presentation(Sat).trivial());

    // groups complete to themselves
    FinMonoid Z2;
    Z2.n = 2;
    Z2.unit = 0;
    Z2.mult = {{0, 1}, {1, 0}};
    Z2.commutative = true;
    CHECK(grothendieck_group(Z2).inv == std::vector<i64>{2});
    CHECK(groth_presentation(Z2).inv == std::vector<i64>{2});

    FinMonoid C4;
    C4.n = 4;
    C4.unit = 0;
    C4.mult = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
    C4.commutative = true;
    CHECK(grothendieck_group(C4) == groth_presentation(C4));
    CHECK(grothendieck_group(C4).inv == std::vector<i64>{4});

    FinMonoid One;
    One.n = 1;
    One.unit = 0;
    One.mult = {{0}};
    One.commutative = true;
    CHECK(grothendieck_group(One).trivial());
}

TEST_CASE("pi0 of the loop multiplication recovers the multiplicative monoid of the ring") {
    struct Row {
        const SymRingSpectrum& E;
        int dim;
    };
    const Row rows[] = {{em_z2(), 2}, {em_z4(), 2}, {em_z6(), 2}, {em_f5(), 2}, {em_d(), 2}};
    for (auto& row : rows) {
        const FinCommRing& R = *row.E.E.R;
        OmegaBullet O = omega_bullet(row.E, row.dim);
        Pi0Monoid P = pi0_monoid(O.fcp);
        P.m.validate();
        CHECK(P.stable_from == 0);
        CHECK(P.m.n == R.n);
        CHECK(P.m.unit == R.one);
        CHECK(P.m.commutative);
        CHECK(P.m.mult == R.mul); // level-0 cells are literally ring elements
        CHECK(P.m.units() == R.units());
        CHECK((int)P.level.size() == row.E.E.N + 1);
        for (auto& lc : P.level_class) CHECK((int)lc.size() == R.n);
    }
}

TEST_CASE("pi0 stabilization failure is detected") {
    // levels are growing discrete sets, products add indices: no stable level
    auto I2 = inj_cat(2);
    ISpace X;
    X.I = I2;
    X.X.base = &I2->cat;
    X.X.contra = false;
    for (int n = 0; n <= 2; ++n) X.X.ob.push_back(discrete_sset(n + 1, 2));
    X.X.act.resize(I2->cat.mor.size());
    for (int f = 0; f < (int)I2->cat.mor.size(); ++f) {
        int m = I2->cat.mor[f].src;
        SMap s;
        s.comp.assign(3, std::vector<int>(m + 1));
        for (int k = 0; k <= 2; ++k)
            for (int x = 0; x <= m; ++x) s.comp[k][x] = x;
        X.X.act[f] = s;
    }
    X.validate();
    FcpStruct S;
    S.owner = &X;
    S.unit = 0;
    S.commutative = true;
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; m + n <= 2; ++n) {
            SMap mu;
            mu.comp.assign(3, std::vector<int>((m + 1) * (n + 1)));
            for (int k = 0; k <= 2; ++k)
                for (int a = 0; a <= m; ++a)
                    for (int b = 0; b <= n; ++b) mu.comp[k][a * (n + 1) + b] = a + b;
            S.mu[{m, n}] = mu;
        }
    check_fcp(S, true);
    CHECK_THROWS_AS(pi0_monoid(S), NotStabilized);
}

TEST_CASE("unit components: kept cells, restricted laws, the unit group") {
    struct Row {
        const SymRingSpectrum& E;
        int dim;
        std::vector<i64> group;
    };
    const Row rows[] = {{em_z2(), 3, {}},
                        {em_z4(), 3, {2}},
                        {em_z6(), 3, {2}},
                        {em_f5(), 3, {4}},
                        {em_d(), 3, {2}}};
    for (auto& row : rows) {
        const FinCommRing& R = *row.E.E.R;
        std::vector<int> u = R.units();
        OmegaBullet O = omega_bullet(row.E, row.dim);
        UnitsFcp U = units_fcp(O.fcp, O.space);
        for (int n = 0; n <= row.E.E.N; ++n)
            for (int k = 0; k <= row.dim; ++k) CHECK(U.space->lv(n).card[k] == (int)u.size());
        U.space->validate();
        U.incl.validate();
        CHECK(check_fcp(U.fcp).ok);
        U.monoid.validate();
        CHECK(U.monoid.is_group());
        CHECK(U.monoid.group_structure().inv == row.group);
        CHECK(grothendieck_group(U.monoid).inv == row.group);
        // element i is the i-th unit in ascending ring order
        for (int i = 0; i < (int)u.size(); ++i)
            for (int j = 0; j < (int)u.size(); ++j) {
                int prod = R.m(u[i], u[j]);
                int pos = (int)(std::find(u.begin(), u.end(), prod) - u.begin());
                CHECK(U.monoid.mult[i][j] == pos);
            }
        CHECK(U.pi0.m.n == (int)u.size());
        if (u.size() < (size_t)R.n) CHECK_FALSE(pi0_monoid(O.fcp).m.is_group());
    }
}

TEST_CASE("gl1 of a ring spectrum equals units of its loop multiplication") {
    const UnitsFcp& U = gl1_z4();
    CHECK(U.space->lv(0).card[0] == 2);
    CHECK(U.monoid.group_structure().inv == std::vector<i64>{2});
    CHECK(U.parent != nullptr);
    CHECK(U.incl.dst == U.parent.get());
    U.incl.validate();

    const UnitsFcp& U5 = gl1_f5();
    CHECK(U5.monoid.group_structure().inv == std::vector<i64>{4});
    for (int n = 0; n <= 2; ++n) CHECK(U5.space->lv(n).card[0] == 4);
}

TEST_CASE("partition categories: object and morphism counts, functor laws") {
    auto I3 = inj_cat(3);
    ICatN C0 = icat_n(I3, 0);
    CHECK(C0.cat.nobj == 1);
    CHECK(C0.cat.mor.size() == 1);
    C0.validate();

    ICatN C1 = icat_n(I3, 1);
    CHECK(C1.cat.nobj == 4);
    CHECK(C1.cat.mor.size() == 24);
    C1.validate();
    // one color: the injection category itself
    CHECK(C1.cat.mor.size() == I3->cat.mor.size());

    ICatN C2 = icat_n(I3, 2);
    CHECK(C2.cat.nobj == 15);
    CHECK(C2.cat.mor.size() == 153);
    C2.validate();

    ICatN C3 = icat_n(I3, 3);
    CHECK(C3.cat.nobj == 40);
    CHECK(C3.cat.mor.size() == 484);
    C3.validate();

    ICatN C3s = icat_n(inj_cat(2), 3);
    CHECK(C3s.cat.nobj == 13);
    C3s.validate();

    // value of a word on subsets of colors
    int w = C2.word_id.at({1, 2, 2, 1}); // blocks (color 1, size 2)(color 2, size 1)
    CHECK(C2.theta_size(w, 0b01) == 2);
    CHECK(C2.theta_size(w, 0b10) == 1);
    CHECK(C2.theta_size(w, 0b11) == 3);
    auto blocks = C2.theta_blocks(w, 0b11);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0] == std::array<int, 3>{1, 2, 0});
    CHECK(blocks[1] == std::array<int, 3>{2, 1, 2});
    auto b2 = C2.theta_blocks(w, 0b10);
    REQUIRE(b2.size() == 1);
    CHECK(b2[0] == std::array<int, 3>{2, 1, 0});

    // the initial object is the empty word
    int e = C2.word_id.at({});
    for (int o = 0; o < C2.cat.nobj; ++o) {
        int cnt = 0;
        for (int f : C2.cat.out[e])
            if (C2.cat.mor[f].dst == o) ++cnt;
        CHECK(cnt == 1);
    }
}

TEST_CASE("based maps: enumeration, composition") {
    CHECK(based_maps(0, 3).size() == 1);
    CHECK(based_maps(2, 1).size() == 4);
    CHECK(based_maps(3, 2).size() == 27);
    BasedMap fold{2, 1, {1, 1}};
    BasedMap d1{3, 2, {0, 1, 2}};
    BasedMap c = based_compose(fold, BasedMap{3, 2, {1, 2, 2}});
    CHECK(c.m == 3);
    CHECK(c.n == 1);
    CHECK(c.img == std::vector<int>{1, 1, 1});
    BasedMap cz = based_compose(fold, d1);
    CHECK(cz.img == std::vector<int>{0, 1, 1});
    CHECK(based_identity(2).img == std::vector<int>{1, 2});
}

TEST_CASE("gamma of the one-point multiplicative diagram is the nerve of the partition category") {
    auto I2 = inj_cat(2);
    ISpace T = terminal_ispace(I2, 3);
    FcpStruct S;
    S.owner = &T;
    S.unit = 0;
    S.commutative = true;
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; m + n <= 2; ++n) {
            SMap mu;
            mu.comp.assign(4, std::vector<int>(1, 0));
            S.mu[{m, n}] = mu;
        }
    check_fcp(S, true);

    GammaSpace G = gamma_construct(S, 2, 3);
    CHECK(G.n_max == 2);
    CHECK(G.N == 2);
    CHECK(G.D == 3);
    for (int n = 0; n <= 2; ++n) {
        FinSSet Nv = nerve(G.C[n].cat, 3);
        CHECK(G.L[n].val.card == Nv.card);
        CHECK(G.L[n].val.face == Nv.face);
        CHECK(G.L[n].val.degen == Nv.degen);
    }
    for (int k = 0; k <= 3; ++k) CHECK(G.L[0].val.card[k] == 1);

    // partition categories have an initial object: levels are acyclic
    auto H1 = sset_homology(G.L[1].val, 1);
    CHECK(H1[0].inv == std::vector<i64>{0});
    CHECK(H1[1].trivial());
    auto H2 = sset_homology(G.L[2].val, 1);
    CHECK(H2[0].inv == std::vector<i64>{0});
    CHECK(H2[1].trivial());

    SMap idm = G.expand(based_identity(2));
    CHECK(smap_equal(idm, smap_id(G.L[2].val)));
    SMap fold = G.expand(BasedMap{2, 1, {1, 1}});
    validate_smap(G.L[2].val, G.L[1].val, fold);
}

TEST_CASE("gamma materialization agrees with the streaming bar construction") {
    const GammaSpace& G = gam_z4();
    for (int n = 1; n <= 2; ++n) {
        Diagram Xd;
        Xd.base = &G.C[n].cat;
        Xd.contra = false;
        Xd.ob = G.L[n].fiber;
        Xd.act = G.L[n].fact;
        Xd.validate();
        BarComplex B = hocolim(G.C[n].cat, Xd, 3);
        bar_identity_check(B, 3, true);
        BarMaterialized M = bar_materialize(B);
        CHECK(M.s.card == G.L[n].val.card);
        CHECK(M.s.face == G.L[n].val.face);
        CHECK(M.s.degen == G.L[n].val.degen);
    }
}

TEST_CASE("gamma levels validate and have exact component counts") {
    const GammaSpace& G = gam_z4();
    const int cards[4] = {1, 2, 4, 8};
    for (int n = 0; n <= 3; ++n) {
        G.L[n].val.validate();
        CHECK(pi0(G.L[n].val).count == cards[n]);
    }
    // frozen chain counts at N = 3 (identities included)
    CHECK(G.L[1].chain[0].size() == 4);
    CHECK(G.L[1].chain[1].size() == 24);
    CHECK(G.L[1].chain[2].size() == 152);
    CHECK(G.L[1].chain[3].size() == 940);
    CHECK(G.L[3].chain[0].size() == 40);
    CHECK(G.L[3].chain[3].size() == 24592);

    const GammaSpace& Gz = gam_z2();
    for (int n = 0; n <= 3; ++n) CHECK(pi0(Gz.L[n].val).count == 1);
}

TEST_CASE("structure maps compose: expansion, functoriality, the twist") {
    const GammaSpace& G = gam_z4();
    CHECK(G.maps.size() == 144); // all based maps between 0..3

    BasedMap fold{2, 1, {1, 1}};
    BasedMap a32{3, 2, {1, 2, 2}};
    SMap f1 = G.expand(fold);
    SMap f2 = G.expand(a32);
    validate_smap(G.L[2].val, G.L[1].val, f1);
    validate_smap(G.L[3].val, G.L[2].val, f2);
    CHECK(smap_equal(smap_compose(f1, f2), G.expand(based_compose(fold, a32))));

    BasedMap swap{2, 2, {2, 1}};
    SMap fs = G.expand(swap);
    CHECK(smap_bijective(G.L[2].val, G.L[2].val, fs));
    CHECK(smap_equal(smap_compose(fs, fs), smap_id(G.L[2].val)));

    // the fold map on a reversed word multiplies through the twist
    const ICatN& C2 = G.C[2];
    int w = C2.word_id.at({2, 1, 1, 1}); // (color 2, size 1)(color 1, size 1)
    int ch = G.L[2].chain_id[0].at({w});
    int wt = G.C[1].word_id.at({1, 2});
    int cht = G.L[1].chain_id[0].at({wt});
    const SMap& mu11 = gl1_z4().fcp.mu.at({1, 1});
    const FinSSet& X1 = gl1_z4().space->lv(1);
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2) {
            int src = G.L[2].cell(0, ch, prod_index(X1, 0, x1, x2));
            int expect = G.L[1].cell(0, cht, mu11.comp[0][prod_index(X1, 0, x2, x1)]);
            CHECK(f1.comp[0][src] == expect);
        }

    FcpStruct bad = gl1_z4().fcp;
    bad.commutative = false;
    CHECK_THROWS_AS(gamma_construct(bad, 1, 2, gl1_z4().space), NotCommutative);
}

TEST_CASE("Segal maps: component bijections, homology isomorphisms, comma certificates") {
    SegalReport rep = segal_check(gam_z4(), 1);
    CHECK(rep.ok());
    CHECK(rep.pi0_exact);
    CHECK(rep.pi0_bijective[2]);
    CHECK(rep.pi0_bijective[3]);
    CHECK(rep.h_iso[2][1]);
    CHECK(rep.h_iso[3][1]);
    CHECK(rep.comma_ok);
    CHECK(rep.comma_checked == 30); // tuples with sum <= 3: 10 at n=2, 20 at n=3

    SegalReport rz = segal_check(gam_z2(), 1);
    CHECK(rz.ok());
    CHECK(rz.comma_checked == 16); // sum <= 2: 6 at n=2, 10 at n=3

    SegalReport r5 = segal_check(gam_f5(), 1);
    CHECK(r5.ok());
    CHECK(r5.pi0_bijective[2]);
    CHECK(pi0(gam_f5().L[2].val).count == 16);

    CHECK_THROWS_AS(segal_check(gam_z4(), 2), TruncationTooSmall);
}

TEST_CASE("group completion of level-1 components") {
    GroupCompletion gc = group_completion_pi0(gam_z4());
    gc.m.validate();
    CHECK(gc.m.n == 2);
    CHECK(gc.grouplike);
    CHECK(gc.group.inv == std::vector<i64>{2});
    CHECK(gc.group == grothendieck_group(gl1_z4().monoid));

    GroupCompletion g5 = group_completion_pi0(gam_f5());
    CHECK(g5.m.n == 4);
    CHECK(g5.grouplike);
    CHECK(g5.group.inv == std::vector<i64>{4});

    GroupCompletion gz = group_completion_pi0(gam_z2());
    CHECK(gz.m.n == 1);
    CHECK(gz.group.trivial());
}

TEST_CASE("the delooping: H1 equals the bar H1 of the unit group") {
    FinSSet dl = segal_machine_delooping(gam_z4(), 3);
    dl.validate();
    CHECK(dl.card[0] == 1);
    auto H = sset_homology(dl, 1);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].inv == std::vector<i64>{2});

    // independent path: the nerve of the unit group as a one-object category
    FinCat BZ2 = monoid_cat({{0, 1}, {1, 0}}, 0);
    auto HB = sset_homology(nerve(BZ2, 3), 1);
    CHECK(HB[1] == H[1]);

    FinSSet dlz = segal_machine_delooping(gam_z2(), 3);
    dlz.validate();
    auto Hz = sset_homology(dlz, 1);
    CHECK(Hz[1].trivial());

    CHECK_THROWS_AS(segal_machine_delooping(gam_f5(), 3), InsufficientGammaRange);
    GammaSpace shallow = gamma_construct(gl1_z4().fcp, 3, 2, gl1_z4().space);
    CHECK_THROWS_AS(segal_machine_delooping(shallow, 3), TruncationTooSmall);
}

TEST_CASE("construction gates: truncation and size budget") {
    UnitsFcp U = gl1_bullet(em_z2(), 2);
    CHECK_THROWS_AS(gamma_construct(U.fcp, 1, 3, U.space), TruncationTooSmall);
    CHECK_THROWS_AS(gamma_construct(gl1_z4().fcp, 3, 3, gl1_z4().space, 1000),
                    SizeBudgetExceeded);
}
