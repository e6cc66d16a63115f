#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "dspace/ispace.hpp"

using namespace dspace;

static long long falling(int n, int m) {
    long long r = 1;
    for (int i = 0; i < m; ++i) r *= n - i;
    return r;
}

/* Free commutative monoid on one generator in charge 1: level m holds all
   subsets of {0..m-1}, morphisms push sets forward, multiplication is
   shifted union.  An honest commutative structure, independent of the box
   machinery. */
struct SubsetsFcp {
    ISpace S;
    FcpStruct F;
};

static SubsetsFcp subsets_fcp(std::shared_ptr<const InjCat> I, int dim_top) {
    SubsetsFcp R;
    int N = I->N;
    R.S.I = I;
    R.S.X.base = &I->cat;
    for (int m = 0; m <= N; ++m) R.S.X.ob.push_back(discrete_sset(1 << m, dim_top));
    for (int f = 0; f < (int)I->cat.mor.size(); ++f) {
        int m = I->cat.mor[f].src;
        SMap a;
        a.comp.resize(dim_top + 1);
        std::vector<int> tab(1 << m);
        for (int s = 0; s < (1 << m); ++s) {
            int t = 0;
            for (int i = 0; i < m; ++i)
                if (s >> i & 1) t |= 1 << I->vals[f][i];
            tab[s] = t;
        }
        for (int k = 0; k <= dim_top; ++k) a.comp[k] = tab;
        R.S.X.act.push_back(std::move(a));
    }
    R.S.validate();
    R.F.owner = &R.S;
    R.F.unit = 0;
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) {
            SMap mu;
            mu.comp.resize(dim_top + 1);
            std::vector<int> tab((1 << m) * (1 << n));
            for (int s = 0; s < (1 << m); ++s)
                for (int t = 0; t < (1 << n); ++t)
                    tab[prod_index(R.S.lv(n), 0, s, t)] = s | t << m;
            for (int k = 0; k <= dim_top; ++k) mu.comp[k] = tab;
            R.F.mu[{m, n}] = std::move(mu);
        }
    return R;
}

/* Injective words with shifted concatenation: associative and natural but
   genuinely non-commutative once both factors are nonempty. */
struct WordsFcp {
    ISpace S;
    FcpStruct F;
    std::vector<std::vector<std::vector<int>>> words; // per level
    std::vector<std::map<std::vector<int>, int>> index;
};

static void all_words(int m, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::vector<char> used(m, 0);
    std::function<void()> rec = [&] {
        out.push_back(cur);
        for (int v = 0; v < m; ++v)
            if (!used[v]) {
                used[v] = 1;
                cur.push_back(v);
                rec();
                cur.pop_back();
                used[v] = 0;
            }
    };
    rec();
    std::sort(out.begin(), out.end());
}

static WordsFcp words_fcp(std::shared_ptr<const InjCat> I, int dim_top) {
    WordsFcp R;
    int N = I->N;
    R.S.I = I;
    R.S.X.base = &I->cat;
    R.words.resize(N + 1);
    R.index.resize(N + 1);
    for (int m = 0; m <= N; ++m) {
        all_words(m, R.words[m]);
        for (int i = 0; i < (int)R.words[m].size(); ++i) R.index[m][R.words[m][i]] = i;
        R.S.X.ob.push_back(discrete_sset((int)R.words[m].size(), dim_top));
    }
    for (int f = 0; f < (int)I->cat.mor.size(); ++f) {
        int m = I->cat.mor[f].src, n = I->cat.mor[f].dst;
        SMap a;
        a.comp.resize(dim_top + 1);
        std::vector<int> tab(R.words[m].size());
        for (int i = 0; i < (int)R.words[m].size(); ++i) {
            std::vector<int> w = R.words[m][i];
            for (int& v : w) v = I->vals[f][v];
            tab[i] = R.index[n].at(w);
        }
        for (int k = 0; k <= dim_top; ++k) a.comp[k] = tab;
        R.S.X.act.push_back(std::move(a));
    }
    R.S.validate();
    R.F.owner = &R.S;
    R.F.unit = 0; // the empty word sorts first
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) {
            SMap mu;
            mu.comp.resize(dim_top + 1);
            std::vector<int> tab(R.words[m].size() * R.words[n].size());
            for (int i = 0; i < (int)R.words[m].size(); ++i)
                for (int j = 0; j < (int)R.words[n].size(); ++j) {
                    std::vector<int> w = R.words[m][i];
                    for (int v : R.words[n][j]) w.push_back(m + v);
                    tab[prod_index(R.S.lv(n), 0, i, j)] = R.index[m + n].at(w);
                }
            for (int k = 0; k <= dim_top; ++k) mu.comp[k] = tab;
            R.F.mu[{m, n}] = std::move(mu);
        }
    return R;
}

/* Two vertices, two nondegenerate edges forming a loop. */
static FromCells two_gon(int dim_top) {
    PresentedSSet P;
    P.dim_top = dim_top;
    P.cells.resize(dim_top + 1);
    P.cells[0] = {{}, {}};
    SymCell va{0, 0, {0}}, vb{0, 1, {0}};
    P.cells[1] = {{vb, va}, {va, vb}}; // e0 : a -> b, e1 : b -> a
    return sset_from_cells(P);
}

TEST_CASE("injection category: hom sizes and symmetric groups") {
    auto I = inj_cat(4);
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) {
            long long want = m > n ? 0 : falling(n, m);
            CHECK((long long)I->homs(m, n).size() == want);
        }
    // endomorphisms form the symmetric group
    for (int n = 0; n <= 4; ++n) {
        const auto& e = I->homs(n, n);
        for (int f : e)
            for (int g : e) CHECK(I->cat.comp[g][f] >= 0);
        CHECK(I->cat.mor[I->cat.idm[n]].src == n);
    }
    // building blocks
    CHECK(I->vals[I->incl(2, 4)] == std::vector<int>{0, 1});
    CHECK(I->vals[I->transposition(3, 1)] == std::vector<int>{0, 2, 1});
    int b = I->block(I->incl(1, 2), I->transposition(2, 0));
    CHECK(I->vals[b] == std::vector<int>{0, 3, 2});
    Perm p{2, 0, 1};
    CHECK(I->vals[I->perm(3, p)] == p);
    CHECK_THROWS_AS(I->homs(2, 5), ObjectOutOfRange);
}

TEST_CASE("free spaces: cells and the adjunction audit") {
    auto I = inj_cat(3);
    FinSSet pt = sset_point(3);
    ISpace F2 = free_ispace(I, 2, pt);
    CHECK(F2.lv(3).card[0] == 6);
    CHECK(F2.lv(2).card[0] == 2);
    CHECK(F2.lv(1).card[0] == 0);
    CHECK(F2.lv(0).card[0] == 0);
    ISpace F0 = free_ispace(I, 0, pt);
    for (int n = 0; n <= 3; ++n) CHECK(F0.lv(n).card[0] == 1);
    CHECK_THROWS_AS(free_ispace(I, 4, pt), ObjectOutOfRange);

    ISpace C = constant_ispace(I, circle(3).s);
    FreeAudit a = free_adjunction_audit(C, 1, sset_point(3));
    CHECK(a.hom_right == 1);
    CHECK(a.bijective);
    FreeAudit b = free_adjunction_audit(C, 1, circle(3).s);
    CHECK(b.hom_right == 2); // collapse and identity
    CHECK(b.bijective);
    FreeAudit c = free_adjunction_audit(C, 0, discrete_sset(2, 3));
    CHECK(c.hom_right == 1);
    CHECK(c.bijective);
}

TEST_CASE("box product agrees with the pointwise colimit") {
    auto I = inj_cat(3);
    FinSSet pt = sset_point(2);
    ISpace F1 = free_ispace(I, 1, pt);
    ISpace F1s = free_ispace(I, 1, discrete_sset(2, 2));
    ISpace F2 = free_ispace(I, 2, pt);
    ISpace C = constant_ispace(I, circle(2).s);
    CHECK(box_oracle_audit(F1, F1));
    CHECK(box_oracle_audit(F1s, F2));
    CHECK(box_oracle_audit(C, F1));
    // charge-by-charge sizes of F1 box F1 match the two-generator free space
    ISpace B = box(F1, F1);
    CHECK(B.lv(2).card[0] == 2);
    CHECK(B.lv(3).card[0] == 6);
    CHECK(B.lv(1).card[0] == 0);
}

TEST_CASE("box of free points is free") {
    auto I = inj_cat(3);
    CHECK(box_free_point_audit(I, 0, 0, 2));
    CHECK(box_free_point_audit(I, 0, 1, 2));
    CHECK(box_free_point_audit(I, 1, 1, 2));
    CHECK(box_free_point_audit(I, 1, 2, 2));
    CHECK_THROWS_AS(box_free_point_audit(I, 2, 2, 2), ObjectOutOfRange);
}

TEST_CASE("box symmetry and associativity") {
    auto I = inj_cat(3);
    FinSSet pt = sset_point(2);
    ISpace F1 = free_ispace(I, 1, pt);
    ISpace F2 = free_ispace(I, 2, pt);
    ISpace S0 = constant_ispace(I, discrete_sset(2, 2));
    CHECK(box_symmetry_audit(F1, F2));
    CHECK(box_symmetry_audit(S0, F1));
    CHECK(box_assoc_audit(F1, F1, F1));
    ISpace F0 = free_ispace(I, 0, pt);
    CHECK(box_assoc_audit(F0, F1, F2));
}

TEST_CASE("random pairs agree with the oracle") {
    auto I = inj_cat(3);
    for (unsigned seed = 1; seed <= 4; ++seed) {
        std::mt19937 rng(seed);
        ISpace X = random_ispace(I, rng, 2);
        ISpace Y = random_ispace(I, rng, 2);
        CAPTURE(seed);
        CHECK(box_oracle_audit(X, Y));
    }
}

TEST_CASE("fcp laws: positive structures and a commutativity failure") {
    auto I = inj_cat(3);
    // terminal object carries the trivial structure
    ISpace T = terminal_ispace(I, 2);
    FcpStruct Ft;
    Ft.owner = &T;
    Ft.unit = 0;
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; m + n <= 3; ++n) {
            SMap mu;
            mu.comp.assign(3, std::vector<int>(1, 0));
            Ft.mu[{m, n}] = std::move(mu);
        }
    CHECK(check_fcp(Ft).ok);

    SubsetsFcp sub = subsets_fcp(I, 2);
    FcpReport rs = check_fcp(sub.F);
    CHECK(rs.ok);

    WordsFcp wd = words_fcp(I, 2);
    FcpReport rw = check_fcp(wd.F);
    CHECK_FALSE(rw.ok);
    CHECK(rw.law == "commutativity");
    CHECK_THROWS_AS(check_fcp(wd.F, true), LawViolation);

    // a missing multiplication is flagged outright
    FcpStruct broken = sub.F;
    broken.mu.erase({1, 2});
    CHECK_THROWS_AS(check_fcp(broken), LawViolation);
}

TEST_CASE("stable equivalence surrogate") {
    auto I = inj_cat(3);
    FinSSet pt = sset_point(3);
    ISpace F1 = free_ispace(I, 1, pt);
    ISpace T = terminal_ispace(I, 3);

    ISpaceMap coll;
    coll.src = &F1;
    coll.dst = &T;
    for (int n = 0; n <= 3; ++n) {
        SMap f;
        f.comp.assign(4, {});
        for (int k = 0; k <= 3; ++k) f.comp[k].assign(F1.lv(n).card[k], 0);
        coll.level.push_back(std::move(f));
    }
    StableReport r = stable_equiv_surrogate(coll, 3, 1);
    CHECK(r.v == Verdict::Pass);
    CHECK(r.pi0_ok);

    // a degree-two covering map fails on first homology
    FromCells gon = two_gon(3);
    const FinSSet& G = gon.s;
    PSSet Cp = circle(3);
    ISpace GG = constant_ispace(I, G), CC = constant_ispace(I, Cp.s);
    std::vector<std::map<int, int>> nd(4);
    nd[0] = {{gon.core_cell[0][0], 0}, {gon.core_cell[0][1], 0}};
    nd[1] = {{gon.core_cell[1][0], 1}, {gon.core_cell[1][1], 1}};
    SMap dbl = extend_map_from_nondeg(G, Cp.s, nd);
    ISpaceMap dmap;
    dmap.src = &GG;
    dmap.dst = &CC;
    for (int n = 0; n <= 3; ++n) dmap.level.push_back(dbl);
    StableReport rd = stable_equiv_surrogate(dmap, 3, 1);
    CHECK(rd.v == Verdict::Fail);
    CHECK(rd.pi0_ok);
    CHECK_FALSE(rd.h_ok[1]);

    // shallow level data is reported, not silently truncated
    ISpace shallow = terminal_ispace(I, 2);
    ISpaceMap ids;
    ids.src = &shallow;
    ids.dst = &shallow;
    for (int n = 0; n <= 3; ++n) ids.level.push_back(smap_id(shallow.lv(n)));
    CHECK(stable_equiv_surrogate(ids, 3, 1).v == Verdict::OutOfRange);
    CHECK_THROWS_AS(stable_equiv_surrogate(ids, 3, 2), TruncationTooSmall);
}

TEST_CASE("fibrancy surrogate") {
    auto I = inj_cat(3);
    ISpace C = constant_ispace(I, circle(2).s);
    CHECK(fibrant_surrogate(C, 0));
    CHECK(fibrant_surrogate(C, 0, true));
    ISpace F1 = free_ispace(I, 1, sset_point(2));
    CHECK_FALSE(fibrant_surrogate(F1, 0));
    CHECK_FALSE(fibrant_surrogate(F1, 0, true));
}

TEST_CASE("products, coproducts, and level bookkeeping") {
    auto I = inj_cat(2);
    ISpace C = constant_ispace(I, circle(2).s);
    ISpace T = terminal_ispace(I, 2);
    ISpace P = ispace_product(C, T);
    for (int n = 0; n <= 2; ++n)
        for (int k = 0; k <= 2; ++k) CHECK(P.lv(n).card[k] == C.lv(n).card[k]);
    ISpace D = ispace_coproduct(C, C);
    for (int k = 0; k <= 2; ++k) CHECK(D.lv(1).card[k] == 2 * C.lv(1).card[k]);

    auto J = inj_cat(3);
    ISpace X = terminal_ispace(J, 2);
    CHECK_THROWS_AS(box(C, X), MismatchedBase);

    // naturality violations in level maps are rejected
    ISpace F1 = free_ispace(J, 1, sset_point(2));
    ISpaceMap bad;
    bad.src = &F1;
    bad.dst = &F1;
    for (int n = 0; n <= 3; ++n) bad.level.push_back(smap_id(F1.lv(n)));
    // swap the two points of level 2 without swapping anywhere else
    bad.level[2].comp[0] = {1, 0};
    bad.level[2].comp[1] = {1, 0};
    bad.level[2].comp[2] = {1, 0};
    CHECK_THROWS_AS(bad.validate(), LawViolation);
}
