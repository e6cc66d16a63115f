#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "dspace/sset.hpp"

using namespace dspace;

/* Oracle: homology of an abstract simplicial complex on sorted vertex tuples,
   built straight from subset combinatorics (no simplicial-set machinery). */
static std::vector<FinAb> complex_oracle(int nverts, std::vector<std::vector<int>> tris, int kmax) {
    std::map<std::pair<int, int>, int> eidx;
    std::vector<std::pair<int, int>> edges;
    for (auto& t : tris)
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                auto e = std::make_pair(t[i], t[j]);
                if (!eidx.count(e)) {
                    eidx[e] = (int)edges.size();
                    edges.push_back(e);
                }
            }
    Mat d1(nverts, (int)edges.size());
    for (int j = 0; j < (int)edges.size(); ++j) {
        d1.at(edges[j].second, j) += 1; // d_0 = drop first vertex
        d1.at(edges[j].first, j) -= 1;  // d_1 = drop second
    }
    Mat d2((int)edges.size(), (int)tris.size());
    for (int j = 0; j < (int)tris.size(); ++j) {
        auto& t = tris[j];
        d2.at(eidx[{t[1], t[2]}], j) += 1;
        d2.at(eidx[{t[0], t[2]}], j) -= 1;
        d2.at(eidx[{t[0], t[1]}], j) += 1;
    }
    PresCx cx = PresCx::free_cx({nverts, (int)edges.size(), (int)tris.size(), 0},
                                {Mat(), d1, d2, Mat((int)tris.size(), 0)});
    return pres_homology(cx, kmax);
}

static PresentedSSet rp2_data() {
    std::vector<std::vector<int>> tris = {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
                                          {1, 2, 5}, {1, 3, 4}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5}};
    std::map<std::pair<int, int>, int> eidx;
    std::vector<std::pair<int, int>> edges;
    for (auto& t : tris)
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                auto e = std::make_pair(t[i], t[j]);
                if (!eidx.count(e)) {
                    eidx[e] = (int)edges.size();
                    edges.push_back(e);
                }
            }
    PresentedSSet P;
    P.dim_top = 3;
    P.cells.resize(3);
    P.cells[0].assign(6, {});
    for (auto& e : edges)
        P.cells[1].push_back({SymCell{0, e.second, {0}}, SymCell{0, e.first, {0}}});
    for (auto& t : tris)
        P.cells[2].push_back({SymCell{1, eidx[{t[1], t[2]}], {0, 1}},
                              SymCell{1, eidx[{t[0], t[2]}], {0, 1}},
                              SymCell{1, eidx[{t[0], t[1]}], {0, 1}}});
    return P;
}

TEST_CASE("standard simplices validate with the right cell counts") {
    FinSSet d2 = standard_simplex(2, 3);
    d2.validate();
    CHECK(d2.card[0] == 3);
    CHECK(d2.card[1] == 6);
    CHECK(d2.card[2] == 10);
    auto H = sset_homology(d2, 2);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].trivial());
    CHECK(H[2].trivial());
}

TEST_CASE("circle: cells, validation, homology") {
    PSSet c = circle(4);
    c.s.validate();
    for (int k = 0; k <= 4; ++k) CHECK(c.s.card[k] == k + 1);
    auto H = sset_homology(c.s, 1);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].inv == std::vector<i64>{0});
    CHECK_THROWS_AS((void)sset_homology(circle(1).s, 1), InsufficientDimension);
}

TEST_CASE("torus as a product of circles") {
    PSSet c = circle(4);
    FinSSet T = sset_product(c.s, c.s);
    T.validate();
    auto H = sset_homology(T, 2);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].inv == std::vector<i64>{0, 0});
    CHECK(H[2].inv == std::vector<i64>{0});
    auto H2 = sset_homology(T, 2, 2);
    CHECK(H2[0].inv == std::vector<i64>{2});
    CHECK(H2[1].inv == std::vector<i64>{2, 2});
    CHECK(H2[2].inv == std::vector<i64>{2});
    // boundary squares to zero on normalized chains
    ChainCx cx = chains(T, 3);
    CHECK(mat_is_zero(mat_mul(cx.bnd[1], cx.bnd[2])));
    CHECK(mat_is_zero(mat_mul(cx.bnd[2], cx.bnd[3])));
}

TEST_CASE("one-vertex torus from presented cells matches the product torus") {
    PresentedSSet P;
    P.dim_top = 3;
    P.cells.resize(3);
    P.cells[0].assign(1, {});
    SymCell v{0, 0, {0}};
    P.cells[1] = {{v, v}, {v, v}, {v, v}}; // loops a, b, c
    P.cells[2] = {{SymCell{1, 1, {0, 1}}, SymCell{1, 2, {0, 1}}, SymCell{1, 0, {0, 1}}},
                  {SymCell{1, 0, {0, 1}}, SymCell{1, 2, {0, 1}}, SymCell{1, 1, {0, 1}}}};
    FromCells F = sset_from_cells(P);
    auto H = sset_homology(F.s, 2);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].inv == std::vector<i64>{0, 0});
    CHECK(H[2].inv == std::vector<i64>{0});
    auto nd = F.s.nondeg_cells();
    CHECK((int)nd[0].size() == 1);
    CHECK((int)nd[1].size() == 3);
    CHECK((int)nd[2].size() == 2);
}

TEST_CASE("six-vertex projective plane vs independent complex oracle") {
    PresentedSSet P = rp2_data();
    FromCells F = sset_from_cells(P);
    auto H = sset_homology(F.s, 2);
    auto O = complex_oracle(6, {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
                                {1, 2, 5}, {1, 3, 4}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5}},
                            2);
    for (int k = 0; k <= 2; ++k) CHECK(H[k] == O[k]);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].inv == std::vector<i64>{2});
    CHECK(H[2].trivial());
    auto Hm = sset_homology(F.s, 2, 2);
    CHECK(Hm[0].inv == std::vector<i64>{2});
    CHECK(Hm[1].inv == std::vector<i64>{2});
    CHECK(Hm[2].inv == std::vector<i64>{2});
}

TEST_CASE("smash powers of the circle model spheres") {
    SphereModel s2 = sphere_model(2, 3);
    s2.s.s.validate();
    auto H = sset_reduced_homology(s2.s, 2);
    CHECK(H[0].trivial());
    CHECK(H[1].trivial());
    CHECK(H[2].inv == std::vector<i64>{0});
    ChainCx c2 = reduced_chains(s2.s, 3);
    CHECK(c2.rank[1] == 1);
    CHECK(c2.rank[2] == 2);

    SphereModel s3 = sphere_model(3, 4);
    s3.s.s.validate();
    ChainCx c3 = reduced_chains(s3.s, 4);
    CHECK(c3.rank[0] == 0);
    CHECK(c3.rank[1] == 1);
    CHECK(c3.rank[2] == 6);
    CHECK(c3.rank[3] == 6);
    auto H3 = sset_reduced_homology(s3.s, 3);
    CHECK(H3[0].trivial());
    CHECK(H3[1].trivial());
    CHECK(H3[2].trivial());
    CHECK(H3[3].inv == std::vector<i64>{0});
}

TEST_CASE("coordinate permutations act simplicially and functorially") {
    SphereModel s3 = sphere_model(3, 4);
    auto perms = all_perms(3);
    std::vector<SMap> acts;
    for (auto& p : perms) {
        SMap f = sphere_perm_action(s3, p);
        validate_smap(s3.s.s, s3.s.s, f);
        acts.push_back(f);
    }
    CHECK(smap_equal(acts[0], smap_id(s3.s.s)));
    for (size_t a = 0; a < perms.size(); ++a)
        for (size_t b = 0; b < perms.size(); ++b) {
            Perm pq = perm_compose(perms[a], perms[b]);
            CHECK(smap_equal(acts[perm_index(pq)], smap_compose(acts[a], acts[b])));
        }
    // a transposition reverses the top class of the 2-sphere
    SphereModel s2 = sphere_model(2, 3);
    SMap tau = sphere_perm_action(s2, Perm{1, 0});
    ChainCx c = reduced_chains(s2.s, 3);
    auto M = chain_map(c, c, tau);
    Mat z = kernel_basis(c.bnd[2]);
    REQUIRE(z.c == 1);
    Mat img = mat_mul(M[2], z);
    CHECK(img == mat_sub(Mat(z.r, 1), z)); // image equals -z
}

TEST_CASE("concatenation identifies smash(S^m, S^n) with S^{m+n}") {
    SphereModel s1 = sphere_model(1, 4), s2 = sphere_model(2, 4), s3 = sphere_model(3, 4);
    {
        SphereConcat c = sphere_concat(s1, s1, s2);
        validate_smap(c.sm.s.s, s2.s.s, c.iso);
        CHECK(smap_bijective(c.sm.s.s, s2.s.s, c.iso));
    }
    {
        SphereConcat c = sphere_concat(s1, s2, s3);
        validate_smap(c.sm.s.s, s3.s.s, c.iso);
        CHECK(smap_bijective(c.sm.s.s, s3.s.s, c.iso));
    }
    {
        SphereConcat c = sphere_concat(s2, s1, s3);
        validate_smap(c.sm.s.s, s3.s.s, c.iso);
        CHECK(smap_bijective(c.sm.s.s, s3.s.s, c.iso));
    }
}

TEST_CASE("components, unions, basepoints") {
    PSSet c = circle(3);
    FinSSet U = sset_disjoint_union(c.s, sset_point(3));
    U.validate();
    Pi0 p = pi0(U);
    CHECK(p.count == 2);
    CHECK(p.of_cell(U, 1, 0) == 0);

    PSSet s0 = sphere0(3);
    s0.s.validate();
    SmashResult sm = smash(s0, circle(3));
    sm.s.s.validate();
    for (int k = 0; k <= 3; ++k) CHECK(sm.s.s.card[k] == k + 1); // S^0 smash S^1 = S^1

    PSSet plus = adjoin_basepoint(sset_point(3));
    CHECK(plus.s.card[0] == 2);
    CHECK(plus.bp == 0);
}

TEST_CASE("two-gon: quotient gluing and presented construction agree") {
    PresentedSSet P;
    P.dim_top = 2;
    P.cells.resize(2);
    P.cells[0].assign(2, {});
    SymCell u{0, 0, {0}}, v{0, 1, {0}};
    P.cells[1] = {{v, u}, {u, v}}; // a: u -> v, b: v -> u
    FromCells F = sset_from_cells(P);
    auto H = sset_homology(F.s, 1);
    CHECK(H[0].inv == std::vector<i64>{0});
    CHECK(H[1].inv == std::vector<i64>{0});
    Pi0 p = pi0(F.s);
    CHECK(p.count == 1);
}

TEST_CASE("quotient projection is a simplicial map with a valid section") {
    FinSSet d1 = standard_simplex(1, 3);
    std::vector<std::vector<std::pair<int, int>>> gens(4);
    gens[0].push_back({0, 1});
    Quotient Q = sset_quotient(d1, gens);
    SMap pr{Q.proj};
    validate_smap(d1, Q.q, pr);
    for (int k = 0; k <= 3; ++k)
        for (int c = 0; c < Q.q.card[k]; ++c) CHECK(Q.proj[k][Q.section[k][c]] == c);
}
