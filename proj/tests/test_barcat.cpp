#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dspace/barcat.hpp"

using namespace dspace;

/* Linear poset 0 < 1 < ... < n-1 as a category: one morphism i -> j per i <= j. */
static FinCat linear_poset(int n) {
    FinCat C;
    C.nobj = n;
    std::vector<std::vector<int>> id(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            id[i][j] = (int)C.mor.size();
            C.mor.push_back({i, j});
        }
    C.idm.resize(n);
    for (int i = 0; i < n; ++i) C.idm[i] = id[i][i];
    int m = (int)C.mor.size();
    C.comp.assign(m, std::vector<int>(m, -1));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) C.comp[id[j][k]][id[i][j]] = id[i][k];
    C.finalize();
    C.validate();
    return C;
}

/* Two objects, two parallel arrows u, v : 0 -> 1 and nothing else. */
static FinCat parallel_pair() {
    FinCat C;
    C.nobj = 2;
    C.mor = {{0, 0}, {1, 1}, {0, 1}, {0, 1}};
    C.idm = {0, 1};
    C.comp.assign(4, std::vector<int>(4, -1));
    C.comp[0][0] = 0;
    C.comp[1][1] = 1;
    C.comp[2][0] = 2;
    C.comp[1][2] = 2;
    C.comp[3][0] = 3;
    C.comp[1][3] = 3;
    C.finalize();
    C.validate();
    return C;
}

static FinCat z2_cat() { return monoid_cat({{0, 1}, {1, 0}}, 0); }

TEST_CASE("category validation accepts lawful tables and rejects corruption") {
    FinCat C = linear_poset(3);
    CHECK(C.nobj == 3);
    CHECK((int)C.mor.size() == 6);
    CHECK(C.compose(C.comp[0][0], C.idm[0]) == C.idm[0]);

    FinCat bad = C;
    bad.comp[bad.idm[1]][bad.idm[1]] = bad.idm[0]; // wrong typing
    CHECK_THROWS_AS(bad.validate(), LawViolation);

    FinCat bad2 = z2_cat();
    bad2.comp[1][0] = 0; // breaks the identity law
    CHECK_THROWS_AS(bad2.validate(), LawViolation);
}

TEST_CASE("functor validation") {
    FinCat C = linear_poset(2), Cp = linear_poset(3);
    FunctorData F;
    F.ob = {0, 2};
    F.mor.resize(C.mor.size());
    // map i -> j in [1] to the unique arrow F(i) -> F(j)
    for (int f = 0; f < (int)C.mor.size(); ++f) {
        int a = F.ob[C.mor[f].src], b = F.ob[C.mor[f].dst];
        int found = -1;
        for (int g : Cp.out[a])
            if (Cp.mor[g].dst == b) found = g;
        F.mor[f] = found;
    }
    validate_functor(C, Cp, F);
    FunctorData bad = F;
    bad.mor[C.idm[0]] = Cp.idm[1];
    CHECK_THROWS_AS(validate_functor(C, Cp, bad), NotAFunctor);
}

TEST_CASE("diagram validation and discreteness") {
    FinCat C = linear_poset(2);
    Diagram X = constant_diagram(C, circle(3).s, false);
    X.validate();
    CHECK_FALSE(X.discrete());
    Diagram Dd = represented_diagram(C, 0, 3);
    Dd.validate();
    CHECK(Dd.discrete());
    CHECK(Dd.ob[0].card[0] == 1);
    CHECK(Dd.ob[1].card[0] == 1);

    Diagram bad = X;
    for (auto& t : bad.act[1].comp) t.assign(t.size(), 0); // collapse the unique 0->1 arrow
    bad.validate();                                        // still simplicial and functorial
    Diagram bad2 = Dd;
    bad2.act[C.idm[0]].comp[1][0] = 0; // identity must stay identity; make a ragged table
    bad2.act[C.idm[0]].comp[1].push_back(0);
    CHECK_THROWS_AS(bad2.validate(), NotAFunctor);
}

TEST_CASE("nerve of the cyclic group of order 2 has classical homology") {
    FinCat C = z2_cat();
    FinSSet N = nerve(C, 4);
    for (int q = 0; q <= 4; ++q) CHECK(N.card[q] == (1 << q));
    N.validate();
    auto H = sset_homology(N, 3);
    CHECK(H[0].to_string() == "Z");
    CHECK(H[1].to_string() == "Z/2");
    CHECK(H[2].to_string() == "0");
    CHECK(H[3].to_string() == "Z/2");
    // mod-2 coefficients: one class in every degree
    auto H2 = sset_homology(N, 3, 2);
    for (int k = 0; k <= 3; ++k) CHECK(H2[k].to_string() == "Z/2");
}

TEST_CASE("nerve of a poset with terminal object is acyclic") {
    FinCat C = linear_poset(3);
    FinSSet N = nerve(C, 3);
    auto H = sset_homology(N, 2);
    CHECK(H[0].to_string() == "Z");
    CHECK(H[1].to_string() == "0");
    CHECK(H[2].to_string() == "0");
}

TEST_CASE("bar rejects mismatched modules and short dimensions") {
    FinCat C = z2_cat(), C2 = linear_poset(2);
    Diagram X = represented_diagram(C, 0, 4);
    Diagram Y = corepresented_diagram(C, 0, 4);
    CHECK_NOTHROW(bar(C, X, Y, 4));
    CHECK_THROWS_AS(bar(C, Y, X, 4), MismatchedBase);    // variances swapped
    CHECK_THROWS_AS(bar(C2, X, Y, 4), MismatchedBase);   // wrong base
    CHECK_THROWS_AS(bar(C, X, Y, 5), InsufficientDimension);
}

TEST_CASE("streaming bar identities hold and corruption is caught with a witness") {
    FinCat C = z2_cat();
    Diagram X = represented_diagram(C, 0, 6);
    Diagram Y = corepresented_diagram(C, 0, 6);
    BarComplex B = bar(C, X, Y, 6);
    IdCheckResult R = bar_identity_check(B, 4);
    CHECK(R.ok);
    CHECK(R.checked > 100);

    // nondegenerate cells of the bar of a group: words without identity letters
    int nd2 = 0;
    B.enumerate(2, [&](const BarSimplex& s) { nd2 += !B.simplex_degenerate(2, s); });
    CHECK(nd2 == 2 * 2); // one nondegenerate word times |X_2| x |Y_2| = 2 x 2

    FinCat bad = C;
    bad.comp[1][0] = 0; // claim (flip o id) = id
    Diagram Xb = X, Yb = Y;
    Xb.base = Yb.base = &bad;
    BarComplex Bb = bar(bad, Xb, Yb, 6);
    IdCheckResult Rb = bar_identity_check(Bb, 4);
    CHECK_FALSE(Rb.ok);
    CHECK(Rb.q >= 0);
    try {
        bar_identity_check(Bb, 4, true);
        CHECK(false);
    } catch (const IdentityViolation& e) {
        CHECK(e.q == Rb.q);
        CHECK(e.i == Rb.i);
        CHECK(e.j == Rb.j);
    }
}

TEST_CASE("homotopy colimit of a represented module is acyclic") {
    FinCat C = z2_cat();
    Diagram X = represented_diagram(C, 0, 4);
    auto H = hocolim_homology(C, X, 2);
    CHECK(H[0].to_string() == "Z");
    CHECK(H[1].to_string() == "0");
    CHECK(H[2].to_string() == "0");
}

TEST_CASE("homotopy colimit of a constant diagram multiplies by the nerve") {
    FinCat C = linear_poset(2);
    Diagram X = constant_diagram(C, circle(4).s, false);
    auto H = hocolim_homology(C, X, 2);
    CHECK(H[0].to_string() == "Z");
    CHECK(H[1].to_string() == "Z");
    CHECK(H[2].to_string() == "0");

    Diagram P = constant_diagram(C, discrete_sset(2, 2), false);
    CHECK(hocolim_pi0(C, P).count == 2);
}

TEST_CASE("induced map from a terminal object is an equivalence") {
    FinCat C1 = monoid_cat({{0}}, 0), C2 = linear_poset(2);
    FunctorData F;
    F.ob = {1};
    F.mor = {C2.idm[1]};
    Diagram X = constant_diagram(C2, circle(4).s, false);
    InducedMapResult R = induced_hocolim_map(C1, C2, F, X, 1);
    CHECK(R.pi0_bijective);
    REQUIRE(R.h_iso.size() == 2);
    CHECK(R.h_iso[0]);
    CHECK(R.h_iso[1]);
    CHECK(R.h_src[1].to_string() == "Z");
    CHECK(R.h_dst[1].to_string() == "Z");
}

TEST_CASE("induced map from an initial object detects the lost circle") {
    FinCat C1 = monoid_cat({{0}}, 0), C2 = linear_poset(2);
    FunctorData F;
    F.ob = {0};
    F.mor = {C2.idm[0]};
    Diagram X; // circle at 0 collapsing to a point at 1
    X.base = &C2;
    X.ob = {circle(4).s, sset_point(4)};
    X.act.resize(3);
    X.act[C2.idm[0]] = smap_id(X.ob[0]);
    X.act[C2.idm[1]] = smap_id(X.ob[1]);
    SMap collapse;
    for (int k = 0; k <= 4; ++k) collapse.comp.push_back(std::vector<int>(circle(4).s.card[k], 0));
    X.act[1] = collapse;
    X.validate();
    InducedMapResult R = induced_hocolim_map(C1, C2, F, X, 1);
    CHECK(R.pi0_bijective);
    CHECK(R.h_iso[0]);
    CHECK_FALSE(R.h_iso[1]);
    CHECK(R.h_src[1].to_string() == "Z");
    CHECK(R.h_dst[1].to_string() == "0");
}

TEST_CASE("collapse maps of the four-fold bar pass the prism check") {
    for (const FinCat& C : {z2_cat(), linear_poset(2)}) {
        Diagram X = represented_diagram(C, 0, 5);
        Diagram Y = corepresented_diagram(C, C.nobj - 1, 5);
        IdCheckResult R = interchange_homotopy_check(C, X, Y, 3);
        CHECK(R.ok);
        CHECK(R.checked > 200);
    }
}

TEST_CASE("prism check names the first failing identity on a corrupted table") {
    FinCat bad = z2_cat();
    bad.comp[1][0] = 0;
    Diagram X = represented_diagram(bad, 0, 5); // tables built from the corrupted comp
    Diagram Y = corepresented_diagram(bad, 0, 5);
    IdCheckResult R = interchange_homotopy_check(bad, X, Y, 3);
    CHECK_FALSE(R.ok);
    CHECK(R.q >= 0);
    IdCheckResult R2 = interchange_homotopy_check(bad, X, Y, 3);
    CHECK(R2.q == R.q); // deterministic witness
    CHECK(R2.i == R.i);
    CHECK(R2.j == R.j);
    try {
        interchange_homotopy_check(bad, X, Y, 3, true);
        CHECK(false);
    } catch (const IdentityViolation& e) {
        CHECK(e.q == R.q);
        CHECK(e.i == R.i);
        CHECK(e.j == R.j);
    }
}

TEST_CASE("prism check requires discrete modules and room for prisms") {
    FinCat C = linear_poset(2);
    Diagram X = constant_diagram(C, circle(5).s, false);
    Diagram Y = constant_diagram(C, sset_point(5), true);
    CHECK_THROWS_AS(interchange_homotopy_check(C, X, Y, 2), LawViolation);
    Diagram Xs = represented_diagram(C, 0, 3);
    Diagram Ys = corepresented_diagram(C, 1, 3);
    CHECK_THROWS_AS(interchange_homotopy_check(C, Xs, Ys, 2), InsufficientDimension);
}

TEST_CASE("comma categories and initial object certificates") {
    FinCat C = linear_poset(2);
    FunctorData idf;
    idf.ob = {0, 1};
    idf.mor = {0, 1, 2};
    for (int f = 0; f < 3; ++f) idf.mor[f] = f;
    CommaCat K = comma_category(C, C, idf, 0);
    REQUIRE(K.initial.has_value());
    auto o = K.objs[*K.initial];
    CHECK(o.first == 0);
    CHECK(o.second == C.idm[0]);
    CHECK((int)K.cone.size() == K.cat.nobj);
    for (int t = 0; t < K.cat.nobj; ++t) CHECK(K.cat.mor[K.cone[t]].dst == t);

    // inclusion of the endpoint: comma objects are the two parallel arrows, no initial
    FinCat P = parallel_pair();
    FinCat One = monoid_cat({{0}}, 0);
    FunctorData F;
    F.ob = {1};
    F.mor = {P.idm[1]};
    CommaCat K2 = comma_category(One, P, F, 0);
    CHECK((int)K2.objs.size() == 2);
    CHECK_FALSE(K2.initial.has_value());
}

TEST_CASE("restricting a diagram along a functor reuses values") {
    FinCat C = monoid_cat({{0}}, 0), Cp = linear_poset(2);
    FunctorData F;
    F.ob = {1};
    F.mor = {Cp.idm[1]};
    Diagram X = constant_diagram(Cp, circle(3).s, false);
    Diagram R = restrict_diagram(C, Cp, F, X);
    R.validate();
    CHECK(R.ob[0].card[1] == 2);
}
