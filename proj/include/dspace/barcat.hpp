#pragma once
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "sset.hpp"

/* Finite categories, space-valued diagrams, the two-sided bar construction
   (streaming enumeration plus guarded materialization), nerves, homotopy
   colimits, induced maps on them, the prism-style homotopy check for the
   two collapse maps of the four-fold bar, and comma categories with initial
   object certificates. */

namespace dspace {

/* ------------------------------------------------------------ categories */

struct FinCat {
    struct Mor {
        int src = 0, dst = 0;
    };
    int nobj = 0;
    std::vector<Mor> mor;                // identities included
    std::vector<int> idm;                // object -> identity morphism
    std::vector<std::vector<int>> comp;  // comp[g][f] = g after f, or -1
    std::vector<std::vector<int>> out;   // morphism ids leaving each object, ascending
    std::vector<std::vector<int>> into;  // morphism ids entering each object

    void finalize();        // fills out/into
    void validate() const;  // typing, identity laws, associativity
    int compose(int g, int f) const {
        int r = comp[g][f];
        if (r < 0) throw Error("compose: not composable");
        return r;
    }
};

/* One-object category from a monoid multiplication table. */
FinCat monoid_cat(const std::vector<std::vector<int>>& mult, int unit);

/* Functor data between finite categories. */
struct FunctorData {
    std::vector<int> ob;
    std::vector<int> mor;
};
void validate_functor(const FinCat& C, const FinCat& Cp, const FunctorData& F); // NotAFunctor

/* ------------------------------------------------------------- diagrams */

struct Diagram {
    const FinCat* base = nullptr;
    bool contra = false;
    std::vector<FinSSet> ob;
    std::vector<SMap> act; // aligned with base->mor

    void validate() const; // NotAFunctor on any failure
    bool discrete() const; // every value constant in each dimension
};

FinSSet discrete_sset(int npoints, int dim_top);
Diagram constant_diagram(const FinCat& C, const FinSSet& A, bool contra);
Diagram represented_diagram(const FinCat& C, int c, int dim_top);   // hom(c, -)
Diagram corepresented_diagram(const FinCat& C, int c, int dim_top); // hom(-, c)
/* X' composed with F (covariant X' over Cp, F : C -> Cp). */
Diagram restrict_diagram(const FinCat& C, const FinCat& Cp, const FunctorData& F,
                         const Diagram& Xp);

/* ------------------------------------------------------ bar construction */

/* q-simplex of B(Y, C, X): chain c0 -> ... -> cq (morphism ids), with
   y in Y(cq)_q and x in X(c0)_q. */
struct BarSimplex {
    std::vector<int> chain;
    int obj0 = 0;
    int y = 0, x = 0;
    auto operator<=>(const BarSimplex&) const = default;
};

struct BarComplex {
    const FinCat* C = nullptr;
    const Diagram* X = nullptr; // covariant
    const Diagram* Y = nullptr; // contravariant
    int D = 0;
    std::shared_ptr<const Diagram> own_x, own_y; // keep internally built modules alive

    int chain_obj(const BarSimplex& s, int pos) const;
    BarSimplex face(int q, const BarSimplex& s, int i) const;
    BarSimplex degen(int q, const BarSimplex& s, int i) const;
    bool simplex_degenerate(int q, const BarSimplex& s) const;
    void enumerate(int q, const std::function<void(const BarSimplex&)>& fn) const;
    long long count(int q) const;
};

/* Raises MismatchedBase unless both diagrams live over C with the stated
   variances, and D fits inside every value's stored dimensions. */
BarComplex bar(const FinCat& C, const Diagram& X, const Diagram& Y, int D);

struct BarMaterialized {
    FinSSet s;
    std::vector<std::vector<BarSimplex>> cells;
    std::vector<std::map<BarSimplex, int>> index;
};
BarMaterialized bar_materialize(const BarComplex& B, long long max_cells = 6000000);

FinSSet nerve(const FinCat& C, int D);

/* Streaming check of every simplicial identity among computed faces and
   degeneracies through dimension qmax; no materialization. */
struct IdCheckResult {
    bool ok = true;
    int q = -1, i = -1, j = -1;
    long long checked = 0;
};
IdCheckResult bar_identity_check(const BarComplex& B, int qmax, bool throw_on_fail = false);

/* ------------------------------------------------------ homotopy colimit */

/* One-sided bar with a point module on the contravariant side. */
BarComplex hocolim(const FinCat& C, const Diagram& X, int D);
std::vector<FinAb> hocolim_homology(const FinCat& C, const Diagram& X, int kmax, i64 coeff = 0,
                                    long long max_cells = 6000000);
Pi0 hocolim_pi0(const FinCat& C, const Diagram& X, long long max_cells = 6000000);

/* Map of homotopy colimits induced by F : C -> Cp against a diagram on Cp:
   hocolim_C (Xp o F) -> hocolim_Cp Xp. Reports isomorphism verdicts. */
struct InducedMapResult {
    bool pi0_bijective = false;
    std::vector<bool> h_iso;
    std::vector<FinAb> h_src, h_dst;
};
InducedMapResult induced_hocolim_map(const FinCat& C, const FinCat& Cp, const FunctorData& F,
                                     const Diagram& Xp, int kmax, long long max_cells = 6000000);

/* --------------------------------------- collapse maps of the 4-fold bar */

/* For discrete X (covariant) and Y (contravariant) over C: enumerates the
   diagonal of B(Y, C, C, C, X) through dimension qmax, forms the two
   collapse maps f (absorb the right leg into X) and g (absorb the left leg
   into Y) and the interleaving prisms h_0..h_q, then verifies every
   simplicial homotopy identity.  First failure is reported as (q, i, j);
   throws IdentityViolation when throw_on_fail. */
IdCheckResult interchange_homotopy_check(const FinCat& C, const Diagram& X, const Diagram& Y,
                                         int qmax, bool throw_on_fail = false);

/* -------------------------------------------------------------- comma */

/* Comma category (d / F) for F : C -> Cp and an object d of Cp: objects are
   (c, phi : d -> F c); morphisms act by postcomposition. */
struct CommaCat {
    FinCat cat;
    std::vector<std::pair<int, int>> objs; // (object of C, morphism id in Cp)
    std::optional<int> initial;
    std::vector<int> cone; // when initial: unique morphism initial -> o
};
CommaCat comma_category(const FinCat& C, const FinCat& Cp, const FunctorData& F, int d);

} // namespace dspace
