#pragma once
#include <memory>
#include <random>

#include "barcat.hpp"

/* The truncated injection category on levels 0..N, space-valued diagrams
   over it, free diagrams, the box convolution product computed by its
   coequalizer presentation with an independent pointwise-colimit oracle,
   multiplicative (FCP) structures with exhaustive law checking, and the
   stable-equivalence / level-fibrancy surrogate predicates. */

namespace dspace {

/* ------------------------------------------------- the injection category */

struct InjCat {
    int N = 0;
    FinCat cat; // objects 0..N, morphisms all injections m -> n
    std::vector<std::vector<int>> vals; // morphism id -> value array (0-based)

    const std::vector<int>& homs(int m, int n) const;  // ids, lex by value array
    int hom_pos(int f) const;                          // position inside its block
    int find(int m, int n, const std::vector<int>& v) const; // -1 when absent
    int perm(int n, const Perm& p) const;
    int incl(int m, int n) const;          // standard inclusion, values 0..m-1
    int transposition(int n, int i) const; // swap of i, i+1 as an endomorphism
    int block(int f, int g) const;         // f + g on concatenated levels

    std::vector<std::vector<std::vector<int>>> hom_list; // [m][n]
    std::vector<int> pos_of;
};
std::shared_ptr<const InjCat> inj_cat(int N);

/* ----------------------------------------------------------------- spaces */

struct ISpace {
    std::shared_ptr<const InjCat> I;
    Diagram X; // covariant, base = &I->cat

    const FinSSet& lv(int n) const { return X.ob[n]; }
    int dim() const; // common stored dimension (minimum over levels)
    void validate() const;
};

ISpace constant_ispace(std::shared_ptr<const InjCat> I, const FinSSet& A);
ISpace terminal_ispace(std::shared_ptr<const InjCat> I, int dim_top);
/* (F_d A)(n) = Inj(d, n) x A with postcomposition action; cell index is
   hom_pos * |A_k| + a. Throws ObjectOutOfRange when d > N. */
ISpace free_ispace(std::shared_ptr<const InjCat> I, int d, const FinSSet& A);
ISpace ispace_product(const ISpace& A, const ISpace& B);
ISpace ispace_coproduct(const ISpace& A, const ISpace& B);

/* Audit of the defining bijection Hom(F_d A, X) = Hom(A, X(d)): enumerates
   the right side by brute force, transports each member across the
   adjunction, validates naturality, and certifies the generator property
   that forces uniqueness. */
struct FreeAudit {
    long long hom_right = 0; // |Hom(A, X(d))|
    long long hom_left = 0;  // |Hom(F_d A, X)|
    bool bijective = false;
};
FreeAudit free_adjunction_audit(const ISpace& X, int d, const FinSSet& A);

/* ------------------------------------------------------------ box product */

/* Convolution product from its coequalizer presentation: level m is
   generated by (a + b = m, sigma in Sigma_m, x in X(a), y in Y(b)) modulo
   the coset relations and the middle-padding identification; classes are
   named by their lexicographically least generator. */
ISpace box(const ISpace& X, const ISpace& Y);

/* Independent pointwise colimit over pairs of disjoint injections;
   cross-validation only. */
ISpace box_oracle(const ISpace& X, const ISpace& Y);

/* Canonical comparison box -> box_oracle: well-defined, levelwise simplicial
   bijection, natural over every morphism. */
bool box_oracle_audit(const ISpace& X, const ISpace& Y);
/* F_m(*) box F_n(*) = F_{m+n}(*) via sigma o (u + v). */
bool box_free_point_audit(std::shared_ptr<const InjCat> I, int m, int n, int dim_top);
/* X box Y = Y box X via the block twist on representatives. */
bool box_symmetry_audit(const ISpace& X, const ISpace& Y);
/* Both associations agree inside the three-fold pointwise colimit. */
bool box_assoc_audit(const ISpace& X, const ISpace& Y, const ISpace& Z);

/* --------------------------------------------------------- FCP structures */

struct FcpStruct {
    const ISpace* owner = nullptr;
    int unit = 0; // vertex of X(0)
    std::map<std::pair<int, int>, SMap> mu; // product(X(m), X(n)) -> X(m+n), m+n <= N
    bool commutative = true;
};

struct FcpReport {
    bool ok = true;
    std::string law, witness;
};

/* Unit laws, associativity on all triples with m+n+p <= N, naturality on
   generating injections, and the commutativity twist when flagged. */
FcpReport check_fcp(const FcpStruct& S, bool throw_on_fail = false);

/* -------------------------------------------------- equivalence surrogates */

struct ISpaceMap {
    const ISpace* src = nullptr;
    const ISpace* dst = nullptr;
    std::vector<SMap> level;
    void validate() const; // simplicial levels + exact naturality
};

enum class Verdict { Pass, Fail, OutOfRange };

struct StableReport {
    Verdict v = Verdict::OutOfRange;
    int N = 0, D = 0, k_max = 0;
    bool pi0_ok = false;
    std::vector<bool> h_ok;
    std::string detail;
};

/* Compares the homotopy colimits through dimension D: component bijection
   plus H_k isomorphisms for k <= k_max. Requires k_max <= D - 2, else
   TruncationTooSmall; levels too shallow for D give the OutOfRange verdict. */
StableReport stable_equiv_surrogate(const ISpaceMap& f, int D, int k_max);

/* True iff every generating morphism (adjacent transpositions and the
   standard inclusions) induces a component bijection and H_k-isomorphisms
   for k <= k_max; positive restricts to source levels >= 1. */
bool fibrant_surrogate(const ISpace& X, int k_max, bool positive = false);

/* Seeded generator for small diagrams: coproducts of free diagrams on a
   menu of small cell complexes. */
ISpace random_ispace(std::shared_ptr<const InjCat> I, std::mt19937& rng, int dim_top);

} // namespace dspace
