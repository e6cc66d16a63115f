#pragma once
#include <array>

#include "dkspec.hpp"

/* pi0 monoids of multiplicative diagram spaces, the unit-component sub-FCP
   and GL1 of a ring spectrum, partition categories and the finite-based-set
   space built from a commutative FCP by homotopy colimits over them, Segal
   map verification with comma-category certificates, the evaluation of the
   resulting functor on the simplicial circle (a first delooping), and
   Grothendieck group completion of pi0. */

namespace dspace {

/* ---------------------------------------------------------- finite monoids */

struct FinMonoid {
    int n = 0;
    int unit = 0;
    std::vector<std::vector<int>> mult;
    bool commutative = false;

    void validate() const;           // closure, associativity, unit, comm flag
    std::vector<int> units() const;  // two-sided invertible elements, ascending
    bool is_group() const;
    FinAb group_structure() const;   // commutative groups only: canonical form
};

/* Grothendieck group by exhaustive congruence closure on formal differences:
   (a, b) ~ (c, d) when a + d + k = c + b + k for some k. Commutative input. */
FinAb grothendieck_group(const FinMonoid& M);

/* --------------------------------------------------- pi0 of a multiplicative
   diagram space: the colimit of level components over all injections, with
   the product induced on stable representatives. */

struct Pi0Monoid {
    FinMonoid m;
    std::vector<Pi0> level;                      // per diagram level
    std::vector<std::vector<int>> level_class;   // [lvl][component] -> element
    int stable_from = 0;                         // inclusions bijective onward
};

/* Requires: standard inclusions induce component bijections from some level s
   on, with 2s <= N so products of stable representatives stay in range;
   otherwise NotStabilized. Product independence of the chosen representatives
   is verified exhaustively on vertices of level s. */
Pi0Monoid pi0_monoid(const FcpStruct& S);

/* ------------------------------------------------------- unit components */

struct UnitsFcp {
    std::shared_ptr<ISpace> space;        // levelwise full sub-space on unit components
    std::shared_ptr<const ISpace> parent; // keeps the ambient space alive when given
    FcpStruct fcp;                        // owner = space.get()
    ISpaceMap incl;                       // inclusion into the ambient space
    FinMonoid monoid;                     // pi0 of the sub-FCP: the unit group
    Pi0Monoid pi0;                        // full pi0 data of the sub-FCP
};

/* Keeps exactly the cells whose component is invertible in pi0; the FCP
   restricts (units are closed under products) and the result is grouplike. */
UnitsFcp units_fcp(const FcpStruct& S, std::shared_ptr<const ISpace> keep = {});

/* Unit components of the loop diagram of a commutative symmetric ring
   spectrum; all multiplicative law audits are re-run on the restriction. */
UnitsFcp gl1_bullet(const SymRingSpectrum& E, int dim_top, unsigned seed = 1);

/* --------------------------------------------------- partition categories */

/* Subsets of {1..n} as bitmasks (bit i-1 = element i); the empty set is 0. */
struct PosetPn {
    int n = 0;
    static bool leq(int a, int b) { return (a & ~b) == 0; }
    int nsub() const { return 1 << n; }
};

/* The category of coproduct-preserving functors from P(n) to levels 0..N,
   in merged normal form: an object is a word of (color, size) blocks with
   adjacent colors distinct and total size <= N; the functor sends a subset A
   to the order-sum of the blocks whose color lies in A, and a morphism is an
   arbitrary tuple of injections, one per color. Closed on the nose under
   relabeling colors along based maps (drop color 0, merge adjacent equals). */
struct ICatN {
    int n = 0;
    std::shared_ptr<const InjCat> I;
    std::vector<std::vector<std::pair<int, int>>> words; // object -> blocks
    std::map<std::vector<int>, int> word_id;             // flattened word -> object
    std::vector<std::vector<int>> etup;                  // object -> size per color
    FinCat cat;
    std::vector<std::vector<int>> mor_comp;              // morphism -> injection per color
    std::map<std::vector<int>, int> mor_id;              // {src,dst,f_1..f_n} -> morphism

    int theta_size(int obj, int mask) const;
    /* blocks of theta(mask) in word order: (color, size, offset in theta(mask)) */
    std::vector<std::array<int, 3>> theta_blocks(int obj, int mask) const;
    void validate() const; // category laws + the partition condition, all masks
};
ICatN icat_n(std::shared_ptr<const InjCat> I, int n);

/* -------------------------------------------------------------- based maps */

struct BasedMap {
    int m = 0, n = 0;
    std::vector<int> img; // img[i-1] in 0..n, 0 = basepoint

    std::vector<int> key() const;
    int operator()(int i) const { return i == 0 ? 0 : img[i - 1]; }
};
std::vector<BasedMap> based_maps(int m, int n); // all, img lexicographic
BasedMap based_identity(int n);
BasedMap based_compose(const BasedMap& beta, const BasedMap& alpha); // beta after alpha

/* ------------------------------------------------------------ gamma spaces */

/* One materialized homotopy colimit: cells of dimension q are pairs of a
   q-chain in the partition category and a cell of the product fiber at the
   chain's source, ordered (source object, out-edges, fiber cell) to match the
   streaming bar enumeration. */
struct GammaLevel {
    FinSSet val;
    std::vector<std::vector<std::vector<int>>> chain;   // [q][id] = {c0, f1..fq}
    std::vector<std::map<std::vector<int>, int>> chain_id;
    std::vector<std::vector<int>> block;                // [q][chain id] -> first cell
    std::vector<std::vector<int>> cell_chain;           // [q][cell] -> chain id
    std::vector<FinSSet> fiber;                         // per object, iterated product
    std::vector<SMap> fact;                             // per category morphism

    int cell(int q, int ch, int x) const { return block[q][ch] + x; }
};

/* A structure map in compressed form: the chain part and the per-object fiber
   part, whose blockwise expansion is the simplicial map on materialized
   cells. The fiber part is the composite: project away color-0 coordinates,
   multiply each target color's coordinates in ascending color order, then
   relabel by the block-interleaving permutation of the target word. */
struct GammaMap {
    BasedMap a;
    std::vector<int> ob_img;
    std::vector<int> mor_img;
    std::vector<std::vector<int>> chain_img;             // [q][chain] -> chain
    std::vector<std::vector<std::vector<int>>> fiber_img; // [obj][q][x] -> x'
};

struct GammaSpace {
    int n_max = 0, N = 0, D = 0;
    std::string source;
    std::shared_ptr<const ISpace> keep;
    std::vector<ICatN> C;   // 0..n_max
    std::vector<GammaLevel> L;
    std::map<std::vector<int>, GammaMap> maps; // key = BasedMap::key()

    const GammaMap& map_of(const BasedMap& a) const;
    SMap expand(const BasedMap& a) const; // full simplicial map L[a.m] -> L[a.n]
};

/* Builds levels 0..n_max with the bar construction truncated at D, all
   structure maps for based maps between them, and verifies exhaustively that
   identities map to identities and composites to composites. Requires a
   commutative FCP (NotCommutative), level dimensions >= D (TruncationTooSmall)
   and total cell count within budget (SizeBudgetExceeded). */
GammaSpace gamma_construct(const FcpStruct& S, int n_max = 3, int D = 4,
                           std::shared_ptr<const ISpace> keep = {},
                           long long max_cells = 6000000);

/* -------------------------------------------------------------- Segal maps */

struct SegalReport {
    int n_max = 0, k_max = 0;
    bool pi0_exact = false;               // components of level n = n-tuples
    std::vector<char> pi0_bijective;      // per n
    std::vector<std::vector<char>> h_iso; // [n][k], k = 1..k_max
    bool comma_ok = false;                // initial-object certificates
    long long comma_checked = 0;
    bool ok() const;
};

/* Checks, for 2 <= n <= n_max, that the projection-induced map to the n-fold
   product of level 1 is a component bijection and an H_k-isomorphism for
   k <= k_max (componentwise, by the Kunneth splitting of the target), and
   certifies cofinality: for every tuple d with sum <= N the comma category
   under the forgetful functor to the n-fold injection category has an initial
   object, namely the sorted word of d. k_max must be <= D - 2; the homology
   comparison is implemented through degree 1, where the splitting needs no
   torsion correction. */
SegalReport segal_check(const GammaSpace& H, int k_max);

/* ---------------------------------------------------------- the delooping */

/* Diagonal of the evaluation on the simplicial circle: cells of dimension q
   are the dimension-q cells of level q, with faces and degeneracies combining
   the internal ones with the circle's based structure maps. Requires
   n_max >= D_dl (InsufficientGammaRange) and D >= D_dl (TruncationTooSmall). */
FinSSet segal_machine_delooping(const GammaSpace& H, int D_dl);

/* --------------------------------------------------------- group completion */

struct GroupCompletion {
    FinMonoid m;    // pi0 of level 1 under the fold product
    FinAb group;    // its Grothendieck group
    bool grouplike = false;
};

/* The monoid on components of level 1 via the fold map through the component
   bijection of level 2 (BijectionFailure when that fails), completed. */
GroupCompletion group_completion_pi0(const GammaSpace& H);

} // namespace dspace
