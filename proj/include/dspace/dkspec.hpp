#pragma once
#include <memory>

#include "ispace.hpp"

/* Chain-level spectra: finite commutative rings given by tables, bounded
   complexes of finitely generated free modules with a cached simplicial
   realization, symmetric ring spectra modeled on reduced chains of smash
   powers of the circle, loop diagrams by decalage carrying the shuffle
   multiplication, stable homotopy with stabilization certificates, and the
   suspension / loop adjunction audited by explicit bijections. */

namespace dspace {

/* ------------------------------------------------------------ finite rings */

/* Commutative unital ring on elements 0..n-1 with explicit tables. finalize()
   derives negation and an additive cyclic decomposition (generators, orders,
   per-element coordinates) and then validates every axiom exhaustively. */
struct FinCommRing {
    int n = 0;
    int zero = 0, one = 1;
    std::vector<std::vector<int>> add, mul;
    std::vector<int> neg;
    std::string name;

    std::vector<int> gens;                // additive generators
    std::vector<i64> orders;              // matching orders (any direct-sum form)
    std::vector<std::vector<int>> coord;  // element -> coordinates

    void finalize();       // fills neg/gens/orders/coord, then validate()
    void validate() const; // LawViolation on the first broken axiom

    int a(int x, int y) const { return add[x][y]; }
    int m(int x, int y) const { return mul[x][y]; }
    int of_int(i64 c) const; // image of the integer c
    int scale(i64 c, int x) const { return mul[of_int(c)][x]; }

    FinAb additive() const;          // canonical invariant factors
    std::vector<int> units() const;  // invertible elements, ascending
    int element_order(int x) const;  // additive order
};

FinCommRing ring_zmod(int m);           // integers mod m, m >= 1
FinCommRing ring_gf(int p, int e);      // field with p^e elements, p prime
FinCommRing ring_dual_numbers_f2();     // four elements, square-zero generator over Z/2
FinCommRing ring_from_tables(int n, std::vector<std::vector<int>> add,
                             std::vector<std::vector<int>> mul, int zero, int one,
                             std::string name);

/* --------------------------------------------------------- chain complexes */

/* Nonnegatively graded complex of finitely generated free modules, over a
   finite commutative ring (R != nullptr) or over the integers (R == nullptr).
   Boundary matrices have integer entries, read in R through its unit. */
struct DkModel {
    const FinCommRing* R = nullptr;
    std::vector<int> rank;  // degree 0..top()
    std::vector<Mat> bd;    // bd[k] : rank[k-1] x rank[k], k >= 1; bd[0] empty

    int top() const { return (int)rank.size() - 1; }
    void validate() const;  // shapes and boundary-squared = 0 in the coefficients
    bool operator==(const DkModel& o) const {
        return R == o.R && rank == o.rank && bd == o.bd;
    }
};

DkModel k_model(const FinCommRing* R, int n);  // one rank-1 stage in degree n
/* Reduced normalized chains of a pointed simplicial set with R (or Z)
   coefficients, through the given degree. */
DkModel chains_model(const PSSet& X, const FinCommRing* R, int through_dim);

/* Homotopy of the associated simplicial module = homology of the complex,
   as underlying abelian groups in canonical invariant-factor form. */
std::vector<FinAb> moore_homotopy(const DkModel& M, int k_max);

/* Decalage: degree 0 of loops(M, 1) is the kernel of bd[1] (whose integral
   Smith form must be all ones so the kernel splits off as a free summand),
   degree k is the old degree k+1. loops(M, n) iterates single steps, so
   loops(loops(M, a), b) == loops(M, a + b) holds on the nose. */
DkModel loops(const DkModel& M, int n);

/* ---------------------------------------------------- simplicial realization */

/* Combinatorics of the realization: dimension-k cells are tuples, over the
   monotone surjections [k] ->> [j] with rank[j] > 0, of elements of R^rank[j],
   encoded in mixed radix base |R| (slot-major). Face/degeneracy/counit act on
   digit vectors without any tables, so they work at any dimension <= vdim. */
struct DkShape {
    const FinCommRing* R = nullptr;
    int vdim = 0;
    std::vector<int> ranks;
    std::vector<Mat> bds;

    struct Slot {
        int j = 0;
        std::vector<int> eta; // values of [k] ->> [j]
    };
    std::vector<std::vector<Slot>> slots; // per dimension 0..vdim
    std::vector<std::vector<int>> offs;   // digit offset per slot, plus total
    std::vector<int> digits;              // per dimension
    std::vector<i64> ncells;              // |R|^digits, capped at cell_cap

    static constexpr i64 cell_cap = (i64)1 << 62;

    /* Precomputed routing of the simplicial operators through the slots:
       in each dimension, operator i sends the digit block of a source slot
       either nowhere (dropped), unchanged into a target slot (copied), or
       through the module boundary into a target slot one degree down. */
    struct Route {
        int kind = 0;  // 0 dropped, 1 copied, 2 boundary applied
        int tslot = 0;
    };
    std::vector<std::vector<std::vector<Route>>> froute; // [k][i][slot], k >= 1
    std::vector<std::vector<std::vector<int>>> droute;   // [k][i][slot], k < vdim
    std::vector<int> idslot;                             // identity slot per dim, -1 if none

    std::vector<int> decode(int k, i64 cell) const;
    i64 encode(int k, const std::vector<int>& dig) const;
    std::vector<int> face(int k, int i, const std::vector<int>& dig) const;
    std::vector<int> degen(int k, int i, const std::vector<int>& dig) const;
    /* Coordinates of the identity-surjection slot: the normalized part. */
    std::vector<int> id_slot(int k, const std::vector<int>& dig) const;
};
DkShape dk_shape(const DkModel& M, int vdim);

/* Realization with tables through dimension cut (= largest k <= dim_top whose
   cell counts all fit max_cells); the shape keeps vdim = dim_top for virtual
   use past the cut. Basepoint: the all-zero tuple. */
struct DkRealized {
    DkShape shape;
    int cut = 0;
    PSSet s;
};
DkRealized dk_realize(const DkModel& M, int dim_top, i64 max_cells = 400000);

/* Realize a chain map F (integer matrices per degree, source degree j to
   target degree j) on the table range common to both realizations. */
SMap dk_map(const DkRealized& A, const DkRealized& B, const std::vector<Mat>& F);

/* ----------------------------------------------------------------- spectra */

/* Bigraded pairing of chain complexes: comp[p][q] maps basis pairs of
   bidegree (p, q) to degree p+q, column index x * rank_b[q] + y. */
struct ChainPairing {
    std::vector<std::vector<Mat>> comp;
};

/* Symmetric spectrum truncated at level bound N. Chain-backed spectra carry
   one reduced-chain model per level with symmetric-group actions and the
   structure maps as chain data: sig_ch[n][j] sends degree j of model[n] to
   degree j+1 of model[n+1] (a new circle coordinate is prepended). Realized
   levels are kept through per-level cuts; act[n] lists all of Sigma_n in
   lexicographic order, and sig[n] (with source sig_src[n]) realizes
   smash(S^1, E_n) -> E_{n+1} when the budget allowed building it. */
struct SymSpectrum {
    int N = 0;
    bool dk = false;
    const FinCommRing* R = nullptr;

    std::vector<DkModel> model;
    std::vector<std::vector<std::vector<Mat>>> act_ch; // [n][perm index][degree]
    std::vector<std::vector<Mat>> sig_ch;              // [n][source degree]

    std::vector<DkRealized> level; // realized; non-dk spectra fill only .s/.cut
    std::vector<std::vector<SMap>> act;
    std::vector<SMap> sig;
    std::vector<PSSet> sig_src;
};

struct SymRingSpectrum {
    SymSpectrum E;
    bool commutative = true;
    std::vector<int> unit_vec; // chain image of the S^0 generator in model[0]_0
    std::map<std::pair<int, int>, ChainPairing> mu_ch; // m+n <= N
};

/* Group-action laws, the boundary compatibility of the structure maps, and
   equivariance of the iterated structure maps for p + n <= N; chain-level and
   exhaustive on basis elements for chain-backed spectra, realized (with a
   size budget) otherwise. Throws LawViolation with a witness. */
void check_spectrum_laws(const SymSpectrum& E);
/* Unit laws, Leibniz rule, associativity, block equivariance, the structure
   map compatibility, and the commutativity twist when flagged. */
void check_ring_laws(const SymRingSpectrum& E);

/* Eilenberg-MacLane symmetric ring spectrum of R: level n realizes the
   reduced R-chains of the n-fold smash power of the circle, multiplication
   is the shuffle product along coordinate concatenation. N >= 1. Runs both
   law checks before returning. */
SymRingSpectrum em_spectrum(const FinCommRing& R, int N, i64 realize_budget = 400000);

/* Levelwise suspension (X_n)_+ ^ S^n of a diagram with the diagonal
   symmetric-group actions; structure maps prepend the new circle coordinate
   and push the diagram part along the standard inclusion. */
SymSpectrum sigma_bullet_plus(const ISpace& X, int N, i64 budget = 400000);

/* All levels a point. */
SymSpectrum trivial_spectrum(int N, int dim_top);

/* pi_k for k = 0..k_max as the column-n values pi_{k+n}(level n): homology of
   the chain models when chain-backed, reduced integral homology behind a
   connectivity gate otherwise. Stabilization certificate: from some n on,
   consecutive values agree under the structure-map-induced isomorphism
   through n = N; otherwise NotStabilized(k). */
std::vector<FinAb> spectrum_homotopy(const SymSpectrum& E, int k_max);

/* ------------------------------------------------------------ loop diagrams */

/* Loop diagram of a chain-backed spectrum: level n realizes the decalage
   loops(model[n], n), a discrete set of top-degree cycles in kernel-basis
   coordinates. Injections act by new-coordinate insertion via the structure
   maps followed by conjugation (the permutation action twisted by the sign of
   the inverse sphere permutation); the action is validated as a functor
   exhaustively, and independence of the chosen permutation extension is
   checked on seeded random factorizations. */
struct OmegaBullet {
    std::shared_ptr<ISpace> space;
    FcpStruct fcp; // owner = space.get(); multiplication = shuffle product
    const FinCommRing* R = nullptr;
    std::vector<int> kdim; // per level: number of R-coordinates
};

/* Diagram part only (any chain-backed spectrum). Throws NotDkBacked. */
ISpace omega_space(const SymSpectrum& E, int dim_top);
/* Diagram + shuffle FCP of a ring spectrum; runs check_fcp (throwing). */
OmegaBullet omega_bullet(const SymRingSpectrum& E, int dim_top, unsigned seed = 1);

/* ------------------------------------------------------- adjunction audit */

/* Enumerates Hom(suspension of X, E) and Hom(X, loop diagram of E) for a
   diagram X with discrete levels and a chain-backed E, builds the unit/counit
   transport in both directions, and certifies that the round trips are both
   identities. Throws BijectionFailure with a witness, NotDkBacked, or
   SizeBudgetExceeded. */
struct AdjunctionReport {
    long long hom_spectra = 0;
    long long hom_spaces = 0;
    bool bijective = false;
};
AdjunctionReport adjunction_audit(const ISpace& X, const SymSpectrum& E,
                                  i64 budget = 200000);

} // namespace dspace
