#pragma once
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "linalg.hpp"

/* Finite truncated simplicial sets with explicit face/degeneracy tables,
   products, quotients by congruence closure, smash products, normalized
   chains, exact integral / cyclic-coefficient homology, and the circle and
   smash-power sphere models with coordinate bookkeeping. */

namespace dspace {

/* ------------------------------------------------------------ structure */

struct FinSSet {
    int dim_top = 0;
    std::vector<int> card;                            // card[k], k = 0..dim_top
    std::vector<std::vector<std::vector<int>>> face;  // face[k][i][x], k >= 1, 0 <= i <= k
    std::vector<std::vector<std::vector<int>>> degen; // degen[k][i][x], k < dim_top, 0 <= i <= k

    void validate() const; // LawViolation on any simplicial identity failure
    bool is_degenerate(int k, int x) const;
    std::vector<std::vector<int>> nondeg_cells() const;
    int vertex0(int k, int x) const;             // iterated 0-th vertex
    int degen_word(int k, int x, int up) const;  // s_0^{up} x
};

/* Pointed: bp is a 0-cell; its degeneracies give the basepoint in each dim. */
struct PSSet {
    FinSSet s;
    int bp = 0;
    int bp_cell(int k) const { return s.degen_word(0, bp, k); }
};

/* Simplicial map stored one table per dimension, 0..K. */
struct SMap {
    std::vector<std::vector<int>> comp;

    int operator()(int k, int x) const { return comp[k][x]; }
};

void validate_smap(const FinSSet& X, const FinSSet& Y, const SMap& f);
SMap smap_id(const FinSSet& X);
SMap smap_compose(const SMap& g, const SMap& f); // g after f
bool smap_equal(const SMap& f, const SMap& g);
bool smap_bijective(const FinSSet& X, const FinSSet& Y, const SMap& f);

/* ------------------------------------------------------------ operations */

FinSSet sset_point(int dim_top);
FinSSet standard_simplex(int n, int dim_top);
FinSSet sset_product(const FinSSet& X, const FinSSet& Y); // dim_top = min
int prod_index(const FinSSet& Y, int k, int x, int y);    // x * cardY[k] + y
std::pair<int, int> prod_split(const FinSSet& Y, int k, int p);
FinSSet sset_disjoint_union(const FinSSet& X, const FinSSet& Y); // X cells first

struct Quotient {
    FinSSet q;
    std::vector<std::vector<int>> proj;    // old cell -> class id
    std::vector<std::vector<int>> section; // class id -> least old cell
};
/* Quotient by the congruence closure of the given per-dimension pairs. */
Quotient sset_quotient(const FinSSet& X, const std::vector<std::vector<std::pair<int, int>>>& gens);

struct SmashResult {
    PSSet s;
    std::vector<std::vector<int>> proj;    // indexed by prod_index pairs
    std::vector<std::vector<int>> section; // class -> product index
};
SmashResult smash(const PSSet& X, const PSSet& Y);

PSSet adjoin_basepoint(const FinSSet& X); // bp becomes cell 0 in every dim

struct Pi0 {
    int count = 0;
    std::vector<int> comp; // per vertex
    int of_cell(const FinSSet& X, int k, int x) const { return comp[X.vertex0(k, x)]; }
};
Pi0 pi0(const FinSSet& X);

/* ------------------------------------------------------------- chains */

struct ChainCx {
    int top = 0;
    std::vector<int> rank;                 // nondegenerate cell counts
    std::vector<Mat> bnd;                  // bnd[k]: rank[k-1] x rank[k]
    std::vector<std::vector<int>> ndcell;  // position -> cell id
    std::vector<std::vector<int>> ndindex; // cell id -> position or -1
};

ChainCx chains(const FinSSet& X, int through_dim);
/* Reduced: the basepoint vertex is dropped from degree 0. */
ChainCx reduced_chains(const PSSet& X, int through_dim);
/* Chain-level matrix of a simplicial map on normalized chains. */
std::vector<Mat> chain_map(const ChainCx& cx, const ChainCx& cy, const SMap& f);

/* H_k(X), k = 0..kmax; coeff_mod = 0 for integral, m >= 2 for Z/m.
   Requires kmax + 1 <= dim_top, else InsufficientDimension. */
std::vector<FinAb> sset_homology(const FinSSet& X, int kmax, i64 coeff_mod = 0);
std::vector<FinAb> sset_reduced_homology(const PSSet& X, int kmax, i64 coeff_mod = 0);

/* Does f induce a bijection on connected components? */
bool pi0_map_bijective(const FinSSet& X, const FinSSet& Y, const SMap& f);

/* Weak-equivalence surrogate for a simplicial map: component bijection plus
   induced isomorphisms on H_k for k <= kmax. */
struct EquivCheck {
    bool pi0_bijective = false;
    std::vector<bool> h_iso;
    std::vector<FinAb> h_src, h_dst;
    bool all() const {
        if (!pi0_bijective) return false;
        for (bool b : h_iso)
            if (!b) return false;
        return true;
    }
};
EquivCheck weak_equiv_surrogate(const FinSSet& X, const FinSSet& Y, const SMap& f, int kmax);

/* Extend images given on nondegenerate cells to a full simplicial map, by
   writing every degenerate cell as s_i of a lower one. nd[k] maps the cell
   ids of nondegenerate k-cells of X to k-cells of Y. */
SMap extend_map_from_nondeg(const FinSSet& X, const FinSSet& Y,
                            const std::vector<std::map<int, int>>& nd);

/* --------------------------------------------------- presented complexes */

/* A nondegenerate cell in symbolic form: eta*(core) with eta : [k] ->> [jdim]
   monotone surjective, stored as its k+1 values. */
struct SymCell {
    int jdim = 0;
    int core = 0;
    std::vector<int> eta;
};

/* Input data: cells[k] lists the nondegenerate k-cells; each gives its k+1
   geometric faces symbolically (cells[0] entries have no faces). */
struct PresentedSSet {
    int dim_top = 0;
    std::vector<std::vector<std::vector<SymCell>>> cells; // cells[k][c] = faces of core c
};

struct FromCells {
    FinSSet s;
    std::vector<std::vector<int>> core_cell; // (k, c) -> cell id of the nondeg core
};
FromCells sset_from_cells(const PresentedSSet& data);

/* ------------------------------------------------------------- spheres */

/* Circle: two-cell interval with endpoints identified; cell 0 in each
   dimension is the degenerate basepoint. */
PSSet circle(int dim_top);

/* n-fold smash power of the circle with coordinate bookkeeping: every cell
   carries a representative coordinate tuple of circle cells, and tuples can
   be classified back.  n >= 1. */
struct SphereModel {
    int n = 0;
    PSSet s;
    std::vector<std::vector<std::vector<int>>> rep; // rep[k][cell] = n circle cell ids

    int class_of(int k, const std::vector<int>& tuple) const;

    // internal: smash stages; stage j built sphere (j+2) from (j+1) and circle
    std::vector<std::vector<std::vector<int>>> stage_proj;
    std::vector<std::vector<int>> stage_card; // card of previous sphere per dim
    int circle_card(int k) const { return k + 2 - 1; } // k + 1 cells
};
SphereModel sphere_model(int n, int dim_top);

/* Two-point sphere of dimension 0 (basepoint + free point). */
PSSet sphere0(int dim_top);

/* Coordinate permutation action: cell -> class of permuted tuple. */
SMap sphere_perm_action(const SphereModel& S, const Perm& p);

/* Concatenation: smash(S^m, S^n) -> S^{m+n} identifying coordinate tuples.
   Returns the map from the freshly built smash; also hands back that smash. */
struct SphereConcat {
    SmashResult sm;
    SMap iso;
};
SphereConcat sphere_concat(const SphereModel& Sm, const SphereModel& Sn, const SphereModel& Smn);

} // namespace dspace
