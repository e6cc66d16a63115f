#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

/* Exact integer linear algebra: dense Smith normal form with transform
   tracking, integer kernels and solves, finitely presented abelian groups
   with canonical invariant factors, homology of presented chain complexes,
   and a sparse elimination engine for large, unit-pivot-rich matrices. */

namespace dspace {

using i64 = long long;

/* ---------------------------------------------------------------- dense */

struct Mat {
    int r = 0, c = 0;
    std::vector<i64> a; // row-major

    Mat() = default;
    Mat(int r_, int c_) : r(r_), c(c_), a((size_t)r_ * c_, 0) {}

    i64& at(int i, int j) { return a[(size_t)i * c + j]; }
    i64 at(int i, int j) const { return a[(size_t)i * c + j]; }

    static Mat id(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static Mat diag(const std::vector<i64>& d) {
        Mat m((int)d.size(), (int)d.size());
        for (int i = 0; i < (int)d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }
    bool operator==(const Mat& o) const { return r == o.r && c == o.c && a == o.a; }
};

Mat mat_mul(const Mat& A, const Mat& B);
Mat mat_add(const Mat& A, const Mat& B);
Mat mat_sub(const Mat& A, const Mat& B);
Mat mat_transpose(const Mat& A);
Mat mat_hstack(const Mat& A, const Mat& B); // [A | B], rows must agree (empty allowed)
Mat mat_vstack(const Mat& A, const Mat& B);
Mat mat_cols(const Mat& A, const std::vector<int>& idx);
bool mat_is_zero(const Mat& A);
std::string mat_to_string(const Mat& A);

/* Smith normal form. diag holds the nonzero invariant factors d1 | d2 | ...
   (all positive); rank = diag.size(). */
struct Snf {
    std::vector<i64> diag;
    int rank = 0;
};

/* Full version also returns unimodular U (r x r), V (c x c) with U*A*V = D. */
struct SnfFull {
    Snf s;
    Mat U, V;
};

Snf snf(Mat A);
SnfFull snf_full(Mat A);

/* Basis of the integer kernel lattice {x : A x = 0}; columns of the result. */
Mat kernel_basis(const Mat& A);

/* Solve A X = B over the integers; nullopt when unsolvable. */
std::optional<Mat> solve_mat(const Mat& A, const Mat& B);

/* ------------------------------------------- finitely generated ab. groups */

/* Canonical form: torsion invariant factors (each > 1, ascending divisibility)
   followed by one 0 per free summand. */
struct FinAb {
    std::vector<i64> inv;

    bool operator==(const FinAb& o) const { return inv == o.inv; }
    bool trivial() const { return inv.empty(); }
    /* group order; 0 when infinite */
    i64 order() const {
        i64 n = 1;
        for (i64 d : inv) {
            if (d == 0) return 0;
            n *= d;
        }
        return n;
    }
    std::string to_string() const;
};

/* Cokernel Z^gens / (column lattice of rels). rels may have 0 columns. */
FinAb finab_from_presentation(int gens, const Mat& rels);

/* Map of presented groups f : A -> B (matrix gensB x gensA).
   Well-definedness: f * relsA lands in the lattice of relsB. */
bool map_well_defined_presented(const Mat& f, const Mat& relsA, const Mat& relsB);
/* Surjectivity: coker [f | relsB] trivial. */
bool map_surjective_presented(const Mat& f, const Mat& relsB);
/* Isomorphism test for f.g. abelian groups: surjective + equal invariants
   suffices (such groups are Hopfian: a surjective self-map-up-to-iso is iso). */
bool map_iso_presented(const Mat& f, int gensA, const Mat& relsA, const Mat& relsB);

/* ------------------------------------------------ presented chain complex */

/* Degrees 0..top. bnd[k] : gens[k-1] x gens[k] (k >= 1; bnd[0] ignored).
   rel[k] : gens[k] x r_k, columns are relators; chains in degree k form
   Z^{gens[k]} / rel[k]. Boundaries must carry relators into relators. */
struct PresCx {
    int top = 0;
    std::vector<int> gens;
    std::vector<Mat> bnd;
    std::vector<Mat> rel; // may be empty matrices

    static PresCx free_cx(const std::vector<int>& g, const std::vector<Mat>& b) {
        PresCx p;
        p.top = (int)g.size() - 1;
        p.gens = g;
        p.bnd = b;
        p.rel.assign(g.size(), Mat());
        for (size_t k = 0; k < g.size(); ++k) p.rel[k] = Mat(g[k], 0);
        return p;
    }
};

/* H_k for k = 0..kmax. Needs kmax + 1 <= top so the boundary image in the top
   requested degree is complete; otherwise InsufficientDimension. */
std::vector<FinAb> pres_homology(const PresCx& cx, int kmax);

/* Homology with cyclic coefficients Z/m (m >= 2) derived from the integral
   answer in degrees k and k-1 by universal coefficients. */
FinAb coeff_homology(const FinAb& hk, const FinAb& hk_minus_1, i64 m);

/* Presentation of H_k: columns of Z generate the cycle lattice inside chain
   degree k; rels presents H_k on those generators. */
struct HPres {
    Mat Z;
    Mat rels;
};
HPres pres_homology_at(const PresCx& cx, int k);

/* Matrix of the map induced on homology presentations by a chain map in
   degree k (target coordinates of each source generator). */
Mat homology_induced_map(const HPres& A, const HPres& B, const Mat& chainmap_k);

/* --------------------------------------------------------------- sparse */

struct SpMat {
    int rows = 0, cols = 0;
    std::vector<std::vector<std::pair<int, i64>>> col; // (row, val), val != 0

    SpMat() = default;
    SpMat(int r_, int c_) : rows(r_), cols(c_), col(c_) {}
    void add(int i, int j, i64 v) {
        if (v != 0) col[j].push_back({i, v});
    }
};

struct SpInv {
    std::vector<i64> factors; // canonical nonzero invariant factors (incl. 1s count)
    int rank = 0;             // = factors.size()
};

/* Invariant factors of a sparse integer matrix: greedy unit-pivot elimination
   with min-fill ordering, then a dense core (guarded by dense_cap). */
SpInv sp_invariants(const SpMat& A, int dense_cap = 900);

/* Cokernel Z^rows / columns(A) as canonical FinAb, via sp_invariants. */
FinAb sp_finab(const SpMat& A, int dense_cap = 900);

/* ------------------------------------------------------------ union-find */

struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) {
        for (int i = 0; i < n; ++i) p[i] = i;
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b); // keep least index as root: canonical reps
        p[b] = a;
        return true;
    }
};

/* ------------------------------------------------------------ permutations */

using Perm = std::vector<int>; // p[i] = image of i, 0-based

Perm perm_id(int n);
Perm perm_compose(const Perm& p, const Perm& q); // (p.q)[i] = p[q[i]]
Perm perm_inverse(const Perm& p);
int perm_sign(const Perm& p);
Perm perm_block_sum(const Perm& p, const Perm& q);
std::vector<Perm> all_perms(int n);   // lexicographic
int perm_index(const Perm& p);        // rank in lexicographic order

} // namespace dspace
