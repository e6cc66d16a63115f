#include "dspace/sset.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <string>

namespace dspace {

/* ------------------------------------------------------------ structure */

static void fail(const std::string& m) { throw LawViolation("sset: " + m); }

void FinSSet::validate() const {
    if ((int)card.size() != dim_top + 1) fail("card size");
    if ((int)face.size() != dim_top + 1 || (int)degen.size() != dim_top + 1) fail("table size");
    for (int k = 1; k <= dim_top; ++k) {
        if ((int)face[k].size() != k + 1) fail("face arity at dim " + std::to_string(k));
        for (int i = 0; i <= k; ++i) {
            if ((int)face[k][i].size() != card[k]) fail("face table size");
            for (int x : face[k][i])
                if (x < 0 || x >= card[k - 1]) fail("face out of range");
        }
    }
    for (int k = 0; k < dim_top; ++k) {
        if ((int)degen[k].size() != k + 1) fail("degen arity at dim " + std::to_string(k));
        for (int i = 0; i <= k; ++i) {
            if ((int)degen[k][i].size() != card[k]) fail("degen table size");
            for (int x : degen[k][i])
                if (x < 0 || x >= card[k + 1]) fail("degen out of range");
        }
    }
    // d_i d_j = d_{j-1} d_i (i < j)
    for (int k = 2; k <= dim_top; ++k)
        for (int j = 1; j <= k; ++j)
            for (int i = 0; i < j; ++i)
                for (int x = 0; x < card[k]; ++x)
                    if (face[k - 1][i][face[k][j][x]] != face[k - 1][j - 1][face[k][i][x]])
                        fail("dd identity at dim " + std::to_string(k));
    // d_i s_j relations
    for (int k = 0; k < dim_top; ++k)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= k + 1; ++i)
                for (int x = 0; x < card[k]; ++x) {
                    int lhs = face[k + 1][i][degen[k][j][x]];
                    int rhs;
                    if (i < j)
                        rhs = k >= 1 ? degen[k - 1][j - 1][face[k][i][x]] : -1;
                    else if (i == j || i == j + 1)
                        rhs = x;
                    else
                        rhs = k >= 1 ? degen[k - 1][j][face[k][i - 1][x]] : -1;
                    if (rhs == -1) fail("ds identity degenerate case");
                    if (lhs != rhs) fail("ds identity at dim " + std::to_string(k));
                }
    // s_i s_j = s_{j+1} s_i (i <= j)
    for (int k = 0; k + 2 <= dim_top; ++k)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= j; ++i)
                for (int x = 0; x < card[k]; ++x)
                    if (degen[k + 1][i][degen[k][j][x]] != degen[k + 1][j + 1][degen[k][i][x]])
                        fail("ss identity at dim " + std::to_string(k));
}

bool FinSSet::is_degenerate(int k, int x) const {
    if (k == 0) return false;
    for (int i = 0; i < k; ++i)
        if (degen[k - 1][i][face[k][i + 1][x]] == x) return true;
    return false;
}

std::vector<std::vector<int>> FinSSet::nondeg_cells() const {
    std::vector<std::vector<int>> nd(dim_top + 1);
    for (int k = 0; k <= dim_top; ++k)
        for (int x = 0; x < card[k]; ++x)
            if (!is_degenerate(k, x)) nd[k].push_back(x);
    return nd;
}

int FinSSet::vertex0(int k, int x) const {
    for (int j = k; j >= 1; --j) x = face[j][j][x];
    return x;
}

int FinSSet::degen_word(int k, int x, int up) const {
    for (int t = 0; t < up; ++t) x = degen[k + t][0][x];
    return x;
}

/* ----------------------------------------------------------------- maps */

void validate_smap(const FinSSet& X, const FinSSet& Y, const SMap& f) {
    int K = std::min(X.dim_top, Y.dim_top);
    if ((int)f.comp.size() != K + 1) fail("smap: table count");
    for (int k = 0; k <= K; ++k) {
        if ((int)f.comp[k].size() != X.card[k]) fail("smap: table size");
        for (int v : f.comp[k])
            if (v < 0 || v >= Y.card[k]) fail("smap: out of range");
    }
    for (int k = 1; k <= K; ++k)
        for (int i = 0; i <= k; ++i)
            for (int x = 0; x < X.card[k]; ++x)
                if (Y.face[k][i][f.comp[k][x]] != f.comp[k - 1][X.face[k][i][x]])
                    fail("smap: face compatibility at dim " + std::to_string(k));
    for (int k = 0; k < K; ++k)
        for (int i = 0; i <= k; ++i)
            for (int x = 0; x < X.card[k]; ++x)
                if (Y.degen[k][i][f.comp[k][x]] != f.comp[k + 1][X.degen[k][i][x]])
                    fail("smap: degeneracy compatibility at dim " + std::to_string(k));
}

SMap smap_id(const FinSSet& X) {
    SMap f;
    f.comp.resize(X.dim_top + 1);
    for (int k = 0; k <= X.dim_top; ++k) {
        f.comp[k].resize(X.card[k]);
        for (int x = 0; x < X.card[k]; ++x) f.comp[k][x] = x;
    }
    return f;
}

SMap smap_compose(const SMap& g, const SMap& f) {
    SMap h;
    int K = std::min(g.comp.size(), f.comp.size());
    h.comp.resize(K);
    for (int k = 0; k < K; ++k) {
        h.comp[k].resize(f.comp[k].size());
        for (size_t x = 0; x < f.comp[k].size(); ++x) h.comp[k][x] = g.comp[k][f.comp[k][x]];
    }
    return h;
}

bool smap_equal(const SMap& f, const SMap& g) { return f.comp == g.comp; }

bool smap_bijective(const FinSSet& X, const FinSSet& Y, const SMap& f) {
    int K = std::min(X.dim_top, Y.dim_top);
    for (int k = 0; k <= K; ++k) {
        if (X.card[k] != Y.card[k]) return false;
        std::vector<char> hit(Y.card[k], 0);
        for (int v : f.comp[k]) {
            if (hit[v]) return false;
            hit[v] = 1;
        }
    }
    return true;
}

/* ------------------------------------------------------------ operations */

FinSSet sset_point(int dim_top) {
    FinSSet X;
    X.dim_top = dim_top;
    X.card.assign(dim_top + 1, 1);
    X.face.resize(dim_top + 1);
    X.degen.resize(dim_top + 1);
    for (int k = 1; k <= dim_top; ++k) X.face[k].assign(k + 1, std::vector<int>(1, 0));
    for (int k = 0; k < dim_top; ++k) X.degen[k].assign(k + 1, std::vector<int>(1, 0));
    return X;
}

static void monotone_seqs(int len, int lo, int hi, std::vector<int>& cur,
                          std::vector<std::vector<int>>& out) {
    if ((int)cur.size() == len) {
        out.push_back(cur);
        return;
    }
    for (int v = lo; v <= hi; ++v) {
        cur.push_back(v);
        monotone_seqs(len, v, hi, cur, out);
        cur.pop_back();
    }
}

FinSSet standard_simplex(int n, int dim_top) {
    std::vector<std::vector<std::vector<int>>> cells(dim_top + 1);
    std::vector<std::map<std::vector<int>, int>> idx(dim_top + 1);
    for (int k = 0; k <= dim_top; ++k) {
        std::vector<int> cur;
        monotone_seqs(k + 1, 0, n, cur, cells[k]);
        for (int c = 0; c < (int)cells[k].size(); ++c) idx[k][cells[k][c]] = c;
    }
    FinSSet X;
    X.dim_top = dim_top;
    X.card.resize(dim_top + 1);
    X.face.resize(dim_top + 1);
    X.degen.resize(dim_top + 1);
    for (int k = 0; k <= dim_top; ++k) X.card[k] = (int)cells[k].size();
    for (int k = 1; k <= dim_top; ++k) {
        X.face[k].assign(k + 1, std::vector<int>(X.card[k]));
        for (int x = 0; x < X.card[k]; ++x)
            for (int i = 0; i <= k; ++i) {
                std::vector<int> v = cells[k][x];
                v.erase(v.begin() + i);
                X.face[k][i][x] = idx[k - 1][v];
            }
    }
    for (int k = 0; k < dim_top; ++k) {
        X.degen[k].assign(k + 1, std::vector<int>(X.card[k]));
        for (int x = 0; x < X.card[k]; ++x)
            for (int i = 0; i <= k; ++i) {
                std::vector<int> v = cells[k][x];
                v.insert(v.begin() + i, v[i]);
                X.degen[k][i][x] = idx[k + 1][v];
            }
    }
    return X;
}

int prod_index(const FinSSet& Y, int k, int x, int y) { return x * Y.card[k] + y; }

std::pair<int, int> prod_split(const FinSSet& Y, int k, int p) {
    return {p / Y.card[k], p % Y.card[k]};
}

FinSSet sset_product(const FinSSet& X, const FinSSet& Y) {
    FinSSet P;
    P.dim_top = std::min(X.dim_top, Y.dim_top);
    P.card.resize(P.dim_top + 1);
    P.face.resize(P.dim_top + 1);
    P.degen.resize(P.dim_top + 1);
    for (int k = 0; k <= P.dim_top; ++k) P.card[k] = X.card[k] * Y.card[k];
    for (int k = 1; k <= P.dim_top; ++k) {
        P.face[k].assign(k + 1, std::vector<int>(P.card[k]));
        for (int x = 0; x < X.card[k]; ++x)
            for (int y = 0; y < Y.card[k]; ++y)
                for (int i = 0; i <= k; ++i)
                    P.face[k][i][x * Y.card[k] + y] =
                        X.face[k][i][x] * Y.card[k - 1] + Y.face[k][i][y];
    }
    for (int k = 0; k < P.dim_top; ++k) {
        P.degen[k].assign(k + 1, std::vector<int>(P.card[k]));
        for (int x = 0; x < X.card[k]; ++x)
            for (int y = 0; y < Y.card[k]; ++y)
                for (int i = 0; i <= k; ++i)
                    P.degen[k][i][x * Y.card[k] + y] =
                        X.degen[k][i][x] * Y.card[k + 1] + Y.degen[k][i][y];
    }
    return P;
}

FinSSet sset_disjoint_union(const FinSSet& X, const FinSSet& Y) {
    FinSSet U;
    U.dim_top = std::min(X.dim_top, Y.dim_top);
    U.card.resize(U.dim_top + 1);
    U.face.resize(U.dim_top + 1);
    U.degen.resize(U.dim_top + 1);
    for (int k = 0; k <= U.dim_top; ++k) U.card[k] = X.card[k] + Y.card[k];
    for (int k = 1; k <= U.dim_top; ++k) {
        U.face[k].assign(k + 1, std::vector<int>(U.card[k]));
        for (int i = 0; i <= k; ++i) {
            for (int x = 0; x < X.card[k]; ++x) U.face[k][i][x] = X.face[k][i][x];
            for (int y = 0; y < Y.card[k]; ++y)
                U.face[k][i][X.card[k] + y] = X.card[k - 1] + Y.face[k][i][y];
        }
    }
    for (int k = 0; k < U.dim_top; ++k) {
        U.degen[k].assign(k + 1, std::vector<int>(U.card[k]));
        for (int i = 0; i <= k; ++i) {
            for (int x = 0; x < X.card[k]; ++x) U.degen[k][i][x] = X.degen[k][i][x];
            for (int y = 0; y < Y.card[k]; ++y)
                U.degen[k][i][X.card[k] + y] = X.card[k + 1] + Y.degen[k][i][y];
        }
    }
    return U;
}

Quotient sset_quotient(const FinSSet& X, const std::vector<std::vector<std::pair<int, int>>>& gens) {
    std::vector<UF> uf;
    for (int k = 0; k <= X.dim_top; ++k) uf.emplace_back(X.card[k]);
    std::deque<std::array<int, 3>> work;
    for (int k = 0; k < (int)gens.size(); ++k)
        for (auto& [a, b] : gens[k]) work.push_back({k, a, b});
    while (!work.empty()) {
        auto [k, a, b] = work.front();
        work.pop_front();
        if (!uf[k].unite(a, b)) continue;
        if (k >= 1)
            for (int i = 0; i <= k; ++i) work.push_back({k - 1, X.face[k][i][a], X.face[k][i][b]});
        if (k < X.dim_top)
            for (int i = 0; i <= k; ++i) work.push_back({k + 1, X.degen[k][i][a], X.degen[k][i][b]});
    }
    Quotient Q;
    Q.proj.resize(X.dim_top + 1);
    Q.section.resize(X.dim_top + 1);
    Q.q.dim_top = X.dim_top;
    Q.q.card.resize(X.dim_top + 1);
    Q.q.face.resize(X.dim_top + 1);
    Q.q.degen.resize(X.dim_top + 1);
    for (int k = 0; k <= X.dim_top; ++k) {
        Q.proj[k].assign(X.card[k], -1);
        for (int x = 0; x < X.card[k]; ++x)
            if (uf[k].find(x) == x) {
                Q.proj[k][x] = (int)Q.section[k].size();
                Q.section[k].push_back(x);
            }
        for (int x = 0; x < X.card[k]; ++x) Q.proj[k][x] = Q.proj[k][uf[k].find(x)];
        Q.q.card[k] = (int)Q.section[k].size();
    }
    for (int k = 1; k <= X.dim_top; ++k) {
        Q.q.face[k].assign(k + 1, std::vector<int>(Q.q.card[k]));
        for (int c = 0; c < Q.q.card[k]; ++c)
            for (int i = 0; i <= k; ++i)
                Q.q.face[k][i][c] = Q.proj[k - 1][X.face[k][i][Q.section[k][c]]];
    }
    for (int k = 0; k < X.dim_top; ++k) {
        Q.q.degen[k].assign(k + 1, std::vector<int>(Q.q.card[k]));
        for (int c = 0; c < Q.q.card[k]; ++c)
            for (int i = 0; i <= k; ++i)
                Q.q.degen[k][i][c] = Q.proj[k + 1][X.degen[k][i][Q.section[k][c]]];
    }
    Q.q.validate();
    return Q;
}

SmashResult smash(const PSSet& X, const PSSet& Y) {
    FinSSet P = sset_product(X.s, Y.s);
    std::vector<std::vector<std::pair<int, int>>> gens(P.dim_top + 1);
    for (int k = 0; k <= P.dim_top; ++k) {
        int bx = X.bp_cell(k), by = Y.bp_cell(k);
        int base = prod_index(Y.s, k, bx, by);
        for (int x = 0; x < X.s.card[k]; ++x) gens[k].push_back({prod_index(Y.s, k, x, by), base});
        for (int y = 0; y < Y.s.card[k]; ++y) gens[k].push_back({prod_index(Y.s, k, bx, y), base});
    }
    Quotient Q = sset_quotient(P, gens);
    SmashResult S;
    S.s.s = std::move(Q.q);
    S.s.bp = Q.proj[0][prod_index(Y.s, 0, X.bp, Y.bp)];
    S.proj = std::move(Q.proj);
    S.section = std::move(Q.section);
    return S;
}

PSSet adjoin_basepoint(const FinSSet& X) {
    PSSet P;
    FinSSet& Z = P.s;
    Z.dim_top = X.dim_top;
    Z.card.resize(X.dim_top + 1);
    Z.face.resize(X.dim_top + 1);
    Z.degen.resize(X.dim_top + 1);
    for (int k = 0; k <= X.dim_top; ++k) Z.card[k] = X.card[k] + 1;
    for (int k = 1; k <= X.dim_top; ++k) {
        Z.face[k].assign(k + 1, std::vector<int>(Z.card[k]));
        for (int i = 0; i <= k; ++i) {
            Z.face[k][i][0] = 0;
            for (int x = 0; x < X.card[k]; ++x) Z.face[k][i][x + 1] = X.face[k][i][x] + 1;
        }
    }
    for (int k = 0; k < X.dim_top; ++k) {
        Z.degen[k].assign(k + 1, std::vector<int>(Z.card[k]));
        for (int i = 0; i <= k; ++i) {
            Z.degen[k][i][0] = 0;
            for (int x = 0; x < X.card[k]; ++x) Z.degen[k][i][x + 1] = X.degen[k][i][x] + 1;
        }
    }
    P.bp = 0;
    return P;
}

Pi0 pi0(const FinSSet& X) {
    UF uf(X.card[0]);
    if (X.dim_top >= 1)
        for (int e = 0; e < X.card[1]; ++e) uf.unite(X.face[1][0][e], X.face[1][1][e]);
    Pi0 p;
    p.comp.assign(X.card[0], -1);
    for (int v = 0; v < X.card[0]; ++v)
        if (uf.find(v) == v) p.comp[v] = p.count++;
    for (int v = 0; v < X.card[0]; ++v) p.comp[v] = p.comp[uf.find(v)];
    return p;
}

/* --------------------------------------------------------------- chains */

static ChainCx chains_impl(const FinSSet& X, int through, int skip0) {
    if (through > X.dim_top)
        throw InsufficientDimension("chains: requested degree " + std::to_string(through) +
                                    " beyond stored dimension " + std::to_string(X.dim_top));
    ChainCx c;
    c.top = through;
    c.rank.resize(through + 1);
    c.ndcell.resize(through + 1);
    c.ndindex.resize(through + 1);
    for (int k = 0; k <= through; ++k) {
        c.ndindex[k].assign(X.card[k], -1);
        for (int x = 0; x < X.card[k]; ++x) {
            if (k == 0 && x == skip0) continue;
            if (X.is_degenerate(k, x)) continue;
            c.ndindex[k][x] = (int)c.ndcell[k].size();
            c.ndcell[k].push_back(x);
        }
        c.rank[k] = (int)c.ndcell[k].size();
    }
    c.bnd.resize(through + 1);
    for (int k = 1; k <= through; ++k) {
        c.bnd[k] = Mat(c.rank[k - 1], c.rank[k]);
        for (int j = 0; j < c.rank[k]; ++j) {
            int x = c.ndcell[k][j];
            for (int i = 0; i <= k; ++i) {
                int fidx = c.ndindex[k - 1][X.face[k][i][x]];
                if (fidx >= 0) c.bnd[k].at(fidx, j) += (i % 2 == 0) ? 1 : -1;
            }
        }
    }
    return c;
}

ChainCx chains(const FinSSet& X, int through_dim) { return chains_impl(X, through_dim, -1); }

ChainCx reduced_chains(const PSSet& X, int through_dim) {
    return chains_impl(X.s, through_dim, X.bp);
}

std::vector<Mat> chain_map(const ChainCx& cx, const ChainCx& cy, const SMap& f) {
    int K = std::min(cx.top, cy.top);
    std::vector<Mat> out(K + 1);
    for (int k = 0; k <= K; ++k) {
        out[k] = Mat(cy.rank[k], cx.rank[k]);
        for (int j = 0; j < cx.rank[k]; ++j) {
            int y = f.comp[k][cx.ndcell[k][j]];
            int yi = cy.ndindex[k][y];
            if (yi >= 0) out[k].at(yi, j) += 1;
        }
    }
    return out;
}

static std::vector<FinAb> homology_of_chaincx(const ChainCx& c, int kmax, i64 m) {
    PresCx p = PresCx::free_cx(c.rank, c.bnd);
    auto H = pres_homology(p, kmax);
    if (m == 0) return H;
    std::vector<FinAb> out;
    for (int k = 0; k <= kmax; ++k) out.push_back(coeff_homology(H[k], k ? H[k - 1] : FinAb{}, m));
    return out;
}

std::vector<FinAb> sset_homology(const FinSSet& X, int kmax, i64 coeff_mod) {
    if (kmax + 1 > X.dim_top)
        throw InsufficientDimension("homology: need dimension " + std::to_string(kmax + 1) +
                                    " but complex stores " + std::to_string(X.dim_top));
    return homology_of_chaincx(chains(X, kmax + 1), kmax, coeff_mod);
}

std::vector<FinAb> sset_reduced_homology(const PSSet& X, int kmax, i64 coeff_mod) {
    if (kmax + 1 > X.s.dim_top)
        throw InsufficientDimension("reduced homology: need dimension " + std::to_string(kmax + 1) +
                                    " but complex stores " + std::to_string(X.s.dim_top));
    return homology_of_chaincx(reduced_chains(X, kmax + 1), kmax, coeff_mod);
}

/* --------------------------------------------------- presented complexes */

namespace {

struct SurjTable {
    // all monotone surjections [k] ->> [j], lex ordered, with index lookup
    std::vector<std::vector<std::vector<std::vector<int>>>> list; // [k][j] -> seqs
    std::vector<std::vector<std::map<std::vector<int>, int>>> idx;

    explicit SurjTable(int kmax) {
        list.resize(kmax + 1);
        idx.resize(kmax + 1);
        for (int k = 0; k <= kmax; ++k) {
            list[k].resize(k + 1);
            idx[k].resize(k + 1);
            for (int j = 0; j <= k; ++j) {
                std::vector<int> cur;
                gen(k + 1, j, cur, list[k][j]);
                for (int t = 0; t < (int)list[k][j].size(); ++t) idx[k][j][list[k][j][t]] = t;
            }
        }
    }
    // monotone surjections start at 0, step by 0 or +1, end at j
    static void gen(int len, int j, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
        if ((int)cur.size() == len) {
            if (cur.back() == j) out.push_back(cur);
            return;
        }
        if (cur.empty()) {
            cur.push_back(0);
            gen(len, j, cur, out);
            cur.pop_back();
            return;
        }
        int v = cur.back();
        cur.push_back(v);
        gen(len, j, cur, out);
        cur.pop_back();
        if (v + 1 <= j) {
            cur.push_back(v + 1);
            gen(len, j, cur, out);
            cur.pop_back();
        }
    }
};

} // namespace

FromCells sset_from_cells(const PresentedSSet& data) {
    int D = data.dim_top;
    SurjTable st(D);
    std::vector<int> ncore(D + 1, 0);
    for (int k = 0; k <= D && k < (int)data.cells.size(); ++k) ncore[k] = (int)data.cells[k].size();

    // cell id layout per dim k: ascending (j, core, etaIdx)
    std::vector<std::vector<int>> base(D + 1); // base[k][j]
    std::vector<int> card(D + 1, 0);
    for (int k = 0; k <= D; ++k) {
        base[k].resize(k + 1, 0);
        int acc = 0;
        for (int j = 0; j <= k; ++j) {
            base[k][j] = acc;
            acc += ncore[j] * (int)st.list[k][j].size();
        }
        card[k] = acc;
    }
    auto cell_id = [&](int k, int j, int c, const std::vector<int>& eta) {
        return base[k][j] + c * (int)st.list[k][j].size() + st.idx[k][j].at(eta);
    };
    auto cell_of = [&](int k, int id) {
        int j = k;
        while (j > 0 && base[k][j] > id) --j;
        int rel = id - base[k][j];
        int ns = (int)st.list[k][j].size();
        return std::tuple<int, int, const std::vector<int>&>(j, rel / ns, st.list[k][j][rel % ns]);
    };

    // face data sanity
    for (int k = 1; k <= D; ++k)
        for (int c = 0; c < ncore[k]; ++c) {
            if ((int)data.cells[k][c].size() != k + 1) fail("from_cells: face count");
            for (auto& f : data.cells[k][c]) {
                if (f.jdim < 0 || f.jdim > k - 1 || f.core < 0 || f.core >= ncore[f.jdim])
                    fail("from_cells: face core out of range");
                if ((int)f.eta.size() != k || !st.idx[k - 1][f.jdim].count(f.eta))
                    fail("from_cells: face degeneracy word invalid");
            }
        }

    FromCells out;
    FinSSet& X = out.s;
    X.dim_top = D;
    X.card = card;
    X.face.resize(D + 1);
    X.degen.resize(D + 1);
    for (int k = 1; k <= D; ++k) {
        X.face[k].assign(k + 1, std::vector<int>(card[k]));
        for (int id = 0; id < card[k]; ++id) {
            auto [j, c, eta] = cell_of(k, id);
            for (int i = 0; i <= k; ++i) {
                std::vector<int> g = eta;
                g.erase(g.begin() + i);
                int v = eta[i];
                bool still = (i > 0 && eta[i - 1] == v) || (i < k && eta[i + 1] == v);
                if (still || j == 0) {
                    X.face[k][i][id] = cell_id(k - 1, j, c, g);
                } else {
                    const SymCell& fc = data.cells[j][c][v];
                    std::vector<int> comp(k);
                    for (int t = 0; t < k; ++t) comp[t] = fc.eta[g[t] > v ? g[t] - 1 : g[t]];
                    X.face[k][i][id] = cell_id(k - 1, fc.jdim, fc.core, comp);
                }
            }
        }
    }
    for (int k = 0; k < D; ++k) {
        X.degen[k].assign(k + 1, std::vector<int>(card[k]));
        for (int id = 0; id < card[k]; ++id) {
            auto [j, c, eta] = cell_of(k, id);
            for (int i = 0; i <= k; ++i) {
                std::vector<int> e2 = eta;
                e2.insert(e2.begin() + i, eta[i]);
                X.degen[k][i][id] = cell_id(k + 1, j, c, e2);
            }
        }
    }
    X.validate();
    out.core_cell.resize(D + 1);
    for (int k = 0; k <= D; ++k) {
        out.core_cell[k].resize(ncore[k]);
        for (int c = 0; c < ncore[k]; ++c) out.core_cell[k][c] = cell_id(k, k, c, st.list[k][k][0]);
    }
    return out;
}

/* -------------------------------------------------------------- spheres */

PSSet circle(int dim_top) {
    FinSSet d1 = standard_simplex(1, dim_top);
    std::vector<std::vector<std::pair<int, int>>> gens(dim_top + 1);
    gens[0].push_back({0, 1});
    Quotient Q = sset_quotient(d1, gens);
    return PSSet{std::move(Q.q), Q.proj[0][0]};
}

PSSet sphere0(int dim_top) {
    FinSSet X = sset_disjoint_union(sset_point(dim_top), sset_point(dim_top));
    return PSSet{std::move(X), 0};
}

SphereModel sphere_model(int n, int dim_top) {
    if (n < 1) throw Error("sphere_model: n >= 1 required");
    SphereModel M;
    M.n = n;
    PSSet circ = circle(dim_top);
    PSSet cur = circ;
    M.rep.resize(dim_top + 1);
    for (int k = 0; k <= dim_top; ++k) {
        M.rep[k].resize(cur.s.card[k]);
        for (int c = 0; c < cur.s.card[k]; ++c) M.rep[k][c] = {c};
    }
    for (int j = 2; j <= n; ++j) {
        SmashResult sm = smash(cur, circ);
        M.stage_card.push_back(cur.s.card);
        M.stage_proj.push_back(sm.proj);
        std::vector<std::vector<std::vector<int>>> rep2(dim_top + 1);
        for (int k = 0; k <= dim_top; ++k) {
            rep2[k].resize(sm.s.s.card[k]);
            for (int c = 0; c < sm.s.s.card[k]; ++c) {
                auto [a, b] = prod_split(circ.s, k, sm.section[k][c]);
                rep2[k][c] = M.rep[k][a];
                rep2[k][c].push_back(b);
            }
        }
        M.rep = std::move(rep2);
        cur = std::move(sm.s);
    }
    M.s = std::move(cur);
    return M;
}

int SphereModel::class_of(int k, const std::vector<int>& tuple) const {
    int c = tuple[0];
    for (int j = 1; j < n; ++j) c = stage_proj[j - 1][k][c * (k + 1) + tuple[j]];
    return c;
}

SMap sphere_perm_action(const SphereModel& S, const Perm& p) {
    SMap f;
    int D = S.s.s.dim_top;
    f.comp.resize(D + 1);
    for (int k = 0; k <= D; ++k) {
        f.comp[k].resize(S.s.s.card[k]);
        for (int c = 0; c < S.s.s.card[k]; ++c) {
            const auto& t = S.rep[k][c];
            std::vector<int> tp(S.n);
            for (int i = 0; i < S.n; ++i) tp[p[i]] = t[i];
            f.comp[k][c] = S.class_of(k, tp);
        }
    }
    return f;
}

SphereConcat sphere_concat(const SphereModel& Sm, const SphereModel& Sn, const SphereModel& Smn) {
    SphereConcat out;
    out.sm = smash(Sm.s, Sn.s);
    int D = out.sm.s.s.dim_top;
    out.iso.comp.resize(D + 1);
    for (int k = 0; k <= D; ++k) {
        out.iso.comp[k].resize(out.sm.s.s.card[k]);
        for (int c = 0; c < out.sm.s.s.card[k]; ++c) {
            auto [a, b] = prod_split(Sn.s.s, k, out.sm.section[k][c]);
            std::vector<int> t = Sm.rep[k][a];
            for (int v : Sn.rep[k][b]) t.push_back(v);
            out.iso.comp[k][c] = Smn.class_of(k, t);
        }
    }
    return out;
}

bool pi0_map_bijective(const FinSSet& X, const FinSSet& Y, const SMap& f) {
    Pi0 px = pi0(X), py = pi0(Y);
    if (px.count != py.count) return false;
    std::vector<int> img(px.count, -1);
    std::vector<char> hit(py.count, 0);
    for (int v = 0; v < X.card[0]; ++v) {
        int a = px.comp[v], b = py.comp[f.comp[0][v]];
        if (img[a] == -1) {
            if (hit[b]) return false;
            img[a] = b;
            hit[b] = 1;
        } else if (img[a] != b)
            return false;
    }
    for (int c = 0; c < px.count; ++c)
        if (img[c] == -1) return false;
    return true;
}

EquivCheck weak_equiv_surrogate(const FinSSet& X, const FinSSet& Y, const SMap& f, int kmax) {
    validate_smap(X, Y, f);
    EquivCheck R;
    R.pi0_bijective = pi0_map_bijective(X, Y, f);
    ChainCx cx = chains(X, kmax + 1), cy = chains(Y, kmax + 1);
    auto cm = chain_map(cx, cy, f);
    PresCx px = PresCx::free_cx(cx.rank, cx.bnd), py = PresCx::free_cx(cy.rank, cy.bnd);
    for (int k = 0; k <= kmax; ++k) {
        HPres hs = pres_homology_at(px, k), ht = pres_homology_at(py, k);
        Mat W = homology_induced_map(hs, ht, cm[k]);
        R.h_src.push_back(finab_from_presentation(hs.Z.c, hs.rels));
        R.h_dst.push_back(finab_from_presentation(ht.Z.c, ht.rels));
        R.h_iso.push_back(map_iso_presented(W, hs.Z.c, hs.rels, ht.rels));
    }
    return R;
}

SMap extend_map_from_nondeg(const FinSSet& X, const FinSSet& Y,
                            const std::vector<std::map<int, int>>& nd) {
    SMap f;
    f.comp.resize(X.dim_top + 1);
    for (int k = 0; k <= X.dim_top; ++k) {
        f.comp[k].assign(X.card[k], -1);
        for (int x = 0; x < X.card[k]; ++x) {
            if (!X.is_degenerate(k, x)) {
                auto it = nd[k].find(x);
                if (it == nd[k].end()) throw Error("extend_map_from_nondeg: missing image");
                f.comp[k][x] = it->second;
                continue;
            }
            for (int i = 0; i < k; ++i) {
                int lower = X.face[k][i + 1][x];
                if (X.degen[k - 1][i][lower] == x) {
                    f.comp[k][x] = Y.degen[k - 1][i][f.comp[k - 1][lower]];
                    break;
                }
            }
            if (f.comp[k][x] < 0) throw Error("extend_map_from_nondeg: no section found");
        }
    }
    validate_smap(X, Y, f);
    return f;
}

} // namespace dspace
