#include "dspace/barcat.hpp"

#include <algorithm>
#include <tuple>

namespace dspace {

/* ------------------------------------------------------------ categories */

void FinCat::finalize() {
    out.assign(nobj, {});
    into.assign(nobj, {});
    for (int f = 0; f < (int)mor.size(); ++f) {
        out[mor[f].src].push_back(f);
        into[mor[f].dst].push_back(f);
    }
}

void FinCat::validate() const {
    int m = (int)mor.size();
    if ((int)idm.size() != nobj || (int)comp.size() != m) throw LawViolation("cat: table sizes");
    if ((int)out.size() != nobj) throw LawViolation("cat: finalize() not called");
    for (int o = 0; o < nobj; ++o) {
        int e = idm[o];
        if (e < 0 || e >= m || mor[e].src != o || mor[e].dst != o)
            throw LawViolation("cat: identity typing at object " + std::to_string(o));
    }
    for (int g = 0; g < m; ++g) {
        if ((int)comp[g].size() != m) throw LawViolation("cat: comp row size");
        for (int f = 0; f < m; ++f) {
            int r = comp[g][f];
            if (mor[f].dst != mor[g].src) {
                if (r != -1) throw LawViolation("cat: composite of non-composable pair");
                continue;
            }
            if (r < 0 || r >= m || mor[r].src != mor[f].src || mor[r].dst != mor[g].dst)
                throw LawViolation("cat: composite typing");
        }
    }
    for (int f = 0; f < m; ++f) {
        if (comp[idm[mor[f].dst]][f] != f || comp[f][idm[mor[f].src]] != f)
            throw LawViolation("cat: identity law at morphism " + std::to_string(f));
    }
    for (int f = 0; f < m; ++f)
        for (int g : out[mor[f].dst])
            for (int h : out[mor[g].dst])
                if (comp[h][comp[g][f]] != comp[comp[h][g]][f])
                    throw LawViolation("cat: associativity at (" + std::to_string(h) + "," +
                                       std::to_string(g) + "," + std::to_string(f) + ")");
}

FinCat monoid_cat(const std::vector<std::vector<int>>& mult, int unit) {
    FinCat C;
    C.nobj = 1;
    int n = (int)mult.size();
    C.mor.assign(n, {0, 0});
    C.idm = {unit};
    C.comp = mult;
    C.finalize();
    C.validate();
    return C;
}

void validate_functor(const FinCat& C, const FinCat& Cp, const FunctorData& F) {
    if ((int)F.ob.size() != C.nobj || F.mor.size() != C.mor.size())
        throw NotAFunctor("functor: table sizes");
    for (int o = 0; o < C.nobj; ++o)
        if (F.ob[o] < 0 || F.ob[o] >= Cp.nobj) throw NotAFunctor("functor: object out of range");
    for (int f = 0; f < (int)C.mor.size(); ++f) {
        int g = F.mor[f];
        if (g < 0 || g >= (int)Cp.mor.size()) throw NotAFunctor("functor: morphism out of range");
        if (Cp.mor[g].src != F.ob[C.mor[f].src] || Cp.mor[g].dst != F.ob[C.mor[f].dst])
            throw NotAFunctor("functor: typing at morphism " + std::to_string(f));
    }
    for (int o = 0; o < C.nobj; ++o)
        if (F.mor[C.idm[o]] != Cp.idm[F.ob[o]])
            throw NotAFunctor("functor: identity at object " + std::to_string(o));
    for (int f = 0; f < (int)C.mor.size(); ++f)
        for (int g : C.out[C.mor[f].dst])
            if (F.mor[C.comp[g][f]] != Cp.comp[F.mor[g]][F.mor[f]])
                throw NotAFunctor("functor: composition at (" + std::to_string(g) + "," +
                                  std::to_string(f) + ")");
}

/* ------------------------------------------------------------- diagrams */

void Diagram::validate() const {
    if (!base) throw NotAFunctor("diagram: no base category");
    const FinCat& C = *base;
    if ((int)ob.size() != C.nobj || act.size() != C.mor.size())
        throw NotAFunctor("diagram: table sizes");
    for (int f = 0; f < (int)C.mor.size(); ++f) {
        int s = contra ? C.mor[f].dst : C.mor[f].src;
        int d = contra ? C.mor[f].src : C.mor[f].dst;
        try {
            validate_smap(ob[s], ob[d], act[f]);
        } catch (const Error& e) {
            throw NotAFunctor("diagram: morphism " + std::to_string(f) + ": " + e.what());
        }
    }
    for (int o = 0; o < C.nobj; ++o)
        if (!smap_equal(act[C.idm[o]], smap_id(ob[o])))
            throw NotAFunctor("diagram: identity at object " + std::to_string(o));
    for (int f = 0; f < (int)C.mor.size(); ++f)
        for (int g : C.out[C.mor[f].dst]) {
            const SMap& want = act[C.comp[g][f]];
            SMap got = contra ? smap_compose(act[f], act[g]) : smap_compose(act[g], act[f]);
            if (!smap_equal(want, got))
                throw NotAFunctor("diagram: composition at (" + std::to_string(g) + "," +
                                  std::to_string(f) + ")");
        }
}

bool Diagram::discrete() const {
    for (const FinSSet& A : ob) {
        for (int k = 0; k <= A.dim_top; ++k)
            if (A.card[k] != A.card[0]) return false;
        for (int k = 1; k <= A.dim_top; ++k)
            for (int i = 0; i <= k; ++i)
                for (int x = 0; x < A.card[k]; ++x)
                    if (A.face[k][i][x] != x) return false;
    }
    return true;
}

FinSSet discrete_sset(int npoints, int dim_top) {
    FinSSet X;
    X.dim_top = dim_top;
    X.card.assign(dim_top + 1, npoints);
    X.face.resize(dim_top + 1);
    X.degen.resize(dim_top + 1);
    std::vector<int> ident(npoints);
    for (int i = 0; i < npoints; ++i) ident[i] = i;
    for (int k = 1; k <= dim_top; ++k) X.face[k].assign(k + 1, ident);
    for (int k = 0; k < dim_top; ++k) X.degen[k].assign(k + 1, ident);
    return X;
}

Diagram constant_diagram(const FinCat& C, const FinSSet& A, bool contra) {
    Diagram d;
    d.base = &C;
    d.contra = contra;
    d.ob.assign(C.nobj, A);
    d.act.assign(C.mor.size(), smap_id(A));
    return d;
}

static Diagram hom_diagram(const FinCat& C, int c, int dim_top, bool contra) {
    Diagram d;
    d.base = &C;
    d.contra = contra;
    // hom sets in ascending morphism id order
    std::vector<std::vector<int>> hom(C.nobj);
    std::vector<std::vector<int>> pos(C.nobj);
    for (int b = 0; b < C.nobj; ++b) {
        for (int f : contra ? C.into[c] : C.out[c])
            if ((contra ? C.mor[f].src : C.mor[f].dst) == b) hom[b].push_back(f);
        pos[b].assign(C.mor.size(), -1);
        for (int t = 0; t < (int)hom[b].size(); ++t) pos[b][hom[b][t]] = t;
        d.ob.push_back(discrete_sset((int)hom[b].size(), dim_top));
    }
    d.act.resize(C.mor.size());
    for (int g = 0; g < (int)C.mor.size(); ++g) {
        int bs = contra ? C.mor[g].dst : C.mor[g].src;
        int bd = contra ? C.mor[g].src : C.mor[g].dst;
        std::vector<int> table(hom[bs].size());
        for (int t = 0; t < (int)hom[bs].size(); ++t) {
            int f = hom[bs][t];
            table[t] = pos[bd][contra ? C.comp[f][g] : C.comp[g][f]];
        }
        d.act[g].comp.assign(dim_top + 1, table);
    }
    return d;
}

Diagram represented_diagram(const FinCat& C, int c, int dim_top) {
    return hom_diagram(C, c, dim_top, false);
}
Diagram corepresented_diagram(const FinCat& C, int c, int dim_top) {
    return hom_diagram(C, c, dim_top, true);
}

Diagram restrict_diagram(const FinCat& C, const FinCat& Cp, const FunctorData& F,
                         const Diagram& Xp) {
    if (Xp.base != &Cp) throw MismatchedBase("restrict_diagram: diagram not over the target");
    Diagram d;
    d.base = &C;
    d.contra = Xp.contra;
    for (int o = 0; o < C.nobj; ++o) d.ob.push_back(Xp.ob[F.ob[o]]);
    for (int f = 0; f < (int)C.mor.size(); ++f) d.act.push_back(Xp.act[F.mor[f]]);
    return d;
}

/* ------------------------------------------------------ bar construction */

BarComplex bar(const FinCat& C, const Diagram& X, const Diagram& Y, int D) {
    if (X.base != &C || Y.base != &C)
        throw MismatchedBase("bar: modules live over different categories");
    if (X.contra || !Y.contra)
        throw MismatchedBase("bar: need covariant X and contravariant Y");
    for (const FinSSet& A : X.ob)
        if (A.dim_top < D)
            throw InsufficientDimension("bar: module value stores dimension " +
                                        std::to_string(A.dim_top) + " < " + std::to_string(D));
    for (const FinSSet& A : Y.ob)
        if (A.dim_top < D)
            throw InsufficientDimension("bar: module value stores dimension " +
                                        std::to_string(A.dim_top) + " < " + std::to_string(D));
    BarComplex B;
    B.C = &C;
    B.X = &X;
    B.Y = &Y;
    B.D = D;
    return B;
}

int BarComplex::chain_obj(const BarSimplex& s, int pos) const {
    return pos == 0 ? s.obj0 : C->mor[s.chain[pos - 1]].dst;
}

BarSimplex BarComplex::face(int q, const BarSimplex& s, int i) const {
    BarSimplex r;
    int cq = chain_obj(s, q);
    // y part
    if (i < q)
        r.y = Y->ob[cq].face[q][i][s.y];
    else {
        int fq = s.chain[q - 1];
        r.y = Y->act[fq].comp[q - 1][Y->ob[cq].face[q][q][s.y]];
    }
    // x part
    if (i > 0)
        r.x = X->ob[s.obj0].face[q][i][s.x];
    else {
        int f1 = s.chain[0];
        r.x = X->act[f1].comp[q - 1][X->ob[s.obj0].face[q][0][s.x]];
    }
    // chain part
    if (i == 0) {
        r.obj0 = C->mor[s.chain[0]].dst;
        r.chain.assign(s.chain.begin() + 1, s.chain.end());
    } else if (i == q) {
        r.obj0 = s.obj0;
        r.chain.assign(s.chain.begin(), s.chain.end() - 1);
    } else {
        r.obj0 = s.obj0;
        r.chain = s.chain;
        r.chain[i - 1] = C->comp[s.chain[i]][s.chain[i - 1]];
        r.chain.erase(r.chain.begin() + i);
    }
    return r;
}

BarSimplex BarComplex::degen(int q, const BarSimplex& s, int i) const {
    BarSimplex r;
    r.obj0 = s.obj0;
    r.chain = s.chain;
    r.chain.insert(r.chain.begin() + i, C->idm[chain_obj(s, i)]);
    r.x = X->ob[s.obj0].degen[q][i][s.x];
    r.y = Y->ob[chain_obj(s, q)].degen[q][i][s.y];
    return r;
}

bool BarComplex::simplex_degenerate(int q, const BarSimplex& s) const {
    for (int j = 0; j + 1 <= q; ++j)
        if (degen(q - 1, face(q, s, j + 1), j) == s) return true;
    return false;
}

void BarComplex::enumerate(int q, const std::function<void(const BarSimplex&)>& fn) const {
    BarSimplex s;
    s.chain.resize(q);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == q) {
            int cq = chain_obj(s, q);
            int ny = Y->ob[cq].card[q], nx = X->ob[s.obj0].card[q];
            for (int y = 0; y < ny; ++y)
                for (int x = 0; x < nx; ++x) {
                    s.y = y;
                    s.x = x;
                    fn(s);
                }
            return;
        }
        int o = chain_obj(s, pos);
        for (int f : C->out[o]) {
            s.chain[pos] = f;
            rec(pos + 1);
        }
    };
    for (int o = 0; o < C->nobj; ++o) {
        s.obj0 = o;
        rec(0);
    }
}

long long BarComplex::count(int q) const {
    long long total = 0;
    BarSimplex s;
    s.chain.resize(q);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == q) {
            total += (long long)Y->ob[chain_obj(s, q)].card[q] * X->ob[s.obj0].card[q];
            return;
        }
        for (int f : C->out[chain_obj(s, pos)]) {
            s.chain[pos] = f;
            rec(pos + 1);
        }
    };
    for (int o = 0; o < C->nobj; ++o) {
        s.obj0 = o;
        rec(0);
    }
    return total;
}

BarMaterialized bar_materialize(const BarComplex& B, long long max_cells) {
    long long total = 0;
    for (int q = 0; q <= B.D; ++q) total += B.count(q);
    if (total > max_cells)
        throw SizeBudgetExceeded("bar_materialize: " + std::to_string(total) + " cells > budget " +
                                 std::to_string(max_cells));
    BarMaterialized M;
    M.cells.resize(B.D + 1);
    M.index.resize(B.D + 1);
    for (int q = 0; q <= B.D; ++q)
        B.enumerate(q, [&](const BarSimplex& s) {
            M.index[q][s] = (int)M.cells[q].size();
            M.cells[q].push_back(s);
        });
    FinSSet& S = M.s;
    S.dim_top = B.D;
    S.card.resize(B.D + 1);
    S.face.resize(B.D + 1);
    S.degen.resize(B.D + 1);
    for (int q = 0; q <= B.D; ++q) S.card[q] = (int)M.cells[q].size();
    for (int q = 1; q <= B.D; ++q) {
        S.face[q].assign(q + 1, std::vector<int>(S.card[q]));
        for (int c = 0; c < S.card[q]; ++c)
            for (int i = 0; i <= q; ++i)
                S.face[q][i][c] = M.index[q - 1].at(B.face(q, M.cells[q][c], i));
    }
    for (int q = 0; q < B.D; ++q) {
        S.degen[q].assign(q + 1, std::vector<int>(S.card[q]));
        for (int c = 0; c < S.card[q]; ++c)
            for (int i = 0; i <= q; ++i)
                S.degen[q][i][c] = M.index[q + 1].at(B.degen(q, M.cells[q][c], i));
    }
    return M;
}

FinSSet nerve(const FinCat& C, int D) {
    auto px = std::make_shared<Diagram>(constant_diagram(C, sset_point(D), false));
    auto py = std::make_shared<Diagram>(constant_diagram(C, sset_point(D), true));
    BarComplex B = bar(C, *px, *py, D);
    B.own_x = px;
    B.own_y = py;
    return bar_materialize(B).s;
}

IdCheckResult bar_identity_check(const BarComplex& B, int qmax, bool throw_on_fail) {
    IdCheckResult R;
    auto report = [&](int q, int i, int j) {
        if (R.ok) {
            R.ok = false;
            R.q = q;
            R.i = i;
            R.j = j;
        }
        if (throw_on_fail) throw IdentityViolation(q, i, j, "bar simplicial identity failed");
    };
    for (int q = 0; q <= qmax && R.ok; ++q) {
        B.enumerate(q, [&](const BarSimplex& s) {
            if (!R.ok) return;
            // d_i d_j = d_{j-1} d_i, i < j
            if (q >= 2)
                for (int j = 1; j <= q && R.ok; ++j)
                    for (int i = 0; i < j && R.ok; ++i) {
                        ++R.checked;
                        if (!(B.face(q - 1, B.face(q, s, j), i) ==
                              B.face(q - 1, B.face(q, s, i), j - 1)))
                            report(q, i, j);
                    }
            // faces/degeneracies mixing
            if (q + 1 <= qmax)
                for (int j = 0; j <= q && R.ok; ++j) {
                    BarSimplex t = B.degen(q, s, j);
                    for (int i = 0; i <= q + 1 && R.ok; ++i) {
                        ++R.checked;
                        BarSimplex lhs = B.face(q + 1, t, i);
                        bool good;
                        if (i < j)
                            good = lhs == B.degen(q - 1, B.face(q, s, i), j - 1);
                        else if (i == j || i == j + 1)
                            good = lhs == s;
                        else
                            good = lhs == B.degen(q - 1, B.face(q, s, i - 1), j);
                        if (!good) report(q, i, j);
                    }
                }
            // s_i s_j = s_{j+1} s_i, i <= j
            if (q + 2 <= qmax)
                for (int j = 0; j <= q && R.ok; ++j)
                    for (int i = 0; i <= j && R.ok; ++i) {
                        ++R.checked;
                        if (!(B.degen(q + 1, B.degen(q, s, j), i) ==
                              B.degen(q + 1, B.degen(q, s, i), j + 1)))
                            report(q, i, j);
                    }
        });
    }
    return R;
}

/* ------------------------------------------------------ homotopy colimit */

BarComplex hocolim(const FinCat& C, const Diagram& X, int D) {
    auto py = std::make_shared<Diagram>(constant_diagram(C, sset_point(D), true));
    BarComplex B = bar(C, X, *py, D);
    B.own_y = py;
    return B;
}

std::vector<FinAb> hocolim_homology(const FinCat& C, const Diagram& X, int kmax, i64 coeff,
                                    long long max_cells) {
    BarComplex B = hocolim(C, X, kmax + 1);
    BarMaterialized M = bar_materialize(B, max_cells);
    return sset_homology(M.s, kmax, coeff);
}

Pi0 hocolim_pi0(const FinCat& C, const Diagram& X, long long max_cells) {
    BarComplex B = hocolim(C, X, 1);
    BarMaterialized M = bar_materialize(B, max_cells);
    return pi0(M.s);
}

InducedMapResult induced_hocolim_map(const FinCat& C, const FinCat& Cp, const FunctorData& F,
                                     const Diagram& Xp, int kmax, long long max_cells) {
    validate_functor(C, Cp, F);
    if (Xp.contra) throw MismatchedBase("induced_hocolim_map: covariant diagram required");
    Diagram X = restrict_diagram(C, Cp, F, Xp);
    int D = kmax + 1;
    BarComplex Bs = hocolim(C, X, D), Bt = hocolim(Cp, Xp, D);
    BarMaterialized Ms = bar_materialize(Bs, max_cells), Mt = bar_materialize(Bt, max_cells);
    SMap m;
    m.comp.resize(D + 1);
    for (int q = 0; q <= D; ++q) {
        m.comp[q].resize(Ms.cells[q].size());
        for (int c = 0; c < (int)Ms.cells[q].size(); ++c) {
            BarSimplex t = Ms.cells[q][c];
            t.obj0 = F.ob[t.obj0];
            for (int& f : t.chain) f = F.mor[f];
            m.comp[q][c] = Mt.index[q].at(t);
        }
    }
    validate_smap(Ms.s, Mt.s, m);
    InducedMapResult R;
    // component bijectivity, directly on vertex classes
    Pi0 ps = pi0(Ms.s), pt = pi0(Mt.s);
    {
        std::vector<int> img(ps.count, -1);
        std::vector<char> hit(pt.count, 0);
        bool ok = ps.count == pt.count;
        for (int v = 0; v < Ms.s.card[0] && ok; ++v) {
            int a = ps.comp[v], b = pt.comp[m.comp[0][v]];
            if (img[a] == -1) {
                img[a] = b;
                if (hit[b]) ok = false;
                hit[b] = 1;
            } else if (img[a] != b)
                ok = false;
        }
        R.pi0_bijective = ok;
    }
    ChainCx cs = chains(Ms.s, kmax + 1), ct = chains(Mt.s, kmax + 1);
    auto cm = chain_map(cs, ct, m);
    PresCx pcs = PresCx::free_cx(cs.rank, cs.bnd), pct = PresCx::free_cx(ct.rank, ct.bnd);
    for (int k = 0; k <= kmax; ++k) {
        HPres hs = pres_homology_at(pcs, k), ht = pres_homology_at(pct, k);
        Mat W = homology_induced_map(hs, ht, cm[k]);
        R.h_src.push_back(finab_from_presentation(hs.Z.c, hs.rels));
        R.h_dst.push_back(finab_from_presentation(ht.Z.c, ht.rels));
        R.h_iso.push_back(map_iso_presented(W, hs.Z.c, hs.rels, ht.rels));
    }
    return R;
}

/* --------------------------------------- collapse maps of the 4-fold bar */

namespace {

struct Quad {
    std::vector<int> h, g; // right leg a0 -> aq, left leg b0 -> bq
    int phi = 0;           // aq -> b0
    int a0 = 0;
    int y = 0, x = 0;
    auto operator<=>(const Quad&) const = default;
};

struct QuadCtx {
    const FinCat* C;
    const Diagram* X;
    const Diagram* Y;

    int aobj(const Quad& s, int pos) const { return pos == 0 ? s.a0 : C->mor[s.h[pos - 1]].dst; }
    int bobj(const Quad& s, int pos) const {
        return pos == 0 ? C->mor[s.phi].dst : C->mor[s.g[pos - 1]].dst;
    }
    int xact(int f, int x) const { return X->act[f].comp[0][x]; } // discrete values
    int yact(int f, int y) const { return Y->act[f].comp[0][y]; }

    Quad dface(int q, const Quad& s, int k) const {
        Quad r = s;
        if (k == 0) {
            r.x = xact(s.h[0], s.x);
            r.a0 = C->mor[s.h[0]].dst;
            r.h.erase(r.h.begin());
            r.phi = C->comp[s.g[0]][s.phi];
            r.g.erase(r.g.begin());
        } else if (k == q) {
            r.phi = C->comp[s.phi][s.h[q - 1]];
            r.h.pop_back();
            r.y = yact(s.g[q - 1], s.y);
            r.g.pop_back();
        } else {
            r.h[k - 1] = C->comp[s.h[k]][s.h[k - 1]];
            r.h.erase(r.h.begin() + k);
            r.g[k - 1] = C->comp[s.g[k]][s.g[k - 1]];
            r.g.erase(r.g.begin() + k);
        }
        return r;
    }
    Quad ddegen(int q, const Quad& s, int k) const {
        (void)q;
        Quad r = s;
        r.h.insert(r.h.begin() + k, C->idm[aobj(s, k)]);
        r.g.insert(r.g.begin() + k, C->idm[bobj(s, k)]);
        return r;
    }
    int right_composite(const Quad& s, int from) const {
        // phi o h_q o ... o h_{from+1} : a_from -> b_0
        int m = s.phi;
        for (int t = (int)s.h.size() - 1; t >= from; --t) m = C->comp[m][s.h[t]];
        return m;
    }
    int left_composite(const Quad& s, int upto) const {
        // g_upto o ... o g_1 o phi-part handled by caller; here g-chain prefix composite
        int m = C->idm[bobj(s, 0)];
        for (int t = 0; t < upto; ++t) m = C->comp[s.g[t]][m];
        return m;
    }
    BarSimplex fmap(const Quad& s) const {
        BarSimplex r;
        r.obj0 = bobj(s, 0);
        r.chain = s.g;
        r.y = s.y;
        r.x = xact(right_composite(s, 0), s.x);
        return r;
    }
    BarSimplex gmap(const Quad& s) const {
        BarSimplex r;
        r.obj0 = s.a0;
        r.chain = s.h;
        r.x = s.x;
        r.y = yact(C->comp[left_composite(s, (int)s.g.size())][s.phi], s.y);
        return r;
    }
    BarSimplex hmap(const Quad& s, int i) const {
        // chain h_1..h_i, (g_i...g_1 phi h_q...h_{i+1}), g_{i+1}..g_q
        BarSimplex r;
        r.obj0 = s.a0;
        r.x = s.x;
        r.y = s.y;
        for (int t = 0; t < i; ++t) r.chain.push_back(s.h[t]);
        int mid = C->comp[left_composite(s, i)][right_composite(s, i)];
        r.chain.push_back(mid);
        for (int t = i; t < (int)s.g.size(); ++t) r.chain.push_back(s.g[t]);
        return r;
    }
};

} // namespace

IdCheckResult interchange_homotopy_check(const FinCat& C, const Diagram& X, const Diagram& Y,
                                         int qmax, bool throw_on_fail) {
    if (X.base != &C || Y.base != &C) throw MismatchedBase("interchange check: wrong base");
    if (X.contra || !Y.contra)
        throw MismatchedBase("interchange check: need covariant X, contravariant Y");
    if (!X.discrete() || !Y.discrete())
        throw LawViolation("interchange check: discrete coefficient modules required");
    for (const FinSSet& A : X.ob)
        if (A.dim_top < qmax + 2)
            throw InsufficientDimension("interchange check: module dimensions below qmax + 2");
    for (const FinSSet& A : Y.ob)
        if (A.dim_top < qmax + 2)
            throw InsufficientDimension("interchange check: module dimensions below qmax + 2");

    BarComplex B = bar(C, X, Y, qmax + 2);
    QuadCtx Q{&C, &X, &Y};
    IdCheckResult R;
    auto report = [&](int q, int i, int j) {
        if (R.ok) {
            R.ok = false;
            R.q = q;
            R.i = i;
            R.j = j;
        }
        if (throw_on_fail) throw IdentityViolation(q, i, j, "homotopy prism identity failed");
    };

    for (int q = 0; q <= qmax && R.ok; ++q) {
        // enumerate all diagonal q-simplices of the 4-fold bar
        Quad s;
        s.h.resize(q);
        s.g.resize(q);
        std::function<void(int)> rech, recg;
        std::function<void()> recphi;
        auto body = [&]() {
            if (!R.ok) return;
            int bq = Q.bobj(s, q);
            int ny = Y.ob[bq].card[0], nx = X.ob[s.a0].card[0];
            for (int y = 0; y < ny && R.ok; ++y)
                for (int x = 0; x < nx && R.ok; ++x) {
                    s.y = y;
                    s.x = x;
                    // (1) d_0 h_0 = f
                    ++R.checked;
                    if (!(B.face(q + 1, Q.hmap(s, 0), 0) == Q.fmap(s))) report(q, 0, 0);
                    // (2) d_{q+1} h_q = g
                    ++R.checked;
                    if (R.ok && !(B.face(q + 1, Q.hmap(s, q), q + 1) == Q.gmap(s)))
                        report(q, q + 1, q);
                    // (3) d_i h_j = h_{j-1} d_i for i < j
                    for (int j = 1; j <= q && R.ok; ++j)
                        for (int i = 0; i < j && R.ok; ++i) {
                            ++R.checked;
                            if (!(B.face(q + 1, Q.hmap(s, j), i) == Q.hmap(Q.dface(q, s, i), j - 1)))
                                report(q, i, j);
                        }
                    // (4) d_{j+1} h_{j+1} = d_{j+1} h_j
                    for (int j = 0; j + 1 <= q && R.ok; ++j) {
                        ++R.checked;
                        if (!(B.face(q + 1, Q.hmap(s, j + 1), j + 1) ==
                              B.face(q + 1, Q.hmap(s, j), j + 1)))
                            report(q, j + 1, j);
                    }
                    // (5) d_i h_j = h_j d_{i-1} for i > j + 1
                    for (int j = 0; j <= q && R.ok; ++j)
                        for (int i = j + 2; i <= q + 1 && R.ok; ++i) {
                            ++R.checked;
                            if (!(B.face(q + 1, Q.hmap(s, j), i) == Q.hmap(Q.dface(q, s, i - 1), j)))
                                report(q, i, j);
                        }
                    // (6) s_i h_j = h_{j+1} s_i for i <= j
                    for (int j = 0; j <= q && R.ok; ++j)
                        for (int i = 0; i <= j && R.ok; ++i) {
                            ++R.checked;
                            if (!(B.degen(q + 1, Q.hmap(s, j), i) ==
                                  Q.hmap(Q.ddegen(q, s, i), j + 1)))
                                report(q, i, j);
                        }
                    // (7) s_i h_j = h_j s_{i-1} for i > j
                    for (int j = 0; j <= q && R.ok; ++j)
                        for (int i = j + 1; i <= q + 1 && R.ok; ++i) {
                            ++R.checked;
                            if (!(B.degen(q + 1, Q.hmap(s, j), i) ==
                                  Q.hmap(Q.ddegen(q, s, i - 1), j)))
                                report(q, i, j);
                        }
                }
        };
        recg = [&](int pos) {
            if (!R.ok) return;
            if (pos == q) {
                body();
                return;
            }
            for (int f : C.out[Q.bobj(s, pos)]) {
                s.g[pos] = f;
                recg(pos + 1);
            }
        };
        recphi = [&]() {
            if (!R.ok) return;
            for (int f : C.out[Q.aobj(s, q)]) {
                s.phi = f;
                recg(0);
            }
        };
        rech = [&](int pos) {
            if (!R.ok) return;
            if (pos == q) {
                recphi();
                return;
            }
            for (int f : C.out[Q.aobj(s, pos)]) {
                s.h[pos] = f;
                rech(pos + 1);
            }
        };
        for (int a0 = 0; a0 < C.nobj && R.ok; ++a0) {
            s.a0 = a0;
            rech(0);
        }
    }
    return R;
}

/* ---------------------------------------------------------------- comma */

CommaCat comma_category(const FinCat& C, const FinCat& Cp, const FunctorData& F, int d) {
    validate_functor(C, Cp, F);
    CommaCat K;
    std::map<std::pair<int, int>, int> objid;
    for (int c = 0; c < C.nobj; ++c)
        for (int phi : Cp.out[d])
            if (Cp.mor[phi].dst == F.ob[c]) {
                objid[{c, phi}] = (int)K.objs.size();
                K.objs.push_back({c, phi});
            }
    FinCat& Q = K.cat;
    Q.nobj = (int)K.objs.size();
    std::map<std::tuple<int, int, int>, int> morid;
    std::vector<std::tuple<int, int, int>> mors; // (srcObj, dstObj, g)
    for (int a = 0; a < Q.nobj; ++a) {
        auto [c, phi] = K.objs[a];
        for (int g : C.out[c]) {
            int phi2 = Cp.comp[F.mor[g]][phi];
            auto it = objid.find({C.mor[g].dst, phi2});
            if (it == objid.end()) continue; // cannot happen; defensive
            int b = it->second;
            morid[{a, b, g}] = (int)mors.size();
            mors.push_back({a, b, g});
            Q.mor.push_back({a, b});
        }
    }
    Q.idm.assign(Q.nobj, -1);
    for (int m = 0; m < (int)mors.size(); ++m) {
        auto [a, b, g] = mors[m];
        if (a == b && g == C.idm[K.objs[a].first]) Q.idm[a] = m;
    }
    Q.comp.assign(mors.size(), std::vector<int>(mors.size(), -1));
    for (int m1 = 0; m1 < (int)mors.size(); ++m1)
        for (int m2 = 0; m2 < (int)mors.size(); ++m2) {
            auto [a1, b1, g1] = mors[m1];
            auto [a2, b2, g2] = mors[m2];
            if (b1 != a2) continue;
            Q.comp[m2][m1] = morid.at({a1, b2, C.comp[g2][g1]});
        }
    Q.finalize();
    Q.validate();
    // initial object: unique morphism to every object
    for (int o = 0; o < Q.nobj && !K.initial; ++o) {
        std::vector<int> uniq(Q.nobj, -1);
        bool good = true;
        for (int m : Q.out[o]) {
            int t = Q.mor[m].dst;
            if (uniq[t] != -1) {
                good = false;
                break;
            }
            uniq[t] = m;
        }
        if (!good) continue;
        for (int t = 0; t < Q.nobj; ++t)
            if (uniq[t] == -1) {
                good = false;
                break;
            }
        if (good) {
            K.initial = o;
            K.cone = uniq;
        }
    }
    return K;
}

} // namespace dspace
