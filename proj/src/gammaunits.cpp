#include "dspace/gammaunits.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

#include "dspace/errors.hpp"

namespace dspace {

/* ------------------------------------------------------------ FinMonoid */

void FinMonoid::validate() const {
    if (n <= 0 || unit < 0 || unit >= n) throw LawViolation("monoid: unit out of range");
    if ((int)mult.size() != n) throw LawViolation("monoid: table has wrong row count");
    for (auto& row : mult) {
        if ((int)row.size() != n) throw LawViolation("monoid: table has wrong column count");
        for (int v : row)
            if (v < 0 || v >= n) throw LawViolation("monoid: table entry out of range");
    }
    for (int a = 0; a < n; ++a)
        if (mult[unit][a] != a || mult[a][unit] != a) throw LawViolation("monoid: unit law");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mult[mult[a][b]][c] != mult[a][mult[b][c]])
                    throw LawViolation("monoid: associativity at (" + std::to_string(a) + "," +
                                       std::to_string(b) + "," + std::to_string(c) + ")");
    if (commutative)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (mult[a][b] != mult[b][a]) throw LawViolation("monoid: commutativity flag");
}

std::vector<int> FinMonoid::units() const {
    std::vector<int> u;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (mult[a][b] == unit && mult[b][a] == unit) {
                u.push_back(a);
                break;
            }
    return u;
}

bool FinMonoid::is_group() const { return (int)units().size() == n; }

FinAb FinMonoid::group_structure() const {
    if (!commutative || !is_group())
        throw LawViolation("group_structure: needs a commutative group");
    Mat rels(n, n * n + 1);
    int c = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b, ++c) {
            rels.at(a, c) += 1;
            rels.at(b, c) += 1;
            rels.at(mult[a][b], c) -= 1;
        }
    rels.at(unit, c) = 1;
    return finab_from_presentation(n, rels);
}

FinAb grothendieck_group(const FinMonoid& M) {
    if (!M.commutative) throw NotCommutative("grothendieck_group: commutative monoids only");
    M.validate();
    int n = M.n;
    /* formal differences (a, b); the congruence is generated by simultaneous
       translation (a, b) ~ (ac, bc) */
    UF uf(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                uf.unite(a * n + b, M.mult[a][c] * n + M.mult[b][c]);
    std::vector<int> cls(n * n, -1);
    std::vector<int> ra, rb;
    int nc = 0;
    for (int i = 0; i < n * n; ++i) {
        int r = uf.find(i);
        if (cls[r] < 0) {
            cls[r] = nc++;
            ra.push_back(r / n);
            rb.push_back(r % n);
        }
        cls[i] = cls[r];
    }
    FinMonoid G;
    G.n = nc;
    G.unit = cls[uf.find(M.unit * n + M.unit)];
    G.commutative = true;
    G.mult.assign(nc, std::vector<int>(nc));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            G.mult[i][j] = cls[uf.find(M.mult[ra[i]][ra[j]] * n + M.mult[rb[i]][rb[j]])];
    G.validate();
    if (!G.is_group()) throw LawViolation("grothendieck_group: completion is not a group");
    return G.group_structure();
}

/* ------------------------------------------------------------ pi0_monoid */

Pi0Monoid pi0_monoid(const FcpStruct& S) {
    const ISpace& X = *S.owner;
    const InjCat& I = *X.I;
    int N = I.N;
    Pi0Monoid P;
    for (int k = 0; k <= N; ++k) P.level.push_back(pi0(X.lv(k)));
    std::vector<std::vector<int>> repv(N + 1);
    for (int k = 0; k <= N; ++k) {
        repv[k].assign(P.level[k].count, -1);
        for (int v = 0; v < X.lv(k).card[0]; ++v)
            if (repv[k][P.level[k].comp[v]] < 0) repv[k][P.level[k].comp[v]] = v;
    }
    std::vector<int> off(N + 2, 0);
    for (int k = 0; k <= N; ++k) off[k + 1] = off[k] + P.level[k].count;

    /* colimit of components over every injection */
    UF uf(off[N + 1]);
    for (int f = 0; f < (int)I.cat.mor.size(); ++f) {
        int a = I.cat.mor[f].src, b = I.cat.mor[f].dst;
        for (int c = 0; c < P.level[a].count; ++c) {
            int w = X.X.act[f].comp[0][repv[a][c]];
            uf.unite(off[a] + c, off[b] + P.level[b].comp[w]);
        }
    }
    std::vector<int> cls(off[N + 1], -1);
    int nc = 0;
    for (int i = 0; i < off[N + 1]; ++i) {
        int r = uf.find(i);
        if (cls[r] < 0) cls[r] = nc++;
        cls[i] = cls[r];
    }
    P.level_class.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        P.level_class[k].resize(P.level[k].count);
        for (int c = 0; c < P.level[k].count; ++c) P.level_class[k][c] = cls[off[k] + c];
    }

    /* stabilization: standard inclusions must be component bijections from s on,
       with 2s <= N so stable representatives can be multiplied */
    int s = N;
    for (int k = N - 1; k >= 0; --k) {
        const Pi0& pa = P.level[k];
        const Pi0& pb = P.level[k + 1];
        bool bij = pa.count == pb.count;
        if (bij) {
            const SMap& m = X.X.act[I.incl(k, k + 1)];
            std::vector<char> hit(pb.count, 0);
            for (int c = 0; c < pa.count; ++c) {
                int img = pb.comp[m.comp[0][repv[k][c]]];
                if (hit[img]) {
                    bij = false;
                    break;
                }
                hit[img] = 1;
            }
        }
        if (!bij) break;
        s = k;
    }
    if (2 * s > N)
        throw NotStabilized(s, "pi0_monoid: components stabilize at level " + std::to_string(s) +
                                   " but 2s exceeds the range " + std::to_string(N));
    P.stable_from = s;

    /* product on colimit classes via level-s vertices, exhaustively */
    FinMonoid M;
    M.n = nc;
    M.commutative = S.commutative;
    M.unit = P.level_class[0][P.level[0].comp[S.unit]];
    M.mult.assign(nc, std::vector<int>(nc, -1));
    const FinSSet& Ls = X.lv(s);
    const SMap& mu = S.mu.at({s, s});
    for (int v1 = 0; v1 < Ls.card[0]; ++v1)
        for (int v2 = 0; v2 < Ls.card[0]; ++v2) {
            int e1 = P.level_class[s][P.level[s].comp[v1]];
            int e2 = P.level_class[s][P.level[s].comp[v2]];
            int p = mu.comp[0][v1 * Ls.card[0] + v2];
            int ep = P.level_class[2 * s][P.level[2 * s].comp[p]];
            int& slot = M.mult[e1][e2];
            if (slot == -1)
                slot = ep;
            else if (slot != ep)
                throw LawViolation("pi0_monoid: product depends on the chosen representatives");
        }
    for (auto& row : M.mult)
        for (int v : row)
            if (v < 0) throw LawViolation("pi0_monoid: a colimit class misses the stable level");
    M.validate();
    P.m = M;
    return P;
}

/* ------------------------------------------------------------ units_fcp */

UnitsFcp units_fcp(const FcpStruct& S, std::shared_ptr<const ISpace> keep) {
    const ISpace& X = *S.owner;
    if (keep && keep.get() != S.owner)
        throw MismatchedBase("units_fcp: keep must own the FCP's diagram");
    const InjCat& I = *X.I;
    int N = I.N;
    Pi0Monoid P = pi0_monoid(S);
    std::vector<char> isu(P.m.n, 0);
    for (int e : P.m.units()) isu[e] = 1;

    auto sub = std::make_shared<ISpace>();
    sub->I = X.I;
    sub->X.base = &I.cat;
    sub->X.contra = false;
    std::vector<std::vector<std::vector<int>>> nid(N + 1), old(N + 1);
    for (int k = 0; k <= N; ++k) {
        const FinSSet& L = X.lv(k);
        FinSSet T;
        T.dim_top = L.dim_top;
        T.card.resize(L.dim_top + 1);
        T.face.resize(L.dim_top + 1);
        T.degen.resize(L.dim_top + 1);
        nid[k].resize(L.dim_top + 1);
        old[k].resize(L.dim_top + 1);
        for (int d = 0; d <= L.dim_top; ++d) {
            nid[k][d].assign(L.card[d], -1);
            for (int x = 0; x < L.card[d]; ++x)
                if (isu[P.level_class[k][P.level[k].of_cell(L, d, x)]]) {
                    nid[k][d][x] = (int)old[k][d].size();
                    old[k][d].push_back(x);
                }
            T.card[d] = (int)old[k][d].size();
        }
        for (int d = 1; d <= L.dim_top; ++d) {
            T.face[d].assign(d + 1, std::vector<int>(T.card[d]));
            for (int i = 0; i <= d; ++i)
                for (int x = 0; x < T.card[d]; ++x)
                    T.face[d][i][x] = nid[k][d - 1][L.face[d][i][old[k][d][x]]];
        }
        for (int d = 0; d < L.dim_top; ++d) {
            T.degen[d].assign(d + 1, std::vector<int>(T.card[d]));
            for (int i = 0; i <= d; ++i)
                for (int x = 0; x < T.card[d]; ++x)
                    T.degen[d][i][x] = nid[k][d + 1][L.degen[d][i][old[k][d][x]]];
        }
        sub->X.ob.push_back(T);
    }
    sub->X.act.resize(I.cat.mor.size());
    for (int f = 0; f < (int)I.cat.mor.size(); ++f) {
        int a = I.cat.mor[f].src, b = I.cat.mor[f].dst;
        SMap t;
        t.comp.resize(sub->X.ob[a].dim_top + 1);
        for (int d = 0; d <= sub->X.ob[a].dim_top; ++d) {
            t.comp[d].resize(sub->X.ob[a].card[d]);
            for (int x = 0; x < sub->X.ob[a].card[d]; ++x)
                t.comp[d][x] = nid[b][d][X.X.act[f].comp[d][old[a][d][x]]];
        }
        sub->X.act[f] = t;
    }
    sub->validate();

    FcpStruct F;
    F.owner = sub.get();
    F.unit = nid[0][0][S.unit];
    F.commutative = S.commutative;
    for (auto& kv : S.mu) {
        int a = kv.first.first, b = kv.first.second;
        const FinSSet& A = sub->X.ob[a];
        const FinSSet& B = sub->X.ob[b];
        int top = std::min(A.dim_top, B.dim_top);
        SMap t;
        t.comp.resize(top + 1);
        for (int d = 0; d <= top; ++d) {
            t.comp[d].resize(A.card[d] * B.card[d]);
            for (int x = 0; x < A.card[d]; ++x)
                for (int y = 0; y < B.card[d]; ++y) {
                    int big = old[a][d][x] * X.lv(b).card[d] + old[b][d][y];
                    t.comp[d][x * B.card[d] + y] = nid[a + b][d][kv.second.comp[d][big]];
                }
        }
        F.mu[{a, b}] = t;
    }
    check_fcp(F, true);

    ISpaceMap incl;
    incl.src = sub.get();
    incl.dst = S.owner;
    incl.level.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        incl.level[k].comp.resize(sub->X.ob[k].dim_top + 1);
        for (int d = 0; d <= sub->X.ob[k].dim_top; ++d) incl.level[k].comp[d] = old[k][d];
    }
    incl.validate();

    Pi0Monoid PS = pi0_monoid(F);
    if (!PS.m.is_group()) throw LawViolation("units_fcp: restricted components are not a group");

    UnitsFcp U;
    U.space = sub;
    U.parent = keep;
    U.fcp = F;
    U.incl = incl;
    U.monoid = PS.m;
    U.pi0 = PS;
    return U;
}

UnitsFcp gl1_bullet(const SymRingSpectrum& E, int dim_top, unsigned seed) {
    OmegaBullet O = omega_bullet(E, dim_top, seed);
    return units_fcp(O.fcp, O.space);
}

/* --------------------------------------------------- partition categories */

int ICatN::theta_size(int obj, int mask) const {
    int t = 0;
    for (int j = 1; j <= n; ++j)
        if ((mask >> (j - 1)) & 1) t += etup[obj][j];
    return t;
}

std::vector<std::array<int, 3>> ICatN::theta_blocks(int obj, int mask) const {
    std::vector<std::array<int, 3>> b;
    int off = 0;
    for (auto& [c, sz] : words[obj])
        if ((mask >> (c - 1)) & 1) {
            b.push_back({c, sz, off});
            off += sz;
        }
    return b;
}

static std::vector<int> word_flat(const std::vector<std::pair<int, int>>& w) {
    std::vector<int> f;
    for (auto& [c, s] : w) {
        f.push_back(c);
        f.push_back(s);
    }
    return f;
}

ICatN icat_n(std::shared_ptr<const InjCat> I, int n) {
    ICatN C;
    C.n = n;
    C.I = I;
    int N = I->N;

    /* objects: words of (color, size) blocks, adjacent colors distinct */
    std::vector<std::pair<int, int>> cur;
    std::function<void(int, int)> gen = [&](int last, int total) {
        C.words.push_back(cur);
        for (int c = 1; c <= n; ++c) {
            if (c == last) continue;
            for (int s = 1; total + s <= N; ++s) {
                cur.push_back({c, s});
                gen(c, total + s);
                cur.pop_back();
            }
        }
    };
    gen(0, 0);
    std::sort(C.words.begin(), C.words.end(),
              [](const std::vector<std::pair<int, int>>& a,
                 const std::vector<std::pair<int, int>>& b) {
                  int ta = 0, tb = 0;
                  for (auto& p : a) ta += p.second;
                  for (auto& p : b) tb += p.second;
                  if (ta != tb) return ta < tb;
                  if (a.size() != b.size()) return a.size() < b.size();
                  return word_flat(a) < word_flat(b);
              });
    int nob = (int)C.words.size();
    for (int o = 0; o < nob; ++o) C.word_id[word_flat(C.words[o])] = o;
    C.etup.assign(nob, std::vector<int>(n + 1, 0));
    for (int o = 0; o < nob; ++o)
        for (auto& [c, s] : C.words[o]) C.etup[o][c] += s;

    /* morphisms: free tuples of injections, one per color */
    FinCat& cat = C.cat;
    cat.nobj = nob;
    cat.idm.assign(nob, -1);
    for (int s = 0; s < nob; ++s)
        for (int t = 0; t < nob; ++t) {
            std::vector<int> comp(n + 1, -1);
            bool any = true;
            for (int j = 1; j <= n && any; ++j)
                any = !I->hom_list[C.etup[s][j]][C.etup[t][j]].empty();
            if (!any) continue;
            std::function<void(int)> emit = [&](int j) {
                if (j > n) {
                    int id = (int)cat.mor.size();
                    cat.mor.push_back({s, t});
                    C.mor_comp.push_back(comp);
                    std::vector<int> key{s, t};
                    key.insert(key.end(), comp.begin() + 1, comp.end());
                    C.mor_id[key] = id;
                    bool isid = s == t;
                    for (int jj = 1; jj <= n && isid; ++jj)
                        isid = comp[jj] == I->cat.idm[C.etup[s][jj]];
                    if (isid) cat.idm[s] = id;
                    return;
                }
                for (int f : I->hom_list[C.etup[s][j]][C.etup[t][j]]) {
                    comp[j] = f;
                    emit(j + 1);
                }
            };
            emit(1);
        }
    int nm = (int)cat.mor.size();
    cat.comp.assign(nm, std::vector<int>(nm, -1));
    for (int g = 0; g < nm; ++g)
        for (int f = 0; f < nm; ++f) {
            if (cat.mor[f].dst != cat.mor[g].src) continue;
            std::vector<int> key{cat.mor[f].src, cat.mor[g].dst};
            for (int j = 1; j <= n; ++j)
                key.push_back(I->cat.comp[C.mor_comp[g][j]][C.mor_comp[f][j]]);
            cat.comp[g][f] = C.mor_id.at(key);
        }
    cat.finalize();
    return C;
}

void ICatN::validate() const {
    cat.validate();
    int N = I->N;
    for (int o = 0; o < cat.nobj; ++o) {
        if (theta_size(o, (1 << n) - 1) > N)
            throw ObjectOutOfRange("partition category: word exceeds the range");
        for (int a = 0; a < (1 << n); ++a)
            for (int b = 0; b < (1 << n); ++b) {
                if (a & b) continue;
                if (theta_size(o, a | b) != theta_size(o, a) + theta_size(o, b))
                    throw LawViolation("partition category: values are not coproducts");
            }
        auto blocks = theta_blocks(o, (1 << n) - 1);
        int off = 0;
        for (auto& bl : blocks) {
            if (bl[2] != off) throw LawViolation("partition category: block offsets");
            off += bl[1];
        }
        if (off != theta_size(o, (1 << n) - 1))
            throw LawViolation("partition category: blocks do not tile the value");
        for (int j = 1; j <= n; ++j)
            if (mor_comp[cat.idm[o]][j] != I->cat.idm[etup[o][j]])
                throw LawViolation("partition category: identity components");
    }
    for (int g = 0; g < (int)cat.mor.size(); ++g)
        for (int f = 0; f < (int)cat.mor.size(); ++f) {
            int h = cat.comp[g][f];
            if (h < 0) continue;
            for (int j = 1; j <= n; ++j)
                if (mor_comp[h][j] != I->cat.comp[mor_comp[g][j]][mor_comp[f][j]])
                    throw LawViolation("partition category: composition components");
        }
}

/* -------------------------------------------------------------- based maps */

std::vector<int> BasedMap::key() const {
    std::vector<int> k{m, n};
    k.insert(k.end(), img.begin(), img.end());
    return k;
}

std::vector<BasedMap> based_maps(int m, int n) {
    std::vector<BasedMap> out;
    std::vector<int> img(m, 0);
    while (true) {
        out.push_back({m, n, img});
        int i = m - 1;
        while (i >= 0 && img[i] == n) img[i--] = 0;
        if (i < 0) break;
        ++img[i];
    }
    return out;
}

BasedMap based_identity(int n) {
    BasedMap a{n, n, std::vector<int>(n)};
    for (int i = 1; i <= n; ++i) a.img[i - 1] = i;
    return a;
}

BasedMap based_compose(const BasedMap& beta, const BasedMap& alpha) {
    if (beta.m != alpha.n) throw MismatchedBase("based_compose: ranges differ");
    BasedMap c{alpha.m, beta.n, std::vector<int>(alpha.m)};
    for (int i = 1; i <= alpha.m; ++i) c.img[i - 1] = beta(alpha(i));
    return c;
}

/* ------------------------------------------------------------ gamma spaces */

namespace {

FinSSet truncate_sset(const FinSSet& X, int D) {
    if (X.dim_top == D) return X;
    FinSSet T;
    T.dim_top = D;
    T.card.assign(X.card.begin(), X.card.begin() + D + 1);
    T.face.resize(D + 1);
    T.degen.resize(D + 1);
    for (int k = 1; k <= D; ++k) T.face[k] = X.face[k];
    for (int k = 0; k < D; ++k) T.degen[k] = X.degen[k];
    return T;
}

FinSSet fiber_product(const ISpace& X, const std::vector<int>& e, int n, int D) {
    if (n == 0) return sset_point(D);
    FinSSet P = truncate_sset(X.lv(e[1]), D);
    for (int j = 2; j <= n; ++j) P = sset_product(P, truncate_sset(X.lv(e[j]), D));
    return P;
}

/* coordinates of an iterated-product cell, colors 1..n, color n fastest */
void fiber_decode(const ISpace& X, const std::vector<int>& e, int n, int k, int cell,
                  std::vector<int>& xs) {
    for (int j = n; j >= 1; --j) {
        int c = X.lv(e[j]).card[k];
        xs[j] = cell % c;
        cell /= c;
    }
}

int fiber_encode(const ISpace& X, const std::vector<int>& e, int n, int k,
                 const std::vector<int>& ys) {
    int cell = 0;
    for (int j = 1; j <= n; ++j) cell = cell * X.lv(e[j]).card[k] + ys[j];
    return cell;
}

/* pushforward data of one object along a based map */
struct Push {
    int tgt = 0;
    std::vector<int> pimor;     // per target color: relabel injection id or -1
    std::vector<int> pimor_inv; // its inverse
};

Push make_push(const ICatN& Cm, const ICatN& Cn, const BasedMap& a,
               const std::vector<std::vector<int>>& srcs, int w) {
    const InjCat& I = *Cm.I;
    std::vector<std::pair<int, int>> tw;
    for (auto& [c, sz] : Cm.words[w]) {
        int tc = a(c);
        if (tc == 0) continue;
        if (!tw.empty() && tw.back().first == tc)
            tw.back().second += sz;
        else
            tw.push_back({tc, sz});
    }
    Push p;
    p.tgt = Cn.word_id.at(word_flat(tw));
    p.pimor.assign(Cn.n + 1, -1);
    p.pimor_inv.assign(Cn.n + 1, -1);
    for (int j = 1; j <= Cn.n; ++j) {
        int ej = Cn.etup[p.tgt][j];
        if (ej == 0) continue;
        /* permutation from ascending-source-color concatenation order to the
           target word's block order */
        Perm perm(ej);
        std::vector<int> cbase(Cm.n + 1, 0), cused(Cm.n + 1, 0);
        int acc = 0;
        for (int i : srcs[j]) {
            cbase[i] = acc;
            acc += Cm.etup[w][i];
        }
        int toff = 0;
        for (auto& [c, sz] : Cm.words[w]) {
            if (a(c) != j) continue;
            int cpos = cbase[c] + cused[c];
            for (int t = 0; t < sz; ++t) perm[cpos + t] = toff + t;
            cused[c] += sz;
            toff += sz;
        }
        bool ident = true;
        for (int t = 0; t < ej && ident; ++t) ident = perm[t] == t;
        if (!ident) {
            p.pimor[j] = I.perm(ej, perm);
            p.pimor_inv[j] = I.perm(ej, perm_inverse(perm));
        }
    }
    return p;
}

int push_mor(const ICatN& Cm, const ICatN& Cn, const std::vector<std::vector<int>>& srcs,
             const std::vector<Push>& pushes, int f) {
    const InjCat& I = *Cm.I;
    int s = Cm.cat.mor[f].src, t = Cm.cat.mor[f].dst;
    const Push& ps = pushes[s];
    const Push& pt = pushes[t];
    std::vector<int> key{ps.tgt, pt.tgt};
    for (int j = 1; j <= Cn.n; ++j) {
        int g;
        if (srcs[j].empty())
            g = I.cat.idm[0];
        else {
            g = Cm.mor_comp[f][srcs[j][0]];
            for (size_t p = 1; p < srcs[j].size(); ++p)
                g = I.block(g, Cm.mor_comp[f][srcs[j][p]]);
        }
        if (ps.pimor_inv[j] >= 0) g = I.cat.compose(g, ps.pimor_inv[j]);
        if (pt.pimor[j] >= 0) g = I.cat.compose(pt.pimor[j], g);
        key.push_back(g);
    }
    return Cn.mor_id.at(key);
}

int push_fiber_cell(const FcpStruct& S, const ICatN& Cm, const ICatN& Cn,
                    const std::vector<std::vector<int>>& srcs, const Push& p, int w, int k,
                    int cell, const std::vector<int>& ucell, std::vector<int>& xs,
                    std::vector<int>& ys) {
    const ISpace& X = *S.owner;
    fiber_decode(X, Cm.etup[w], Cm.n, k, cell, xs);
    for (int j = 1; j <= Cn.n; ++j) {
        if (srcs[j].empty()) {
            ys[j] = ucell[k];
            continue;
        }
        int i0 = srcs[j][0];
        int acc = xs[i0], asum = Cm.etup[w][i0];
        for (size_t q = 1; q < srcs[j].size(); ++q) {
            int i = srcs[j][q];
            int ei = Cm.etup[w][i];
            acc = S.mu.at({asum, ei}).comp[k][acc * X.lv(ei).card[k] + xs[i]];
            asum += ei;
        }
        if (p.pimor[j] >= 0) acc = X.X.act[p.pimor[j]].comp[k][acc];
        ys[j] = acc;
    }
    return fiber_encode(X, Cn.etup[p.tgt], Cn.n, k, ys);
}

/* one homotopy colimit level, materialized in bar enumeration order */
GammaLevel build_level(const ICatN& C, const FcpStruct& S, int D) {
    const ISpace& X = *S.owner;
    GammaLevel L;
    int nob = C.cat.nobj;
    for (int o = 0; o < nob; ++o) L.fiber.push_back(fiber_product(X, C.etup[o], C.n, D));

    L.fact.resize(C.cat.mor.size());
    std::vector<int> xs(C.n + 1), ys(C.n + 1);
    for (int f = 0; f < (int)C.cat.mor.size(); ++f) {
        int s = C.cat.mor[f].src, t = C.cat.mor[f].dst;
        SMap m;
        m.comp.resize(D + 1);
        for (int k = 0; k <= D; ++k) {
            m.comp[k].resize(L.fiber[s].card[k]);
            for (int x = 0; x < L.fiber[s].card[k]; ++x) {
                fiber_decode(X, C.etup[s], C.n, k, x, xs);
                for (int j = 1; j <= C.n; ++j)
                    ys[j] = X.X.act[C.mor_comp[f][j]].comp[k][xs[j]];
                m.comp[k][x] = fiber_encode(X, C.etup[t], C.n, k, ys);
            }
        }
        L.fact[f] = m;
    }

    L.chain.resize(D + 1);
    L.chain_id.resize(D + 1);
    L.block.resize(D + 1);
    L.cell_chain.resize(D + 1);
    for (int o = 0; o < nob; ++o) L.chain[0].push_back({o});
    for (int q = 1; q <= D; ++q)
        for (auto& cv : L.chain[q - 1]) {
            int end = q == 1 ? cv[0] : C.cat.mor[cv[q - 1]].dst;
            for (int f : C.cat.out[end]) {
                std::vector<int> nv = cv;
                nv.push_back(f);
                L.chain[q].push_back(std::move(nv));
            }
        }
    for (int q = 0; q <= D; ++q)
        for (int ch = 0; ch < (int)L.chain[q].size(); ++ch) L.chain_id[q][L.chain[q][ch]] = ch;

    FinSSet& V = L.val;
    V.dim_top = D;
    V.card.resize(D + 1);
    V.face.resize(D + 1);
    V.degen.resize(D + 1);
    for (int q = 0; q <= D; ++q) {
        L.block[q].resize(L.chain[q].size());
        long long tot = 0;
        for (int ch = 0; ch < (int)L.chain[q].size(); ++ch) {
            L.block[q][ch] = (int)tot;
            tot += L.fiber[L.chain[q][ch][0]].card[q];
        }
        V.card[q] = (int)tot;
        L.cell_chain[q].resize(tot);
        for (int ch = 0; ch < (int)L.chain[q].size(); ++ch) {
            int b = L.block[q][ch], c = L.fiber[L.chain[q][ch][0]].card[q];
            for (int x = 0; x < c; ++x) L.cell_chain[q][b + x] = ch;
        }
    }
    auto chain_obj = [&](const std::vector<int>& cv, int pos) {
        return pos == 0 ? cv[0] : C.cat.mor[cv[pos]].dst;
    };
    for (int q = 1; q <= D; ++q) {
        V.face[q].assign(q + 1, std::vector<int>(V.card[q]));
        for (int ch = 0; ch < (int)L.chain[q].size(); ++ch) {
            const std::vector<int>& cv = L.chain[q][ch];
            int w = cv[0], base = L.block[q][ch];
            const FinSSet& FW = L.fiber[w];
            for (int i = 0; i <= q; ++i) {
                std::vector<int> nv;
                if (i == 0) {
                    nv.push_back(C.cat.mor[cv[1]].dst);
                    nv.insert(nv.end(), cv.begin() + 2, cv.end());
                } else if (i == q) {
                    nv.assign(cv.begin(), cv.end() - 1);
                } else {
                    nv = cv;
                    nv[i] = C.cat.comp[cv[i + 1]][cv[i]];
                    nv.erase(nv.begin() + i + 1);
                }
                int tb = L.block[q - 1][L.chain_id[q - 1].at(nv)];
                const std::vector<int>& frow = FW.face[q][i];
                std::vector<int>& out = V.face[q][i];
                if (i == 0) {
                    const std::vector<int>& act = L.fact[cv[1]].comp[q - 1];
                    for (int x = 0; x < FW.card[q]; ++x) out[base + x] = tb + act[frow[x]];
                } else {
                    for (int x = 0; x < FW.card[q]; ++x) out[base + x] = tb + frow[x];
                }
            }
        }
    }
    for (int q = 0; q < D; ++q) {
        V.degen[q].assign(q + 1, std::vector<int>(V.card[q]));
        for (int ch = 0; ch < (int)L.chain[q].size(); ++ch) {
            const std::vector<int>& cv = L.chain[q][ch];
            int w = cv[0], base = L.block[q][ch];
            const FinSSet& FW = L.fiber[w];
            for (int i = 0; i <= q; ++i) {
                std::vector<int> nv = cv;
                nv.insert(nv.begin() + i + 1, C.cat.idm[chain_obj(cv, i)]);
                int tb = L.block[q + 1][L.chain_id[q + 1].at(nv)];
                const std::vector<int>& drow = FW.degen[q][i];
                std::vector<int>& out = V.degen[q][i];
                for (int x = 0; x < FW.card[q]; ++x) out[base + x] = tb + drow[x];
            }
        }
    }
    return L;
}

} // namespace

const GammaMap& GammaSpace::map_of(const BasedMap& a) const {
    auto it = maps.find(a.key());
    if (it == maps.end())
        throw ObjectOutOfRange("gamma: no structure map for the requested based map");
    return it->second;
}

SMap GammaSpace::expand(const BasedMap& a) const {
    const GammaMap& g = map_of(a);
    const GammaLevel& A = L[a.m];
    const GammaLevel& B = L[a.n];
    SMap s;
    s.comp.resize(D + 1);
    for (int q = 0; q <= D; ++q) {
        s.comp[q].resize(A.val.card[q]);
        for (int ch = 0; ch < (int)A.chain[q].size(); ++ch) {
            int w = A.chain[q][ch][0];
            int base = A.block[q][ch];
            int tb = B.block[q][g.chain_img[q][ch]];
            const std::vector<int>& fi = g.fiber_img[w][q];
            for (int x = 0; x < (int)fi.size(); ++x) s.comp[q][base + x] = tb + fi[x];
        }
    }
    return s;
}

GammaSpace gamma_construct(const FcpStruct& S, int n_max, int D,
                           std::shared_ptr<const ISpace> keep, long long max_cells) {
    if (!S.commutative) throw NotCommutative("gamma_construct: needs a commutative FCP");
    check_fcp(S, true);
    const ISpace& X = *S.owner;
    if (X.dim() < D)
        throw TruncationTooSmall("gamma_construct: levels store dimension " +
                                 std::to_string(X.dim()) + " < " + std::to_string(D));
    GammaSpace G;
    G.n_max = n_max;
    G.N = X.I->N;
    G.D = D;
    G.keep = keep;
    for (int n = 0; n <= n_max; ++n) G.C.push_back(icat_n(X.I, n));

    /* cell-count gate before any materialization */
    long long total = 0;
    for (int n = 0; n <= n_max; ++n) {
        const ICatN& C = G.C[n];
        int nob = C.cat.nobj;
        std::vector<long long> reach(nob, 1), next(nob);
        for (int q = 0; q <= D; ++q) {
            for (int o = 0; o < nob; ++o) {
                long long fc = 1;
                for (int j = 1; j <= n; ++j) fc *= X.lv(C.etup[o][j]).card[q];
                total += reach[o] * fc;
            }
            if (q == D) break;
            std::fill(next.begin(), next.end(), 0LL);
            for (int o = 0; o < nob; ++o)
                for (int f : C.cat.out[o]) next[o] += reach[C.cat.mor[f].dst];
            /* reach counts chains leaving o; extend at the far end */
            std::swap(reach, next);
        }
    }
    if (total > max_cells)
        throw SizeBudgetExceeded("gamma_construct: " + std::to_string(total) + " cells > budget " +
                                 std::to_string(max_cells));

    for (int n = 0; n <= n_max; ++n) G.L.push_back(build_level(G.C[n], S, D));
    for (int q = 0; q <= D; ++q)
        if (G.L[0].val.card[q] != 1)
            throw LawViolation("gamma_construct: level of the zero object is not a point");

    std::vector<int> ucell(D + 1);
    for (int k = 0; k <= D; ++k) ucell[k] = X.lv(0).degen_word(0, S.unit, k);

    /* all structure maps, with naturality verified cell by cell */
    for (int m = 0; m <= n_max; ++m)
        for (int n = 0; n <= n_max; ++n)
            for (const BasedMap& a : based_maps(m, n)) {
                const ICatN& Cm = G.C[m];
                const ICatN& Cn = G.C[n];
                GammaMap g;
                g.a = a;
                std::vector<std::vector<int>> srcs(n + 1);
                for (int i = 1; i <= m; ++i)
                    if (a(i) >= 1) srcs[a(i)].push_back(i);
                std::vector<Push> pushes;
                for (int w = 0; w < Cm.cat.nobj; ++w)
                    pushes.push_back(make_push(Cm, Cn, a, srcs, w));
                g.ob_img.resize(Cm.cat.nobj);
                for (int w = 0; w < Cm.cat.nobj; ++w) g.ob_img[w] = pushes[w].tgt;
                g.mor_img.resize(Cm.cat.mor.size());
                for (int f = 0; f < (int)Cm.cat.mor.size(); ++f)
                    g.mor_img[f] = push_mor(Cm, Cn, srcs, pushes, f);
                g.fiber_img.resize(Cm.cat.nobj);
                std::vector<int> xs(m + 1), ys(n + 1);
                for (int w = 0; w < Cm.cat.nobj; ++w) {
                    g.fiber_img[w].resize(D + 1);
                    for (int k = 0; k <= D; ++k) {
                        int c = G.L[m].fiber[w].card[k];
                        g.fiber_img[w][k].resize(c);
                        for (int x = 0; x < c; ++x)
                            g.fiber_img[w][k][x] = push_fiber_cell(S, Cm, Cn, srcs, pushes[w], w,
                                                                   k, x, ucell, xs, ys);
                    }
                }
                g.chain_img.resize(D + 1);
                for (int q = 0; q <= D; ++q) {
                    g.chain_img[q].resize(G.L[m].chain[q].size());
                    for (int ch = 0; ch < (int)G.L[m].chain[q].size(); ++ch) {
                        const std::vector<int>& cv = G.L[m].chain[q][ch];
                        std::vector<int> nv{g.ob_img[cv[0]]};
                        for (int p = 1; p <= q; ++p) nv.push_back(g.mor_img[cv[p]]);
                        g.chain_img[q][ch] = G.L[n].chain_id[q].at(nv);
                    }
                }
                for (int f = 0; f < (int)Cm.cat.mor.size(); ++f) {
                    int s = Cm.cat.mor[f].src, t = Cm.cat.mor[f].dst;
                    const SMap& Ff = G.L[m].fact[f];
                    const SMap& Fg = G.L[n].fact[g.mor_img[f]];
                    for (int k = 0; k <= D; ++k)
                        for (int x = 0; x < G.L[m].fiber[s].card[k]; ++x)
                            if (g.fiber_img[t][k][Ff.comp[k][x]] !=
                                Fg.comp[k][g.fiber_img[s][k][x]])
                                throw NotAFunctor("gamma_construct: fiber maps not natural");
                }
                G.maps[a.key()] = std::move(g);
            }

    /* exhaustive functoriality: identities and all composable pairs */
    for (int n = 0; n <= n_max; ++n) {
        const GammaMap& g = G.map_of(based_identity(n));
        for (int w = 0; w < G.C[n].cat.nobj; ++w)
            if (g.ob_img[w] != w) throw NotAFunctor("gamma_construct: identity on objects");
        for (int f = 0; f < (int)G.C[n].cat.mor.size(); ++f)
            if (g.mor_img[f] != f) throw NotAFunctor("gamma_construct: identity on morphisms");
        for (int w = 0; w < G.C[n].cat.nobj; ++w)
            for (int k = 0; k <= D; ++k)
                for (int x = 0; x < G.L[n].fiber[w].card[k]; ++x)
                    if (g.fiber_img[w][k][x] != x)
                        throw NotAFunctor("gamma_construct: identity on fibers");
    }
    for (int m = 0; m <= n_max; ++m)
        for (int n = 0; n <= n_max; ++n)
            for (const BasedMap& a : based_maps(m, n)) {
                const GammaMap& ga = G.map_of(a);
                for (int k = 0; k <= n_max; ++k)
                    for (const BasedMap& b : based_maps(n, k)) {
                        const GammaMap& gb = G.map_of(b);
                        const GammaMap& gc = G.map_of(based_compose(b, a));
                        for (int w = 0; w < G.C[m].cat.nobj; ++w)
                            if (gb.ob_img[ga.ob_img[w]] != gc.ob_img[w])
                                throw NotAFunctor("gamma_construct: composition on objects");
                        for (int f = 0; f < (int)G.C[m].cat.mor.size(); ++f)
                            if (gb.mor_img[ga.mor_img[f]] != gc.mor_img[f])
                                throw NotAFunctor("gamma_construct: composition on morphisms");
                        for (int w = 0; w < G.C[m].cat.nobj; ++w) {
                            int wv = ga.ob_img[w];
                            for (int q = 0; q <= D; ++q) {
                                const std::vector<int>& fa = ga.fiber_img[w][q];
                                const std::vector<int>& fb = gb.fiber_img[wv][q];
                                const std::vector<int>& fc = gc.fiber_img[w][q];
                                for (int x = 0; x < (int)fa.size(); ++x)
                                    if (fb[fa[x]] != fc[x])
                                        throw NotAFunctor(
                                            "gamma_construct: composition on fibers");
                            }
                        }
                    }
            }
    return G;
}

/* -------------------------------------------------------------- Segal maps */

bool SegalReport::ok() const {
    if (!pi0_exact || !comma_ok) return false;
    for (char b : pi0_bijective)
        if (!b) return false;
    for (auto& row : h_iso)
        for (char b : row)
            if (!b) return false;
    return true;
}

namespace {

/* full subcomplex on one component, dimensions 0..top */
struct SubS {
    FinSSet s;
    std::vector<std::vector<int>> newid, old;
};

SubS comp_sub(const FinSSet& X, const Pi0& p, int z, int top) {
    SubS S;
    S.s.dim_top = top;
    S.s.card.resize(top + 1);
    S.s.face.resize(top + 1);
    S.s.degen.resize(top + 1);
    S.newid.resize(top + 1);
    S.old.resize(top + 1);
    for (int k = 0; k <= top; ++k) {
        S.newid[k].assign(X.card[k], -1);
        for (int x = 0; x < X.card[k]; ++x)
            if (p.of_cell(X, k, x) == z) {
                S.newid[k][x] = (int)S.old[k].size();
                S.old[k].push_back(x);
            }
        S.s.card[k] = (int)S.old[k].size();
    }
    for (int k = 1; k <= top; ++k) {
        S.s.face[k].assign(k + 1, std::vector<int>(S.s.card[k]));
        for (int i = 0; i <= k; ++i)
            for (int x = 0; x < S.s.card[k]; ++x)
                S.s.face[k][i][x] = S.newid[k - 1][X.face[k][i][S.old[k][x]]];
    }
    for (int k = 0; k < top; ++k) {
        S.s.degen[k].assign(k + 1, std::vector<int>(S.s.card[k]));
        for (int i = 0; i <= k; ++i)
            for (int x = 0; x < S.s.card[k]; ++x)
                S.s.degen[k][i][x] = S.newid[k + 1][X.degen[k][i][S.old[k][x]]];
    }
    return S;
}

/* the comma category under the tuple-forgetful functor has the sorted word
   as an initial object, verified by brute-force morphism counting */
bool comma_sorted_initial(const ICatN& C, const std::vector<int>& d) {
    const InjCat& I = *C.I;
    int n = C.n;
    std::vector<int> flat;
    for (int j = 1; j <= n; ++j)
        if (d[j] > 0) {
            flat.push_back(j);
            flat.push_back(d[j]);
        }
    auto it = C.word_id.find(flat);
    if (it == C.word_id.end()) return false;
    int wstar = it->second;
    for (int v = 0; v < C.cat.nobj; ++v) {
        bool any = true;
        for (int j = 1; j <= n && any; ++j) any = d[j] <= C.etup[v][j];
        if (!any) continue;
        /* enumerate objects (v, psi) and count morphisms from (wstar, identities) */
        std::vector<int> psi(n + 1, -1);
        std::function<bool(int)> rec = [&](int j) -> bool {
            if (j > n) {
                int cnt = 0;
                for (int g : C.cat.out[wstar]) {
                    if (C.cat.mor[g].dst != v) continue;
                    bool match = true;
                    for (int jj = 1; jj <= n && match; ++jj)
                        match = C.mor_comp[g][jj] == psi[jj];
                    if (match) ++cnt;
                }
                return cnt == 1;
            }
            for (int f : I.hom_list[d[j]][C.etup[v][j]]) {
                psi[j] = f;
                if (!rec(j + 1)) return false;
            }
            return true;
        };
        if (!rec(1)) return false;
    }
    return true;
}

} // namespace

SegalReport segal_check(const GammaSpace& H, int k_max) {
    if (k_max < 0 || k_max > H.D - 2)
        throw TruncationTooSmall("segal_check: needs k_max + 2 <= D");
    if (k_max > 1)
        throw Error("segal_check: homology comparison implemented through degree 1");
    SegalReport r;
    r.n_max = H.n_max;
    r.k_max = k_max;
    r.pi0_exact = true;
    r.comma_ok = true;
    r.pi0_bijective.assign(H.n_max + 1, 1);
    r.h_iso.assign(H.n_max + 1, std::vector<char>(k_max + 1, 1));
    if (H.n_max < 2) return r;

    Pi0 p1 = pi0(H.L[1].val);
    std::vector<SubS> T;
    std::vector<ChainCx> Tcx;
    if (k_max >= 1)
        for (int z = 0; z < p1.count; ++z) {
            T.push_back(comp_sub(H.L[1].val, p1, z, k_max + 1));
            Tcx.push_back(chains(T.back().s, k_max + 1));
        }

    for (int n = 2; n <= H.n_max; ++n) {
        const FinSSet& Xn = H.L[n].val;
        Pi0 pn = pi0(Xn);
        std::vector<SMap> dl;
        for (int i = 1; i <= n; ++i) {
            BasedMap d{n, 1, std::vector<int>(n, 0)};
            d.img[i - 1] = 1;
            dl.push_back(H.expand(d));
        }
        long long expect = 1;
        for (int i = 0; i < n; ++i) expect *= p1.count;
        std::vector<int> repv(pn.count, -1);
        for (int v = 0; v < Xn.card[0]; ++v)
            if (repv[pn.comp[v]] < 0) repv[pn.comp[v]] = v;
        std::vector<std::vector<int>> tup(pn.count, std::vector<int>(n));
        std::set<std::vector<int>> seen;
        for (int z = 0; z < pn.count; ++z) {
            for (int i = 0; i < n; ++i) tup[z][i] = p1.comp[dl[i].comp[0][repv[z]]];
            seen.insert(tup[z]);
        }
        if (pn.count != expect) r.pi0_exact = false;
        r.pi0_bijective[n] = pn.count == expect && (long long)seen.size() == pn.count;

        if (k_max >= 1)
            for (int z = 0; z < pn.count; ++z) {
                SubS A = comp_sub(Xn, pn, z, k_max + 1);
                ChainCx ca = chains(A.s, k_max + 1);
                /* target: direct sum of the component complexes of level 1 */
                std::vector<int> gens(k_max + 2, 0);
                std::vector<std::vector<int>> ofs(n, std::vector<int>(k_max + 2, 0));
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k <= k_max + 1; ++k) {
                        ofs[i][k] = gens[k];
                        gens[k] += Tcx[tup[z][i]].rank[k];
                    }
                std::vector<Mat> bnd(k_max + 2), stack(k_max + 2);
                for (int k = 0; k <= k_max + 1; ++k) {
                    bnd[k] = Mat(k > 0 ? gens[k - 1] : 0, gens[k]);
                    stack[k] = Mat(gens[k], ca.rank[k]);
                }
                for (int i = 0; i < n; ++i) {
                    const ChainCx& ct = Tcx[tup[z][i]];
                    SMap rs;
                    rs.comp.resize(k_max + 2);
                    for (int k = 0; k <= k_max + 1; ++k) {
                        rs.comp[k].resize(A.s.card[k]);
                        for (int x = 0; x < A.s.card[k]; ++x)
                            rs.comp[k][x] =
                                T[tup[z][i]].newid[k][dl[i].comp[k][A.old[k][x]]];
                    }
                    auto cm = chain_map(ca, ct, rs);
                    for (int k = 0; k <= k_max + 1; ++k) {
                        if (k > 0)
                            for (int rr = 0; rr < ct.rank[k - 1]; ++rr)
                                for (int cc = 0; cc < ct.rank[k]; ++cc)
                                    bnd[k].at(ofs[i][k - 1] + rr, ofs[i][k] + cc) =
                                        ct.bnd[k].at(rr, cc);
                        for (int rr = 0; rr < ct.rank[k]; ++rr)
                            for (int cc = 0; cc < ca.rank[k]; ++cc)
                                stack[k].at(ofs[i][k] + rr, cc) = cm[k].at(rr, cc);
                    }
                }
                PresCx pa = PresCx::free_cx(ca.rank, ca.bnd);
                PresCx pb = PresCx::free_cx(gens, bnd);
                for (int k = 1; k <= k_max; ++k) {
                    HPres hA = pres_homology_at(pa, k);
                    HPres hB = pres_homology_at(pb, k);
                    Mat W = homology_induced_map(hA, hB, stack[k]);
                    if (!map_iso_presented(W, hA.Z.c, hA.rels, hB.rels)) r.h_iso[n][k] = 0;
                }
            }

        /* cofinality certificates over every tuple within the range */
        std::vector<int> d(n + 1, 0);
        std::function<void(int, int)> go = [&](int j, int rem) {
            if (j > n) {
                ++r.comma_checked;
                if (!comma_sorted_initial(H.C[n], d)) r.comma_ok = false;
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                d[j] = v;
                go(j + 1, rem - v);
            }
        };
        go(1, H.N);
    }
    return r;
}

/* ------------------------------------------------------------ delooping */

namespace {

BasedMap circle_face(int q, int i) {
    BasedMap a{q, q - 1, std::vector<int>(q)};
    for (int s = 1; s <= q; ++s) {
        int v = s <= i ? s : s - 1;
        a.img[s - 1] = (v >= 1 && v <= q - 1) ? v : 0;
    }
    return a;
}

BasedMap circle_degen(int q, int i) {
    BasedMap a{q, q + 1, std::vector<int>(q)};
    for (int s = 1; s <= q; ++s) a.img[s - 1] = s <= i ? s : s + 1;
    return a;
}

} // namespace

FinSSet segal_machine_delooping(const GammaSpace& H, int D_dl) {
    if (H.n_max < D_dl)
        throw InsufficientGammaRange("delooping: needs levels up to " + std::to_string(D_dl));
    if (D_dl > H.D)
        throw TruncationTooSmall("delooping: needs bar truncation >= " + std::to_string(D_dl));
    FinSSet S;
    S.dim_top = D_dl;
    S.card.resize(D_dl + 1);
    S.face.resize(D_dl + 1);
    S.degen.resize(D_dl + 1);
    for (int q = 0; q <= D_dl; ++q) S.card[q] = H.L[q].val.card[q];
    for (int q = 1; q <= D_dl; ++q) {
        S.face[q].assign(q + 1, std::vector<int>(S.card[q]));
        for (int i = 0; i <= q; ++i) {
            SMap m = H.expand(circle_face(q, i));
            const std::vector<int>& in = H.L[q].val.face[q][i];
            for (int x = 0; x < S.card[q]; ++x) S.face[q][i][x] = m.comp[q - 1][in[x]];
        }
    }
    for (int q = 0; q < D_dl; ++q) {
        S.degen[q].assign(q + 1, std::vector<int>(S.card[q]));
        for (int i = 0; i <= q; ++i) {
            SMap m = H.expand(circle_degen(q, i));
            const std::vector<int>& in = H.L[q].val.degen[q][i];
            for (int x = 0; x < S.card[q]; ++x) S.degen[q][i][x] = m.comp[q + 1][in[x]];
        }
    }
    return S;
}

/* ------------------------------------------------------- group completion */

GroupCompletion group_completion_pi0(const GammaSpace& H) {
    if (H.n_max < 2)
        throw InsufficientGammaRange("group_completion_pi0: needs levels up to 2");
    Pi0 p1 = pi0(H.L[1].val);
    Pi0 p2 = pi0(H.L[2].val);
    SMap d1 = H.expand({2, 1, {1, 0}});
    SMap d2 = H.expand({2, 1, {0, 1}});
    SMap fo = H.expand({2, 1, {1, 1}});
    std::vector<int> rep2(p2.count, -1);
    for (int v = 0; v < H.L[2].val.card[0]; ++v)
        if (rep2[p2.comp[v]] < 0) rep2[p2.comp[v]] = v;
    if ((long long)p2.count != (long long)p1.count * p1.count)
        throw BijectionFailure("group_completion_pi0: level-2 components are not pairs");
    std::map<std::pair<int, int>, int> zof;
    for (int z = 0; z < p2.count; ++z) {
        std::pair<int, int> key{p1.comp[d1.comp[0][rep2[z]]], p1.comp[d2.comp[0][rep2[z]]]};
        if (!zof.emplace(key, z).second)
            throw BijectionFailure("group_completion_pi0: component tuple map not injective");
    }
    FinMonoid M;
    M.n = p1.count;
    M.commutative = true;
    M.mult.assign(M.n, std::vector<int>(M.n));
    for (int a = 0; a < M.n; ++a)
        for (int b = 0; b < M.n; ++b) {
            auto it = zof.find({a, b});
            if (it == zof.end())
                throw BijectionFailure("group_completion_pi0: missing component pair");
            M.mult[a][b] = p1.comp[fo.comp[0][rep2[it->second]]];
        }
    SMap e = H.expand({0, 1, {}});
    M.unit = p1.comp[e.comp[0][0]];
    M.validate();
    GroupCompletion gc;
    gc.m = M;
    gc.group = grothendieck_group(M);
    gc.grouplike = M.is_group();
    return gc;
}

} // namespace dspace
