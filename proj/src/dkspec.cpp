#include "dspace/dkspec.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace dspace {

/* ==================================================================== */
/*  coefficient vectors: ring-element ids, componentwise operations     */
/* ==================================================================== */

namespace {

using RVec = std::vector<int>;

RVec rv_zero(const FinCommRing& R, int len) { return RVec(len, R.zero); }

/* integer matrix applied to a ring vector */
RVec mat_app_r(const FinCommRing& R, const Mat& M, const RVec& v) {
    RVec out(M.r, R.zero);
    for (int i = 0; i < M.r; ++i) {
        int acc = R.zero;
        for (int j = 0; j < M.c; ++j) {
            i64 e = M.at(i, j);
            if (e) acc = R.a(acc, R.scale(e, v[j]));
        }
        out[i] = acc;
    }
    return out;
}

/* integer matrices compared through the coefficients */
bool mats_eq_r(const FinCommRing& R, const Mat& A, const Mat& B) {
    if (A.r != B.r || A.c != B.c) return false;
    for (int i = 0; i < A.r; ++i)
        for (int j = 0; j < A.c; ++j)
            if (R.of_int(A.at(i, j)) != R.of_int(B.at(i, j))) return false;
    return true;
}

std::string ints(i64 v) { return std::to_string(v); }

}  // namespace

/* ==================================================================== */
/*  finite commutative rings                                            */
/* ==================================================================== */

int FinCommRing::of_int(i64 c) const {
    if (c < 0) return neg[of_int(-c)];
    if (c >= n) c %= element_order(one);
    int v = zero;
    for (i64 t = 0; t < c; ++t) v = a(v, one);
    return v;
}

int FinCommRing::element_order(int x) const {
    int y = x, k = 1;
    while (y != zero) {
        y = a(y, x);
        ++k;
    }
    return k;
}

FinAb FinCommRing::additive() const {
    return finab_from_presentation((int)orders.size(), Mat::diag(orders));
}

std::vector<int> FinCommRing::units() const {
    std::vector<int> u;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (m(x, y) == one) {
                u.push_back(x);
                break;
            }
    return u;
}

void FinCommRing::validate() const {
    auto bad = [&](const std::string& w) { throw LawViolation("ring " + name + ": " + w); };
    if (n < 1) bad("empty carrier");
    if ((int)add.size() != n || (int)mul.size() != n || (int)neg.size() != n)
        bad("table sizes");
    for (int x = 0; x < n; ++x) {
        if ((int)add[x].size() != n || (int)mul[x].size() != n) bad("table sizes");
        for (int y = 0; y < n; ++y)
            if (add[x][y] < 0 || add[x][y] >= n || mul[x][y] < 0 || mul[x][y] >= n)
                bad("entry out of range");
    }
    if (zero < 0 || zero >= n || one < 0 || one >= n) bad("distinguished elements out of range");
    for (int x = 0; x < n; ++x) {
        if (a(zero, x) != x) bad("additive identity fails at " + ints(x));
        if (a(x, neg[x]) != zero) bad("negation fails at " + ints(x));
        if (m(one, x) != x) bad("multiplicative identity fails at " + ints(x));
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (a(x, y) != a(y, x)) bad("addition not commutative at " + ints(x) + "," + ints(y));
            if (m(x, y) != m(y, x))
                bad("multiplication not commutative at " + ints(x) + "," + ints(y));
        }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (a(a(x, y), z) != a(x, a(y, z)))
                    bad("addition not associative at " + ints(x) + "," + ints(y) + "," + ints(z));
                if (m(m(x, y), z) != m(x, m(y, z)))
                    bad("multiplication not associative at " + ints(x) + "," + ints(y) + "," +
                        ints(z));
                if (m(x, a(y, z)) != a(m(x, y), m(x, z)))
                    bad("distributivity fails at " + ints(x) + "," + ints(y) + "," + ints(z));
            }
}

void FinCommRing::finalize() {
    if (n < 1 || (int)add.size() != n || (int)mul.size() != n)
        throw LawViolation("ring " + name + ": table sizes");
    neg.assign(n, -1);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (add[x][y] == zero) {
                neg[x] = y;
                break;
            }
    for (int x = 0; x < n; ++x)
        if (neg[x] < 0) throw LawViolation("ring " + name + ": no negative for " + ints(x));
    validate();

    /* additive decomposition into cyclic summands, largest order first */
    std::vector<int> ord(n);
    for (int x = 0; x < n; ++x) ord[x] = element_order(x);
    std::vector<int> cand(n);
    std::iota(cand.begin(), cand.end(), 0);
    std::sort(cand.begin(), cand.end(), [&](int p, int q) {
        return ord[p] != ord[q] ? ord[p] > ord[q] : p < q;
    });

    gens.clear();
    orders.clear();
    coord.assign(n, {});
    std::vector<char> covered(n, 0);
    covered[zero] = 1;
    int ncov = 1;

    std::function<bool()> go = [&]() -> bool {
        if (ncov == n) return true;
        for (int e : cand) {
            if (covered[e]) continue;
            int d = ord[e];
            if ((i64)ncov * d > n) continue;
            std::vector<int> fresh;
            bool ok = true;
            std::vector<int> base;
            for (int x = 0; x < n && ok; ++x)
                if (covered[x]) base.push_back(x);
            for (int x : base) {
                int y = x;
                for (int t = 1; t < d && ok; ++t) {
                    y = a(y, e);
                    if (covered[y])
                        ok = false;
                    else {
                        covered[y] = 1;
                        coord[y] = coord[x];
                        coord[y].resize(gens.size(), 0);
                        coord[y].push_back(t);
                        fresh.push_back(y);
                    }
                }
                if (!ok) break;
            }
            if (ok) {
                ncov += (int)fresh.size();
                gens.push_back(e);
                orders.push_back(d);
                if (go()) return true;
                ncov -= (int)fresh.size();
                gens.pop_back();
                orders.pop_back();
            }
            for (int y : fresh) {
                covered[y] = 0;
                coord[y].clear();
            }
        }
        return false;
    };
    if (!go()) throw LawViolation("ring " + name + ": additive group has no cyclic decomposition");
    for (int x = 0; x < n; ++x) coord[x].resize(gens.size(), 0);
}

FinCommRing ring_zmod(int m) {
    if (m < 1) throw LawViolation("ring Z/m: m >= 1 required");
    FinCommRing R;
    R.n = m;
    R.zero = 0;
    R.one = m == 1 ? 0 : 1;
    R.name = "Z/" + std::to_string(m);
    R.add.assign(m, std::vector<int>(m));
    R.mul.assign(m, std::vector<int>(m));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            R.add[x][y] = (x + y) % m;
            R.mul[x][y] = (int)((i64)x * y % m);
        }
    R.finalize();
    return R;
}

namespace {

/* polynomials over F_p, little-endian coefficient vectors */
std::vector<int> poly_rem(std::vector<int> a, const std::vector<int>& b, int p) {
    int db = (int)b.size() - 1;
    while ((int)a.size() > db) {
        int da = (int)a.size() - 1;
        int lead = a[da];
        if (lead) {
            /* b is monic */
            for (int i = 0; i <= db; ++i)
                a[da - db + i] = ((a[da - db + i] - lead * b[i]) % p + p) % p;
        }
        a.pop_back();
    }
    return a;
}

bool poly_is_zero(const std::vector<int>& a) {
    for (int c : a)
        if (c) return false;
    return true;
}

}  // namespace

FinCommRing ring_gf(int p, int e) {
    if (p < 2) throw LawViolation("field order: p prime required");
    for (int d = 2; (i64)d * d <= p; ++d)
        if (p % d == 0) throw LawViolation("field order: " + ints(p) + " is not prime");
    if (e < 1) throw LawViolation("field order: e >= 1 required");
    i64 q = 1;
    for (int t = 0; t < e; ++t) {
        q *= p;
        if (q > 4096) throw SizeBudgetExceeded("field with more than 4096 elements");
    }
    if (e == 1) {
        FinCommRing R = ring_zmod(p);
        R.name = "F_" + std::to_string(p);
        return R;
    }

    auto decode = [&](i64 idx) {
        std::vector<int> c(e);
        for (int i = 0; i < e; ++i) {
            c[i] = (int)(idx % p);
            idx /= p;
        }
        return c;
    };
    auto encode = [&](const std::vector<int>& c) {
        i64 idx = 0;
        for (int i = e - 1; i >= 0; --i) idx = idx * p + c[i];
        return idx;
    };

    /* monic irreducible of degree e: no monic divisor of degree <= e/2 */
    std::vector<int> irr;
    for (i64 low = 0; low < q && irr.empty(); ++low) {
        std::vector<int> f = decode(low);
        f.push_back(1);
        bool red = false;
        for (int d = 1; d <= e / 2 && !red; ++d) {
            i64 pd = 1;
            for (int t = 0; t < d; ++t) pd *= p;
            for (i64 gl = 0; gl < pd && !red; ++gl) {
                std::vector<int> g = decode(gl);
                g.resize(d);
                g.push_back(1);
                if (poly_is_zero(poly_rem(f, g, p))) red = true;
            }
        }
        if (!red) irr = f;
    }

    FinCommRing R;
    R.n = (int)q;
    R.zero = 0;
    R.one = 1;
    R.name = "F_" + std::to_string(q);
    R.add.assign(R.n, std::vector<int>(R.n));
    R.mul.assign(R.n, std::vector<int>(R.n));
    for (int x = 0; x < R.n; ++x)
        for (int y = 0; y < R.n; ++y) {
            std::vector<int> cx = decode(x), cy = decode(y), s(e);
            for (int i = 0; i < e; ++i) s[i] = (cx[i] + cy[i]) % p;
            R.add[x][y] = (int)encode(s);
            std::vector<int> pr(2 * e - 1, 0);
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < e; ++j) pr[i + j] = (pr[i + j] + cx[i] * cy[j]) % p;
            std::vector<int> rem = poly_rem(pr, irr, p);
            rem.resize(e, 0);
            R.mul[x][y] = (int)encode(rem);
        }
    R.finalize();
    return R;
}

FinCommRing ring_dual_numbers_f2() {
    /* elements a + b t with t^2 = 0, encoded a + 2b */
    FinCommRing R;
    R.n = 4;
    R.zero = 0;
    R.one = 1;
    R.name = "F_2[t]/(t^2)";
    R.add.assign(4, std::vector<int>(4));
    R.mul.assign(4, std::vector<int>(4));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            R.add[x][y] = x ^ y;
            int a0 = x & 1, a1 = x >> 1, b0 = y & 1, b1 = y >> 1;
            R.mul[x][y] = (a0 & b0) | (((a0 & b1) ^ (a1 & b0)) << 1);
        }
    R.finalize();
    return R;
}

FinCommRing ring_from_tables(int n, std::vector<std::vector<int>> add,
                             std::vector<std::vector<int>> mul, int zero, int one,
                             std::string name) {
    FinCommRing R;
    R.n = n;
    R.add = std::move(add);
    R.mul = std::move(mul);
    R.zero = zero;
    R.one = one;
    R.name = std::move(name);
    R.finalize();
    return R;
}

/* ==================================================================== */
/*  graded chain models                                                 */
/* ==================================================================== */

void DkModel::validate() const {
    if (rank.empty() || bd.size() != rank.size())
        throw LawViolation("chain model: rank/boundary lengths disagree");
    for (int k = 1; k <= top(); ++k)
        if (bd[k].r != rank[k - 1] || bd[k].c != rank[k])
            throw LawViolation("chain model: boundary shape in degree " + ints(k));
    for (int k = 2; k <= top(); ++k) {
        Mat P = mat_mul(bd[k - 1], bd[k]);
        for (int i = 0; i < P.r; ++i)
            for (int j = 0; j < P.c; ++j) {
                i64 e = P.at(i, j);
                bool zero = R ? (R->of_int(e) == R->zero) : (e == 0);
                if (!zero)
                    throw LawViolation("chain model: boundary squared nonzero in degree " +
                                       ints(k) + " at (" + ints(i) + "," + ints(j) + ")");
            }
    }
}

DkModel k_model(const FinCommRing* R, int n) {
    DkModel M;
    M.R = R;
    M.rank.assign(n + 1, 0);
    M.rank[n] = 1;
    M.bd.resize(n + 1);
    M.bd[0] = Mat(M.rank[0], 0);
    for (int k = 1; k <= n; ++k) M.bd[k] = Mat(M.rank[k - 1], M.rank[k]);
    M.validate();
    return M;
}

DkModel chains_model(const PSSet& X, const FinCommRing* R, int through_dim) {
    ChainCx c = reduced_chains(X, through_dim);
    DkModel M;
    M.R = R;
    M.rank = c.rank;
    M.bd.resize(c.rank.size());
    M.bd[0] = Mat(c.rank[0], 0);
    for (int k = 1; k <= M.top(); ++k) M.bd[k] = c.bnd[k];
    M.validate();
    return M;
}

namespace {

/* pad to the requested top with zero ranks (exact: nothing is truncated) */
DkModel pad_model(const DkModel& M, int top) {
    if (M.top() >= top) return M;
    DkModel P = M;
    int old = M.top();
    P.rank.resize(top + 1, 0);
    P.bd.resize(top + 1);
    for (int k = old + 1; k <= top; ++k) P.bd[k] = Mat(P.rank[k - 1], P.rank[k]);
    return P;
}

/* Integer presentation of the underlying graded abelian groups: over Z the
   free complex itself; over R each basis slot expands to the coordinate
   generators of the additive group, with diagonal order relations.
   Multiplication by an integer boundary entry is the same integer on
   coordinates, so boundaries expand blockwise. */
PresCx expand_model(const DkModel& M, int top) {
    DkModel P = pad_model(M, top);
    int g = M.R ? (int)M.R->orders.size() : 1;
    std::vector<int> gens(top + 1);
    for (int k = 0; k <= top; ++k) gens[k] = P.rank[k] * g;
    std::vector<Mat> bnd(top + 1);
    for (int k = 1; k <= top; ++k) {
        bnd[k] = Mat(gens[k - 1], gens[k]);
        for (int r = 0; r < P.rank[k - 1]; ++r)
            for (int s = 0; s < P.rank[k]; ++s) {
                i64 e = P.bd[k].at(r, s);
                if (e)
                    for (int i = 0; i < g; ++i) bnd[k].at(r * g + i, s * g + i) = e;
            }
    }
    PresCx cx = PresCx::free_cx(gens, bnd);
    if (M.R) {
        for (int k = 0; k <= top; ++k) {
            std::vector<i64> d(gens[k]);
            for (int s = 0; s < P.rank[k]; ++s)
                for (int i = 0; i < g; ++i) d[s * g + i] = M.R->orders[i];
            cx.rel[k] = Mat::diag(d);
        }
    }
    return cx;
}

/* integer chain-map matrix expanded to coordinate generators */
Mat expand_mat(const Mat& S, int g) {
    Mat out(S.r * g, S.c * g);
    for (int r = 0; r < S.r; ++r)
        for (int s = 0; s < S.c; ++s) {
            i64 e = S.at(r, s);
            if (e)
                for (int i = 0; i < g; ++i) out.at(r * g + i, s * g + i) = e;
        }
    return out;
}

}  // namespace

std::vector<FinAb> moore_homotopy(const DkModel& M, int k_max) {
    M.validate();
    return pres_homology(expand_model(M, k_max + 1), k_max);
}

namespace {

struct LoopsWithBasis {
    DkModel L;
    Mat K;  // embedding of degree 0 into degree n of the input, columns = basis
};

/* One decalage step: degree 0 becomes the degree-1 cycles.  The integer
   boundary must be integrally composable and split unimodularly so that the
   cycle lattice is a free direct summand over every coefficient ring. */
DkModel loops_one(const DkModel& M, Mat* basis_out) {
    for (int k = 2; k <= M.top(); ++k)
        if (!mat_is_zero(mat_mul(M.bd[k - 1], M.bd[k])))
            throw LawViolation("loops: boundaries do not compose to zero integrally");
    Mat A = M.top() >= 1 ? M.bd[1] : Mat(M.rank[0], 0);
    for (i64 d : snf(A).diag)
        if (d != 1)
            throw LawViolation(
                "loops: degree-1 boundary does not split off its kernel freely (invariant " +
                ints(d) + ")");
    Mat K = A.r == 0 ? Mat::id(A.c) : kernel_basis(A);
    DkModel L;
    L.R = M.R;
    int nt = std::max(M.top() - 1, 0);
    L.rank.assign(nt + 1, 0);
    L.bd.resize(nt + 1);
    L.rank[0] = K.c;
    for (int k = 1; k <= nt; ++k) L.rank[k] = M.rank[k + 1];
    L.bd[0] = Mat(L.rank[0], 0);
    if (nt >= 1) {
        auto X = solve_mat(K, M.bd[2]);
        if (!X) throw LawViolation("loops: degree-2 image leaves the cycle lattice");
        L.bd[1] = *X;
    }
    for (int k = 2; k <= nt; ++k) L.bd[k] = M.bd[k + 1];
    if (basis_out) *basis_out = K;
    return L;
}

LoopsWithBasis loops_wb(const DkModel& M, int n) {
    LoopsWithBasis out{M, Mat::id(M.rank.empty() ? 0 : M.rank[0])};
    for (int t = 0; t < n; ++t) out.L = loops_one(out.L, &out.K);
    return out;
}

}  // namespace

DkModel loops(const DkModel& M, int n) {
    if (n < 0) throw ObjectOutOfRange("loops: nonnegative count required");
    return loops_wb(M, n).L;
}

/* ==================================================================== */
/*  realization shapes                                                  */
/* ==================================================================== */

namespace {

/* monotone surjections [k] ->> [j] as value vectors, lexicographic */
std::vector<std::vector<int>> surjections(int k, int j) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(k + 1);
    std::function<void(int)> go = [&](int i) {
        if (i == k + 1) {
            if (v[k] == j) out.push_back(v);
            return;
        }
        v[i] = v[i - 1];
        if (v[i] + (k - i) >= j) go(i + 1);
        v[i] = v[i - 1] + 1;
        if (v[i] <= j) go(i + 1);
    };
    v[0] = 0;
    go(1);
    return out;
}

}  // namespace

DkShape dk_shape(const DkModel& M, int vdim) {
    M.validate();
    if (!M.R) throw LawViolation("realization requires finite coefficients");
    DkShape sh;
    sh.R = M.R;
    sh.vdim = vdim;
    sh.ranks = M.rank;
    sh.ranks.resize(std::max<size_t>(M.rank.size(), vdim + 1), 0);
    sh.bds = M.bd;
    sh.bds.resize(sh.ranks.size());

    sh.slots.resize(vdim + 1);
    sh.offs.resize(vdim + 1);
    sh.digits.resize(vdim + 1);
    sh.ncells.resize(vdim + 1);
    sh.idslot.assign(vdim + 1, -1);
    std::vector<std::map<std::vector<int>, int>> pos(vdim + 1);
    for (int k = 0; k <= vdim; ++k) {
        for (int j = 0; j <= std::min(k, (int)sh.ranks.size() - 1); ++j) {
            if (sh.ranks[j] == 0) continue;
            for (auto& eta : surjections(k, j)) {
                pos[k][eta] = (int)sh.slots[k].size();
                if (j == k) sh.idslot[k] = (int)sh.slots[k].size();
                sh.slots[k].push_back({j, eta});
            }
        }
        int off = 0;
        for (auto& s : sh.slots[k]) {
            sh.offs[k].push_back(off);
            off += sh.ranks[s.j];
        }
        sh.offs[k].push_back(off);
        sh.digits[k] = off;
        i64 nc = 1;
        for (int t = 0; t < off; ++t) {
            if (nc > DkShape::cell_cap / sh.R->n) {
                nc = DkShape::cell_cap;
                break;
            }
            nc *= sh.R->n;
        }
        sh.ncells[k] = nc;
    }

    /* operator routing */
    sh.froute.resize(vdim + 1);
    for (int k = 1; k <= vdim; ++k) {
        sh.froute[k].assign(k + 1, std::vector<DkShape::Route>(sh.slots[k].size()));
        for (int i = 0; i <= k; ++i)
            for (size_t si = 0; si < sh.slots[k].size(); ++si) {
                const auto& sl = sh.slots[k][si];
                std::vector<int> zeta(k);
                for (int t = 0; t < k; ++t) zeta[t] = sl.eta[t < i ? t : t + 1];
                std::vector<char> hit(sl.j + 1, 0);
                for (int v : zeta) hit[v] = 1;
                int missing = -1, nmiss = 0;
                for (int v = 0; v <= sl.j; ++v)
                    if (!hit[v]) {
                        missing = v;
                        ++nmiss;
                    }
                DkShape::Route& r = sh.froute[k][i][si];
                if (nmiss == 0) {
                    r.kind = 1;
                    r.tslot = pos[k - 1].at(zeta);
                } else if (missing == sl.j && sl.j >= 1 && sh.ranks[sl.j - 1] > 0) {
                    r.kind = 2;
                    r.tslot = pos[k - 1].at(zeta);
                } else {
                    r.kind = 0;  // inner Moore face, or boundary into a zero module
                }
            }
    }
    sh.droute.resize(vdim + 1);
    for (int k = 0; k < vdim; ++k) {
        sh.droute[k].assign(k + 1, std::vector<int>(sh.slots[k].size()));
        for (int i = 0; i <= k; ++i)
            for (size_t si = 0; si < sh.slots[k].size(); ++si) {
                const auto& sl = sh.slots[k][si];
                std::vector<int> zeta(k + 2);
                for (int t = 0; t <= k + 1; ++t) zeta[t] = sl.eta[t <= i ? t : t - 1];
                sh.droute[k][i][si] = pos[k + 1].at(zeta);
            }
    }
    return sh;
}

std::vector<int> DkShape::decode(int k, i64 cell) const {
    std::vector<int> dig(digits[k]);
    for (int t = 0; t < digits[k]; ++t) {
        dig[t] = (int)(cell % R->n);
        cell /= R->n;
    }
    return dig;
}

i64 DkShape::encode(int k, const std::vector<int>& dig) const {
    i64 cell = 0;
    for (int t = digits[k] - 1; t >= 0; --t) cell = cell * R->n + dig[t];
    return cell;
}

std::vector<int> DkShape::face(int k, int i, const std::vector<int>& dig) const {
    std::vector<int> out(digits[k - 1], R->zero);
    for (size_t si = 0; si < slots[k].size(); ++si) {
        const Route& rt = froute[k][i][si];
        if (rt.kind == 0) continue;
        int j = slots[k][si].j, off = offs[k][si], toff = offs[k - 1][rt.tslot];
        if (rt.kind == 1) {
            for (int t = 0; t < ranks[j]; ++t) out[toff + t] = R->a(out[toff + t], dig[off + t]);
        } else {
            const Mat& B = bds[j];
            for (int c = 0; c < ranks[j]; ++c) {
                int v = dig[off + c];
                if (v == R->zero) continue;
                for (int r = 0; r < ranks[j - 1]; ++r) {
                    i64 e = B.at(r, c);
                    if (e) out[toff + r] = R->a(out[toff + r], R->scale(e, v));
                }
            }
        }
    }
    return out;
}

std::vector<int> DkShape::degen(int k, int i, const std::vector<int>& dig) const {
    std::vector<int> out(digits[k + 1], R->zero);
    for (size_t si = 0; si < slots[k].size(); ++si) {
        int j = slots[k][si].j, off = offs[k][si], toff = offs[k + 1][droute[k][i][si]];
        for (int t = 0; t < ranks[j]; ++t) out[toff + t] = dig[off + t];
    }
    return out;
}

std::vector<int> DkShape::id_slot(int k, const std::vector<int>& dig) const {
    int rk = k < (int)ranks.size() ? ranks[k] : 0;
    std::vector<int> out(rk, R->zero);
    if (idslot[k] >= 0)
        for (int t = 0; t < rk; ++t) out[t] = dig[offs[k][idslot[k]] + t];
    return out;
}

DkRealized dk_realize(const DkModel& M, int dim_top, i64 max_cells) {
    DkRealized out;
    out.shape = dk_shape(M, dim_top);
    const DkShape& sh = out.shape;
    int cut = -1;
    for (int k = 0; k <= dim_top && sh.ncells[k] <= max_cells; ++k) cut = k;
    if (cut < 0)
        throw SizeBudgetExceeded("realization: " + ints(sh.ncells[0]) +
                                 " vertices exceed the cell budget " + ints(max_cells));
    out.cut = cut;
    FinSSet& S = out.s.s;
    S.dim_top = cut;
    S.card.resize(cut + 1);
    S.face.resize(cut + 1);
    S.degen.resize(cut + 1);
    for (int k = 0; k <= cut; ++k) S.card[k] = (int)sh.ncells[k];
    for (int k = 1; k <= cut; ++k) {
        S.face[k].assign(k + 1, std::vector<int>(S.card[k]));
        for (int x = 0; x < S.card[k]; ++x) {
            std::vector<int> dig = sh.decode(k, x);
            for (int i = 0; i <= k; ++i) S.face[k][i][x] = (int)sh.encode(k - 1, sh.face(k, i, dig));
        }
    }
    for (int k = 0; k < cut; ++k) {
        S.degen[k].assign(k + 1, std::vector<int>(S.card[k]));
        for (int x = 0; x < S.card[k]; ++x) {
            std::vector<int> dig = sh.decode(k, x);
            for (int i = 0; i <= k; ++i)
                S.degen[k][i][x] = (int)sh.encode(k + 1, sh.degen(k, i, dig));
        }
    }
    S.validate();
    out.s.bp = (int)sh.encode(0, rv_zero(*sh.R, sh.digits[0]));
    return out;
}

SMap dk_map(const DkRealized& A, const DkRealized& B, const std::vector<Mat>& F) {
    int K = std::min(A.cut, B.cut);
    const DkShape& sa = A.shape;
    const DkShape& sb = B.shape;
    const FinCommRing& R = *sa.R;
    /* slot correspondence by surjection */
    std::vector<std::map<std::vector<int>, int>> bpos(K + 1);
    for (int k = 0; k <= K; ++k)
        for (size_t si = 0; si < sb.slots[k].size(); ++si) bpos[k][sb.slots[k][si].eta] = (int)si;
    SMap f;
    f.comp.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        f.comp[k].resize(A.s.s.card[k]);
        for (int x = 0; x < A.s.s.card[k]; ++x) {
            std::vector<int> dig = sa.decode(k, x);
            std::vector<int> out(sb.digits[k], R.zero);
            for (size_t si = 0; si < sa.slots[k].size(); ++si) {
                const auto& sl = sa.slots[k][si];
                if (sl.j >= (int)sb.ranks.size() || sb.ranks[sl.j] == 0) continue;
                auto it = bpos[k].find(sl.eta);
                if (it == bpos[k].end()) continue;
                if (sl.j >= (int)F.size())
                    throw Error("dk_map: missing chain matrix in degree " + ints(sl.j));
                RVec block(dig.begin() + sa.offs[k][si],
                           dig.begin() + sa.offs[k][si] + sa.ranks[sl.j]);
                RVec v = mat_app_r(R, F[sl.j], block);
                int toff = sb.offs[k][it->second];
                for (int t = 0; t < (int)v.size(); ++t) out[toff + t] = R.a(out[toff + t], v[t]);
            }
            f.comp[k][x] = (int)sb.encode(k, out);
        }
    }
    validate_smap(A.s.s, B.s.s, f);
    return f;
}

/* ==================================================================== */
/*  sphere-model chain machinery (shuffle products, fundamental cycles) */
/* ==================================================================== */

namespace {

/* apply a degeneracy set (ascending positions, applied lowest first) to the
   coordinates of a smash-power cell */
std::vector<int> apply_degens(const FinSSet& circ, std::vector<int> coords, int dim,
                              const std::vector<int>& set) {
    for (int b : set) {
        for (int& c : coords) c = circ.degen[dim][b][c];
        ++dim;
    }
    return coords;
}

struct SphereChains {
    std::vector<SphereModel> S;  // S[n] for n >= 1
    PSSet s0;
    std::vector<ChainCx> cx;  // reduced chains per n (0 included)
    FinSSet circ;
    int D = 0;

    const PSSet& level(int n) const { return n == 0 ? s0 : S[n].s; }
};

SphereChains sphere_chains(int N, int D) {
    SphereChains sc;
    sc.D = D;
    sc.s0 = sphere0(D);
    sc.circ = circle(D).s;
    sc.S.resize(N + 1);
    sc.cx.resize(N + 1);
    sc.cx[0] = reduced_chains(sc.s0, D);
    for (int n = 1; n <= N; ++n) {
        sc.S[n] = sphere_model(n, D);
        sc.cx[n] = reduced_chains(sc.S[n].s, D);
    }
    return sc;
}

/* Signed normalized representatives of the chain basis cells: the projector
   (1 - s_{j-1}d_{j-1}) ... (1 - s_0 d_0) onto the intersection of the lower
   face kernels, applied to the basis, with the sign that matches the top-face
   boundary routing of the realization. */
struct MooreReps {
    std::vector<Mat> rep;                 // [j]: non-basepoint cells x chain rank
    std::vector<std::vector<int>> nb;     // cell id -> coefficient row, -1 at bp
    std::vector<std::vector<int>> cells;  // coefficient row -> cell id
};

MooreReps moore_reps(const PSSet& X, const ChainCx& cx, int through) {
    MooreReps U;
    U.nb.resize(through + 1);
    U.cells.resize(through + 1);
    for (int k = 0; k <= through; ++k) {
        U.nb[k].assign(X.s.card[k], -1);
        for (int c = 0; c < X.s.card[k]; ++c)
            if (c != X.bp_cell(k)) {
                U.nb[k][c] = (int)U.cells[k].size();
                U.cells[k].push_back(c);
            }
    }
    auto dmat = [&](int k, int i) {
        Mat D((int)U.cells[k - 1].size(), (int)U.cells[k].size());
        for (size_t p = 0; p < U.cells[k].size(); ++p) {
            int f = X.s.face[k][i][U.cells[k][p]];
            if (U.nb[k - 1][f] >= 0) D.at(U.nb[k - 1][f], (int)p) = 1;
        }
        return D;
    };
    auto smat = [&](int k, int i) {
        Mat S((int)U.cells[k + 1].size(), (int)U.cells[k].size());
        for (size_t p = 0; p < U.cells[k].size(); ++p)
            S.at(U.nb[k + 1][X.s.degen[k][i][U.cells[k][p]]], (int)p) = 1;
        return S;
    };
    U.rep.resize(through + 1);
    for (int j = 0; j <= through; ++j) {
        Mat P = Mat::id((int)U.cells[j].size());
        for (int i = 0; i <= j - 1; ++i) {
            Mat SD = mat_mul(smat(j - 1, i), dmat(j, i));
            Mat Q = Mat::id(SD.r);
            for (int r = 0; r < SD.r; ++r)
                for (int c = 0; c < SD.c; ++c) Q.at(r, c) -= SD.at(r, c);
            P = mat_mul(Q, P);
        }
        int sign = (j * (j + 1) / 2) % 2 == 0 ? 1 : -1;
        U.rep[j] = Mat((int)U.cells[j].size(), cx.rank[j]);
        for (int b = 0; b < cx.rank[j]; ++b) {
            int col = U.nb[j][cx.ndcell[j][b]];
            for (int r = 0; r < U.rep[j].r; ++r)
                U.rep[j].at(r, b) = sign * P.at(r, col);
        }
    }
    return U;
}

/* The realization of the reduced chains of a pointed simplicial set is
   canonically one free coefficient module per non-basepoint cell.  Per
   dimension, psi writes a digit vector as cell coefficients: the column of a
   digit (slot eta over degree j, basis cell y) is the eta-degeneracy of the
   normalized representative of y -- y minus its lower-face degeneracy tail,
   signed so that the slot boundary routing matches the top face.  phi is the
   integral inverse. */
struct DkUnit {
    std::vector<Mat> psi, phi;
    std::vector<std::vector<int>> nb;     // cell id -> coefficient row, -1 at bp
    std::vector<std::vector<int>> cells;  // coefficient row -> cell id
};

DkUnit dk_unit(const PSSet& X, const ChainCx& cx, const DkShape& sh, int through) {
    DkUnit U;
    MooreReps M = moore_reps(X, cx, through);
    U.nb = M.nb;
    U.cells = M.cells;
    auto smat = [&](int k, int i) {
        Mat S((int)U.cells[k + 1].size(), (int)U.cells[k].size());
        for (size_t p = 0; p < U.cells[k].size(); ++p)
            S.at(U.nb[k + 1][X.s.degen[k][i][U.cells[k][p]]], (int)p) = 1;
        return S;
    };
    std::function<Mat(const std::vector<int>&)> seta = [&](const std::vector<int>& e) -> Mat {
        int k = (int)e.size() - 1;
        if (k == e.back()) return Mat::id((int)U.cells[k].size());
        int i = 0;
        while (e[i] != e[i + 1]) ++i;
        std::vector<int> e2 = e;
        e2.erase(e2.begin() + i);
        return mat_mul(smat(k - 1, i), seta(e2));
    };
    U.psi.resize(through + 1);
    U.phi.resize(through + 1);
    for (int k = 0; k <= through; ++k) {
        U.psi[k] = Mat((int)U.cells[k].size(), sh.digits[k]);
        for (size_t si = 0; si < sh.slots[k].size(); ++si) {
            Mat col = mat_mul(seta(sh.slots[k][si].eta), M.rep[sh.slots[k][si].j]);
            for (int b = 0; b < col.c; ++b)
                for (int r = 0; r < col.r; ++r)
                    U.psi[k].at(r, sh.offs[k][si] + b) = col.at(r, b);
        }
        std::optional<Mat> inv = solve_mat(U.psi[k], Mat::id(U.psi[k].r));
        if (!inv || U.psi[k].r != U.psi[k].c)
            throw LawViolation("realization: coefficient basis is not invertible at dimension " +
                               ints(k));
        U.phi[k] = *inv;
    }
    return U;
}

/* Shuffle pairing C(m) (x) C(n) -> C(m+n) along coordinate concatenation:
   sum over interleavings, the first factor advancing on positions P, with
   the sign counting inversions between P and its complement. */
ChainPairing shuffle_pairing(const SphereChains& sc, int m, int n) {
    int D = sc.D;
    const ChainCx& ca = sc.cx[m];
    const ChainCx& cb = sc.cx[n];
    const ChainCx& ct = sc.cx[m + n];
    ChainPairing mu;
    mu.comp.assign(D + 1, {});
    for (int p = 0; p <= D; ++p) {
        mu.comp[p].assign(D + 1 - p, Mat());
        for (int q = 0; p + q <= D; ++q) {
            Mat& M = mu.comp[p][q];
            M = Mat(ct.rank[p + q], ca.rank[p] * cb.rank[q]);
            if (m == 0 || n == 0) {
                /* one factor is the two-point sphere: concatenation is the
                   identity on the other factor's coordinates */
                if (m == 0 && p == 0) {
                    for (int y = 0; y < cb.rank[q]; ++y) M.at(y, y) = 1;
                } else if (n == 0 && q == 0) {
                    for (int x = 0; x < ca.rank[p]; ++x) M.at(x, x) = 1;
                }
                continue;
            }
            for (int xi = 0; xi < ca.rank[p]; ++xi)
                for (int yi = 0; yi < cb.rank[q]; ++yi) {
                    const std::vector<int>& xrep = sc.S[m].rep[p][ca.ndcell[p][xi]];
                    const std::vector<int>& yrep = sc.S[n].rep[q][cb.ndcell[q][yi]];
                    /* enumerate all position subsets P of size p */
                    std::vector<int> P(p);
                    std::function<void(int, int)> go = [&](int start, int got) {
                        if (got == p) {
                            std::vector<int> Q;
                            for (int t = 0; t < p + q; ++t)
                                if (std::find(P.begin(), P.end(), t) == P.end()) Q.push_back(t);
                            int inv = 0;
                            for (int a : P)
                                for (int b : Q)
                                    if (b < a) ++inv;
                            std::vector<int> xc = apply_degens(sc.circ, xrep, p, Q);
                            std::vector<int> yc = apply_degens(sc.circ, yrep, q, P);
                            xc.insert(xc.end(), yc.begin(), yc.end());
                            int cell = sc.S[m + n].class_of(p + q, xc);
                            int ti = ct.ndindex[p + q][cell];
                            if (ti >= 0) M.at(ti, xi * cb.rank[q] + yi) += (inv % 2 ? -1 : 1);
                            return;
                        }
                        for (int t = start; t <= p + q - (p - got); ++t) {
                            P[got] = t;
                            go(t + 1, got + 1);
                        }
                    };
                    go(0, 0);
                }
        }
    }
    return mu;
}

/* fundamental cycle of C(n) in degree n, built by prepending the edge */
std::vector<Mat> sig_from_mu(const ChainPairing& mu1n, int D) {
    std::vector<Mat> sig(D);
    for (int j = 0; j + 1 <= D; ++j) sig[j] = mu1n.comp[1][j];
    return sig;
}

std::vector<i64> mat_vec(const Mat& M, const std::vector<i64>& v) {
    std::vector<i64> out(M.r, 0);
    for (int i = 0; i < M.r; ++i)
        for (int j = 0; j < M.c; ++j) out[i] += M.at(i, j) * v[j];
    return out;
}

}  // namespace

/* ==================================================================== */
/*  law checks                                                          */
/* ==================================================================== */

namespace {

/* --- shared realized checks (levels + simplicial maps) --- */

struct NestedSmash {
    std::vector<SmashResult> sm;  // sm[t] = smash(circle, previous), t = 1..p
    std::vector<PSSet> ps;        // ps[0] = base, ps[t] = sm[t].s
};

NestedSmash build_nest(const PSSet& base, int p, int dim) {
    NestedSmash ns;
    ns.ps.push_back(base);
    ns.sm.resize(p + 1);
    PSSet circ = circle(dim);
    for (int t = 1; t <= p; ++t) {
        ns.sm[t] = smash(circ, ns.ps.back());
        ns.ps.push_back(ns.sm[t].s);
    }
    return ns;
}

/* split a nested cell into circle coordinates (outermost first) and core */
void nest_split(const NestedSmash& ns, int p, int k, int cell, std::vector<int>& ts, int& core) {
    ts.clear();
    int cur = cell;
    for (int t = p; t >= 1; --t) {
        int w = ns.sm[t].section[k][cur];
        auto [a, b] = prod_split(ns.ps[t - 1].s, k, w);
        ts.push_back(a);
        cur = b;
    }
    core = cur;
}

int nest_join(const NestedSmash& ns, int p, int k, const std::vector<int>& ts, int core) {
    int cur = core;
    for (int t = 1; t <= p; ++t)
        cur = ns.sm[t].proj[k][prod_index(ns.ps[t - 1].s, k, ts[p - t], cur)];
    return cur;
}

i64 total_cells(const FinSSet& X) {
    i64 s = 0;
    for (int c : X.card) s += c;
    return s;
}

/* Realized equivariance of the iterated structure maps: the p-fold composite
   on nested circle smashes commutes with Sigma_p x Sigma_n, the permutation
   acting on the nested circle coordinates and the level. */
void check_iterated_realized(const SymSpectrum& E, i64 budget) {
    for (int n = 0; n + 1 <= E.N; ++n) {
        if (E.sig.empty() || n >= (int)E.sig.size() || E.sig[n].comp.empty()) continue;
        int maxp = 0;
        for (int p = 1; n + p <= E.N; ++p) {
            if ((int)E.sig.size() < n + p || E.sig[n + p - 1].comp.empty()) break;
            maxp = p;
        }
        for (int p = 2; p <= maxp; ++p) {
            int dim = E.level[n].s.s.dim_top;
            for (int t = 0; t < p; ++t) dim = std::min(dim, E.level[n + t + 1].s.s.dim_top);
            if (total_cells(E.level[n].s.s) * (dim + 1) * (dim + 1) > budget) continue;
            NestedSmash ns = build_nest(E.level[n].s, p, dim);
            /* iterated structure map: lift over the outer circle, then one step;
               cell ids of truncated smashes agree dimensionwise, so the stored
               structure maps restrict */
            std::vector<SMap> it(p + 1);  // it[t] : ns.ps[t] -> level[n+t]
            it[0] = smap_id(E.level[n].s.s);
            for (int t = 1; t <= p; ++t) {
                const SmashResult& src = ns.sm[t];
                SmashResult tgt = smash(circle(dim), E.level[n + t - 1].s);
                const SMap& stored = E.sig[n + t - 1];
                int K = std::min((int)src.s.s.dim_top, (int)tgt.s.s.dim_top);
                K = std::min(K, (int)stored.comp.size() - 1);
                K = std::min(K, (int)it[t - 1].comp.size() - 1);
                it[t].comp.resize(K + 1);
                for (int k = 0; k <= K; ++k) {
                    it[t].comp[k].resize(src.s.s.card[k]);
                    for (int c = 0; c < src.s.s.card[k]; ++c) {
                        int w = src.section[k][c];
                        auto [a, b] = prod_split(ns.ps[t - 1].s, k, w);
                        int b2 = it[t - 1].comp[k][b];
                        int lifted = tgt.proj[k][prod_index(E.level[n + t - 1].s.s, k, a, b2)];
                        it[t].comp[k][c] = stored.comp[k][lifted];
                    }
                }
            }
            /* equivariance against all (rho, tau) */
            for (const Perm& rho : all_perms(p))
                for (const Perm& tau : all_perms(n)) {
                    Perm big = perm_block_sum(rho, tau);
                    const SMap& after = E.act[n + p][perm_index(big)];
                    int K = (int)it[p].comp.size() - 1;
                    K = std::min<int>(K, (int)after.comp.size() - 1);
                    for (int k = 0; k <= K; ++k)
                        for (int c = 0; c < ns.ps[p].s.card[k]; ++c) {
                            std::vector<int> ts;
                            int core;
                            nest_split(ns, p, k, c, ts, core);
                            std::vector<int> ts2(p);
                            for (int i = 0; i < p; ++i) ts2[rho[i]] = ts[i];
                            int core2 = E.act[n][perm_index(tau)].comp[k][core];
                            int c2 = nest_join(ns, p, k, ts2, core2);
                            if (after.comp[k][it[p].comp[k][c]] != it[p].comp[k][c2])
                                throw LawViolation(
                                    "spectrum: iterated structure map not equivariant at level " +
                                    ints(n) + ", p = " + ints(p) + ", dim " + ints(k) + ", cell " +
                                    ints(c));
                        }
                }
        }
    }
}

void check_realized_actions(const SymSpectrum& E) {
    for (int n = 0; n <= E.N; ++n) {
        if (n >= (int)E.act.size()) break;
        auto perms = all_perms(n);
        if (E.act[n].size() != perms.size())
            throw LawViolation("spectrum: action table size at level " + ints(n));
        const FinSSet& L = E.level[n].s.s;
        for (auto& f : E.act[n]) validate_smap(L, L, f);
        if (!smap_equal(E.act[n][perm_index(perm_id(n))], smap_id(L)))
            throw LawViolation("spectrum: identity action fails at level " + ints(n));
        for (size_t a = 0; a < perms.size(); ++a)
            for (size_t b = 0; b < perms.size(); ++b) {
                int ab = perm_index(perm_compose(perms[a], perms[b]));
                if (!smap_equal(smap_compose(E.act[n][a], E.act[n][b]), E.act[n][ab]))
                    throw LawViolation("spectrum: action not a homomorphism at level " + ints(n));
            }
    }
}

void check_realized_sig_naturality(const SymSpectrum& E) {
    for (int n = 0; n + 1 <= E.N; ++n) {
        if ((int)E.sig.size() <= n || E.sig[n].comp.empty()) continue;
        const PSSet& src = E.sig_src[n];
        int dim = src.s.dim_top;
        SmashResult sm = smash(circle(dim), E.level[n].s);
        if (sm.s.s.card != src.s.card)
            throw LawViolation("spectrum: structure-map source changed shape at level " + ints(n));
        validate_smap(src.s, E.level[n + 1].s.s, E.sig[n]);
        for (const Perm& tau : all_perms(n)) {
            SMap lift;
            int K = (int)E.sig[n].comp.size() - 1;
            lift.comp.resize(src.s.dim_top + 1);
            for (int k = 0; k <= src.s.dim_top; ++k) {
                lift.comp[k].resize(src.s.card[k]);
                for (int c = 0; c < src.s.card[k]; ++c) {
                    int w = sm.section[k][c];
                    auto [a, b] = prod_split(E.level[n].s.s, k, w);
                    int b2 = E.act[n][perm_index(tau)].comp[k][b];
                    lift.comp[k][c] = sm.proj[k][prod_index(E.level[n].s.s, k, a, b2)];
                }
            }
            Perm big = perm_block_sum(perm_id(1), tau);
            for (int k = 0; k <= K; ++k)
                for (int c = 0; c < src.s.card[k]; ++c)
                    if (E.act[n + 1][perm_index(big)].comp[k][E.sig[n].comp[k][c]] !=
                        E.sig[n].comp[k][lift.comp[k][c]])
                        throw LawViolation("spectrum: structure map not natural at level " +
                                           ints(n) + ", dim " + ints(k) + ", cell " + ints(c));
        }
    }
}

}  // namespace

void check_spectrum_laws(const SymSpectrum& E) {
    if (E.N < 0 || (int)E.level.size() != E.N + 1)
        throw LawViolation("spectrum: level count does not match the bound");
    if (E.dk) {
        if (!E.R) throw LawViolation("spectrum: chain-backed without coefficients");
        const FinCommRing& R = *E.R;
        for (int n = 0; n <= E.N; ++n) {
            E.model[n].validate();
            auto perms = all_perms(n);
            if (E.act_ch[n].size() != perms.size())
                throw LawViolation("spectrum: chain action table size at level " + ints(n));
            int top = E.model[n].top();
            const auto& idm = E.act_ch[n][perm_index(perm_id(n))];
            for (int j = 0; j <= top; ++j)
                if (!mats_eq_r(R, idm[j], Mat::id(E.model[n].rank[j])))
                    throw LawViolation("spectrum: chain identity action at level " + ints(n));
            for (size_t a = 0; a < perms.size(); ++a)
                for (size_t b = 0; b < perms.size(); ++b) {
                    int ab = perm_index(perm_compose(perms[a], perms[b]));
                    for (int j = 0; j <= top; ++j)
                        if (!mats_eq_r(R, mat_mul(E.act_ch[n][a][j], E.act_ch[n][b][j]),
                                       E.act_ch[n][ab][j]))
                            throw LawViolation("spectrum: chain action composition at level " +
                                               ints(n));
                }
            /* actions are chain maps */
            for (size_t a = 0; a < perms.size(); ++a)
                for (int j = 1; j <= top; ++j)
                    if (!mats_eq_r(R, mat_mul(E.model[n].bd[j], E.act_ch[n][a][j]),
                                   mat_mul(E.act_ch[n][a][j - 1], E.model[n].bd[j])))
                        throw LawViolation("spectrum: action does not commute with the boundary " +
                                           ints(n));
        }
        for (int n = 0; n + 1 <= E.N; ++n) {
            int top = E.model[n].top();
            for (int j = 0; j < top; ++j) {
                Mat lhs = mat_mul(E.model[n + 1].bd[j + 1], E.sig_ch[n][j]);
                /* anticommutation: boundary after the prepend cancels the prepend
                   after the boundary */
                Mat sum = j >= 1 ? mat_add(lhs, mat_mul(E.sig_ch[n][j - 1], E.model[n].bd[j]))
                                 : lhs;
                for (int r = 0; r < sum.r; ++r)
                    for (int c = 0; c < sum.c; ++c)
                        if (R.of_int(sum.at(r, c)) != R.zero)
                            throw LawViolation(
                                "spectrum: structure map fails boundary anticommutation at "
                                "level " +
                                ints(n) + ", degree " + ints(j));
            }
            for (const Perm& tau : all_perms(n)) {
                Perm big = perm_block_sum(perm_id(1), tau);
                for (int j = 0; j < top; ++j)
                    if (!mats_eq_r(
                            R, mat_mul(E.act_ch[n + 1][perm_index(big)][j + 1], E.sig_ch[n][j]),
                            mat_mul(E.sig_ch[n][j], E.act_ch[n][perm_index(tau)][j])))
                        throw LawViolation("spectrum: structure map not natural at level " +
                                           ints(n) + ", degree " + ints(j));
            }
        }
    }
    check_realized_actions(E);
    check_realized_sig_naturality(E);
    check_iterated_realized(E, 2000000);
}

void check_ring_laws(const SymRingSpectrum& S) {
    check_spectrum_laws(S.E);
    const SymSpectrum& E = S.E;
    if (!E.dk) throw LawViolation("ring spectrum: chain backing required");
    const FinCommRing& R = *E.R;
    int N = E.N;
    auto mu = [&](int m, int n) -> const ChainPairing& { return S.mu_ch.at({m, n}); };
    auto rank = [&](int n, int j) {
        return j <= E.model[n].top() ? E.model[n].rank[j] : 0;
    };
    auto mucol = [&](int m, int n, int p, int q, int x, int y) {
        const Mat& M = mu(m, n).comp[p][q];
        std::vector<i64> col(M.r);
        for (int r = 0; r < M.r; ++r) col[r] = M.at(r, x * rank(n, q) + y);
        return col;
    };
    auto req = [&](bool ok, const std::string& w) {
        if (!ok) throw LawViolation("ring spectrum: " + w);
    };
    auto eq_r = [&](const std::vector<i64>& a, const std::vector<i64>& b) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (R.of_int(a[i]) != R.of_int(b[i])) return false;
        return true;
    };

    req((int)S.unit_vec.size() == rank(0, 0), "unit vector size");
    /* unit laws, contracting the unit vector through the pairing */
    for (int n = 0; n <= N; ++n)
        for (int q = 0; q <= E.model[n].top(); ++q)
            for (int y = 0; y < rank(n, q); ++y) {
                std::vector<int> lv(rank(n, q), R.zero), rv(rank(n, q), R.zero);
                for (int w = 0; w < rank(0, 0); ++w) {
                    if (S.unit_vec[w] == R.zero) continue;
                    auto cl = mucol(0, n, 0, q, w, y);
                    auto cr = mucol(n, 0, q, 0, y, w);
                    for (int r = 0; r < rank(n, q); ++r) {
                        lv[r] = R.a(lv[r], R.m(R.of_int(cl[r]), S.unit_vec[w]));
                        rv[r] = R.a(rv[r], R.m(R.of_int(cr[r]), S.unit_vec[w]));
                    }
                }
                for (int r = 0; r < rank(n, q); ++r) {
                    int want = r == y ? R.one : R.zero;
                    req(lv[r] == want, "left unit at level " + ints(n) + ", degree " + ints(q));
                    req(rv[r] == want, "right unit at level " + ints(n) + ", degree " + ints(q));
                }
            }

    int D = E.model[0].top();
    /* Leibniz rule */
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n)
            for (int p = 0; p <= D; ++p)
                for (int q = 0; p + q <= D; ++q) {
                    if (p + q == 0) continue;
                    for (int x = 0; x < rank(m, p); ++x)
                        for (int y = 0; y < rank(n, q); ++y) {
                            std::vector<i64> lhs =
                                mat_vec(E.model[m + n].bd[p + q], mucol(m, n, p, q, x, y));
                            std::vector<i64> rhs(rank(m + n, p + q - 1), 0);
                            if (p >= 1)
                                for (int x2 = 0; x2 < rank(m, p - 1); ++x2) {
                                    i64 e = E.model[m].bd[p].at(x2, x);
                                    if (!e) continue;
                                    auto c = mucol(m, n, p - 1, q, x2, y);
                                    for (size_t r = 0; r < c.size(); ++r) rhs[r] += e * c[r];
                                }
                            if (q >= 1)
                                for (int y2 = 0; y2 < rank(n, q - 1); ++y2) {
                                    i64 e = E.model[n].bd[q].at(y2, y);
                                    if (!e) continue;
                                    auto c = mucol(m, n, p, q - 1, x, y2);
                                    int sg = p % 2 ? -1 : 1;
                                    for (size_t r = 0; r < c.size(); ++r) rhs[r] += sg * e * c[r];
                                }
                            req(eq_r(lhs, rhs), "Leibniz rule at levels (" + ints(m) + "," +
                                                    ints(n) + "), bidegree (" + ints(p) + "," +
                                                    ints(q) + ")");
                        }
                }

    /* associativity */
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n)
            for (int k = 0; m + n + k <= N; ++k)
                for (int p = 0; p <= D; ++p)
                    for (int q = 0; p + q <= D; ++q)
                        for (int r = 0; p + q + r <= D; ++r)
                            for (int x = 0; x < rank(m, p); ++x)
                                for (int y = 0; y < rank(n, q); ++y)
                                    for (int z = 0; z < rank(k, r); ++z) {
                                        std::vector<i64> lhs(rank(m + n + k, p + q + r), 0);
                                        auto in = mucol(m, n, p, q, x, y);
                                        for (int w = 0; w < (int)in.size(); ++w) {
                                            if (!in[w]) continue;
                                            auto c = mucol(m + n, k, p + q, r, w, z);
                                            for (size_t t = 0; t < c.size(); ++t)
                                                lhs[t] += in[w] * c[t];
                                        }
                                        std::vector<i64> rhs(rank(m + n + k, p + q + r), 0);
                                        auto in2 = mucol(n, k, q, r, y, z);
                                        for (int w = 0; w < (int)in2.size(); ++w) {
                                            if (!in2[w]) continue;
                                            auto c = mucol(m, n + k, p, q + r, x, w);
                                            for (size_t t = 0; t < c.size(); ++t)
                                                rhs[t] += in2[w] * c[t];
                                        }
                                        req(eq_r(lhs, rhs),
                                            "associativity at levels (" + ints(m) + "," + ints(n) +
                                                "," + ints(k) + ")");
                                    }

    /* block equivariance */
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n)
            for (const Perm& sg : all_perms(m))
                for (const Perm& tu : all_perms(n)) {
                    Perm big = perm_block_sum(sg, tu);
                    int bi = perm_index(big);
                    for (int p = 0; p <= D; ++p)
                        for (int q = 0; p + q <= D; ++q)
                            for (int x = 0; x < rank(m, p); ++x)
                                for (int y = 0; y < rank(n, q); ++y) {
                                    std::vector<i64> lhs = mat_vec(E.act_ch[m + n][bi][p + q],
                                                                   mucol(m, n, p, q, x, y));
                                    std::vector<i64> rhs(rank(m + n, p + q), 0);
                                    const Mat& A = E.act_ch[m][perm_index(sg)][p];
                                    const Mat& B = E.act_ch[n][perm_index(tu)][q];
                                    for (int x2 = 0; x2 < rank(m, p); ++x2)
                                        for (int y2 = 0; y2 < rank(n, q); ++y2) {
                                            i64 e = A.at(x2, x) * B.at(y2, y);
                                            if (!e) continue;
                                            auto c = mucol(m, n, p, q, x2, y2);
                                            for (size_t t = 0; t < c.size(); ++t)
                                                rhs[t] += e * c[t];
                                        }
                                    req(eq_r(lhs, rhs), "equivariance of the product at levels (" +
                                                            ints(m) + "," + ints(n) + ")");
                                }
                }

    /* commutativity twist */
    if (S.commutative)
        for (int m = 0; m <= N; ++m)
            for (int n = 0; m + n <= N; ++n) {
                Perm tw(m + n);
                for (int i = 0; i < m; ++i) tw[i] = n + i;
                for (int i = 0; i < n; ++i) tw[m + i] = i;
                int ti = perm_index(tw);
                for (int p = 0; p <= D; ++p)
                    for (int q = 0; p + q <= D; ++q)
                        for (int x = 0; x < rank(m, p); ++x)
                            for (int y = 0; y < rank(n, q); ++y) {
                                std::vector<i64> lhs =
                                    mat_vec(E.act_ch[m + n][ti][p + q], mucol(m, n, p, q, x, y));
                                std::vector<i64> rhs = mucol(n, m, q, p, y, x);
                                int sg = (p % 2 && q % 2) ? -1 : 1;
                                for (i64& v : rhs) v *= sg;
                                req(eq_r(lhs, rhs), "commutativity twist at levels (" + ints(m) +
                                                        "," + ints(n) + "), bidegree (" + ints(p) +
                                                        "," + ints(q) + ")");
                            }
            }

    /* structure maps are multiplication by the circle generator */
    for (int n = 0; n + 1 <= N; ++n)
        for (int j = 0; j < (int)E.sig_ch[n].size(); ++j)
            req(E.sig_ch[n][j] == S.mu_ch.at({1, n}).comp[1][j],
                "structure map differs from the circle product at level " + ints(n));
}

/* ==================================================================== */
/*  Eilenberg-MacLane spectra                                           */
/* ==================================================================== */

SymRingSpectrum em_spectrum(const FinCommRing& R, int N, i64 realize_budget) {
    if (N < 1) throw ObjectOutOfRange("em_spectrum: level bound >= 1 required");
    int D = N + 1;
    SymRingSpectrum out;
    SymSpectrum& E = out.E;
    E.N = N;
    E.dk = true;
    E.R = &R;

    SphereChains sc = sphere_chains(N, D);
    E.model.resize(N + 1);
    for (int n = 0; n <= N; ++n) E.model[n] = chains_model(sc.level(n), &R, D);

    E.act_ch.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        auto perms = all_perms(n);
        E.act_ch[n].resize(perms.size());
        for (size_t a = 0; a < perms.size(); ++a) {
            if (n == 0) {
                E.act_ch[0][0].resize(D + 1);
                for (int j = 0; j <= D; ++j) E.act_ch[0][0][j] = Mat::id(E.model[0].rank[j]);
            } else {
                SMap f = sphere_perm_action(sc.S[n], perms[a]);
                E.act_ch[n][a] = chain_map(sc.cx[n], sc.cx[n], f);
            }
        }
    }

    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) out.mu_ch[{m, n}] = shuffle_pairing(sc, m, n);

    E.sig_ch.resize(N);
    for (int n = 0; n + 1 <= N; ++n) E.sig_ch[n] = sig_from_mu(out.mu_ch.at({1, n}), D);

    out.unit_vec = {R.one};
    out.commutative = true;

    /* fundamental cycles close under the boundary */
    {
        std::vector<i64> z = {1};
        for (int n = 1; n <= N; ++n) {
            Mat step = out.mu_ch.at({1, n - 1}).comp[1][n - 1];
            z = mat_vec(step, z);
            std::vector<i64> dz = mat_vec(E.model[n].bd[n], z);
            for (i64 v : dz)
                if (v) throw LawViolation("em_spectrum: fundamental chain is not a cycle");
        }
    }

    /* homotopy of each level at its own degree is the coefficient group */
    for (int n = 0; n <= N; ++n) {
        auto pis = moore_homotopy(E.model[n], n);
        for (int k = 0; k <= n; ++k)
            if (!(pis[k] == (k == n ? R.additive() : FinAb{})))
                throw LawViolation("em_spectrum: level " + ints(n) +
                                   " has wrong homotopy in degree " + ints(k));
    }

    /* realize with per-level cuts, then transport the symmetric actions */
    E.level.resize(N + 1);
    for (int n = 0; n <= N; ++n) E.level[n] = dk_realize(E.model[n], D, realize_budget);
    E.act.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        auto perms = all_perms(n);
        E.act[n].resize(perms.size());
        for (size_t a = 0; a < perms.size(); ++a) {
            std::vector<Mat> F(D + 1);
            for (int j = 0; j <= D; ++j)
                F[j] = j < (int)E.act_ch[n][a].size() ? E.act_ch[n][a][j]
                                                      : Mat(E.model[n].rank[j], E.model[n].rank[j]);
            E.act[n][a] = dk_map(E.level[n], E.level[n], F);
        }
    }

    /* realized structure maps where the budget allows */
    E.sig.resize(N);
    E.sig_src.resize(N);
    std::vector<DkUnit> units(N + 1);
    for (int n = 0; n + 1 <= N; ++n) {
        int d = std::min(E.level[n].cut, E.level[n + 1].cut);
        i64 prod = 0;
        for (int k = 0; k <= d; ++k) prod += (i64)(k + 1) * E.level[n].s.s.card[k];
        if (prod > realize_budget) continue;
        PSSet circ = circle(d);
        SmashResult sm = smash(circ, E.level[n].s);
        E.sig_src[n] = sm.s;
        const DkShape& sa = E.level[n].shape;
        const DkShape& sb = E.level[n + 1].shape;
        /* Under the coefficient basis, a realized level is the free module
           on the non-basepoint cells of its sphere.  The structure map pastes
           the circle coordinate in front of every cell, transporting the
           coefficients along coordinate concatenation -- simplicial and
           strictly equivariant -- and the basis change carries it back to
           digit coordinates. */
        const FinSSet& XA = sc.level(n).s;
        if (units[n].psi.empty()) units[n] = dk_unit(sc.level(n), sc.cx[n], sa, E.level[n].cut);
        if (units[n + 1].psi.empty())
            units[n + 1] = dk_unit(sc.level(n + 1), sc.cx[n + 1], sb, E.level[n + 1].cut);
        const DkUnit& UA = units[n];
        const DkUnit& UB = units[n + 1];
        SphereConcat cc;
        if (n >= 1) cc = sphere_concat(sc.S[1], sc.S[n], sc.S[n + 1]);
        SMap f;
        f.comp.resize(d + 1);
        for (int k = 0; k <= d; ++k) {
            int nc = sm.s.s.card[k];
            f.comp[k].resize(nc);
            const std::vector<int> zero_dig(sb.digits[k], R.zero);
            for (int c = 0; c < nc; ++c) {
                if (c == sm.s.bp_cell(k)) {
                    f.comp[k][c] = (int)sb.encode(k, zero_dig);
                    continue;
                }
                auto [t, u] = prod_split(E.level[n].s.s, k, sm.section[k][c]);
                RVec coeff = mat_app_r(R, UA.psi[k], sa.decode(k, u));
                RVec out(UB.cells[k].size(), R.zero);
                for (size_t p = 0; p < coeff.size(); ++p) {
                    if (coeff[p] == R.zero) continue;
                    int w;
                    if (n >= 1) {
                        int cls = cc.sm.proj[k][(size_t)t * XA.card[k] + UA.cells[k][p]];
                        w = cc.iso.comp[k][cls];
                    } else {
                        w = t; // smashing with the free point of S^0
                    }
                    int row = UB.nb[k][w];
                    if (row < 0) continue; // collapsed to the basepoint
                    out[row] = R.a(out[row], coeff[p]);
                }
                f.comp[k][c] = (int)sb.encode(k, mat_app_r(R, UB.phi[k], out));
            }
        }
        validate_smap(sm.s.s, E.level[n + 1].s.s, f);
        E.sig[n] = f;
    }

    check_ring_laws(out);
    return out;
}

/* ==================================================================== */
/*  suspension spectra and the trivial spectrum                         */
/* ==================================================================== */

SymSpectrum trivial_spectrum(int N, int dim_top) {
    static const FinCommRing R2 = ring_zmod(2);
    SymSpectrum E;
    E.N = N;
    E.dk = true;
    E.R = &R2;
    E.model.resize(N + 1);
    E.act_ch.resize(N + 1);
    E.sig_ch.assign(std::max(N, 0), {});
    for (int n = 0; n <= N; ++n) {
        E.model[n].R = &R2;
        E.model[n].rank.assign(dim_top + 1, 0);
        E.model[n].bd.assign(dim_top + 1, Mat(0, 0));
        auto perms = all_perms(n);
        E.act_ch[n].assign(perms.size(), std::vector<Mat>(dim_top + 1, Mat(0, 0)));
    }
    for (int n = 0; n + 1 <= N; ++n) E.sig_ch[n].assign(dim_top, Mat(0, 0));
    E.level.resize(N + 1);
    E.act.resize(N + 1);
    E.sig.resize(std::max(N, 0));
    E.sig_src.resize(std::max(N, 0));
    for (int n = 0; n <= N; ++n) {
        E.level[n] = dk_realize(E.model[n], dim_top, 1000);
        E.act[n].assign(all_perms(n).size(), smap_id(E.level[n].s.s));
    }
    for (int n = 0; n + 1 <= N; ++n) {
        PSSet circ = circle(dim_top);
        SmashResult sm = smash(circ, E.level[n].s);
        E.sig_src[n] = sm.s;
        SMap f;
        f.comp.resize(sm.s.s.dim_top + 1);
        for (int k = 0; k <= sm.s.s.dim_top; ++k)
            f.comp[k].assign(sm.s.s.card[k], E.level[n + 1].s.bp_cell(k));
        validate_smap(sm.s.s, E.level[n + 1].s.s, f);
        E.sig[n] = f;
    }
    check_spectrum_laws(E);
    return E;
}

SymSpectrum sigma_bullet_plus(const ISpace& X, int N, i64 budget) {
    if (N > X.I->N) throw ObjectOutOfRange("suspension: level bound exceeds the diagram range");
    if (N < 0) throw ObjectOutOfRange("suspension: nonnegative level bound required");
    int D = X.dim();
    SymSpectrum E;
    E.N = N;
    E.dk = false;

    SphereChains sc = sphere_chains(std::max(N, 1), D);
    std::vector<SmashResult> sm(N + 1);
    std::vector<PSSet> plus(N + 1);
    E.level.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        plus[n] = adjoin_basepoint(X.lv(n));
        i64 prod = 0;
        for (int k = 0; k <= D; ++k) prod += (i64)plus[n].s.card[k] * sc.level(n).s.card[k];
        if (prod > budget)
            throw SizeBudgetExceeded("suspension: level " + ints(n) + " needs " + ints(prod) +
                                     " product cells");
        sm[n] = smash(plus[n], sc.level(n));
        E.level[n].s = sm[n].s;
        E.level[n].cut = D;
    }

    auto xact = [&](int mor, int k, int aplus) {
        if (aplus == 0) return 0;
        return X.X.act[mor].comp[k][aplus - 1] + 1;
    };

    E.act.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        auto perms = all_perms(n);
        E.act[n].resize(perms.size());
        for (size_t a = 0; a < perms.size(); ++a) {
            SMap f;
            f.comp.resize(D + 1);
            SMap sph = n >= 1 ? sphere_perm_action(sc.S[n], perms[a]) : SMap{};
            int mor = X.I->perm(n, perms[a]);
            for (int k = 0; k <= D; ++k) {
                f.comp[k].resize(sm[n].s.s.card[k]);
                for (int c = 0; c < sm[n].s.s.card[k]; ++c) {
                    int w = sm[n].section[k][c];
                    auto [ap, sl] = prod_split(sc.level(n).s, k, w);
                    int ap2 = xact(mor, k, ap);
                    int sl2 = n >= 1 ? sph.comp[k][sl] : sl;
                    f.comp[k][c] = sm[n].proj[k][prod_index(sc.level(n).s, k, ap2, sl2)];
                }
            }
            validate_smap(sm[n].s.s, sm[n].s.s, f);
            E.act[n][a] = f;
        }
    }

    E.sig.resize(std::max(N, 0));
    E.sig_src.resize(std::max(N, 0));
    for (int n = 0; n + 1 <= N; ++n) {
        PSSet circ = circle(D);
        SmashResult src = smash(circ, E.level[n].s);
        E.sig_src[n] = src.s;
        int mor = X.I->incl(n, n + 1);
        SMap f;
        f.comp.resize(D + 1);
        for (int k = 0; k <= D; ++k) {
            f.comp[k].resize(src.s.s.card[k]);
            for (int c = 0; c < src.s.s.card[k]; ++c) {
                int w = src.section[k][c];
                auto [t, v] = prod_split(E.level[n].s.s, k, w);
                int w2 = sm[n].section[k][v];
                auto [ap, sl] = prod_split(sc.level(n).s, k, w2);
                int ap2 = xact(mor, k, ap);
                int sl2;
                if (n == 0) {
                    /* the two-point sphere: nonbase point prepends to the circle cell */
                    sl2 = sl == sc.s0.bp_cell(k) ? sc.S[1].s.bp_cell(k) : t;
                } else {
                    std::vector<int> tuple = {t};
                    const auto& rep = sc.S[n].rep[k][sl];
                    tuple.insert(tuple.end(), rep.begin(), rep.end());
                    sl2 = sc.S[n + 1].class_of(k, tuple);
                }
                f.comp[k][c] = sm[n + 1].proj[k][prod_index(sc.level(n + 1).s, k, ap2, sl2)];
            }
        }
        validate_smap(src.s.s, E.level[n + 1].s.s, f);
        E.sig[n] = f;
    }

    check_spectrum_laws(E);
    return E;
}

/* ==================================================================== */
/*  stable homotopy                                                     */
/* ==================================================================== */

namespace {

/* suspension on reduced chains: z -> sum_a (-1)^a (degenerate edge, s_a z) */
Mat suspension_chain(const PSSet& circ_model, const ChainCx& cl, const ChainCx& csm,
                     const SmashResult& sm, const FinSSet& level, int ndim) {
    const FinSSet& circ = circ_model.s;
    Mat out(csm.rank[ndim + 1], cl.rank[ndim]);
    int edge = -1;
    for (int c = 0; c < circ.card[1]; ++c)
        if (!circ.is_degenerate(1, c)) edge = c;
    for (int zi = 0; zi < cl.rank[ndim]; ++zi) {
        int z = cl.ndcell[ndim][zi];
        for (int a = 0; a <= ndim; ++a) {
            /* circle coordinate: degeneracies at all positions except a,
               applied ascending */
            int t = edge;
            int dim = 1;
            for (int b = 0; b <= ndim; ++b) {
                if (b == a) continue;
                t = circ.degen[dim][b][t];
                ++dim;
            }
            int sz = level.degen[ndim][a][z];
            int cell = sm.proj[ndim + 1][prod_index(level, ndim + 1, t, sz)];
            int ci = csm.ndindex[ndim + 1][cell];
            if (ci >= 0) out.at(ci, zi) += (a % 2 ? -1 : 1);
        }
    }
    return out;
}

}  // namespace

std::vector<FinAb> spectrum_homotopy(const SymSpectrum& E, int k_max) {
    std::vector<FinAb> out(k_max + 1);
    if (E.dk) {
        int g = (int)(E.R ? E.R->orders.size() : 1);
        bool over_ring = E.R != nullptr;
        for (int k = 0; k <= k_max; ++k) {
            int maxn = -1;
            for (int n = 0; n <= E.N; ++n)
                if (k + n + 1 <= E.model[n].top()) maxn = n;
            if (maxn < 1)
                throw NotStabilized(k, "no consecutive levels reach degree " + ints(k));
            std::vector<HPres> H(maxn + 1);
            std::vector<FinAb> val(maxn + 1);
            for (int n = 0; n <= maxn; ++n) {
                PresCx cx = expand_model(E.model[n], k + n + 1);
                H[n] = pres_homology_at(cx, k + n);
                val[n] = finab_from_presentation(H[n].Z.c, H[n].rels);
            }
            std::vector<char> iso(maxn, 0);
            for (int n = 0; n < maxn; ++n) {
                Mat S = E.sig_ch[n][k + n];
                Mat Sx = over_ring ? expand_mat(S, g) : S;
                Mat f = homology_induced_map(H[n], H[n + 1], Sx);
                iso[n] = val[n] == val[n + 1] &&
                         map_iso_presented(f, H[n].Z.c, H[n].rels, H[n + 1].rels);
            }
            int n0 = -1;
            for (int n = maxn - 1; n >= 0; --n) {
                if (!iso[n]) break;
                n0 = n;
            }
            if (n0 < 0)
                throw NotStabilized(k, "structure maps never become isomorphisms on column " +
                                           ints(k));
            out[k] = val[n0];
        }
        return out;
    }

    /* level-backed: certified only in the connective range via the Hurewicz
       gate (each level (n-1)-connected, comparisons from level 2 on) */
    for (int k = 1; k <= k_max; ++k)
        throw NotStabilized(k, "outside the certified range for level-backed spectra");
    if (k_max >= 0) {
        int maxn = -1;
        std::vector<ChainCx> cxs(E.N + 1);
        std::vector<char> usable(E.N + 1, 0);
        for (int n = 2; n <= E.N; ++n) {
            if (E.level[n].s.s.dim_top < n + 1) continue;
            cxs[n] = reduced_chains(E.level[n].s, n + 1);
            auto hb = pres_homology(PresCx::free_cx(cxs[n].rank, cxs[n].bnd), n);
            bool conn = true;
            for (int j = 0; j < n; ++j)
                if (!(hb[j] == FinAb{})) conn = false;
            if (!conn) continue;
            usable[n] = 1;
            maxn = n;
        }
        if (maxn < 3) throw NotStabilized(0, "not enough connective levels for a certificate");
        std::vector<HPres> H(maxn + 1);
        std::vector<FinAb> val(maxn + 1);
        for (int n = 2; n <= maxn; ++n) {
            if (!usable[n]) continue;
            H[n] = pres_homology_at(PresCx::free_cx(cxs[n].rank, cxs[n].bnd), n);
            val[n] = finab_from_presentation(H[n].Z.c, H[n].rels);
        }
        std::vector<char> iso(maxn, 0);
        for (int n = 2; n < maxn; ++n) {
            if (!usable[n] || !usable[n + 1]) continue;
            if ((int)E.sig.size() <= n || E.sig[n].comp.empty())
                throw NotStabilized(0, "structure map between levels " + ints(n) + " and " +
                                           ints(n + 1) + " was not realized");
            PSSet circ = circle(E.sig_src[n].s.dim_top);
            SmashResult sm = smash(circ, E.level[n].s);
            ChainCx csm = reduced_chains(sm.s, n + 1);
            Mat susp = suspension_chain(circ, cxs[n], csm, sm, E.level[n].s.s, n);
            auto sgch = chain_map(csm, reduced_chains(E.level[n + 1].s, n + 1), E.sig[n]);
            Mat M = mat_mul(sgch[n + 1], susp);
            Mat f = homology_induced_map(H[n], H[n + 1], M);
            iso[n] = val[n] == val[n + 1] &&
                     map_iso_presented(f, H[n].Z.c, H[n].rels, H[n + 1].rels);
        }
        int n0 = -1;
        for (int n = maxn - 1; n >= 2; --n) {
            if (!iso[n]) break;
            n0 = n;
        }
        if (n0 < 0) throw NotStabilized(0, "no stabilized pair of connective levels");
        out[0] = val[n0];
    }
    return out;
}

/* ==================================================================== */
/*  loop diagrams                                                       */
/* ==================================================================== */

namespace {

struct OmegaData {
    std::shared_ptr<const InjCat> I;
    const FinCommRing* R = nullptr;
    std::vector<int> kdim;
    std::vector<Mat> K;                  // cycle bases, degree n of model[n]
    std::vector<i64> cells;              // |R|^kdim
    std::vector<std::vector<int>> act;   // [morphism][cell]
    std::vector<Perm> phihat;            // chosen permutation extension per morphism
};

RVec om_decode(const FinCommRing& R, int kd, i64 cell) {
    RVec v(kd);
    for (int t = 0; t < kd; ++t) {
        v[t] = (int)(cell % R.n);
        cell /= R.n;
    }
    return v;
}

i64 om_encode(const FinCommRing& R, const RVec& v) {
    i64 cell = 0;
    for (int t = (int)v.size() - 1; t >= 0; --t) cell = cell * R.n + v[t];
    return cell;
}

/* composite of single-coordinate prepends, degree m of model[m] to degree n
   of model[n] */
Mat prepend_chain(const SymSpectrum& E, int m, int n) {
    Mat T = Mat::id(E.model[m].rank[m]);
    for (int t = m; t < n; ++t) T = mat_mul(E.sig_ch[t][t], T);
    return T;
}

/* action table of one injection under a chosen permutation extension */
std::vector<int> omega_table(const SymSpectrum& E, const OmegaData& od, int m, int n,
                             const Perm& ext) {
    const FinCommRing& R = *E.R;
    Mat W = mat_mul(E.act_ch[n][perm_index(ext)][n], mat_mul(prepend_chain(E, m, n), od.K[m]));
    auto Q = solve_mat(od.K[n], W);
    if (!Q) throw LawViolation("loop diagram: action leaves the cycle lattice");
    int sg = perm_sign(ext);
    std::vector<int> table(od.cells[m]);
    for (i64 c = 0; c < od.cells[m]; ++c) {
        RVec u = om_decode(R, od.kdim[m], c);
        RVec w(od.kdim[n], R.zero);
        for (int i = 0; i < od.kdim[n]; ++i) {
            int acc = R.zero;
            for (int j = 0; j < od.kdim[m]; ++j) acc = R.a(acc, R.scale(sg * Q->at(i, j), u[j]));
            w[i] = acc;
        }
        table[c] = (int)om_encode(R, w);
    }
    return table;
}

Perm extension_of(const std::vector<int>& vals, int n, const Perm& arrange) {
    int m = (int)vals.size();
    std::vector<char> used(n, 0);
    for (int v : vals) used[v] = 1;
    std::vector<int> comp;
    for (int v = 0; v < n; ++v)
        if (!used[v]) comp.push_back(v);
    Perm ext(n);
    for (int i = 0; i < n - m; ++i) ext[i] = comp[arrange[i]];
    for (int i = 0; i < m; ++i) ext[n - m + i] = vals[i];
    return ext;
}

OmegaData omega_build(const SymSpectrum& E, i64 cell_budget) {
    if (!E.dk) throw NotDkBacked("loop diagram needs a chain-backed spectrum");
    OmegaData od;
    od.I = inj_cat(E.N);
    od.R = E.R;
    const FinCommRing& R = *E.R;
    od.kdim.resize(E.N + 1);
    od.K.resize(E.N + 1);
    od.cells.resize(E.N + 1);
    for (int n = 0; n <= E.N; ++n) {
        auto lw = loops_wb(E.model[n], n);
        od.kdim[n] = lw.L.rank[0];
        od.K[n] = lw.K;
        i64 c = 1;
        for (int t = 0; t < od.kdim[n]; ++t) {
            c *= R.n;
            if (c > cell_budget)
                throw SizeBudgetExceeded("loop diagram: level " + ints(n) + " has more than " +
                                         ints(cell_budget) + " cells");
        }
        od.cells[n] = c;
        /* orient rank-one cycle lattices along the image of the unit chain */
        if (od.kdim[n] == 1 && E.model[0].rank[0] == 1) {
            std::vector<i64> z = {1};
            Mat T = prepend_chain(E, 0, n);
            z = mat_vec(T, z);
            Mat Z(T.r, 1);
            for (int i = 0; i < T.r; ++i) Z.at(i, 0) = z[i];
            auto q = solve_mat(od.K[n], Z);
            if (q && q->at(0, 0) < 0)
                for (i64& v : od.K[n].a) v = -v;
        }
    }
    od.act.resize(od.I->cat.mor.size());
    od.phihat.resize(od.I->cat.mor.size());
    for (size_t f = 0; f < od.I->cat.mor.size(); ++f) {
        int m = od.I->cat.mor[f].src, n = od.I->cat.mor[f].dst;
        od.phihat[f] = extension_of(od.I->vals[f], n, perm_id(n - m));
        od.act[f] = omega_table(E, od, m, n, od.phihat[f]);
    }
    return od;
}

ISpace omega_space_from(const OmegaData& od, int dim_top) {
    ISpace X;
    X.I = od.I;
    X.X.base = &od.I->cat;
    X.X.ob.resize(od.I->N + 1);
    X.X.act.resize(od.I->cat.mor.size());
    for (int n = 0; n <= od.I->N; ++n) X.X.ob[n] = discrete_sset((int)od.cells[n], dim_top);
    for (size_t f = 0; f < od.I->cat.mor.size(); ++f) {
        SMap g;
        g.comp.assign(dim_top + 1, od.act[f]);
        X.X.act[f] = g;
    }
    X.X.validate();
    return X;
}

}  // namespace

ISpace omega_space(const SymSpectrum& E, int dim_top) {
    return omega_space_from(omega_build(E, 1 << 20), dim_top);
}

OmegaBullet omega_bullet(const SymRingSpectrum& S, int dim_top, unsigned seed) {
    const SymSpectrum& E = S.E;
    OmegaData od = omega_build(E, 1 << 20);
    const FinCommRing& R = *E.R;

    /* independence of the permutation extension on random rearrangements */
    {
        std::mt19937 rng(seed);
        std::vector<int> candidates;
        for (size_t f = 0; f < od.I->cat.mor.size(); ++f)
            if (od.I->cat.mor[f].src < od.I->cat.mor[f].dst) candidates.push_back((int)f);
        for (int trial = 0; trial < 20 && !candidates.empty(); ++trial) {
            int f = candidates[rng() % candidates.size()];
            int m = od.I->cat.mor[f].src, n = od.I->cat.mor[f].dst;
            Perm arrange = perm_id(n - m);
            std::shuffle(arrange.begin(), arrange.end(), rng);
            Perm ext = extension_of(od.I->vals[f], n, arrange);
            if (omega_table(E, od, m, n, ext) != od.act[f])
                throw LawViolation(
                    "loop diagram: action depends on the permutation extension of the "
                    "injection with morphism id " +
                    ints(f));
        }
    }

    OmegaBullet out;
    out.R = &R;
    out.kdim = od.kdim;
    out.space = std::make_shared<ISpace>(omega_space_from(od, dim_top));

    FcpStruct& fcp = out.fcp;
    fcp.owner = out.space.get();
    fcp.commutative = S.commutative;
    {
        /* unit vertex: coordinates of the unit chain in the cycle basis */
        RVec u(od.kdim[0], R.zero);
        auto L = solve_mat(mat_transpose(od.K[0]), Mat::id(od.kdim[0]));
        if (!L) throw LawViolation("loop diagram: level-0 cycle basis has no left inverse");
        Mat Lt = mat_transpose(*L);
        for (int i = 0; i < od.kdim[0]; ++i) {
            int acc = R.zero;
            for (int j = 0; j < Lt.c; ++j) acc = R.a(acc, R.scale(Lt.at(i, j), S.unit_vec[j]));
            u[i] = acc;
        }
        /* residual: the unit must lie in the lattice */
        RVec back = mat_app_r(R, od.K[0], u);
        for (int j = 0; j < (int)back.size(); ++j)
            if (back[j] != S.unit_vec[j])
                throw LawViolation("loop diagram: unit chain outside the cycle lattice");
        fcp.unit = (int)om_encode(R, u);
    }

    for (int m = 0; m <= E.N; ++m)
        for (int n = 0; m + n <= E.N; ++n) {
            /* bilinear pairing on cycle coordinates */
            std::vector<std::vector<std::vector<i64>>> Q(
                od.kdim[m], std::vector<std::vector<i64>>(od.kdim[n]));
            const Mat& mu = S.mu_ch.at({m, n}).comp[m][n];
            for (int i = 0; i < od.kdim[m]; ++i)
                for (int j = 0; j < od.kdim[n]; ++j) {
                    std::vector<i64> w(E.model[m + n].rank[m + n], 0);
                    for (int x = 0; x < E.model[m].rank[m]; ++x)
                        for (int y = 0; y < E.model[n].rank[n]; ++y) {
                            i64 e = od.K[m].at(x, i) * od.K[n].at(y, j);
                            if (!e) continue;
                            for (int r = 0; r < (int)w.size(); ++r)
                                w[r] += e * mu.at(r, x * E.model[n].rank[n] + y);
                        }
                    Mat W((int)w.size(), 1);
                    for (int r = 0; r < W.r; ++r) W.at(r, 0) = w[r];
                    auto q = solve_mat(od.K[m + n], W);
                    if (!q) throw LawViolation("loop diagram: product leaves the cycle lattice");
                    Q[i][j].resize(od.kdim[m + n]);
                    for (int t = 0; t < od.kdim[m + n]; ++t) Q[i][j][t] = q->at(t, 0);
                }
            const FinSSet& A = out.space->lv(m);
            const FinSSet& B = out.space->lv(n);
            FinSSet P = sset_product(A, B);
            SMap g;
            g.comp.resize(P.dim_top + 1);
            std::vector<int> table((size_t)od.cells[m] * od.cells[n]);
            for (i64 ca = 0; ca < od.cells[m]; ++ca) {
                RVec u = om_decode(R, od.kdim[m], ca);
                for (i64 cb = 0; cb < od.cells[n]; ++cb) {
                    RVec v = om_decode(R, od.kdim[n], cb);
                    RVec w(od.kdim[m + n], R.zero);
                    for (int i = 0; i < od.kdim[m]; ++i)
                        for (int j = 0; j < od.kdim[n]; ++j) {
                            int p = R.m(u[i], v[j]);
                            if (p == R.zero) continue;
                            for (int t = 0; t < od.kdim[m + n]; ++t)
                                w[t] = R.a(w[t], R.scale(Q[i][j][t], p));
                        }
                    table[(size_t)(ca * od.cells[n] + cb)] = (int)om_encode(R, w);
                }
            }
            for (int k = 0; k <= P.dim_top; ++k) g.comp[k] = table;
            fcp.mu[{m, n}] = g;
        }

    check_fcp(fcp, true);
    return out;
}

/* ==================================================================== */
/*  adjunction audit                                                    */
/* ==================================================================== */

namespace {

/* per-level chain data of the suspension of a discrete diagram */
struct SuspData {
    std::vector<SmashResult> sm;      // (X_n)_+ smash S^n
    std::vector<PSSet> plus;
    std::vector<ChainCx> cx;          // reduced chains through D
    std::vector<SmashResult> ss;      // circle smash source per level < N
    std::vector<ChainCx> cxss;
    std::vector<SMap> sig;            // realized structure maps
    std::vector<std::vector<Mat>> sigch;
    std::vector<std::vector<SMap>> actsr;              // realized actions per level
    std::vector<std::vector<std::vector<Mat>>> actch;  // their chain matrices
    SphereChains sc;
    int D = 0;
};

/* chain maps from a level of the suspension into a chain model, stored as one
   ring vector per nondegenerate basis cell and degree */
using GLevel = std::vector<std::vector<RVec>>;  // [degree][basis index]
using GTilde = std::vector<GLevel>;             // per level

GLevel glevel_zero(const FinCommRing& R, const ChainCx& cx, const DkModel& M) {
    GLevel g(cx.top + 1);
    for (int j = 0; j <= cx.top; ++j)
        g[j].assign(cx.rank[j], rv_zero(R, j <= M.top() ? M.rank[j] : 0));
    return g;
}

}  // namespace

AdjunctionReport adjunction_audit(const ISpace& X, const SymSpectrum& E, i64 budget) {
    if (!E.dk) throw NotDkBacked("adjunction audit needs a chain-backed spectrum");
    const FinCommRing& R = *E.R;
    int N = E.N;
    if (X.I->N < N) throw ObjectOutOfRange("adjunction audit: diagram range below the spectrum");
    int D = N + 1;
    if (X.dim() < D)
        throw InsufficientDimension("adjunction audit: diagram levels need dimension " + ints(D));
    for (int n = 0; n <= N; ++n) {
        const FinSSet& L = X.lv(n);
        for (int k = 1; k <= L.dim_top; ++k)
            for (int x = 0; x < L.card[k]; ++x)
                if (!L.is_degenerate(k, x))
                    throw Error("adjunction audit: diagram levels must be discrete");
    }

    SuspData sd;
    sd.D = D;
    sd.sc = sphere_chains(std::max(N, 1), D);
    sd.sm.resize(N + 1);
    sd.plus.resize(N + 1);
    sd.cx.resize(N + 1);
    sd.actsr.resize(N + 1);
    sd.actch.resize(N + 1);
    i64 sz = 0;
    for (int n = 0; n <= N; ++n) {
        sd.plus[n] = adjoin_basepoint(X.lv(n));
        sd.sm[n] = smash(sd.plus[n], sd.sc.level(n));
        sd.cx[n] = reduced_chains(sd.sm[n].s, D);
        sz += total_cells(sd.sm[n].s.s);
        auto perms = all_perms(n);
        sd.actsr[n].resize(perms.size());
        sd.actch[n].resize(perms.size());
        for (size_t a = 0; a < perms.size(); ++a) {
            SMap f;
            f.comp.resize(D + 1);
            SMap sph = n >= 1 ? sphere_perm_action(sd.sc.S[n], perms[a]) : SMap{};
            int mor = X.I->perm(n, perms[a]);
            for (int k = 0; k <= D; ++k) {
                f.comp[k].resize(sd.sm[n].s.s.card[k]);
                for (int c = 0; c < sd.sm[n].s.s.card[k]; ++c) {
                    int w = sd.sm[n].section[k][c];
                    auto [ap, sl] = prod_split(sd.sc.level(n).s, k, w);
                    int ap2 = ap == 0 ? 0 : X.X.act[mor].comp[k][ap - 1] + 1;
                    int sl2 = n >= 1 ? sph.comp[k][sl] : sl;
                    f.comp[k][c] = sd.sm[n].proj[k][prod_index(sd.sc.level(n).s, k, ap2, sl2)];
                }
            }
            validate_smap(sd.sm[n].s.s, sd.sm[n].s.s, f);
            sd.actsr[n][a] = f;
            sd.actch[n][a] = chain_map(sd.cx[n], sd.cx[n], f);
        }
    }
    if (sz > budget) throw SizeBudgetExceeded("adjunction audit: suspension levels too large");

    sd.ss.resize(std::max(N, 0));
    sd.cxss.resize(std::max(N, 0));
    sd.sig.resize(std::max(N, 0));
    sd.sigch.resize(std::max(N, 0));
    for (int n = 0; n + 1 <= N; ++n) {
        PSSet circ = circle(D);
        sd.ss[n] = smash(circ, sd.sm[n].s);
        sd.cxss[n] = reduced_chains(sd.ss[n].s, D);
        int mor = X.I->incl(n, n + 1);
        SMap f;
        f.comp.resize(D + 1);
        for (int k = 0; k <= D; ++k) {
            f.comp[k].resize(sd.ss[n].s.s.card[k]);
            for (int c = 0; c < sd.ss[n].s.s.card[k]; ++c) {
                int w = sd.ss[n].section[k][c];
                auto [t, v] = prod_split(sd.sm[n].s.s, k, w);
                int w2 = sd.sm[n].section[k][v];
                auto [ap, sl] = prod_split(sd.sc.level(n).s, k, w2);
                int ap2 = ap == 0 ? 0 : X.X.act[mor].comp[k][ap - 1] + 1;
                int sl2;
                if (n == 0) {
                    sl2 = sl == sd.sc.s0.bp_cell(k) ? sd.sc.S[1].s.bp_cell(k) : t;
                } else {
                    std::vector<int> tuple = {t};
                    const auto& rep = sd.sc.S[n].rep[k][sl];
                    tuple.insert(tuple.end(), rep.begin(), rep.end());
                    sl2 = sd.sc.S[n + 1].class_of(k, tuple);
                }
                f.comp[k][c] = sd.sm[n + 1].proj[k][prod_index(sd.sc.level(n + 1).s, k, ap2, sl2)];
            }
        }
        validate_smap(sd.ss[n].s.s, sd.sm[n + 1].s.s, f);
        sd.sig[n] = f;
        sd.sigch[n] = chain_map(sd.cxss[n], sd.cx[n + 1], f);
    }

    /* sphere coefficient units in the spectrum's digit shapes, normalized
       representatives on the suspension sources, and the circle-prepend
       pairing on sphere cells */
    std::vector<DkUnit> un(N + 1);
    for (int n = 0; n <= N; ++n)
        un[n] = dk_unit(sd.sc.level(n), sd.sc.cx[n], E.level[n].shape, D);
    std::vector<MooreReps> srcrep(std::max(N, 0));
    std::vector<SphereConcat> ccs(std::max(N, 0));
    std::vector<std::vector<std::vector<int>>> vjoin(std::max(N, 0));
    for (int n = 0; n + 1 <= N; ++n) {
        srcrep[n] = moore_reps(sd.ss[n].s, sd.cxss[n], D);
        if (n >= 1) ccs[n] = sphere_concat(sd.sc.S[1], sd.sc.S[n], sd.sc.S[n + 1]);
        vjoin[n].resize(D + 1);
        for (int k = 0; k <= D; ++k) {
            int tc = sd.sc.S[1].s.s.card[k];
            int znb = (int)un[n].cells[k].size();
            vjoin[n][k].assign((size_t)tc * znb, -1);
            for (int t = 0; t < tc; ++t)
                for (int zr = 0; zr < znb; ++zr) {
                    int z = un[n].cells[k][zr];
                    vjoin[n][k][(size_t)t * znb + zr] =
                        n == 0 ? t
                               : ccs[n].iso.comp[k][ccs[n].sm.proj[k][prod_index(
                                     sd.sc.level(n).s, k, t, z)]];
                }
        }
    }

    /* ------------- block structure of the levels ------------- */
    struct Block {
        int type = 2;  // 0: pushed from below, 1: in a symmetric orbit, 2: free
        int from = 0;  // source vertex
        int via = 0;   // morphism or permutation index
    };
    std::vector<std::vector<Block>> blocks(N + 1);
    for (int n = 0; n <= N; ++n) {
        int nv = X.lv(n).card[0];
        blocks[n].assign(nv, Block{});
        std::vector<char> typed(nv, 0);
        if (n >= 1) {
            int mor = X.I->incl(n - 1, n);
            for (int x = 0; x < X.lv(n - 1).card[0]; ++x) {
                int y = X.X.act[mor].comp[0][x];
                if (!typed[y]) {
                    typed[y] = 1;
                    blocks[n][y] = {0, x, mor};
                }
            }
        }
        auto perms = all_perms(n);
        bool grew = true;
        while (grew) {
            grew = false;
            for (int x = 0; x < nv; ++x) {
                if (typed[x]) continue;
                for (size_t a = 0; a < perms.size() && !typed[x]; ++a) {
                    int mor = X.I->perm(n, perms[a]);
                    for (int y = 0; y < nv; ++y)
                        if (typed[y] && blocks[n][y].type != 1 &&
                            X.X.act[mor].comp[0][y] == x && x != y) {
                            typed[x] = 1;
                            blocks[n][x] = {1, y, (int)a};
                            grew = true;
                            break;
                        }
                }
            }
            if (!grew) {
                for (int x = 0; x < nv; ++x)
                    if (!typed[x]) {
                        typed[x] = 1;
                        blocks[n][x] = {2, 0, 0};
                        grew = true;
                        break;
                    }
            }
        }
    }

    /* block membership of nondegenerate suspension cells */
    auto block_of = [&](int n, int j, int cell) {
        int w = sd.sm[n].section[j][cell];
        auto [ap, sl] = prod_split(sd.sc.level(n).s, j, w);
        (void)sl;
        return ap - 1;  // -1 for the adjoined basepoint part
    };

    /* free seeds: all chain maps from the sphere chains into the level model */
    struct Seed {
        int level = 0, vertex = 0;
        std::vector<GLevel> choices;  // values on sphere chain basis, degree-indexed
    };
    std::vector<Seed> seeds;
    for (int n = 0; n <= N; ++n)
        for (int x = 0; x < X.lv(n).card[0]; ++x) {
            if (blocks[n][x].type != 2) continue;
            Seed s;
            s.level = n;
            s.vertex = x;
            const ChainCx& sph = sd.sc.cx[n];
            const DkModel& M = E.model[n];
            /* enumerate chain maps degreewise by odometer with filters */
            int total = 0;
            for (int j = 0; j <= n; ++j) total += sph.rank[j] * (j <= M.top() ? M.rank[j] : 0);
            i64 count = 1;
            for (int t = 0; t < total; ++t) {
                count *= R.n;
                if (count > 100000)
                    throw SizeBudgetExceeded("adjunction audit: free generator at level " +
                                             ints(n) + " is too large to enumerate");
            }
            std::vector<int> odo(total, 0);
            auto unpack = [&]() {
                GLevel g(n + 1);
                int pos = 0;
                for (int j = 0; j <= n; ++j) {
                    g[j].assign(sph.rank[j], rv_zero(R, j <= M.top() ? M.rank[j] : 0));
                    for (int b = 0; b < sph.rank[j]; ++b)
                        for (int t = 0; t < (int)g[j][b].size(); ++t) g[j][b][t] = odo[pos++];
                }
                return g;
            };
            for (i64 it = 0; it < count; ++it) {
                GLevel g = unpack();
                bool ok = true;
                for (int j = 1; j <= n && ok; ++j)
                    for (int b = 0; b < sph.rank[j] && ok; ++b) {
                        RVec lhs = mat_app_r(R, j <= M.top() ? M.bd[j] : Mat(0, 0), g[j][b]);
                        RVec rhs = rv_zero(R, (int)lhs.size());
                        for (int c = 0; c < sph.rank[j - 1]; ++c) {
                            i64 e = sph.bnd[j].at(c, b);
                            if (!e) continue;
                            for (size_t t = 0; t < rhs.size(); ++t)
                                rhs[t] = R.a(rhs[t], R.scale(e, g[j - 1][c][t]));
                        }
                        if (lhs != rhs) ok = false;
                    }
                if (ok) s.choices.push_back(std::move(g));
                /* advance odometer */
                for (int t = 0; t < total; ++t) {
                    if (++odo[t] < R.n) break;
                    odo[t] = 0;
                }
            }
            seeds.push_back(std::move(s));
        }

    i64 combos = 1;
    for (auto& s : seeds) {
        combos *= (i64)s.choices.size();
        if (combos > budget)
            throw SizeBudgetExceeded("adjunction audit: too many spectrum-map candidates");
    }

    /* preimage tables for pushed and orbit blocks */
    struct Push {
        std::vector<std::vector<int>> pre;  // [degree][target basis] -> source basis or -1
    };
    std::vector<std::vector<Push>> pushes(N + 1);
    for (int n = 0; n <= N; ++n) {
        int nv = X.lv(n).card[0];
        pushes[n].resize(nv);
        for (int x = 0; x < nv; ++x) {
            const Block& bl = blocks[n][x];
            Push p;
            p.pre.resize(D + 1);
            if (bl.type == 0) {
                const ChainCx& csrc = sd.cxss[n - 1];
                for (int j = 0; j <= D; ++j) {
                    p.pre[j].assign(sd.cx[n].rank[j], -1);
                    for (int b = 0; b < csrc.rank[j]; ++b) {
                        int src = csrc.ndcell[j][b];
                        /* source core must sit over the block of bl.from */
                        int w = sd.ss[n - 1].section[j][src];
                        auto [t, v] = prod_split(sd.sm[n - 1].s.s, j, w);
                        (void)t;
                        if (block_of(n - 1, j, v) != bl.from) continue;
                        int tgt = sd.sig[n - 1].comp[j][src];
                        int ti = sd.cx[n].ndindex[j][tgt];
                        if (ti >= 0 && block_of(n, j, tgt) == x) p.pre[j][ti] = b;
                    }
                }
            } else if (bl.type == 1) {
                const SMap& A = sd.actsr[n][bl.via];
                for (int j = 0; j <= D; ++j) {
                    p.pre[j].assign(sd.cx[n].rank[j], -1);
                    for (int b = 0; b < sd.cx[n].rank[j]; ++b) {
                        int src = sd.cx[n].ndcell[j][b];
                        if (block_of(n, j, src) != bl.from) continue;
                        int tgt = A.comp[j][src];
                        int ti = sd.cx[n].ndindex[j][tgt];
                        if (ti >= 0 && block_of(n, j, tgt) == x) p.pre[j][ti] = b;
                    }
                }
            }
            pushes[n][x] = std::move(p);
        }
    }

    /* Composite chain value through the structure map: push the signed
       normalized representative of the source basis cell through the level map
       one product cell at a time -- wedge summand by wedge summand in digit
       coordinates -- prepend the circle coordinate to the resulting sphere
       coefficients, and read the total back in normalized target coordinates. */
    auto composite_val = [&](int n, const GLevel& gn, int j, int srcbasis) -> RVec {
        int rk = j <= E.model[n + 1].top() ? E.model[n + 1].rank[j] : 0;
        if (rk == 0 || j < 1) return rv_zero(R, rk);
        const DkShape& shA = E.level[n].shape;
        const DkShape& shB = E.level[n + 1].shape;
        const Mat& kap = srcrep[n].rep[j];
        int znb = (int)un[n].cells[j].size();
        RVec gamma((int)un[n + 1].cells[j].size(), R.zero);
        for (int cr = 0; cr < kap.r; ++cr) {
            i64 kc = kap.at(cr, srcbasis);
            if (!kc) continue;
            int c = srcrep[n].cells[j][cr];
            int w0 = sd.ss[n].section[j][c];
            auto [t, u] = prod_split(sd.sm[n].s.s, j, w0);
            int w2 = sd.sm[n].section[j][u];
            auto [ap, sl] = prod_split(sd.sc.level(n).s, j, w2);
            if (ap == 0) continue;
            int x = ap - 1;
            int zrow = un[n].nb[j][sl];
            if (zrow < 0) continue;
            /* level map on the summand of x, in digit coordinates */
            RVec dg(shA.digits[j], R.zero);
            for (size_t si = 0; si < shA.slots[j].size(); ++si) {
                int jj = shA.slots[j][si].j;
                int off = shA.offs[j][si];
                for (int zb = 0; zb < sd.sc.cx[n].rank[jj]; ++zb) {
                    i64 cz = un[n].phi[j].at(off + zb, zrow);
                    if (!cz) continue;
                    int xd = X.lv(n).degen_word(0, x, jj) + 1;
                    int cell = sd.sm[n].proj[jj][prod_index(sd.sc.level(n).s, jj, xd,
                                                            sd.sc.cx[n].ndcell[jj][zb])];
                    int ci = sd.cx[n].ndindex[jj][cell];
                    if (ci < 0) continue;
                    const RVec& gv = gn[jj][ci];
                    for (size_t mb = 0; mb < gv.size(); ++mb)
                        dg[off + (int)mb] = R.a(dg[off + (int)mb], R.scale(cz, gv[mb]));
                }
            }
            /* expand to sphere coefficients and prepend the circle coordinate */
            RVec beta = mat_app_r(R, un[n].psi[j], dg);
            for (int zr = 0; zr < znb; ++zr) {
                if (beta[zr] == R.zero) continue;
                int v = vjoin[n][j][(size_t)t * znb + zr];
                int row = v < 0 ? -1 : un[n + 1].nb[j][v];
                if (row < 0) continue;
                gamma[row] = R.a(gamma[row], R.scale(kc, beta[zr]));
            }
        }
        RVec odig = mat_app_r(R, un[n + 1].phi[j], gamma);
        int ido = shB.offs[j][shB.idslot[j]];
        RVec out(rk, R.zero);
        for (int mb = 0; mb < rk; ++mb) out[mb] = odig[ido + mb];
        return out;
    };

    /* assemble a candidate from seed selections and verify all the laws */
    auto assemble = [&](const std::vector<int>& pick, GTilde& g) -> bool {
        g.assign(N + 1, {});
        for (int n = 0; n <= N; ++n) {
            g[n] = glevel_zero(R, sd.cx[n], E.model[n]);
            int nv = X.lv(n).card[0];
            /* processing order: pushed, orbit, free, repeated until stable */
            std::vector<char> done(nv, 0);
            bool grew = true;
            while (grew) {
                grew = false;
                for (int x = 0; x < nv; ++x) {
                    if (done[x]) continue;
                    const Block& bl = blocks[n][x];
                    if (bl.type == 0) {
                        for (int j = 0; j <= D; ++j)
                            for (int b = 0; b < sd.cx[n].rank[j]; ++b) {
                                int pb = pushes[n][x].pre[j][b];
                                if (pb < 0) continue;
                                g[n][j][b] = composite_val(n - 1, g[n - 1], j, pb);
                            }
                        done[x] = 1;
                        grew = true;
                    } else if (bl.type == 1 && done[bl.from]) {
                        const auto& ach = E.act_ch[n][bl.via];
                        for (int j = 0; j <= D; ++j)
                            for (int b = 0; b < sd.cx[n].rank[j]; ++b) {
                                int pb = pushes[n][x].pre[j][b];
                                if (pb < 0) continue;
                                g[n][j][b] = mat_app_r(
                                    R, j < (int)ach.size() ? ach[j] : Mat(0, 0), g[n][j][pb]);
                            }
                        done[x] = 1;
                        grew = true;
                    } else if (bl.type == 2) {
                        int si = -1;
                        for (size_t s = 0; s < seeds.size(); ++s)
                            if (seeds[s].level == n && seeds[s].vertex == x) si = (int)s;
                        const GLevel& h = seeds[si].choices[pick[si]];
                        /* block cells are (degenerate vertex, sphere cell) pairs */
                        const ChainCx& sph = sd.sc.cx[n];
                        for (int j = 0; j <= std::min(n, D); ++j)
                            for (int sb = 0; sb < sph.rank[j]; ++sb) {
                                int scell = sph.ndcell[j][sb];
                                int xd = X.lv(n).degen_word(0, x, j) + 1;
                                int cell =
                                    sd.sm[n].proj[j][prod_index(sd.sc.level(n).s, j, xd, scell)];
                                int ci = sd.cx[n].ndindex[j][cell];
                                if (ci >= 0) g[n][j][ci] = h[j][sb];
                            }
                        done[x] = 1;
                        grew = true;
                    }
                }
            }
            for (int x = 0; x < nv; ++x)
                if (!done[x]) throw Error("adjunction audit: block ordering failed");
        }
        /* verification: chain map, equivariance, structure compatibility */
        for (int n = 0; n <= N; ++n) {
            const DkModel& M = E.model[n];
            for (int j = 1; j <= D; ++j)
                for (int b = 0; b < sd.cx[n].rank[j]; ++b) {
                    RVec lhs = mat_app_r(R, j <= M.top() ? M.bd[j] : Mat(0, 0), g[n][j][b]);
                    RVec rhs = rv_zero(R, (int)lhs.size());
                    for (int c = 0; c < sd.cx[n].rank[j - 1]; ++c) {
                        i64 e = sd.cx[n].bnd[j].at(c, b);
                        if (!e) continue;
                        for (size_t t = 0; t < rhs.size(); ++t)
                            rhs[t] = R.a(rhs[t], R.scale(e, g[n][j - 1][c][t]));
                    }
                    if (lhs != rhs) return false;
                }
            auto perms = all_perms(n);
            for (size_t a = 0; a < perms.size(); ++a)
                for (int j = 0; j <= D; ++j)
                    for (int b = 0; b < sd.cx[n].rank[j]; ++b) {
                        RVec lhs = rv_zero(R, (int)g[n][j][b].size());
                        for (int c = 0; c < sd.cx[n].rank[j]; ++c) {
                            i64 e = sd.actch[n][a][j].at(c, b);
                            if (!e) continue;
                            for (size_t t = 0; t < lhs.size(); ++t)
                                lhs[t] = R.a(lhs[t], R.scale(e, g[n][j][c][t]));
                        }
                        RVec rhs = mat_app_r(
                            R, j < (int)E.act_ch[n][a].size() ? E.act_ch[n][a][j] : Mat(0, 0),
                            g[n][j][b]);
                        if (lhs != rhs) return false;
                    }
        }
        for (int n = 0; n + 1 <= N; ++n)
            for (int j = 0; j <= D; ++j)
                for (int b = 0; b < sd.cxss[n].rank[j]; ++b) {
                    RVec lhs = rv_zero(R, j <= E.model[n + 1].top() ? E.model[n + 1].rank[j] : 0);
                    for (int c = 0; c < sd.cx[n + 1].rank[j]; ++c) {
                        i64 e = sd.sigch[n][j].at(c, b);
                        if (!e) continue;
                        for (size_t t = 0; t < lhs.size(); ++t)
                            lhs[t] = R.a(lhs[t], R.scale(e, g[n + 1][j][c][t]));
                    }
                    RVec rhs = composite_val(n, g[n], j, b);
                    if (lhs != rhs) return false;
                }
        return true;
    };

    std::vector<GTilde> homL;
    {
        std::vector<int> pick(seeds.size(), 0);
        while (true) {
            GTilde g;
            if (assemble(pick, g)) homL.push_back(std::move(g));
            int t = 0;
            for (; t < (int)seeds.size(); ++t) {
                if (++pick[t] < (int)seeds[t].choices.size()) break;
                pick[t] = 0;
            }
            if (t == (int)seeds.size()) break;
        }
    }

    /* ------------- the loop-diagram side ------------- */
    OmegaData od = omega_build(E, 1 << 20);
    std::vector<std::vector<std::vector<int>>> homR;
    {
        std::vector<std::vector<int>> f(N + 1);
        for (int n = 0; n <= N; ++n) f[n].assign(X.lv(n).card[0], -1);
        std::function<void(int, int)> go = [&](int n, int x) {
            if (n > N) {
                homR.push_back(f);
                if ((i64)homR.size() > budget)
                    throw SizeBudgetExceeded("adjunction audit: too many natural families");
                return;
            }
            if (x == X.lv(n).card[0]) {
                go(n + 1, 0);
                return;
            }
            for (i64 v = 0; v < od.cells[n]; ++v) {
                f[n][x] = (int)v;
                bool ok = true;
                for (size_t mf = 0; mf < od.I->cat.mor.size() && ok; ++mf) {
                    int m = od.I->cat.mor[mf].src, nn = od.I->cat.mor[mf].dst;
                    if (nn != n) continue;
                    const auto& av = X.X.act[(int)mf].comp[0];
                    if (m < n) {
                        /* earlier levels are complete */
                        for (int y = 0; y < X.lv(m).card[0] && ok; ++y)
                            if (av[y] == x && f[n][x] != od.act[mf][f[m][y]]) ok = false;
                    } else {
                        /* endomorphism: check every pair already assigned */
                        for (int y = 0; y < X.lv(n).card[0] && ok; ++y) {
                            int z = av[y];
                            if (f[n][y] >= 0 && f[n][z] >= 0 && f[n][z] != od.act[mf][f[n][y]])
                                ok = false;
                        }
                    }
                }
                if (ok) go(n, x + 1);
            }
            f[n][x] = -1;
        };
        go(0, 0);
    }

    /* ------------- transports ------------- */
    std::vector<Mat> zsph(N + 1);  // fundamental cycles of the sphere chains
    std::vector<Mat> psi(N + 1);   // dual cocycles pairing to 1
    for (int n = 0; n <= N; ++n) {
        const ChainCx& sph = sd.sc.cx[n];
        if (n == 0) {
            zsph[0] = Mat(1, 1);
            zsph[0].at(0, 0) = 1;
            psi[0] = zsph[0];
            continue;
        }
        Mat A = sph.bnd[n];
        Mat K = A.r == 0 ? Mat::id(A.c) : kernel_basis(A);
        if (K.c != 1) throw Error("adjunction audit: sphere cycle lattice rank");
        zsph[n] = K;
        /* psi: psi * bnd_{n+1} = 0 and psi * z = 1 */
        Mat Bt = mat_transpose(sph.bnd[n + 1]);
        Mat sys = mat_vstack(Bt, mat_transpose(zsph[n]));
        Mat rhs(sys.r, 1);
        rhs.at(sys.r - 1, 0) = 1;
        auto p = solve_mat(sys, rhs);
        if (!p) throw Error("adjunction audit: no dual cocycle for the sphere");
        psi[n] = mat_transpose(*p);
    }

    auto transport_LR = [&](const GTilde& g) {
        std::vector<std::vector<int>> f(N + 1);
        for (int n = 0; n <= N; ++n) {
            f[n].assign(X.lv(n).card[0], 0);
            auto L = solve_mat(mat_transpose(od.K[n]), Mat::id(od.kdim[n]));
            if (!L) throw BijectionFailure("loop coordinates have no left inverse at level " +
                                           ints(n));
            Mat Lt = mat_transpose(*L);
            for (int x = 0; x < X.lv(n).card[0]; ++x) {
                /* cycle over the block of x */
                RVec w = rv_zero(R, E.model[n].rank[n]);
                const ChainCx& sph = sd.sc.cx[n];
                for (int sb = 0; sb < sph.rank[n]; ++sb) {
                    i64 coeff = zsph[n].at(sb, 0);
                    if (!coeff) continue;
                    int scell = sph.ndcell[n][sb];
                    int xd = X.lv(n).degen_word(0, x, n) + 1;
                    int cell = sd.sm[n].proj[n][prod_index(sd.sc.level(n).s, n, xd, scell)];
                    int ci = sd.cx[n].ndindex[n][cell];
                    if (ci < 0) throw Error("adjunction audit: fundamental cell degenerated");
                    for (size_t t = 0; t < w.size(); ++t)
                        w[t] = R.a(w[t], R.scale(coeff, g[n][n][ci][t]));
                }
                RVec dig(od.kdim[n], R.zero);
                for (int i = 0; i < od.kdim[n]; ++i) {
                    int acc = R.zero;
                    for (int j = 0; j < Lt.c; ++j) acc = R.a(acc, R.scale(Lt.at(i, j), w[j]));
                    dig[i] = acc;
                }
                RVec back = mat_app_r(R, od.K[n], dig);
                if (back != w)
                    throw BijectionFailure("level-" + ints(n) +
                                           " cycle lies outside the loop lattice");
                f[n][x] = (int)om_encode(R, dig);
            }
        }
        return f;
    };

    auto transport_RL = [&](const std::vector<std::vector<int>>& f, GTilde& g) -> bool {
        std::vector<int> pick(seeds.size(), 0);
        for (size_t s = 0; s < seeds.size(); ++s) {
            int n = seeds[s].level, x = seeds[s].vertex;
            RVec dig = om_decode(R, od.kdim[n], f[n][x]);
            RVec w = mat_app_r(R, od.K[n], dig);
            /* seed: dual cocycle tensor the cycle value */
            GLevel want(n + 1);
            const ChainCx& sph = sd.sc.cx[n];
            for (int j = 0; j <= n; ++j) {
                want[j].assign(sph.rank[j], rv_zero(R, E.model[n].rank[j]));
                if (j == n)
                    for (int sb = 0; sb < sph.rank[n]; ++sb) {
                        i64 c = psi[n].at(0, sb);
                        if (!c) continue;
                        for (size_t t = 0; t < w.size(); ++t)
                            want[n][sb][t] = R.scale(c, w[t]);
                    }
            }
            int found = -1;
            for (size_t ch = 0; ch < seeds[s].choices.size(); ++ch)
                if (seeds[s].choices[ch] == want) found = (int)ch;
            if (found < 0) return false;
            pick[s] = found;
        }
        return assemble(pick, g);
    };

    if ((i64)homL.size() != (i64)homR.size())
        throw BijectionFailure("hom-set sizes disagree: " + ints((i64)homL.size()) +
                               " spectrum maps vs " + ints((i64)homR.size()) +
                               " natural families");

    std::vector<int> image(homL.size(), -1);
    std::vector<char> hit(homR.size(), 0);
    for (size_t gi = 0; gi < homL.size(); ++gi) {
        auto f = transport_LR(homL[gi]);
        int fi = -1;
        for (size_t r = 0; r < homR.size(); ++r)
            if (homR[r] == f) fi = (int)r;
        if (fi < 0)
            throw BijectionFailure("transported family of spectrum map " + ints((i64)gi) +
                                   " is not natural");
        if (hit[fi])
            throw BijectionFailure("two spectrum maps transport to the same family");
        hit[fi] = 1;
        image[gi] = fi;
        /* round trip left-to-left */
        GTilde back;
        if (!transport_RL(f, back) || !(back == homL[gi]))
            throw BijectionFailure("round trip does not recover spectrum map " + ints((i64)gi));
    }
    for (size_t r = 0; r < homR.size(); ++r) {
        GTilde g;
        if (!transport_RL(homR[r], g))
            throw BijectionFailure("natural family " + ints((i64)r) +
                                   " does not extend to a spectrum map");
        auto f2 = transport_LR(g);
        if (!(f2 == homR[r]))
            throw BijectionFailure("round trip does not recover natural family " + ints((i64)r));
    }

    AdjunctionReport rep;
    rep.hom_spectra = (long long)homL.size();
    rep.hom_spaces = (long long)homR.size();
    rep.bijective = true;
    return rep;
}

}  // namespace dspace
