#include "dspace/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dspace {

static const i64 LIM = (i64)4e17;

static i64 guard(__int128 v, const char* where) {
    if (v > LIM || v < -LIM) throw OverflowError(std::string("entry growth in ") + where);
    return (i64)v;
}

/* ---------------------------------------------------------------- dense */

Mat mat_mul(const Mat& A, const Mat& B) {
    if (A.c != B.r) throw Error("mat_mul: shape mismatch");
    Mat C(A.r, B.c);
    for (int i = 0; i < A.r; ++i)
        for (int k = 0; k < A.c; ++k) {
            i64 v = A.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < B.c; ++j)
                C.at(i, j) = guard((__int128)C.at(i, j) + (__int128)v * B.at(k, j), "mat_mul");
        }
    return C;
}

Mat mat_add(const Mat& A, const Mat& B) {
    if (A.r != B.r || A.c != B.c) throw Error("mat_add: shape mismatch");
    Mat C(A.r, A.c);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = guard((__int128)A.a[i] + B.a[i], "mat_add");
    return C;
}

Mat mat_sub(const Mat& A, const Mat& B) {
    if (A.r != B.r || A.c != B.c) throw Error("mat_sub: shape mismatch");
    Mat C(A.r, A.c);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = guard((__int128)A.a[i] - B.a[i], "mat_sub");
    return C;
}

Mat mat_transpose(const Mat& A) {
    Mat T(A.c, A.r);
    for (int i = 0; i < A.r; ++i)
        for (int j = 0; j < A.c; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

Mat mat_hstack(const Mat& A, const Mat& B) {
    if (A.c == 0 && A.r == 0) return B;
    if (B.c == 0 && B.r == 0) return A;
    int r = A.r ? A.r : B.r;
    if ((A.r && A.r != r) || (B.r && B.r != r)) throw Error("mat_hstack: row mismatch");
    Mat C(r, A.c + B.c);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < A.c; ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.c; ++j) C.at(i, A.c + j) = B.at(i, j);
    }
    return C;
}

Mat mat_vstack(const Mat& A, const Mat& B) {
    if (A.r == 0 && A.c == 0) return B;
    if (B.r == 0 && B.c == 0) return A;
    int c = A.c ? A.c : B.c;
    if ((A.c && A.c != c) || (B.c && B.c != c)) throw Error("mat_vstack: col mismatch");
    Mat C(A.r + B.r, c);
    for (int i = 0; i < A.r; ++i)
        for (int j = 0; j < c; ++j) C.at(i, j) = A.at(i, j);
    for (int i = 0; i < B.r; ++i)
        for (int j = 0; j < c; ++j) C.at(A.r + i, j) = B.at(i, j);
    return C;
}

Mat mat_cols(const Mat& A, const std::vector<int>& idx) {
    Mat C(A.r, (int)idx.size());
    for (int j = 0; j < (int)idx.size(); ++j)
        for (int i = 0; i < A.r; ++i) C.at(i, j) = A.at(i, idx[j]);
    return C;
}

bool mat_is_zero(const Mat& A) {
    for (i64 v : A.a)
        if (v) return false;
    return true;
}

std::string mat_to_string(const Mat& A) {
    std::ostringstream o;
    o << A.r << "x" << A.c << "[";
    for (int i = 0; i < A.r; ++i) {
        o << (i ? "; " : "");
        for (int j = 0; j < A.c; ++j) o << (j ? " " : "") << A.at(i, j);
    }
    o << "]";
    return o.str();
}

/* ------------------------------------------------------------------- SNF */

namespace {

struct SnfWork {
    Mat A;
    bool track;
    Mat U, V;

    SnfWork(Mat A_, bool track_) : A(std::move(A_)), track(track_) {
        if (track) {
            U = Mat::id(A.r);
            V = Mat::id(A.c);
        }
    }
    void row_swap(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < A.c; ++k) std::swap(A.at(i, k), A.at(j, k));
        if (track)
            for (int k = 0; k < U.c; ++k) std::swap(U.at(i, k), U.at(j, k));
    }
    void col_swap(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < A.r; ++k) std::swap(A.at(k, i), A.at(k, j));
        if (track)
            for (int k = 0; k < V.r; ++k) std::swap(V.at(k, i), V.at(k, j));
    }
    void row_axpy(int i, int j, i64 q) { // row_i -= q * row_j
        if (q == 0) return;
        for (int k = 0; k < A.c; ++k)
            A.at(i, k) = guard((__int128)A.at(i, k) - (__int128)q * A.at(j, k), "snf row");
        if (track)
            for (int k = 0; k < U.c; ++k)
                U.at(i, k) = guard((__int128)U.at(i, k) - (__int128)q * U.at(j, k), "snf row U");
    }
    void col_axpy(int i, int j, i64 q) { // col_i -= q * col_j
        if (q == 0) return;
        for (int k = 0; k < A.r; ++k)
            A.at(k, i) = guard((__int128)A.at(k, i) - (__int128)q * A.at(k, j), "snf col");
        if (track)
            for (int k = 0; k < V.r; ++k)
                V.at(k, i) = guard((__int128)V.at(k, i) - (__int128)q * V.at(k, j), "snf col V");
    }
    void row_negate(int i) {
        for (int k = 0; k < A.c; ++k) A.at(i, k) = -A.at(i, k);
        if (track)
            for (int k = 0; k < U.c; ++k) U.at(i, k) = -U.at(i, k);
    }

    void run(Snf& out) {
        int n = std::min(A.r, A.c);
        int t = 0;
        for (; t < n; ++t) {
            for (;;) {
                // minimal-magnitude pivot in the trailing submatrix
                int pi = -1, pj = -1;
                i64 best = 0;
                for (int i = t; i < A.r; ++i)
                    for (int j = t; j < A.c; ++j) {
                        i64 v = A.at(i, j) < 0 ? -A.at(i, j) : A.at(i, j);
                        if (v != 0 && (pi < 0 || v < best)) {
                            best = v;
                            pi = i;
                            pj = j;
                        }
                    }
                if (pi < 0) goto finished;
                row_swap(t, pi);
                col_swap(t, pj);
                bool dirty = false;
                i64 p = A.at(t, t);
                for (int i = t + 1; i < A.r; ++i)
                    if (A.at(i, t)) {
                        row_axpy(i, t, A.at(i, t) / p);
                        if (A.at(i, t)) dirty = true;
                    }
                for (int j = t + 1; j < A.c; ++j)
                    if (A.at(t, j)) {
                        col_axpy(j, t, A.at(t, j) / p);
                        if (A.at(t, j)) dirty = true;
                    }
                if (dirty) continue;
                // divisibility sweep over the remaining block
                p = A.at(t, t);
                int bi = -1;
                for (int i = t + 1; i < A.r && bi < 0; ++i)
                    for (int j = t + 1; j < A.c; ++j)
                        if (A.at(i, j) % p != 0) {
                            bi = i;
                            break;
                        }
                if (bi >= 0) {
                    row_axpy(t, bi, -1); // row_t += row_bi, breaks divisibility at row t
                    continue;
                }
                break;
            }
            if (A.at(t, t) < 0) row_negate(t);
        }
    finished:
        out.diag.clear();
        for (int k = 0; k < n; ++k) {
            i64 d = A.at(k, k);
            if (d == 0) break;
            if (d < 0) { // only possible for the last processed pivot
                row_negate(k);
                d = -d;
            }
            out.diag.push_back(d);
        }
        out.rank = (int)out.diag.size();
    }
};

} // namespace

Snf snf(Mat A) {
    Snf s;
    SnfWork w(std::move(A), false);
    w.run(s);
    return s;
}

SnfFull snf_full(Mat A) {
    SnfFull f;
    SnfWork w(std::move(A), true);
    w.run(f.s);
    f.U = std::move(w.U);
    f.V = std::move(w.V);
    return f;
}

Mat kernel_basis(const Mat& A) {
    if (A.c == 0) return Mat(0, 0);
    if (A.r == 0) return Mat::id(A.c);
    SnfFull f = snf_full(A);
    int rank = f.s.rank;
    std::vector<int> idx;
    for (int j = rank; j < A.c; ++j) idx.push_back(j);
    return mat_cols(f.V, idx); // A*(V e_j) = 0 exactly for j >= rank
}

std::optional<Mat> solve_mat(const Mat& A, const Mat& B) {
    if (A.r != B.r) throw Error("solve_mat: shape mismatch");
    if (B.c == 0) return Mat(A.c, 0);
    if (A.c == 0) return mat_is_zero(B) ? std::optional<Mat>(Mat(0, B.c)) : std::nullopt;
    SnfFull f = snf_full(A);
    Mat UB = mat_mul(f.U, B);
    Mat Y(A.c, B.c);
    for (int j = 0; j < B.c; ++j) {
        for (int t = 0; t < A.r; ++t) {
            i64 v = UB.at(t, j);
            if (t < f.s.rank) {
                i64 d = f.s.diag[t];
                if (v % d != 0) return std::nullopt;
                if (t < A.c) Y.at(t, j) = v / d;
            } else if (v != 0) {
                return std::nullopt;
            }
        }
    }
    return mat_mul(f.V, Y);
}

/* ---------------------------------------------------------------- FinAb */

std::string FinAb::to_string() const {
    if (inv.empty()) return "0";
    std::ostringstream o;
    int free = 0;
    bool first = true;
    for (i64 d : inv) {
        if (d == 0) {
            ++free;
            continue;
        }
        o << (first ? "" : " + ") << "Z/" << d;
        first = false;
    }
    if (free) {
        o << (first ? "" : " + ") << "Z";
        if (free > 1) o << "^" << free;
    }
    return o.str();
}

FinAb finab_from_presentation(int gens, const Mat& rels) {
    if (rels.c > 0 && rels.r != gens) throw Error("finab: relator length != gens");
    FinAb g;
    Snf s = (rels.c > 0) ? snf(rels) : Snf{};
    for (i64 d : s.diag)
        if (d != 1) g.inv.push_back(d);
    for (int k = s.rank; k < gens; ++k) g.inv.push_back(0);
    return g;
}

bool map_well_defined_presented(const Mat& f, const Mat& relsA, const Mat& relsB) {
    if (relsA.c == 0) return true;
    Mat img = mat_mul(f, relsA);
    if (relsB.c == 0) return mat_is_zero(img);
    return solve_mat(relsB, img).has_value();
}

bool map_surjective_presented(const Mat& f, const Mat& relsB) {
    return finab_from_presentation(f.r, mat_hstack(f, relsB)).trivial();
}

bool map_iso_presented(const Mat& f, int gensA, const Mat& relsA, const Mat& relsB) {
    if (!map_well_defined_presented(f, relsA, relsB)) return false;
    FinAb a = finab_from_presentation(gensA, relsA);
    FinAb b = finab_from_presentation(f.r, relsB);
    if (!(a == b)) return false;
    return map_surjective_presented(f, relsB);
}

/* --------------------------------------------------- presented complexes */

std::vector<FinAb> pres_homology(const PresCx& cx, int kmax) {
    if (kmax + 1 > cx.top)
        throw InsufficientDimension("pres_homology: need degree " + std::to_string(kmax + 1) +
                                    " boundaries but complex stops at " + std::to_string(cx.top));
    std::vector<FinAb> H;
    for (int k = 0; k <= kmax; ++k) {
        HPres h = pres_homology_at(cx, k);
        H.push_back(finab_from_presentation(h.Z.c, h.rels));
    }
    return H;
}

HPres pres_homology_at(const PresCx& cx, int k) {
    if (k + 1 > cx.top) throw InsufficientDimension("pres_homology_at: top too low");
    int g = cx.gens[k];
    HPres h;
    if (k == 0) {
        h.Z = Mat::id(g);
    } else {
        Mat aug = mat_hstack(cx.bnd[k], cx.rel[k - 1]);
        Mat K = kernel_basis(aug);
        h.Z = Mat(g, K.c);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < K.c; ++j) h.Z.at(i, j) = K.at(i, j);
    }
    Mat B = mat_hstack(cx.bnd[k + 1], cx.rel[k]);
    Mat relH(h.Z.c, 0);
    if (B.c > 0 && h.Z.c > 0) {
        auto Y = solve_mat(h.Z, B);
        if (!Y) throw LawViolation("pres_homology_at: boundary not a cycle");
        relH = *Y;
    } else if (B.c > 0 && !mat_is_zero(B)) {
        throw LawViolation("pres_homology_at: boundary with no cycles");
    }
    h.rels = mat_hstack(relH, kernel_basis(h.Z));
    if (h.rels.r == 0 && h.Z.c > 0) h.rels = Mat(h.Z.c, 0);
    return h;
}

Mat homology_induced_map(const HPres& A, const HPres& B, const Mat& chainmap_k) {
    if (A.Z.c == 0) return Mat(B.Z.c, 0);
    Mat img = mat_mul(chainmap_k, A.Z);
    auto W = solve_mat(B.Z, img);
    if (!W) throw LawViolation("homology_induced_map: image is not a cycle");
    return *W;
}

FinAb coeff_homology(const FinAb& hk, const FinAb& hk_minus_1, i64 m) {
    if (m < 2) throw Error("coeff_homology: modulus must be >= 2");
    std::vector<i64> cyc;
    for (i64 d : hk.inv) cyc.push_back(d == 0 ? m : std::gcd(d, m));
    for (i64 d : hk_minus_1.inv)
        if (d != 0) cyc.push_back(std::gcd(d, m)); // Tor(Z/d, Z/m)
    std::vector<i64> nz;
    for (i64 d : cyc)
        if (d != 1) nz.push_back(d);
    // canonicalize the cyclic decomposition into invariant factors
    return finab_from_presentation((int)nz.size(), Mat::diag(nz));
}

/* ---------------------------------------------------------------- sparse */

SpInv sp_invariants(const SpMat& A0, int dense_cap) {
    int R = A0.rows, C = A0.cols;
    std::vector<std::unordered_map<int, i64>> cols(C);
    std::vector<std::unordered_set<int>> rowocc(R);
    for (int j = 0; j < C; ++j)
        for (auto& [i, v] : A0.col[j]) {
            auto& m = cols[j];
            i64 nv = (m.count(i) ? m[i] : 0) + v;
            if (nv == 0)
                m.erase(i);
            else
                m[i] = nv;
        }
    for (int j = 0; j < C; ++j)
        for (auto& [i, v] : cols[j]) rowocc[i].insert(j);

    std::vector<char> colAlive(C, 1), rowAlive(R, 1);
    long long unitPivots = 0;

    auto eliminate = [&](int pi, int pj, i64 s) {
        // s = +-1 at (pi, pj); clear row pi across, then retire row+col
        std::vector<int> others(rowocc[pi].begin(), rowocc[pi].end());
        for (int j2 : others) {
            if (j2 == pj) continue;
            i64 v2 = cols[j2][pi];
            i64 q = v2 * s; // subtract q * col_pj from col_j2
            for (auto& [ri, rv] : cols[pj]) {
                auto& m = cols[j2];
                auto it = m.find(ri);
                i64 cur = (it == m.end()) ? 0 : it->second;
                i64 nv = guard((__int128)cur - (__int128)q * rv, "sparse axpy");
                if (nv == 0) {
                    if (it != m.end()) {
                        m.erase(it);
                        rowocc[ri].erase(j2);
                    }
                } else {
                    if (it == m.end()) rowocc[ri].insert(j2);
                    m[ri] = nv;
                }
            }
        }
        for (auto& [ri, rv] : cols[pj]) rowocc[ri].erase(pj);
        cols[pj].clear();
        colAlive[pj] = 0;
        rowAlive[pi] = 0;
        rowocc[pi].clear();
        ++unitPivots;
    };

    for (;;) {
        struct Cand {
            long long fill;
            int i, j;
        };
        std::vector<Cand> cands;
        for (int j = 0; j < C; ++j) {
            if (!colAlive[j]) continue;
            for (auto& [i, v] : cols[j])
                if (v == 1 || v == -1)
                    cands.push_back({(long long)(rowocc[i].size() - 1) * (long long)(cols[j].size() - 1), i, j});
        }
        if (cands.empty()) break;
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return std::tie(a.fill, a.i, a.j) < std::tie(b.fill, b.i, b.j); });
        bool any = false;
        for (auto& cd : cands) {
            if (!colAlive[cd.j] || !rowAlive[cd.i]) continue;
            auto it = cols[cd.j].find(cd.i);
            if (it == cols[cd.j].end() || (it->second != 1 && it->second != -1)) continue;
            eliminate(cd.i, cd.j, it->second);
            any = true;
        }
        if (!any) break;
    }

    // residual dense core
    std::unordered_map<int, int> rmap;
    std::vector<int> cdense;
    for (int j = 0; j < C; ++j) {
        if (!colAlive[j] || cols[j].empty()) continue;
        cdense.push_back(j);
        for (auto& [i, v] : cols[j])
            if (!rmap.count(i)) rmap[i] = (int)rmap.size();
    }
    SpInv out;
    out.factors.assign(unitPivots, 1);
    if (!cdense.empty()) {
        if ((int)rmap.size() > dense_cap || (int)cdense.size() > dense_cap)
            throw SizeBudgetExceeded("sp_invariants: dense core " + std::to_string(rmap.size()) + "x" +
                                     std::to_string(cdense.size()) + " exceeds cap " + std::to_string(dense_cap));
        Mat D((int)rmap.size(), (int)cdense.size());
        for (int j = 0; j < (int)cdense.size(); ++j)
            for (auto& [i, v] : cols[cdense[j]]) D.at(rmap[i], j) = v;
        Snf s = snf(std::move(D));
        for (i64 d : s.diag) out.factors.push_back(d);
    }
    out.rank = (int)out.factors.size();
    return out;
}

FinAb sp_finab(const SpMat& A, int dense_cap) {
    SpInv s = sp_invariants(A, dense_cap);
    FinAb g;
    for (i64 d : s.factors)
        if (d != 1) g.inv.push_back(d);
    for (int k = s.rank; k < A.rows; ++k) g.inv.push_back(0);
    return g;
}

/* ----------------------------------------------------------- permutations */

Perm perm_id(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

Perm perm_compose(const Perm& p, const Perm& q) {
    Perm r(q.size());
    for (size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
    return r;
}

Perm perm_inverse(const Perm& p) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[p[i]] = (int)i;
    return r;
}

int perm_sign(const Perm& p) {
    int n = (int)p.size(), s = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

Perm perm_block_sum(const Perm& p, const Perm& q) {
    Perm r(p.size() + q.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = p[i];
    for (size_t i = 0; i < q.size(); ++i) r[p.size() + i] = (int)p.size() + q[i];
    return r;
}

std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = perm_id(n);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int perm_index(const Perm& p) {
    int n = (int)p.size();
    long long fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    long long idx = 0;
    std::vector<char> used(n, 0);
    for (int i = 0; i < n; ++i) {
        fact /= (n - i);
        int smaller = 0;
        for (int v = 0; v < p[i]; ++v)
            if (!used[v]) ++smaller;
        idx += smaller * fact;
        used[p[i]] = 1;
    }
    return (int)idx;
}

} // namespace dspace
