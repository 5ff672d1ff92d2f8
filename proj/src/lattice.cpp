#include "latprof/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace latprof {

namespace {

BigInt dot(const IntVec& a, const IntVec& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Nearest integer to a/b for b > 0, ties toward +infinity.
BigInt nearest_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    BigInt num = 2 * a + b;
    BigInt den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

BigInt from_u128(unsigned __int128 u) {
    const std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(u);
    BigInt r(static_cast<unsigned long>(hi));
    r <<= 64;
    r += static_cast<unsigned long>(lo);
    return r;
}

struct GramData {
    int n = 0;
    IntMat g;  // exact Gram matrix of the basis rows
    bool fits_i64 = false;
    std::vector<std::vector<std::int64_t>> g64;
};

GramData exact_gram(const IntMat& rows) {
    GramData G;
    G.n = static_cast<int>(rows.size());
    G.g.assign(G.n, IntVec(G.n));
    for (int i = 0; i < G.n; ++i)
        for (int j = 0; j <= i; ++j) {
            G.g[i][j] = dot(rows[i], rows[j]);
            G.g[j][i] = G.g[i][j];
        }
    G.fits_i64 = true;
    const BigInt cap = BigInt(1) << 62;
    for (int i = 0; i < G.n && G.fits_i64; ++i)
        for (int j = 0; j < G.n; ++j)
            if (mpz_cmpabs(G.g[i][j].get_mpz_t(), cap.get_mpz_t()) >= 0) {
                G.fits_i64 = false;
                break;
            }
    if (G.fits_i64) {
        G.g64.assign(G.n, std::vector<std::int64_t>(G.n));
        for (int i = 0; i < G.n; ++i)
            for (int j = 0; j < G.n; ++j) G.g64[i][j] = static_cast<std::int64_t>(G.g[i][j].get_si());
    }
    return G;
}

struct FloatGs {
    std::vector<std::vector<double>> mu;  // mu[i][j] for j < i
    std::vector<double> r2;               // squared Gram-Schmidt norms
};

FloatGs float_gs(const GramData& G) {
    const int n = G.n;
    FloatGs f;
    f.mu.assign(n, std::vector<double>(n, 0.0));
    f.r2.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = G.g[i][j].get_d();
            for (int k = 0; k < j; ++k) s -= f.mu[i][k] * f.mu[j][k] * f.r2[k];
            if (j < i)
                f.mu[i][j] = s / f.r2[j];
            else
                f.r2[i] = s;
        }
        if (!(f.r2[i] > 0.0)) throw DegenerateBasisError{};
    }
    return f;
}

constexpr std::int64_t kCoeffCap = std::int64_t(1) << 40;
constexpr std::int64_t kSmallCoeff = std::int64_t(1) << 20;

BigInt exact_squared_norm(const GramData& G, const std::vector<std::int64_t>& x) {
    const int n = G.n;
    bool small = G.fits_i64;
    for (int i = 0; i < n && small; ++i)
        if (x[i] >= kSmallCoeff || x[i] <= -kSmallCoeff) small = false;
    if (small) {
        __int128 acc = 0;
        for (int i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            acc += static_cast<__int128>(x[i]) * x[i] * G.g64[i][i];
            for (int j = 0; j < i; ++j) {
                if (x[j] == 0) continue;
                acc += 2 * static_cast<__int128>(x[i]) * x[j] * G.g64[i][j];
            }
        }
        return from_u128(static_cast<unsigned __int128>(acc));
    }
    BigInt acc = 0;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        acc += BigInt(static_cast<long>(x[i])) * static_cast<long>(x[i]) * G.g[i][i];
        for (int j = 0; j < i; ++j) {
            if (x[j] == 0) continue;
            acc += 2 * BigInt(static_cast<long>(x[i])) * static_cast<long>(x[j]) * G.g[i][j];
        }
    }
    return acc;
}

// Depth-first Schnorr-Euchner walk over the Gram-Schmidt triangularization.
// Float arithmetic only steers the search; every candidate leaf is handed to
// `leaf` with its exact integer squared norm.  `leaf` may shrink the float
// pruning bound (SVP) and reports whether the vector was accepted, which is
// what the vector budget counts.
template <class Leaf>
void enumerate_tree(const GramData& G, const FloatGs& f, double initial_bound,
                    const EnumerationBudget& budget, Leaf&& leaf) {
    const int n = G.n;
    std::vector<std::int64_t> x(n, 0), dx(n, 0), ddx(n, 0);
    std::vector<double> c(n, 0.0), partial(n, 0.0);
    double bound = initial_bound;
    std::int64_t nodes = 0, accepted = 0;

    auto enter = [&](int k) {
        double ck = 0.0;
        for (int j = k + 1; j < n; ++j) ck -= x[j] * f.mu[j][k];
        c[k] = ck;
        const double rounded = std::nearbyint(ck);
        if (std::abs(rounded) >= static_cast<double>(kCoeffCap))
            throw BudgetExceededError("enumeration coefficient overflow");
        x[k] = static_cast<std::int64_t>(rounded);
        const double y = ck - rounded;
        dx[k] = ddx[k] = (y >= 0.0) ? 1 : -1;
    };
    auto advance = [&](int k) {
        x[k] += dx[k];
        ddx[k] = -ddx[k];
        dx[k] = ddx[k] - dx[k];
        if (x[k] >= kCoeffCap || x[k] <= -kCoeffCap)
            throw BudgetExceededError("enumeration coefficient overflow");
    };

    int k = n - 1;
    partial[k] = 0.0;
    enter(k);
    for (;;) {
        if (++nodes > budget.max_nodes) throw BudgetExceededError("enumeration node budget exceeded");
        const double y = static_cast<double>(x[k]) - c[k];
        const double d = partial[k] + y * y * f.r2[k];
        if (d <= bound) {
            if (k == 0) {
                bool nonzero = false;
                for (int i = 0; i < n; ++i)
                    if (x[i] != 0) {
                        nonzero = true;
                        break;
                    }
                if (nonzero) {
                    BigInt q = exact_squared_norm(G, x);
                    if (leaf(x, q, bound)) {
                        if (++accepted > budget.max_vectors)
                            throw BudgetExceededError("enumeration vector budget exceeded");
                    }
                }
                advance(0);
            } else {
                partial[k - 1] = d;
                --k;
                enter(k);
            }
        } else {
            if (k == n - 1) break;
            ++k;
            advance(k);
        }
    }
}

}  // namespace

BigInt determinant_abs(IntMat m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return BigInt(0);
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != n) throw ConfigError("determinant needs a square matrix");
    BigInt prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (m[i][k] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return BigInt(0);
        if (piv != k) std::swap(m[piv], m[k]);  // sign irrelevant for |det|
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                BigInt num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return abs(m[n - 1][n - 1]);
}

LatticeBasis LatticeBasis::from_rows(IntMat rows) {
    const int n = static_cast<int>(rows.size());
    if (n < 1) throw ConfigError("basis needs at least one row");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n) throw ConfigError("basis must be square");
    LatticeBasis b;
    b.n = n;
    b.det_abs = determinant_abs(rows);
    if (b.det_abs == 0) throw DegenerateBasisError{};
    b.rows = std::move(rows);
    return b;
}

LatticeBasis reduce_basis(const LatticeBasis& basis, double delta) {
    if (!(delta > 0.25 && delta < 1.0)) throw ConfigError("LLL delta must lie in (1/4, 1)");
    const int n = basis.n;
    IntMat b = basis.rows;

    // Integral Gram-Schmidt state: d[i] is the Gram determinant of the
    // first i rows (d[0] = 1), lam[i][j] = d[j+1] * mu_{i,j}.
    std::vector<BigInt> d(n + 1);
    d[0] = 1;
    IntMat lam(n, IntVec(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            BigInt u = dot(b[i], b[j]);
            for (int k = 0; k < j; ++k) {
                BigInt num = d[k + 1] * u - lam[i][k] * lam[j][k];
                mpz_divexact(u.get_mpz_t(), num.get_mpz_t(), d[k].get_mpz_t());
            }
            if (j < i)
                lam[i][j] = u;
            else
                d[i + 1] = u;
        }
        if (d[i + 1] <= 0) throw DegenerateBasisError{};
    }

    const mpq_class delta_q(delta);  // exact binary rational of the double

    auto redi = [&](int k, int l) {
        BigInt two_lam = 2 * lam[k][l];
        if (mpz_cmpabs(two_lam.get_mpz_t(), d[l + 1].get_mpz_t()) > 0) {
            BigInt q = nearest_div(lam[k][l], d[l + 1]);
            for (int j = 0; j < n; ++j) b[k][j] -= q * b[l][j];
            for (int j = 0; j < l; ++j) lam[k][j] -= q * lam[l][j];
            lam[k][l] -= q * d[l + 1];
        }
    };

    auto swapi = [&](int k) {
        std::swap(b[k], b[k - 1]);
        for (int j = 0; j <= k - 2; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        BigInt lamk = lam[k][k - 1];
        BigInt B;
        {
            BigInt num = d[k - 1] * d[k + 1] + lamk * lamk;
            mpz_divexact(B.get_mpz_t(), num.get_mpz_t(), d[k].get_mpz_t());
        }
        for (int i = k + 1; i < n; ++i) {
            BigInt t = lam[i][k];
            BigInt num = d[k + 1] * lam[i][k - 1] - lamk * t;
            mpz_divexact(lam[i][k].get_mpz_t(), num.get_mpz_t(), d[k].get_mpz_t());
            num = B * t + lamk * lam[i][k];
            mpz_divexact(lam[i][k - 1].get_mpz_t(), num.get_mpz_t(), d[k + 1].get_mpz_t());
        }
        d[k] = B;
    };

    int k = 1;
    while (k < n) {
        redi(k, k - 1);
        // Lovasz condition: d[k+1] d[k-1] >= delta d[k]^2 - lam[k][k-1]^2.
        mpq_class lhs(d[k + 1] * d[k - 1]);
        mpq_class rhs = delta_q * mpq_class(d[k] * d[k]) - mpq_class(lam[k][k - 1] * lam[k][k - 1]);
        if (lhs < rhs) {
            swapi(k);
            k = std::max(1, k - 1);
        } else {
            for (int l = k - 2; l >= 0; --l) redi(k, l);
            ++k;
        }
    }

    LatticeBasis out;
    out.n = n;
    out.rows = std::move(b);
    out.det_abs = basis.det_abs;
    return out;
}

ShortestVector shortest_vector(const LatticeBasis& basis, const EnumerationBudget& budget) {
    const LatticeBasis red = reduce_basis(basis);
    const GramData G = exact_gram(red.rows);
    const FloatGs f = float_gs(G);

    double min_diag = G.g[0][0].get_d();
    for (int i = 1; i < red.n; ++i) min_diag = std::min(min_diag, G.g[i][i].get_d());
    const double initial = min_diag * (1.0 + 1e-9) + 1e-12;

    bool found = false;
    BigInt best_q;
    std::vector<std::vector<std::int64_t>> ties;
    try {
        enumerate_tree(G, f, initial, budget,
                       [&](const std::vector<std::int64_t>& x, const BigInt& q, double& bound) {
                           if (!found || q < best_q) {
                               found = true;
                               best_q = q;
                               ties.clear();
                               ties.push_back(x);
                               bound = q.get_d() * (1.0 + 1e-9) + 1e-12;
                               return true;
                           }
                           if (q == best_q) {
                               ties.push_back(x);
                               return true;
                           }
                           return false;
                       });
    } catch (BudgetExceededError& e) {
        if (found) throw BudgetExceededError(std::string(e.what()) + " (best-so-far attached)", best_q);
        throw;
    }
    if (!found) throw DegenerateBasisError{};

    // All minimal vectors reached a leaf: the pruning bound never drops
    // below best_q * (1 + 1e-9).  Pick the lexicographically smallest
    // ambient tuple, a basis-independent representative.
    ShortestVector out;
    out.q = best_q;
    bool have = false;
    for (const auto& x : ties) {
        IntVec v(red.n, BigInt(0));
        for (int i = 0; i < red.n; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < red.n; ++j) v[j] += BigInt(static_cast<long>(x[i])) * red.rows[i][j];
        }
        if (!have || std::lexicographical_compare(v.begin(), v.end(), out.coords.begin(),
                                                  out.coords.end())) {
            out.coords = std::move(v);
            have = true;
        }
    }
    return out;
}

std::vector<NormCount> enumerate_in_ball(const LatticeBasis& basis, const BigInt& q_max,
                                         const EnumerationBudget& budget) {
    if (q_max < 0) throw ConfigError("q_max must be nonnegative");
    if (q_max == 0) return {};
    const LatticeBasis red = reduce_basis(basis);
    const GramData G = exact_gram(red.rows);
    const FloatGs f = float_gs(G);

    const double bound = q_max.get_d() * (1.0 + 1e-9) + 1e-12;
    std::map<BigInt, std::int64_t> counts;
    enumerate_tree(G, f, bound, budget,
                   [&](const std::vector<std::int64_t>&, const BigInt& q, double&) {
                       if (q <= q_max) {
                           ++counts[q];
                           return true;
                       }
                       return false;
                   });
    std::vector<NormCount> out;
    out.reserve(counts.size());
    for (auto& [q, c] : counts) out.push_back({q, c});
    return out;
}

LatticeBasis read_basis_text(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1) throw ConfigError("basis file: expected a positive dimension");
    IntMat rows(n, IntVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> rows[i][j])) throw ConfigError("basis file: expected n*n integers");
    return LatticeBasis::from_rows(std::move(rows));
}

void write_basis_text(std::ostream& out, const LatticeBasis& basis) {
    out << basis.n << "\n";
    for (int i = 0; i < basis.n; ++i) {
        for (int j = 0; j < basis.n; ++j) {
            if (j) out << ' ';
            out << basis.rows[i][j];
        }
        out << "\n";
    }
}

LatticeBasis read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open basis file: " + path);
    return read_basis_text(in);
}

LatticeBasis scale_basis(const LatticeBasis& basis, long factor) {
    if (factor < 1) throw ConfigError("scale factor must be a positive integer");
    LatticeBasis out;
    out.n = basis.n;
    out.rows = basis.rows;
    for (auto& row : out.rows)
        for (auto& v : row) v *= factor;
    BigInt fn;
    mpz_ui_pow_ui(fn.get_mpz_t(), static_cast<unsigned long>(factor),
                  static_cast<unsigned long>(basis.n));
    out.det_abs = basis.det_abs * fn;
    return out;
}

}  // namespace latprof
