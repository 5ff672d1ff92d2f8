// Brute-force reference implementations used only by tests.  They share no
// code with the enumeration path they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "latprof/lattice.hpp"
#include "latprof/rng.hpp"

namespace oracles {

using latprof::BigInt;
using latprof::IntMat;
using latprof::IntVec;

inline BigInt vec_norm_sq(const IntVec& v) {
    BigInt s = 0;
    for (const auto& x : v) s += x * x;
    return s;
}

// Recursive cofactor expansion; fine for n <= 6.
inline BigInt cofactor_det(const IntMat& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    BigInt det = 0;
    for (std::size_t col = 0; col < n; ++col) {
        if (m[0][col] == 0) continue;
        IntMat minor;
        for (std::size_t i = 1; i < n; ++i) {
            IntVec row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != col) row.push_back(m[i][j]);
            minor.push_back(row);
        }
        BigInt term = m[0][col] * cofactor_det(minor);
        if (col % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}

// All nonzero vectors c * B with coefficients in a per-coordinate box wide
// enough to cover |x|^2 <= q_max, derived from this file's own Gram-Schmidt.
inline std::map<BigInt, std::int64_t> ball_census(const IntMat& rows, const BigInt& q_max) {
    const int n = static_cast<int>(rows.size());
    // Own float Gram-Schmidt for the box bounds.
    std::vector<std::vector<double>> b(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = rows[i][j].get_d();
    std::vector<std::vector<double>> gs = b;
    std::vector<double> r2(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            double num = 0, den = 0;
            for (int k = 0; k < n; ++k) {
                num += b[i][k] * gs[j][k];
                den += gs[j][k] * gs[j][k];
            }
            const double mu = num / den;
            for (int k = 0; k < n; ++k) gs[i][k] -= mu * gs[j][k];
        }
        r2[i] = 0;
        for (int k = 0; k < n; ++k) r2[i] += gs[i][k] * gs[i][k];
    }
    std::vector<long> bound(n);
    for (int i = 0; i < n; ++i)
        bound[i] = static_cast<long>(std::floor(std::sqrt(q_max.get_d() / r2[i]))) + 2;

    std::map<BigInt, std::int64_t> census;
    std::vector<long> c(n, 0);
    for (int i = 0; i < n; ++i) c[i] = -bound[i];
    for (;;) {
        bool zero = true;
        for (int i = 0; i < n; ++i)
            if (c[i] != 0) {
                zero = false;
                break;
            }
        if (!zero) {
            IntVec v(n, BigInt(0));
            for (int i = 0; i < n; ++i) {
                if (c[i] == 0) continue;
                for (int j = 0; j < n; ++j) v[j] += BigInt(c[i]) * rows[i][j];
            }
            const BigInt q = vec_norm_sq(v);
            if (q <= q_max) ++census[q];
        }
        int k = 0;
        while (k < n && c[k] == bound[k]) {
            c[k] = -bound[k];
            ++k;
        }
        if (k == n) break;
        ++c[k];
    }
    return census;
}

// Random unimodular integer matrix built from elementary row operations.
inline IntMat random_unimodular(int n, std::uint64_t seed, std::uint64_t stream, int ops = 24) {
    latprof::CounterRng rng(seed, stream);
    IntMat u(n, IntVec(n, BigInt(0)));
    for (int i = 0; i < n; ++i) u[i][i] = 1;
    for (int k = 0; k < ops; ++k) {
        const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        const int kind = static_cast<int>(rng.next_below(3));
        if (kind == 0 && i != j) {
            const long c = static_cast<long>(rng.next_below(7)) - 3;
            for (int t = 0; t < n; ++t) u[i][t] += BigInt(c) * u[j][t];
        } else if (kind == 1 && i != j) {
            std::swap(u[i], u[j]);
        } else {
            for (int t = 0; t < n; ++t) u[i][t] = -u[i][t];
        }
    }
    return u;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
    const std::size_t n = a.size();
    IntMat out(n, IntVec(n, BigInt(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

// Scalar inversion of volume_of_radius by bisection; checks radius_of_volume.
inline double bisect_radius(int n, double target_volume, double (*vol_of_r)(int, double)) {
    double lo = 0.0, hi = 1.0;
    while (vol_of_r(n, hi) < target_volume) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (vol_of_r(n, mid) < target_volume)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracles
