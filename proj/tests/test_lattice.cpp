#include "latprof/lattice.hpp"

#include <sstream>

#include "doctest.h"
#include "latprof/sampler.hpp"
#include "oracles.hpp"

using namespace latprof;

namespace {

LatticeBasis identity_basis(int n) {
    IntMat rows(n, IntVec(n, BigInt(0)));
    for (int i = 0; i < n; ++i) rows[i][i] = 1;
    return LatticeBasis::from_rows(std::move(rows));
}

LatticeBasis diag_basis(const std::vector<long>& d) {
    const int n = static_cast<int>(d.size());
    IntMat rows(n, IntVec(n, BigInt(0)));
    for (int i = 0; i < n; ++i) rows[i][i] = d[i];
    return LatticeBasis::from_rows(std::move(rows));
}

}  // namespace

TEST_CASE("determinants") {
    CHECK(identity_basis(3).det_abs == 1);
    CHECK(diag_basis({2, 3, 5}).det_abs == 30);
    // Goldstein-Mayer bases are triangular with determinant p; cross-check
    // by cofactor expansion on 4x4 instances.
    const auto cfg = make_sampler_config(4, 10007, 42);
    for (std::uint64_t t = 0; t < 5; ++t) {
        const auto b = sample_lattice(cfg, t);
        CHECK(b.det_abs == 10007);
        CHECK(abs(oracles::cofactor_det(b.rows)) == 10007);
        CHECK(determinant_abs(b.rows) == 10007);
    }
    IntMat singular{{BigInt(1), BigInt(2)}, {BigInt(2), BigInt(4)}};
    CHECK(determinant_abs(singular) == 0);
    CHECK_THROWS_AS(LatticeBasis::from_rows(singular), DegenerateBasisError);

    // Random signed 5x5 matrices against cofactor expansion, including
    // patterns that force row pivoting (leading zeros).
    CounterRng rng(404, 0);
    for (int trial = 0; trial < 60; ++trial) {
        IntMat m(5, IntVec(5));
        for (auto& row : m)
            for (auto& v : row) v = BigInt(static_cast<long>(rng.next_below(15)) - 7);
        m[0][0] = 0;
        CHECK(determinant_abs(m) == abs(oracles::cofactor_det(m)));
    }
}

TEST_CASE("LLL on an already reduced basis") {
    const auto red = reduce_basis(identity_basis(4));
    CHECK(red.det_abs == 1);
    // Rows stay +- unit vectors, possibly permuted.
    for (const auto& row : red.rows) {
        BigInt q = 0;
        for (const auto& v : row) q += v * v;
        CHECK(q == 1);
    }
}

TEST_CASE("LLL reduces a skewed 2d basis") {
    IntMat rows{{BigInt(1), BigInt(0)}, {BigInt(10), BigInt(1)}};
    const auto red = reduce_basis(LatticeBasis::from_rows(rows));
    BigInt max_q = 0;
    for (const auto& row : red.rows) {
        BigInt q = 0;
        for (const auto& v : row) q += v * v;
        if (q > max_q) max_q = q;
    }
    CHECK(max_q <= 2);
    CHECK(red.det_abs == 1);
    CHECK(determinant_abs(red.rows) == 1);
}

TEST_CASE("LLL preserves the determinant on random bases") {
    CounterRng rng(7, 0);
    int done = 0;
    while (done < 100) {
        IntMat rows(6, IntVec(6));
        for (auto& r : rows)
            for (auto& v : r) v = BigInt(static_cast<long>(rng.next_below(19)) - 9);
        if (determinant_abs(rows) == 0) continue;
        const auto basis = LatticeBasis::from_rows(rows);
        const auto red = reduce_basis(basis);
        CHECK(determinant_abs(red.rows) == basis.det_abs);
        ++done;
    }
}

TEST_CASE("shortest vector on axis lattices") {
    const auto sv4 = shortest_vector(identity_basis(4));
    CHECK(sv4.q == 1);
    const auto sv_diag = shortest_vector(diag_basis({3, 5, 7}));
    CHECK(sv_diag.q == 9);
}

TEST_CASE("shortest vector matches a coefficient-box search on GM lattices") {
    const auto cfg = make_sampler_config(5, 10007, 2024);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto basis = sample_lattice(cfg, t);
        const auto red = reduce_basis(basis);
        const auto sv = shortest_vector(basis);
        // Exhaustive search over reduced-basis coefficients in [-6, 6]^5.
        BigInt best = -1;
        std::vector<long> c(5, -6);
        for (;;) {
            bool zero = true;
            for (long x : c)
                if (x != 0) zero = false;
            if (!zero) {
                IntVec v(5, BigInt(0));
                for (int i = 0; i < 5; ++i)
                    for (int j = 0; j < 5; ++j) v[j] += BigInt(c[i]) * red.rows[i][j];
                const BigInt q = oracles::vec_norm_sq(v);
                if (best < 0 || q < best) best = q;
            }
            int k = 0;
            while (k < 5 && c[k] == 6) {
                c[k] = -6;
                ++k;
            }
            if (k == 5) break;
            ++c[k];
        }
        CHECK(sv.q == best);
    }
}

TEST_CASE("enumerate_in_ball on Z^2 and Z^3") {
    const auto z2 = identity_basis(2);
    const auto one = enumerate_in_ball(z2, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].q == 1);
    CHECK(one[0].count == 4);

    const auto five = enumerate_in_ball(z2, 5);
    REQUIRE(five.size() == 4);
    CHECK(five[0].q == 1);
    CHECK(five[0].count == 4);
    CHECK(five[1].q == 2);
    CHECK(five[1].count == 4);
    CHECK(five[2].q == 4);
    CHECK(five[2].count == 4);
    CHECK(five[3].q == 5);
    CHECK(five[3].count == 8);
    std::int64_t total = 0;
    for (const auto& nc : five) total += nc.count;
    CHECK(total == 20);

    CHECK(enumerate_in_ball(identity_basis(3), 0).empty());
}

TEST_CASE("enumeration equals the box census for small lattices") {
    const auto cfg = make_sampler_config(4, 101, 5);
    for (std::uint64_t t = 0; t < 8; ++t) {
        const auto basis = sample_lattice(cfg, t);
        const auto red = reduce_basis(basis);
        const BigInt q_max = 50;
        const auto got = enumerate_in_ball(basis, q_max);
        const auto want = oracles::ball_census(red.rows, q_max);
        REQUIRE(got.size() == want.size());
        std::size_t i = 0;
        for (const auto& [q, count] : want) {
            CHECK(got[i].q == q);
            CHECK(got[i].count == count);
            ++i;
        }
    }
}

TEST_CASE("parity: every multiplicity is even") {
    const auto cfg = make_sampler_config(5, 10007, 77);
    for (std::uint64_t t = 0; t < 10; ++t) {
        const auto counts = enumerate_in_ball(sample_lattice(cfg, t), 400);
        for (const auto& nc : counts) CHECK(nc.count % 2 == 0);
    }
}

TEST_CASE("outputs are basis-invariant") {
    const auto cfg = make_sampler_config(4, 101, 13);
    for (std::uint64_t t = 0; t < 6; ++t) {
        const auto basis = sample_lattice(cfg, t);
        const auto u = oracles::random_unimodular(4, 99, t);
        const auto rows2 = oracles::mat_mul(u, basis.rows);
        const auto basis2 = LatticeBasis::from_rows(rows2);
        CHECK(basis2.det_abs == basis.det_abs);

        const auto sv1 = shortest_vector(basis);
        const auto sv2 = shortest_vector(basis2);
        CHECK(sv1.q == sv2.q);
        CHECK(sv1.coords == sv2.coords);

        const auto e1 = enumerate_in_ball(basis, 60);
        const auto e2 = enumerate_in_ball(basis2, 60);
        REQUIRE(e1.size() == e2.size());
        for (std::size_t i = 0; i < e1.size(); ++i) {
            CHECK(e1[i].q == e2[i].q);
            CHECK(e1[i].count == e2[i].count);
        }
    }
}

TEST_CASE("first enumerated norm equals the shortest vector") {
    const auto cfg = make_sampler_config(5, 10007, 3);
    for (std::uint64_t t = 0; t < 10; ++t) {
        const auto basis = sample_lattice(cfg, t);
        const auto sv = shortest_vector(basis);
        const auto counts = enumerate_in_ball(basis, sv.q * 4);
        REQUIRE(!counts.empty());
        CHECK(counts[0].q == sv.q);
    }
}

TEST_CASE("budget exhaustion raises instead of truncating") {
    EnumerationBudget tiny;
    tiny.max_nodes = 10;
    CHECK_THROWS_AS(enumerate_in_ball(identity_basis(4), 100, tiny), BudgetExceededError);
    EnumerationBudget few_vectors;
    few_vectors.max_vectors = 3;
    CHECK_THROWS_AS(enumerate_in_ball(identity_basis(4), 100, few_vectors), BudgetExceededError);
}

TEST_CASE("basis text round trip") {
    const auto cfg = make_sampler_config(3, 10007, 8);
    const auto basis = sample_lattice(cfg, 0);
    std::stringstream ss;
    write_basis_text(ss, basis);
    const auto back = read_basis_text(ss);
    CHECK(back.n == basis.n);
    CHECK(back.rows == basis.rows);
    CHECK(back.det_abs == basis.det_abs);

    std::stringstream bad("2\n1 0\n");
    CHECK_THROWS_AS(read_basis_text(bad), ConfigError);
}

TEST_CASE("enumeration survives Gram matrices beyond int64") {
    // diag(3, 1) scaled by 2^35: Gram entries ~ 2^73 force the
    // arbitrary-precision norm path; outputs must match the small lattice.
    IntMat small{{BigInt(3), BigInt(0)}, {BigInt(0), BigInt(1)}};
    const auto tiny = LatticeBasis::from_rows(small);
    const auto big = scale_basis(tiny, 1L << 20);
    const auto big2 = scale_basis(big, 1L << 15);  // total 2^35

    const auto sv = shortest_vector(big2);
    BigInt unit;
    mpz_ui_pow_ui(unit.get_mpz_t(), 2, 70);
    CHECK(sv.q == unit);

    const auto got = enumerate_in_ball(big2, unit * 9);
    const auto want = enumerate_in_ball(tiny, 9);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].q == want[i].q * unit);
        CHECK(got[i].count == want[i].count);
    }
}

TEST_CASE("scaling multiplies the determinant by a^n") {
    const auto basis = identity_basis(3);
    const auto scaled = scale_basis(basis, 5);
    CHECK(scaled.det_abs == 125);
    CHECK(scaled.rows[2][2] == 5);
    CHECK_THROWS_AS(scale_basis(basis, 0), ConfigError);
}
