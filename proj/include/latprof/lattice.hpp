#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latprof/errors.hpp"

namespace latprof {

using BigInt = mpz_class;
using IntVec = std::vector<BigInt>;
using IntMat = std::vector<IntVec>;

struct EnumerationBudget {
    std::int64_t max_vectors = 5'000'000;
    std::int64_t max_nodes = 100'000'000;
};

// Thrown when enumeration hits its budget.  Carries the best candidate
// seen so far; the result is never silently truncated.
struct BudgetExceededError : std::runtime_error {
    bool has_best = false;
    BigInt best_q;

    explicit BudgetExceededError(const std::string& what_) : std::runtime_error(what_) {}
    BudgetExceededError(const std::string& what_, BigInt best)
        : std::runtime_error(what_), has_best(true), best_q(std::move(best)) {}
};

// Full-rank integer lattice given by basis vectors as rows.  Immutable
// after construction; det_abs always matches the rows.
struct LatticeBasis {
    int n = 0;
    IntMat rows;
    BigInt det_abs;

    static LatticeBasis from_rows(IntMat rows);
};

// Exact |det| by fraction-free (Bareiss) elimination; 0 for singular input.
BigInt determinant_abs(IntMat m);

// LLL reduction over exact integers (integral Gram-Schmidt state), Lovasz
// parameter delta in (1/4, 1).  Same lattice, same determinant.
LatticeBasis reduce_basis(const LatticeBasis& basis, double delta = 0.99);

struct ShortestVector {
    IntVec coords;  // ambient coordinates; lexicographically smallest attaining vector
    BigInt q;       // exact squared Euclidean norm
};

ShortestVector shortest_vector(const LatticeBasis& basis, const EnumerationBudget& budget = {});

struct NormCount {
    BigInt q;
    std::int64_t count = 0;
};

// Exact multiset of squared norms of all nonzero lattice vectors with
// |x|^2 <= q_max, as (distinct norm, multiplicity) pairs in increasing
// order.  Oriented counts: x and -x both counted.
std::vector<NormCount> enumerate_in_ball(const LatticeBasis& basis, const BigInt& q_max,
                                         const EnumerationBudget& budget = {});

// Text format: first line n, then n lines of n integers.
LatticeBasis read_basis_text(std::istream& in);
void write_basis_text(std::ostream& out, const LatticeBasis& basis);
LatticeBasis read_basis_file(const std::string& path);

LatticeBasis scale_basis(const LatticeBasis& basis, long factor);

}  // namespace latprof
