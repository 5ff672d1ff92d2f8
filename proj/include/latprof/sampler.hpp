#pragma once

#include <cstdint>

#include "latprof/lattice.hpp"

namespace latprof {

// Goldstein-Mayer model: random index-p sublattices of Z^n, determinant p.
// The normalized ensemble approaches the Haar-Siegel measure as p grows.
struct SamplerConfig {
    int n = 0;
    std::uint64_t p = 0;
    std::uint64_t master_seed = 0;
};

// Deterministic Miller-Rabin, witness set valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t p);

// Validates n >= 1 and p prime.
SamplerConfig make_sampler_config(int n, std::uint64_t p, std::uint64_t master_seed);

// Basis rows (p, 0, ..., 0), (a_i, e_i) with a_i uniform on {0, ..., p-1}
// drawn from a counter generator keyed by (master_seed, trial_index).
// Pure in (config, trial_index).
LatticeBasis sample_lattice(const SamplerConfig& config, std::uint64_t trial_index);

}  // namespace latprof
