#include "latprof/sampler.hpp"

#include "latprof/rng.hpp"

namespace latprof {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t p) {
    if (p < 2) throw ConfigError("primality test needs p >= 2");
    for (std::uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                             31ull, 37ull}) {
        if (p == sp) return true;
        if (p % sp == 0) return false;
    }
    std::uint64_t d = p - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, p);
        if (x == 1 || x == p - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, p);
            if (x == p - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

SamplerConfig make_sampler_config(int n, std::uint64_t p, std::uint64_t master_seed) {
    if (n < 1) throw ConfigError("sampler dimension must be >= 1");
    if (!is_prime_u64(p)) throw ConfigError("sampler modulus p must be prime");
    return SamplerConfig{n, p, master_seed};
}

LatticeBasis sample_lattice(const SamplerConfig& config, std::uint64_t trial_index) {
    const int n = config.n;
    if (n < 1) throw ConfigError("sampler dimension must be >= 1");
    CounterRng rng(config.master_seed, trial_index);
    IntMat rows(n, IntVec(n, BigInt(0)));
    rows[0][0] = BigInt(static_cast<unsigned long>(config.p));
    for (int i = 1; i < n; ++i) {
        rows[i][0] = BigInt(static_cast<unsigned long>(rng.next_below(config.p)));
        rows[i][i] = 1;
    }
    LatticeBasis b;
    b.n = n;
    b.rows = std::move(rows);
    b.det_abs = BigInt(static_cast<unsigned long>(config.p));  // triangular
    return b;
}

}  // namespace latprof
