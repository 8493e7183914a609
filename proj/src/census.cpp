#include "hdf/census.hpp"

#include "hdf/errors.hpp"

#include <algorithm>
#include <numeric>

namespace hdf {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kU64Max = ~u64{0};

struct PrimePower {
    u64 prime;
    unsigned exp;
};

std::vector<PrimePower> factorize(u64 n) {
    std::vector<PrimePower> out;
    for (u64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p == 0) return false;
    }
    return true;
}

u64 checked_mul(u64 a, u64 b) {
    u128 prod = u128(a) * b;
    if (prod > kU64Max) throw TooLarge("product exceeds 64-bit range");
    return u64(prod);
}

u64 lcm_u64(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / std::gcd(a, b), b);
}

u64 pow_u64(u64 base, unsigned exp) {
    u64 r = 1;
    while (exp--) r = checked_mul(r, base);
    return r;
}

// Exponent of the unit group modulo a prime power.
u64 carmichael_prime_power(u64 p, unsigned e) {
    if (p == 2) {
        if (e == 1) return 1;
        if (e == 2) return 2;
        return u64{1} << (e - 2);
    }
    return (p - 1) * pow_u64(p, e - 1);
}

// The unit group (Z/n)^* is cyclic exactly for n in {1, 2, 4, q^s, 2 q^s}
// with q an odd prime.
bool unit_group_cyclic(u64 n) {
    if (n <= 4) return true;
    if (n % 2 == 0) n /= 2;
    if (n % 2 == 0) return false;
    auto fac = factorize(n);
    return fac.size() == 1;
}

// Sorted divisors of prod prime^exp.
std::vector<u64> divisors_of(const std::vector<PrimePower>& fac) {
    std::vector<u64> divs{1};
    for (const auto& pp : fac) {
        std::size_t base_count = divs.size();
        u64 q = 1;
        for (unsigned e = 1; e <= pp.exp; ++e) {
            q = checked_mul(q, pp.prime);
            for (std::size_t i = 0; i < base_count; ++i) {
                divs.push_back(checked_mul(divs[i], q));
            }
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

unsigned valuation(u64 n, u64 p) {
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Factorization of the search bound M(f); see preimage_bound.
std::vector<PrimePower> preimage_bound_factors(u64 f) {
    if (f == 0) throw BadInput("period must be positive");
    u64 two_f = checked_mul(2, f);
    std::vector<PrimePower> fac;
    fac.push_back({2, valuation(two_f, 2) + 2});
    std::vector<u64> odd_primes;
    for (u64 d = 2; d <= two_f; ++d) {
        if (two_f % d != 0) continue;
        u64 q = d + 1;
        if (q % 2 != 0 && is_prime(q)) odd_primes.push_back(q);
    }
    std::sort(odd_primes.begin(), odd_primes.end());
    for (u64 q : odd_primes) fac.push_back({q, valuation(two_f, q) + 1});
    return fac;
}

u64 product_of(const std::vector<PrimePower>& fac) {
    u64 r = 1;
    for (const auto& pp : fac) r = checked_mul(r, pow_u64(pp.prime, pp.exp));
    return r;
}

u64 reduce_add_u128(u128 acc) {
    if (acc > kU64Max) throw TooLarge("count exceeds 64-bit range");
    return u64(acc);
}

// Periods g with lcm(Lambda, g) = Lambda * f: for primes q | f the
// valuation of g is forced to v_q(Lambda) + v_q(f); for the remaining
// primes of Lambda it may be anything up to v_q(Lambda).
std::vector<u64> qualifying_periods(u64 Lambda, u64 f) {
    u64 base = 1;
    std::vector<PrimePower> free_part;
    for (const auto& pp : factorize(f)) {
        base = checked_mul(base, pow_u64(pp.prime, pp.exp + valuation(Lambda, pp.prime)));
    }
    for (const auto& pp : factorize(Lambda)) {
        if (f % pp.prime != 0) free_part.push_back(pp);
    }
    std::vector<u64> out;
    for (u64 d : divisors_of(free_part)) out.push_back(checked_mul(base, d));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::uint64_t carmichael(std::uint64_t n) {
    if (n == 0) throw BadInput("modulus must be positive");
    u64 result = 1;
    for (const auto& pp : factorize(n)) {
        result = lcm_u64(result, carmichael_prime_power(pp.prime, pp.exp));
    }
    return result;
}

std::uint64_t lambda_prime(std::uint64_t n) {
    if (n == 0) throw BadInput("modulus must be positive");
    if (n <= 2) return 1;
    u64 lam = carmichael(n);
    return unit_group_cyclic(n) ? lam / 2 : lam;
}

std::uint64_t phi2(std::uint64_t n) {
    if (n == 0) throw BadInput("modulus must be positive");
    u128 result = 1;
    for (const auto& pp : factorize(n)) {
        // p^(2e-2) * (p^2 - 1)
        u128 part = u128(pp.prime) * pp.prime - 1;
        for (unsigned e = 1; e < pp.exp; ++e) part *= u128(pp.prime) * pp.prime;
        result *= part;
        if (result > kU64Max) throw TooLarge("torsion count exceeds 64-bit range");
    }
    return u64(result);
}

std::uint64_t preimage_bound(std::uint64_t f) {
    return product_of(preimage_bound_factors(f));
}

std::vector<std::uint64_t> preimage_lambda_prime(std::uint64_t f) {
    std::vector<u64> out;
    for (u64 n : divisors_of(preimage_bound_factors(f))) {
        if (n >= 3 && lambda_prime(n) == f) out.push_back(n);
    }
    return out;
}

std::uint64_t census_Z(std::uint64_t f) {
    if (f == 0) throw BadInput("period must be positive");
    u128 total = (f == 1) ? 4 : 0; // the four branch points are fixed
    for (u64 n : preimage_lambda_prime(f)) total += u128(phi2(n)) / 2;
    return reduce_add_u128(total);
}

WeightTuple::WeightTuple(const std::array<Rational, 4>& weights) : weights_(weights), level_(1) {
    for (auto& w : weights_) {
        if (w.den == 0) throw BadInput("weight denominator must be positive");
        if (w.num >= w.den) throw BadInput("weights must lie in [0, 1)");
        u64 g = std::gcd(w.num, w.den);
        if (g > 1) {
            w.num /= g;
            w.den /= g;
        }
        if (w.num == 0) w.den = 1;
        level_ = lcm_u64(level_, w.den);
    }
}

std::uint64_t Lambda_alpha(const WeightTuple& alpha) {
    return carmichael(alpha.level());
}

std::uint64_t count_M_alpha(const WeightTuple& alpha, std::uint64_t f) {
    if (f == 0) throw BadInput("period must be positive");
    u64 Lambda = Lambda_alpha(alpha);
    u128 total = 0;
    for (u64 g : qualifying_periods(Lambda, f)) total += census_Z(g);
    return reduce_add_u128(total);
}

std::uint64_t count_M_alpha_display(const WeightTuple& alpha, std::uint64_t f) {
    if (f == 0) throw BadInput("period must be positive");
    u64 Lambda = Lambda_alpha(alpha);
    u64 top = checked_mul(Lambda, f);
    std::vector<PrimePower> free_primes;
    for (const auto& pp : factorize(Lambda)) {
        if (f % pp.prime != 0) free_primes.push_back(pp);
    }
    // Multi-index over 0 <= j_i <= exp_i, dividing the argument by
    // prod p_i^(j_i).
    std::vector<unsigned> idx(free_primes.size(), 0);
    u128 total = 0;
    for (;;) {
        u64 denom = 1;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            denom = checked_mul(denom, pow_u64(free_primes[i].prime, idx[i]));
        }
        total += census_Z(top / denom);
        std::size_t i = 0;
        while (i < idx.size() && idx[i] == free_primes[i].exp) {
            idx[i] = 0;
            ++i;
        }
        if (i == idx.size()) break;
        ++idx[i];
    }
    return reduce_add_u128(total);
}

} // namespace hdf
