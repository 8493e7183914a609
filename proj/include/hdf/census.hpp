#pragma once

// Counting machinery for periodic points of the self-map on the projective
// line and its weighted-moduli relatives: the Carmichael exponent, the
// period function lambda'(N), the strict-torsion count phi_2(N), the
// periodic-point census Z(f), and the weighted variants.

#include <array>
#include <cstdint>
#include <vector>

namespace hdf {

// Exponent of the unit group (Z/N)^*.
std::uint64_t carmichael(std::uint64_t n);

// Smallest f such that g^f = +-1 for every unit g mod N; equals
// carmichael(n)/2 when the unit group is cyclic (n in {4, q^s, 2 q^s}) and
// carmichael(n) otherwise, with the two-torsion convention
// lambda_prime(1) = lambda_prime(2) = 1.
std::uint64_t lambda_prime(std::uint64_t n);

// Number of elements of exact additive order N in (Z/N)^2:
// N^2 prod_{p | N} (1 - 1/p^2), with phi2(1) = 1.
std::uint64_t phi2(std::uint64_t n);

// Finite search bound M(f): every N with lambda_prime(N) = f divides it.
std::uint64_t preimage_bound(std::uint64_t f);

// All N >= 3 with lambda_prime(N) = f, in increasing order (enumerated over
// the divisors of preimage_bound(f)).
std::vector<std::uint64_t> preimage_lambda_prime(std::uint64_t f);

// Number of f-periodic points of the self-map on the x-line over the
// algebraic closure: the four branch points contribute 4 at f = 1, and each
// N with lambda_prime(N) = f contributes phi2(N)/2 images of strict
// N-torsion points.
std::uint64_t census_Z(std::uint64_t f);

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
};

// Four weights in [0, 1) attached to the branch points; the level is the
// lcm of the reduced denominators.
class WeightTuple {
public:
    explicit WeightTuple(const std::array<Rational, 4>& weights);

    const std::array<Rational, 4>& weights() const { return weights_; }
    std::uint64_t level() const { return level_; }

private:
    std::array<Rational, 4> weights_;
    std::uint64_t level_;
};

// The exponent attached to a weight tuple: carmichael(level).
std::uint64_t Lambda_alpha(const WeightTuple& alpha);

// Number of (Lambda_alpha * f)-periodic points of the induced self-map on
// the weighted moduli: a point with period g on the x-line qualifies
// exactly when lcm(Lambda_alpha, g) = Lambda_alpha * f.  This is the
// normative characterization.
std::uint64_t count_M_alpha(const WeightTuple& alpha, std::uint64_t f);

// The same count through the displayed divisor sum
// sum Z(Lambda_alpha * f / prod p_i^{j_i}) over multi-indices with
// 0 <= j_i <= v_{p_i}(Lambda_alpha) ranging over the primes p_i of
// Lambda_alpha that do not divide f (one fixed reading of an ambiguous
// display; computed for cross-checking against count_M_alpha).
std::uint64_t count_M_alpha_display(const WeightTuple& alpha, std::uint64_t f);

} // namespace hdf
