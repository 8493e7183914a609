#ifndef HDF_BIGINT_HPP
#define HDF_BIGINT_HPP

// Minimal unsigned big integer: just enough for exponents of the form p^k
// with p < 2^20 and k <= 24, i.e. a few 64-bit limbs.  Supports the
// operations the field layer needs (build p^k, subtract small, halve,
// bit iteration for square-and-multiply).

#include <cstdint>
#include <vector>

#include "hdf/errors.hpp"

namespace hdf {

class BigUint {
public:
    BigUint() : limbs_{0} {}
    explicit BigUint(std::uint64_t v) : limbs_{v} {}

    static BigUint power(std::uint64_t base, unsigned exp) {
        BigUint r(1);
        for (unsigned i = 0; i < exp; ++i) r.mul_small(base);
        return r;
    }

    void mul_small(std::uint64_t m) {
        unsigned __int128 carry = 0;
        for (auto& limb : limbs_) {
            unsigned __int128 cur = (unsigned __int128)limb * m + carry;
            limb = (std::uint64_t)cur;
            carry = cur >> 64;
        }
        while (carry) {
            limbs_.push_back((std::uint64_t)carry);
            carry >>= 64;
        }
    }

    void add_small(std::uint64_t d) {
        unsigned __int128 carry = d;
        for (auto& limb : limbs_) {
            if (!carry) break;
            unsigned __int128 cur = (unsigned __int128)limb + carry;
            limb = (std::uint64_t)cur;
            carry = cur >> 64;
        }
        if (carry) limbs_.push_back((std::uint64_t)carry);
    }

    // this -= d; requires this >= d.
    void sub_small(std::uint64_t d) {
        if (limbs_[0] >= d) {
            limbs_[0] -= d;
        } else {
            limbs_[0] = limbs_[0] + (~d + 1); // wraps
            std::size_t i = 1;
            while (true) {
                if (i >= limbs_.size()) throw TooLarge("BigUint underflow");
                if (limbs_[i] > 0) { --limbs_[i]; break; }
                limbs_[i] = ~0ULL;
                ++i;
            }
        }
        trim();
    }

    void halve() {
        std::uint64_t carry = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint64_t next = limbs_[i] & 1;
            limbs_[i] = (limbs_[i] >> 1) | (carry << 63);
            carry = next;
        }
        trim();
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }
    bool is_odd() const { return limbs_[0] & 1; }

    unsigned bit_length() const {
        std::uint64_t hi = limbs_.back();
        unsigned bits = (unsigned)((limbs_.size() - 1) * 64);
        while (hi) { ++bits; hi >>= 1; }
        return bits;
    }

    bool bit(unsigned i) const {
        std::size_t limb = i / 64;
        if (limb >= limbs_.size()) return false;
        return (limbs_[limb] >> (i % 64)) & 1;
    }

    // Value as u64 if it fits, else throws.
    std::uint64_t to_u64() const {
        if (limbs_.size() > 1) throw TooLarge("BigUint does not fit u64");
        return limbs_[0];
    }

    bool fits_u64() const { return limbs_.size() == 1; }

private:
    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    }
    std::vector<std::uint64_t> limbs_; // little-endian, at least one limb
};

} // namespace hdf

#endif
