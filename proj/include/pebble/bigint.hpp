#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pebble {

// Arbitrary-precision unsigned integer, little-endian 64-bit limbs.
// Just enough arithmetic for exact budget bookkeeping: the decomposition
// recursion multiplies rationals by edge-count ratios, so numerators and
// denominators outgrow 64 bits quickly.
class BigNat {
public:
    BigNat() = default;
    explicit BigNat(std::uint64_t v);

    static BigNat pow(std::uint64_t base, std::uint32_t exp);

    bool is_zero() const { return limbs_.empty(); }

    // -1, 0, +1
    int compare(const BigNat& other) const;
    bool operator==(const BigNat& o) const { return compare(o) == 0; }
    bool operator<(const BigNat& o) const { return compare(o) < 0; }
    bool operator<=(const BigNat& o) const { return compare(o) <= 0; }

    BigNat& add_u64(std::uint64_t v);
    BigNat& mul_u64(std::uint64_t v);
    BigNat mul(const BigNat& other) const;

    // Divides in place, returns remainder. div must be nonzero.
    std::uint64_t divmod_u64(std::uint64_t div);
    std::uint64_t mod_u64(std::uint64_t div) const;

    // Schoolbook long division; quotient returned, remainder in `rem`.
    BigNat divmod(const BigNat& div, BigNat& rem) const;

    bool fits_u64() const { return limbs_.size() <= 1; }
    std::uint64_t to_u64_saturating() const;
    double to_double() const;
    std::string to_string() const;

    std::size_t bit_length() const;

private:
    void trim();
    std::vector<std::uint64_t> limbs_;
};

// Nonnegative exact rational. Kept reduced against small factors whenever a
// scale by a small ratio is applied; full normalization is not required for
// the comparisons this project performs.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(std::uint64_t num, std::uint64_t den);
    Rat(BigNat num, BigNat den);

    static Rat from_u64(std::uint64_t v) { return Rat(v, 1); }

    const BigNat& num() const { return num_; }
    const BigNat& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    // this * (a / b), exact, with opportunistic gcd reduction.
    Rat scaled(std::uint64_t a, std::uint64_t b) const;

    bool int_le(std::uint64_t x) const;   // this <= x
    bool int_ge(std::uint64_t x) const;   // this >= x
    bool int_lt(std::uint64_t x) const { return !int_ge(x); }
    bool int_gt(std::uint64_t x) const { return !int_le(x); }

    // x <= this / x < this, for integer x.
    bool ge_int(std::uint64_t x) const { return int_ge(x); }

    std::uint64_t floor_u64_saturating() const;

    double to_double() const;
    std::string to_string() const;  // "p/q" (or "p" when q == 1)

    // Parses "p", "p/q" or a plain decimal like "3.25". Throws std::invalid_argument.
    static Rat parse(const std::string& text);

private:
    BigNat num_, den_;
};

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace pebble
