#include "pebble/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pebble {

namespace {
using u64 = std::uint64_t;
using u128 = unsigned __int128;
}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

BigNat::BigNat(std::uint64_t v) {
    if (v != 0) limbs_.push_back(v);
}

void BigNat::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

int BigNat::compare(const BigNat& other) const {
    if (limbs_.size() != other.limbs_.size())
        return limbs_.size() < other.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigNat& BigNat::add_u64(std::uint64_t v) {
    u64 carry = v;
    for (std::size_t i = 0; i < limbs_.size() && carry; ++i) {
        u64 s = limbs_[i] + carry;
        carry = (s < carry) ? 1 : 0;
        limbs_[i] = s;
    }
    if (carry) limbs_.push_back(carry);
    return *this;
}

BigNat& BigNat::mul_u64(std::uint64_t v) {
    if (v == 0 || limbs_.empty()) {
        limbs_.clear();
        return *this;
    }
    u64 carry = 0;
    for (auto& limb : limbs_) {
        u128 p = static_cast<u128>(limb) * v + carry;
        limb = static_cast<u64>(p);
        carry = static_cast<u64>(p >> 64);
    }
    if (carry) limbs_.push_back(carry);
    return *this;
}

BigNat BigNat::mul(const BigNat& other) const {
    BigNat out;
    if (limbs_.empty() || other.limbs_.empty()) return out;
    out.limbs_.assign(limbs_.size() + other.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u64 carry = 0;
        for (std::size_t j = 0; j < other.limbs_.size(); ++j) {
            u128 p = static_cast<u128>(limbs_[i]) * other.limbs_[j] + out.limbs_[i + j] + carry;
            out.limbs_[i + j] = static_cast<u64>(p);
            carry = static_cast<u64>(p >> 64);
        }
        std::size_t k = i + other.limbs_.size();
        while (carry) {
            u128 s = static_cast<u128>(out.limbs_[k]) + carry;
            out.limbs_[k] = static_cast<u64>(s);
            carry = static_cast<u64>(s >> 64);
            ++k;
        }
    }
    out.trim();
    return out;
}

std::uint64_t BigNat::divmod_u64(std::uint64_t div) {
    if (div == 0) throw std::invalid_argument("BigNat: division by zero");
    u64 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        u128 cur = (static_cast<u128>(rem) << 64) | limbs_[i];
        limbs_[i] = static_cast<u64>(cur / div);
        rem = static_cast<u64>(cur % div);
    }
    trim();
    return rem;
}

std::uint64_t BigNat::mod_u64(std::uint64_t div) const {
    if (div == 0) throw std::invalid_argument("BigNat: division by zero");
    u64 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        u128 cur = (static_cast<u128>(rem) << 64) | limbs_[i];
        rem = static_cast<u64>(cur % div);
    }
    return rem;
}

std::size_t BigNat::bit_length() const {
    if (limbs_.empty()) return 0;
    u64 top = limbs_.back();
    std::size_t bits = (limbs_.size() - 1) * 64;
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

BigNat BigNat::divmod(const BigNat& div, BigNat& rem) const {
    if (div.is_zero()) throw std::invalid_argument("BigNat: division by zero");
    if (div.fits_u64()) {
        BigNat q = *this;
        u64 r = q.divmod_u64(div.limbs_.empty() ? 0 : div.limbs_[0]);
        rem = BigNat(r);
        return q;
    }
    BigNat q, r;
    std::size_t nbits = bit_length();
    q.limbs_.assign(limbs_.size(), 0);
    for (std::size_t i = nbits; i-- > 0;) {
        // r = r*2 + bit(i)
        u64 carry = (limbs_[i / 64] >> (i % 64)) & 1u;
        for (auto& limb : r.limbs_) {
            u64 hi = limb >> 63;
            limb = (limb << 1) | carry;
            carry = hi;
        }
        if (carry) r.limbs_.push_back(carry);
        if (div.compare(r) <= 0) {
            // r -= div
            u64 borrow = 0;
            for (std::size_t j = 0; j < r.limbs_.size(); ++j) {
                u128 sub = static_cast<u128>(j < div.limbs_.size() ? div.limbs_[j] : 0) + borrow;
                u128 cur = r.limbs_[j];
                if (cur >= sub) {
                    r.limbs_[j] = static_cast<u64>(cur - sub);
                    borrow = 0;
                } else {
                    r.limbs_[j] = static_cast<u64>((u128{1} << 64) + cur - sub);
                    borrow = 1;
                }
            }
            r.trim();
            q.limbs_[i / 64] |= (u64{1} << (i % 64));
        }
    }
    q.trim();
    rem = r;
    return q;
}

BigNat BigNat::pow(std::uint64_t base, std::uint32_t exp) {
    BigNat out(1);
    for (std::uint32_t i = 0; i < exp; ++i) out.mul_u64(base);
    return out;
}

std::uint64_t BigNat::to_u64_saturating() const {
    if (limbs_.empty()) return 0;
    if (limbs_.size() > 1) return UINT64_MAX;
    return limbs_[0];
}

double BigNat::to_double() const {
    double out = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) out = out * 18446744073709551616.0 + static_cast<double>(limbs_[i]);
    return out;
}

std::string BigNat::to_string() const {
    if (limbs_.empty()) return "0";
    BigNat tmp = *this;
    std::string out;
    while (!tmp.is_zero()) {
        u64 chunk = tmp.divmod_u64(10000000000000000000ull);
        std::string part = std::to_string(chunk);
        if (tmp.is_zero()) {
            out = part + out;
        } else {
            out = std::string(19 - part.size(), '0') + part + out;
        }
    }
    return out;
}

Rat::Rat(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    std::uint64_t g = gcd_u64(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = BigNat(num);
    den_ = BigNat(den);
}

Rat::Rat(BigNat num, BigNat den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("Rat: zero denominator");
}

Rat Rat::scaled(std::uint64_t a, std::uint64_t b) const {
    if (b == 0) throw std::invalid_argument("Rat: zero denominator");
    std::uint64_t g = gcd_u64(a, b);
    if (g > 1) {
        a /= g;
        b /= g;
    }
    BigNat num = num_;
    BigNat den = den_;
    // reduce a against den, b against num: gcd with a small value is cheap
    if (a > 1 && !den.is_zero()) {
        std::uint64_t g2 = gcd_u64(a, den.mod_u64(a));
        if (g2 > 1) {
            a /= g2;
            den.divmod_u64(g2);
        }
    }
    if (b > 1 && !num.is_zero()) {
        std::uint64_t g3 = gcd_u64(b, num.mod_u64(b));
        if (g3 > 1) {
            b /= g3;
            num.divmod_u64(g3);
        }
    }
    num.mul_u64(a);
    den.mul_u64(b);
    return Rat(std::move(num), std::move(den));
}

bool Rat::int_le(std::uint64_t x) const {
    // num/den <= x  <=>  num <= x*den
    BigNat rhs = den_;
    rhs.mul_u64(x);
    return num_.compare(rhs) <= 0;
}

bool Rat::int_ge(std::uint64_t x) const {
    BigNat rhs = den_;
    rhs.mul_u64(x);
    return num_.compare(rhs) >= 0;
}

std::uint64_t Rat::floor_u64_saturating() const {
    BigNat rem;
    BigNat q = num_.divmod(den_, rem);
    return q.to_u64_saturating();
}

double Rat::to_double() const { return num_.to_double() / den_.to_double(); }

std::string Rat::to_string() const {
    BigNat rem;
    BigNat q = num_.divmod(den_, rem);
    if (rem.is_zero()) return num_.to_string() + (den_ == BigNat(1) ? "" : "/" + den_.to_string());
    return num_.to_string() + "/" + den_.to_string();
}

Rat Rat::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    auto slash = text.find('/');
    auto dot = text.find('.');
    auto to_u64 = [](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad rational component: " + s);
        return std::stoull(s);
    };
    if (slash != std::string::npos) {
        return Rat(to_u64(text.substr(0, slash)), to_u64(text.substr(slash + 1)));
    }
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (frac.size() > 18) frac = frac.substr(0, 18);
        std::uint64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::uint64_t w = whole.empty() ? 0 : to_u64(whole);
        std::uint64_t f = frac.empty() ? 0 : to_u64(frac);
        if (w > (UINT64_MAX - f) / den) throw std::invalid_argument("rational too large");
        return Rat(w * den + f, den);
    }
    return Rat(to_u64(text), 1);
}

}  // namespace pebble
