#ifndef CFAUDIT_RATIONAL_HPP
#define CFAUDIT_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace cfaudit {

/**
 * Exact rational number on 64-bit integers.
 *
 * Always normalized: gcd(|num|, den) == 1 and den > 0. Arithmetic goes
 * through 128-bit intermediates and throws std::overflow_error if a
 * normalized result does not fit back into 64 bits, so precision loss is
 * impossible and overflow is loud. Equality and ordering are exact.
 */
class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t value) : num_(value), den_(1) {} // NOLINT: implicit by design
    Rat(std::int64_t num, std::int64_t den);

    /// Accepts "p/q", an integer literal, or a plain decimal such as
    /// "0.45" (converted exactly to 9/20). Throws ParseError otherwise.
    static Rat parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool positive() const { return num_ > 0; }

    double to_double() const;

    /// "p/q", or just "p" when the denominator is 1.
    std::string str() const;

    Rat operator-() const { return Rat(-num_, den_, normalized_tag{}); }

    Rat& operator+=(const Rat& o);
    Rat& operator-=(const Rat& o);
    Rat& operator*=(const Rat& o);
    Rat& operator/=(const Rat& o); // throws std::domain_error on zero divisor

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    bool operator==(const Rat&) const = default;
    std::strong_ordering operator<=>(const Rat& o) const;

private:
    struct normalized_tag {};
    constexpr Rat(std::int64_t num, std::int64_t den, normalized_tag) : num_(num), den_(den) {}

    void assign_reduced(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rat abs(const Rat& r);

std::ostream& operator<<(std::ostream& os, const Rat& r);

} // namespace cfaudit

#endif
