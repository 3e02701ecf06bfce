#include "cfaudit/rational.hpp"

#include "cfaudit/errors.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cfaudit {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

} // namespace

void Rat::assign_reduced(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        num_ = 0;
        den_ = 1;
        return;
    }
    const __int128 g = gcd128(num, den);
    num_ = narrow(num / g);
    den_ = narrow(den / g);
}

Rat::Rat(std::int64_t num, std::int64_t den) {
    assign_reduced(num, den);
}

Rat& Rat::operator+=(const Rat& o) {
    assign_reduced(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                   static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rat& Rat::operator-=(const Rat& o) {
    assign_reduced(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                   static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rat& Rat::operator*=(const Rat& o) {
    assign_reduced(static_cast<__int128>(num_) * o.num_,
                   static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    assign_reduced(static_cast<__int128>(num_) * o.den_,
                   static_cast<__int128>(den_) * o.num_);
    return *this;
}

std::strong_ordering Rat::operator<=>(const Rat& o) const {
    const __int128 lhs = static_cast<__int128>(num_) * o.den_;
    const __int128 rhs = static_cast<__int128>(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double Rat::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rat::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rat Rat::parse(std::string_view text) {
    const auto bad = [&text]() {
        return ParseError("invalid rational '" + std::string(text) +
                          "' (expected \"p/q\", an integer, or a decimal)");
    };

    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }

    // Reads a run of digits starting at pos; at most 27 digits so the
    // __int128 accumulator cannot overflow. Narrowing to 64 bits happens
    // in assign_reduced.
    const auto read_digits = [&](__int128& out) {
        std::size_t start = pos;
        __int128 v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            ++pos;
            if (pos - start > 27) throw std::overflow_error("rational literal too long");
        }
        if (pos == start) throw bad();
        out = v;
    };

    __int128 integral = 0;
    read_digits(integral);

    __int128 num = integral;
    __int128 den = 1;

    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        // An explicit sign on the denominator is accepted and normalized.
        bool den_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            den_negative = text[pos] == '-';
            ++pos;
        }
        read_digits(den);
        if (den == 0) throw bad();
        if (den_negative) den = -den;
    } else if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t frac_start = pos;
        __int128 frac = 0;
        read_digits(frac);
        const std::size_t frac_len = pos - frac_start;
        for (std::size_t i = 0; i < frac_len; ++i) {
            num *= 10;
            den *= 10;
        }
        num += frac;
    }

    if (pos != text.size()) throw bad();
    if (negative) num = -num;

    Rat r;
    r.assign_reduced(num, den);
    return r;
}

Rat abs(const Rat& r) {
    return r.num() < 0 ? -r : r;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.str();
}

} // namespace cfaudit
