#include "freeset/rational.hpp"

#include <cctype>

namespace freeset {

Q q_from_string(const std::string& s) {
    require(!s.empty(), "BAD_NUMBER", "empty number literal");
    if (s.find('/') != std::string::npos) {
        Q q;
        require(q.set_str(s, 10) == 0, "BAD_NUMBER", "cannot parse rational: " + s);
        q.canonicalize();
        return q;
    }
    // decimal with optional sign, point and exponent
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    mpz_class mantissa = 0;
    long frac_digits = 0;
    long exponent = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) ++frac_digits;
            any_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else if ((c == 'e' || c == 'E') && any_digit) {
            exponent = std::stol(s.substr(i + 1));
            break;
        } else {
            fail("BAD_NUMBER", "cannot parse number: " + s);
        }
    }
    require(any_digit, "BAD_NUMBER", "cannot parse number: " + s);
    long p10 = exponent - frac_digits;
    Q q(mantissa);
    mpz_class pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 10, static_cast<unsigned long>(p10 < 0 ? -p10 : p10));
    if (p10 >= 0)
        q *= Q(pow);
    else
        q /= Q(pow);
    q.canonicalize();
    return neg ? Q(-q) : q;
}

std::string q_to_string(const Q& q) {
    mpz_class den = q.get_den();
    unsigned long twos = 0, fives = 0;
    mpz_class d = den;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return q.get_str();  // not a finite decimal: keep p/q form
    unsigned long k = std::max(twos, fives);
    mpz_class pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 10, k);
    mpz_class scaled = q.get_num() * (pow / den);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string digits = scaled.get_str();
    std::string out;
    if (k == 0) {
        out = digits;
    } else {
        while (digits.size() <= k) digits.insert(digits.begin(), '0');
        out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return neg ? "-" + out : out;
}

}  // namespace freeset
