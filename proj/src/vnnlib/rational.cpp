#include "boxverify/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

#include "boxverify/errors.hpp"

namespace boxverify {

using boost::multiprecision::cpp_int;

Rational rational_from_decimal(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool negative = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }

    cpp_int mantissa = 0;
    long digits_seen = 0;
    long frac_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mantissa = mantissa * 10 + (text[i] - '0');
        ++digits_seen;
        ++i;
    }
    if (i < n && text[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            mantissa = mantissa * 10 + (text[i] - '0');
            ++digits_seen;
            ++frac_digits;
            ++i;
        }
    }
    long exponent = 0;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (i < n && (text[i] == '+' || text[i] == '-')) {
            exp_neg = text[i] == '-';
            ++i;
        }
        bool any = false;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            exponent = exponent * 10 + (text[i] - '0');
            any = true;
            ++i;
            if (exponent > 100000)
                throw SyntaxError("numeral exponent out of range: '" + std::string(text) + "'");
        }
        if (!any)
            throw SyntaxError("malformed numeral: '" + std::string(text) + "'");
        if (exp_neg)
            exponent = -exponent;
    }
    if (i != n || digits_seen == 0)
        throw SyntaxError("malformed numeral: '" + std::string(text) + "'");

    long shift = exponent - frac_digits;
    cpp_int num = mantissa;
    cpp_int den = 1;
    if (shift >= 0)
        num *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(shift));
    else
        den = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(-shift));
    if (negative)
        num = -num;
    return Rational(num, den);
}

double rational_to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string rational_to_decimal(const Rational& r) {
    cpp_int num = boost::multiprecision::numerator(r);
    cpp_int den = boost::multiprecision::denominator(r);

    // factor the denominator as 2^a * 5^b
    long a = 0;
    long b = 0;
    cpp_int d = den;
    while (d % 2 == 0) {
        d /= 2;
        ++a;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++b;
    }
    if (d != 1)
        throw std::logic_error("rational has no finite decimal expansion");

    const long k = a > b ? a : b;
    cpp_int scaled = num * boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(k)) / den;

    bool neg = scaled < 0;
    if (neg)
        scaled = -scaled;
    std::string digits = scaled.str();
    std::string out;
    if (k == 0) {
        out = digits;
    } else {
        if (static_cast<long>(digits.size()) <= k)
            digits.insert(0, static_cast<std::size_t>(k) - digits.size() + 1, '0');
        out = digits.substr(0, digits.size() - static_cast<std::size_t>(k)) + "." +
              digits.substr(digits.size() - static_cast<std::size_t>(k));
        // trim trailing zeros but keep at least one fractional digit
        while (out.size() > 2 && out.back() == '0' && out[out.size() - 2] != '.')
            out.pop_back();
    }
    return neg ? "-" + out : out;
}

}  // namespace boxverify
