#include "dyneval/rational.hpp"

#include <cctype>
#include <ostream>

namespace dyneval {

BigRational::BigRational(long num, long den) {
    if (den == 0) throw precondition_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

BigRational BigRational::parse(const std::string& text) {
    // [+-]? digits ( '/' digits )?   with nothing before or after.
    std::size_t i = 0;
    const std::size_t n = text.size();
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t num_begin = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_begin) throw parse_error("expected rational literal: \"" + text + "\"");
    std::size_t den_begin = 0, den_end = 0;
    if (i < n && text[i] == '/') {
        den_begin = ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        den_end = i;
        if (den_end == den_begin) throw parse_error("expected denominator: \"" + text + "\"");
    }
    if (i != n) throw parse_error("trailing characters in rational: \"" + text + "\"");

    mpz_class num(text.substr(0, num_begin == 0 ? i : (den_begin ? den_begin - 1 : n)));
    mpz_class den(1);
    if (den_begin) {
        den = mpz_class(text.substr(den_begin, den_end - den_begin));
        if (den == 0) throw parse_error("zero denominator: \"" + text + "\"");
    }
    mpq_class q(num, den);
    q.canonicalize();
    return BigRational(q);
}

BigRational BigRational::inverse() const {
    if (is_zero()) throw precondition_error("inverse of zero");
    return BigRational(mpq_class(1 / v_));
}

BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) throw precondition_error("division by zero");
    return BigRational(mpq_class(a.v_ / b.v_));
}

std::string BigRational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const BigRational& q) {
    return os << q.str();
}

}  // namespace dyneval
