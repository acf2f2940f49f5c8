#pragma once

// Exact rational numbers. Thin value wrapper over GMP's mpq_class that pins
// the canonical form everywhere: fully reduced, denominator > 0, zero is 0/1.

#include "dyneval/errors.hpp"

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

namespace dyneval {

class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}
    BigRational(long num, long den);
    explicit BigRational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    // Parses "p", "-p" or "p/q" with integer p, q and q > 0. Anything else throws.
    static BigRational parse(const std::string& text);

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    BigRational operator-() const { return BigRational(mpq_class(-v_)); }
    BigRational inverse() const;

    friend BigRational operator+(const BigRational& a, const BigRational& b) {
        return BigRational(mpq_class(a.v_ + b.v_));
    }
    friend BigRational operator-(const BigRational& a, const BigRational& b) {
        return BigRational(mpq_class(a.v_ - b.v_));
    }
    friend BigRational operator*(const BigRational& a, const BigRational& b) {
        return BigRational(mpq_class(a.v_ * b.v_));
    }
    friend BigRational operator/(const BigRational& a, const BigRational& b);

    BigRational& operator+=(const BigRational& b) { v_ += b.v_; return *this; }
    BigRational& operator-=(const BigRational& b) { v_ -= b.v_; return *this; }
    BigRational& operator*=(const BigRational& b) { v_ *= b.v_; return *this; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

    // Three-way compare by value; the total order used for canonical sorting.
    int compare(const BigRational& b) const { return cmp(v_, b.v_); }

    // "p/q" with q > 1, plain "p" otherwise. Never renders a decimal point.
    std::string str() const;

    friend std::ostream& operator<<(std::ostream& os, const BigRational& q);

private:
    mpq_class v_;
};

}  // namespace dyneval
