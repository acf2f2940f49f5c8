#pragma once

// Power series over a tower algebra, truncated at an explicit order N: the
// coefficient list always has length N+1 and every statement is exact modulo
// T^{N+1}. Arithmetic between different orders carries the smaller one.

#include "dyneval/tower.hpp"

#include <string>
#include <vector>

namespace dyneval {

class TruncatedSeries {
public:
    TruncatedSeries(SeparableTower owner, int order);  // zero series
    TruncatedSeries(SeparableTower owner, int order, std::vector<AlgebraElement> coeffs);

    static TruncatedSeries constant(const SeparableTower& owner, AlgebraElement c, int order);
    // polynomial coefficients by exponent; exponents above the order drop
    static TruncatedSeries from_poly(const SeparableTower& owner, const ElemPoly& p, int order);

    const SeparableTower& owner() const { return owner_; }
    int order() const { return order_; }
    const std::vector<AlgebraElement>& coeffs() const { return coeffs_; }
    const AlgebraElement& coeff(int i) const;

    bool is_zero() const;

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    TruncatedSeries operator-() const;
    friend TruncatedSeries operator*(const AlgebraElement& s, const TruncatedSeries& u);

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

    TruncatedSeries derivative_wrt_t() const;  // order drops by one
    TruncatedSeries truncate(int new_order) const;

    // substitute T -> T^m; the order scales to m*order
    TruncatedSeries ramify(int m) const;

    // multiplicative inverse; the constant term must be invertible
    TruncatedSeries inverse() const;

    std::string render(const std::string& var) const;  // ascending powers

private:
    SeparableTower owner_;
    int order_;
    std::vector<AlgebraElement> coeffs_;  // size order_ + 1
};

template <>
struct ring_ops<TruncatedSeries> {
    static bool is_zero(const TruncatedSeries& u) { return u.is_zero(); }
    static bool is_one(const TruncatedSeries& u) {
        if (!u.coeff(0).is_one()) return false;
        for (int i = 1; i <= u.order(); ++i)
            if (!u.coeff(i).is_zero()) return false;
        return true;
    }
    static bool eq(const TruncatedSeries& a, const TruncatedSeries& b) { return a == b; }
    static TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
    static TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) { return a - b; }
    static TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }
    static TruncatedSeries neg(const TruncatedSeries& a) { return -a; }
    static TruncatedSeries mul_int(const TruncatedSeries& a, long k) {
        return AlgebraElement::one(a.owner()).mul_int(k) * a;
    }
    static TruncatedSeries zero_like(const TruncatedSeries& u) {
        return TruncatedSeries(u.owner(), u.order());
    }
    static TruncatedSeries one_like(const TruncatedSeries& u) {
        return TruncatedSeries::constant(u.owner(), AlgebraElement::one(u.owner()), u.order());
    }
};

// Evaluate a polynomial in Y with series coefficients at a series. All
// coefficients and the point must share one owner and one order.
TruncatedSeries substitute(const UniPoly<TruncatedSeries>& G, const TruncatedSeries& y);

}  // namespace dyneval
