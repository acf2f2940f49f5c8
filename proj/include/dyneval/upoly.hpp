#pragma once

// Dense univariate polynomials over an arbitrary commutative coefficient
// ring. The ring is described by a ring_ops<C> specialization, which lets the
// same code run over rationals, tower elements, and polynomials themselves
// (bivariate = UniPoly<UniPoly<...>>).
//
// Canonical form: the coefficient vector never has a trailing zero, and the
// zero polynomial is the empty vector. degree() of zero is nullopt, standing
// in for "minus infinity". Every constructor and operation trims.

#include "dyneval/errors.hpp"
#include "dyneval/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dyneval {

template <class C>
struct ring_ops;  // specialize per coefficient ring

template <>
struct ring_ops<BigRational> {
    static bool is_zero(const BigRational& x) { return x.is_zero(); }
    static bool is_one(const BigRational& x) { return x.is_one(); }
    static bool eq(const BigRational& a, const BigRational& b) { return a == b; }
    static BigRational add(const BigRational& a, const BigRational& b) { return a + b; }
    static BigRational sub(const BigRational& a, const BigRational& b) { return a - b; }
    static BigRational mul(const BigRational& a, const BigRational& b) { return a * b; }
    static BigRational neg(const BigRational& a) { return -a; }
    static BigRational mul_int(const BigRational& a, long k) { return a * BigRational(k); }
    static BigRational zero_like(const BigRational&) { return BigRational(0); }
    static BigRational one_like(const BigRational&) { return BigRational(1); }
};

template <class C>
class UniPoly {
public:
    UniPoly() = default;

    explicit UniPoly(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly constant(C value) {
        std::vector<C> v;
        v.push_back(std::move(value));
        return UniPoly(std::move(v));
    }

    // value * X^exp
    static UniPoly monomial(C value, std::size_t exp) {
        if (ring_ops<C>::is_zero(value)) return UniPoly();
        std::vector<C> v;
        v.reserve(exp + 1);
        for (std::size_t i = 0; i < exp; ++i) v.push_back(ring_ops<C>::zero_like(value));
        v.push_back(std::move(value));
        return UniPoly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }

    std::optional<int> degree() const {
        if (c_.empty()) return std::nullopt;
        return static_cast<int>(c_.size()) - 1;
    }

    std::size_t size() const { return c_.size(); }
    const std::vector<C>& coeffs() const { return c_; }

    const C& operator[](std::size_t i) const { return c_.at(i); }

    const C& lead() const {
        if (c_.empty()) throw internal_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    bool is_monic() const { return !c_.empty() && ring_ops<C>::is_one(c_.back()); }

    friend bool operator==(const UniPoly& a, const UniPoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!ring_ops<C>::eq(a.c_[i], b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        const auto& longer = a.c_.size() >= b.c_.size() ? a.c_ : b.c_;
        const auto& shorter = a.c_.size() >= b.c_.size() ? b.c_ : a.c_;
        std::vector<C> out;
        out.reserve(longer.size());
        for (std::size_t i = 0; i < shorter.size(); ++i)
            out.push_back(ring_ops<C>::add(a.c_[i], b.c_[i]));
        for (std::size_t i = shorter.size(); i < longer.size(); ++i) out.push_back(longer[i]);
        return UniPoly(std::move(out));
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

    UniPoly operator-() const {
        std::vector<C> out;
        out.reserve(c_.size());
        for (const auto& x : c_) out.push_back(ring_ops<C>::neg(x));
        return UniPoly(std::move(out));
    }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        const C zero = ring_ops<C>::zero_like(a.c_.front());
        std::vector<C> out(a.c_.size() + b.c_.size() - 1, zero);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out[i + j] = ring_ops<C>::add(out[i + j], ring_ops<C>::mul(a.c_[i], b.c_[j]));
        return UniPoly(std::move(out));
    }

    // scalar on the left
    friend UniPoly operator*(const C& s, const UniPoly& p) {
        std::vector<C> out;
        out.reserve(p.c_.size());
        for (const auto& x : p.c_) out.push_back(ring_ops<C>::mul(s, x));
        return UniPoly(std::move(out));
    }

private:
    void trim() {
        while (!c_.empty() && ring_ops<C>::is_zero(c_.back())) c_.pop_back();
    }

    std::vector<C> c_;
};

template <class C>
UniPoly<C> derivative(const UniPoly<C>& p) {
    std::vector<C> out;
    for (std::size_t i = 1; i < p.size(); ++i)
        out.push_back(ring_ops<C>::mul_int(p[i], static_cast<long>(i)));
    return UniPoly<C>(std::move(out));
}

// multiply by X^k
template <class C>
UniPoly<C> shift_up(const UniPoly<C>& p, std::size_t k) {
    if (p.is_zero() || k == 0) return p;
    std::vector<C> out;
    out.reserve(p.size() + k);
    const C zero = ring_ops<C>::zero_like(p[0]);
    for (std::size_t i = 0; i < k; ++i) out.push_back(zero);
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p[i]);
    return UniPoly<C>(std::move(out));
}

// divide by X^k, discarding the low coefficients
template <class C>
UniPoly<C> shift_down(const UniPoly<C>& p, std::size_t k) {
    if (k == 0) return p;
    if (p.size() <= k) return UniPoly<C>();
    std::vector<C> out(p.coeffs().begin() + static_cast<std::ptrdiff_t>(k), p.coeffs().end());
    return UniPoly<C>(std::move(out));
}

// Horner evaluation with a coefficient embedding C -> X. The embedding is
// what lets a rational polynomial be evaluated at a tower element, or a
// coefficient be promoted into a polynomial for composition.
template <class C, class X, class Embed>
X evaluate_mapped(const UniPoly<C>& p, const X& x, Embed embed) {
    if (p.is_zero()) return ring_ops<X>::zero_like(x);
    X acc = embed(p[p.size() - 1]);
    for (std::size_t i = p.size() - 1; i-- > 0;)
        acc = ring_ops<X>::add(ring_ops<X>::mul(acc, x), embed(p[i]));
    return acc;
}

template <class C>
C evaluate(const UniPoly<C>& p, const C& x) {
    return evaluate_mapped(p, x, [](const C& c) { return c; });
}

template <class C, class F>
auto map_coeffs(const UniPoly<C>& p, F fn) -> UniPoly<decltype(fn(p[0]))> {
    using U = decltype(fn(p[0]));
    std::vector<U> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(fn(p[i]));
    return UniPoly<U>(std::move(out));
}

// Long division by a monic divisor. Works over any commutative coefficient
// ring precisely because no inversion is ever needed.
template <class C>
std::pair<UniPoly<C>, UniPoly<C>> monic_divmod(const UniPoly<C>& f, const UniPoly<C>& g) {
    if (!g.is_monic()) throw precondition_error("divisor is not monic");
    if (f.size() < g.size()) return {UniPoly<C>(), f};
    const std::size_t dg = g.size() - 1;
    std::vector<C> rem(f.coeffs());
    const C zero = ring_ops<C>::zero_like(f.lead());
    std::vector<C> quot(f.size() - dg, zero);
    for (std::size_t top = f.size() - 1; top + 1 >= g.size(); --top) {
        const C q = rem[top];
        quot[top - dg] = q;
        if (!ring_ops<C>::is_zero(q)) {
            for (std::size_t j = 0; j < dg; ++j)
                rem[top - dg + j] = ring_ops<C>::sub(rem[top - dg + j], ring_ops<C>::mul(q, g[j]));
        }
        rem[top] = zero;
        if (top == 0) break;
    }
    return {UniPoly<C>(std::move(quot)), UniPoly<C>(std::move(rem))};
}

// Exact division; throws when the remainder is nonzero.
template <class C>
UniPoly<C> monic_div_exact(const UniPoly<C>& f, const UniPoly<C>& g) {
    auto [q, r] = monic_divmod(f, g);
    if (!r.is_zero()) throw internal_error("expected exact division");
    return q;
}

template <class C>
struct ring_ops<UniPoly<C>> {
    using P = UniPoly<C>;
    static bool is_zero(const P& p) { return p.is_zero(); }
    static bool is_one(const P& p) { return p.size() == 1 && ring_ops<C>::is_one(p[0]); }
    static bool eq(const P& a, const P& b) { return a == b; }
    static P add(const P& a, const P& b) { return a + b; }
    static P sub(const P& a, const P& b) { return a - b; }
    static P mul(const P& a, const P& b) { return a * b; }
    static P neg(const P& a) { return -a; }
    static P mul_int(const P& a, long k) {
        return map_coeffs(a, [&](const C& c) { return ring_ops<C>::mul_int(c, k); });
    }
    static P zero_like(const P&) { return P(); }
    static P one_like(const P& sample) {
        if (sample.is_zero())
            throw internal_error("one_like needs a nonzero polynomial sample");
        return P::constant(ring_ops<C>::one_like(sample[0]));
    }
};

using RatPoly = UniPoly<BigRational>;
// bivariate over the rationals: outer variable's coefficients are polynomials
// in the inner variable
using BiPoly = UniPoly<RatPoly>;

// ---- text rendering -------------------------------------------------------

struct CoeffText {
    std::string text;
    // true when the text is a sum and needs parentheses next to a power of
    // the variable
    bool composite = false;
};

inline CoeffText coeff_text(const BigRational& q) { return {q.str(), false}; }

// Shared polynomial printer. Terms in descending power order by default
// (ascending fits series). Coefficient 1 disappears next to the variable,
// -1 becomes a bare sign, composite coefficients get parentheses, and a term
// whose text starts with '-' fuses with the previous term instead of taking
// a '+'.
template <class C, class F>
std::string render_poly(const UniPoly<C>& p, const std::string& var, F coeff,
                        bool ascending = false) {
    if (p.is_zero()) return "0";
    std::string out;
    auto emit = [&](const std::string& term) {
        if (out.empty() || term.empty()) {
            out += term;
        } else if (term[0] == '-') {
            out += term;
        } else {
            out += "+";
            out += term;
        }
    };
    auto term_at = [&](std::size_t i) {
        if (ring_ops<C>::is_zero(p[i])) return std::string();
        CoeffText ct = coeff(p[i]);
        std::string pow;
        if (i == 1) {
            pow = var;
        } else if (i > 1) {
            pow = var + "^" + std::to_string(i);
        }
        if (pow.empty()) return ct.text;
        if (ct.composite) return "(" + ct.text + ")*" + pow;
        if (ct.text == "1") return pow;
        if (ct.text == "-1") return "-" + pow;
        return ct.text + "*" + pow;
    };
    if (ascending) {
        for (std::size_t i = 0; i < p.size(); ++i) emit(term_at(i));
    } else {
        for (std::size_t i = p.size(); i-- > 0;) emit(term_at(i));
    }
    return out;
}

inline std::string render_poly(const RatPoly& p, const std::string& var,
                               bool ascending = false) {
    return render_poly(p, var, [](const BigRational& q) { return coeff_text(q); }, ascending);
}

}  // namespace dyneval
