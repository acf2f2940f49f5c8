#pragma once

// Finitely presented regular Q-algebras kept in tower normal form: a chain of
// monic separable extensions Q c Q[g1] c Q[g1,g2] c ... Every element is a
// fully reduced nested polynomial in the generators, so equality of elements
// is plain structural equality. Splitting an algebra into a product, and
// reassembling elements from the factors, are the two operations everything
// else in this library is built from.

#include "dyneval/errors.hpp"
#include "dyneval/rational.hpp"
#include "dyneval/upoly.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dyneval {

// Value of a tower element, shape-indexed by depth: depth 0 is a rational
// leaf; depth k > 0 is the coefficient list of a polynomial in generator k,
// each coefficient of depth k-1. Trailing zero coefficients are always
// trimmed, so the zero element at depth k > 0 is the empty node.
class Nested {
public:
    Nested() : v_(BigRational(0)) {}
    explicit Nested(BigRational q) : v_(std::move(q)) {}
    explicit Nested(std::vector<Nested> kids) : v_(std::move(kids)) {}

    bool is_leaf() const { return std::holds_alternative<BigRational>(v_); }
    const BigRational& leaf() const { return std::get<BigRational>(v_); }
    const std::vector<Nested>& kids() const { return std::get<std::vector<Nested>>(v_); }

    bool is_zero() const;  // shape-aware: empty node or zero leaf
    friend bool operator==(const Nested& a, const Nested& b);
    friend bool operator!=(const Nested& a, const Nested& b) { return !(a == b); }

private:
    std::variant<BigRational, std::vector<Nested>> v_;
};

struct TowerLevel {
    std::string name;
    // coefficients of the monic minimal polynomial, each of depth k-1 for
    // level index k; size = degree + 1, last entry the unit
    std::vector<Nested> minpoly;
    // separability certificate: cert_s * minpoly + cert_t * minpoly' = 1,
    // both polynomials over the subtower below this level
    std::vector<Nested> cert_s;
    std::vector<Nested> cert_t;

    int degree() const { return static_cast<int>(minpoly.size()) - 1; }
};

struct TowerData {
    std::vector<TowerLevel> levels;
};

// Value handle on an algebra: shared immutable level data plus a depth, so a
// subtower is the same data viewed lower. The zero ring gets its own flag;
// it has no elements worth distinguishing but covers keep it around.
class SeparableTower {
public:
    SeparableTower() = default;  // the rationals

    static SeparableTower rationals();
    static SeparableTower trivial();

    bool is_trivial() const { return trivial_; }
    int depth() const { return depth_; }
    bool is_rationals() const { return !trivial_ && depth_ == 0; }

    const TowerLevel& level(int k) const;  // k in [1, depth]
    int level_degree(int k) const { return level(k).degree(); }
    // product of the level degrees; 1 for Q, 0 for the zero ring
    long dimension() const;

    SeparableTower subtower(int new_depth) const;

    // structural identity: same names and minimal polynomials level by level
    bool same(const SeparableTower& o) const;
    friend bool operator==(const SeparableTower& a, const SeparableTower& b) { return a.same(b); }
    friend bool operator!=(const SeparableTower& a, const SeparableTower& b) { return !a.same(b); }

    bool has_generator(const std::string& name) const;
    std::optional<int> generator_level(const std::string& name) const;

    std::string render() const;  // "Q", "0", or "Q[a,b | a^2-2, b^2-3]"

private:
    friend SeparableTower extend_tower(const SeparableTower&, std::string,
                                       const UniPoly<class AlgebraElement>&,
                                       const UniPoly<class AlgebraElement>&,
                                       const UniPoly<class AlgebraElement>&);
    std::shared_ptr<const TowerData> data_;
    int depth_ = 0;
    bool trivial_ = false;
};

class AlgebraElement {
public:
    AlgebraElement();  // rational zero over Q

    static AlgebraElement from_rational(const SeparableTower& A, BigRational q);
    static AlgebraElement zero(const SeparableTower& A);
    static AlgebraElement one(const SeparableTower& A);
    static AlgebraElement generator(const SeparableTower& A, int k);  // k in [1, depth]
    static AlgebraElement from_nested(const SeparableTower& A, Nested raw);  // reduces

    const SeparableTower& owner() const { return owner_; }
    const Nested& repr() const { return repr_; }

    bool is_zero() const;
    bool is_one() const;
    std::optional<BigRational> as_rational() const;

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
    AlgebraElement operator-() const;
    AlgebraElement mul_int(long k) const;
    AlgebraElement pow(long e) const;  // e >= 0

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

    // total order on elements of one tower (coordinatewise, for canonical
    // sorting of reported branches); unrelated to the ring structure
    int compare(const AlgebraElement& o) const;

    // coordinates in the monomial basis, top generator's exponent most
    // significant; length = owner().dimension()
    std::vector<BigRational> coords() const;
    static AlgebraElement from_coords(const SeparableTower& A, const std::vector<BigRational>& v);

    std::string render() const { return render_text().text; }
    CoeffText render_text() const;  // carries the needs-parentheses flag

private:
    AlgebraElement(SeparableTower owner, Nested repr)
        : owner_(std::move(owner)), repr_(std::move(repr)) {}

    SeparableTower owner_;
    Nested repr_;
};

template <>
struct ring_ops<AlgebraElement> {
    static bool is_zero(const AlgebraElement& x) { return x.is_zero(); }
    static bool is_one(const AlgebraElement& x) { return x.is_one(); }
    static bool eq(const AlgebraElement& a, const AlgebraElement& b) { return a == b; }
    static AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) { return a + b; }
    static AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) { return a - b; }
    static AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }
    static AlgebraElement neg(const AlgebraElement& a) { return -a; }
    static AlgebraElement mul_int(const AlgebraElement& a, long k) { return a.mul_int(k); }
    static AlgebraElement zero_like(const AlgebraElement& x) { return AlgebraElement::zero(x.owner()); }
    static AlgebraElement one_like(const AlgebraElement& x) { return AlgebraElement::one(x.owner()); }
};

using ElemPoly = UniPoly<AlgebraElement>;

// polynomial in the top generator over the subtower one level down
ElemPoly top_poly(const AlgebraElement& x);
AlgebraElement from_top_poly(const SeparableTower& A, const ElemPoly& p);  // reduces

// level-k minimal polynomial and certificate, as polynomials over subtower(k-1)
ElemPoly level_minpoly(const SeparableTower& A, int k);
ElemPoly level_cert_s(const SeparableTower& A, int k);
ElemPoly level_cert_t(const SeparableTower& A, int k);

// Append one level. Validates monicity, nonconstancy, a fresh name, and the
// certificate identity cert_s*p + cert_t*p' = 1.
SeparableTower extend_tower(const SeparableTower& A, std::string name, const ElemPoly& minpoly,
                            const ElemPoly& cert_s, const ElemPoly& cert_t);

// Adjoin a root of p, deriving the separability certificate; p that is not
// separable over A is rejected. Never splits A: certificates found on
// branches are amalgamated back.
SeparableTower adjoin_root(const SeparableTower& A, const std::string& name, const ElemPoly& p);

// "a<n>" with the smallest n not colliding with an existing generator name
std::string next_generator_name(const SeparableTower& A);

// Reduce an arbitrary (possibly over-degree) nested polynomial to its normal
// form in A. Shape must match A's depth.
AlgebraElement normal_form(const SeparableTower& A, const Nested& raw);

// Ring homomorphism between towers, stored as the images of the source
// generators. Applying it is Horner evaluation of the nested normal form.
class RestrictionMap {
public:
    RestrictionMap();  // identity on Q

    static RestrictionMap identity(const SeparableTower& A);
    static RestrictionMap to_trivial(const SeparableTower& A);
    RestrictionMap(SeparableTower from, SeparableTower to, std::vector<AlgebraElement> images);

    const SeparableTower& from() const { return from_; }
    const SeparableTower& to() const { return to_; }
    const std::vector<AlgebraElement>& images() const { return images_; }
    bool is_identity() const { return identity_; }

    AlgebraElement apply(const AlgebraElement& x) const;
    ElemPoly apply_poly(const ElemPoly& p) const;

    RestrictionMap then(const RestrictionMap& next) const;

    // every level's minimal polynomial maps to one vanishing on the image
    // generator; sampled sanity check used by tests and debug assertions
    bool check_homomorphism() const;

private:
    SeparableTower from_, to_;
    std::vector<AlgebraElement> images_;
    bool identity_ = false;
};

struct CoverBranch {
    SeparableTower component;
    RestrictionMap restrict;
};

// One round of decomposition A = B1 x ... x Bk, with the quotient maps.
// Trivial components are kept; reporting skips them.
struct SplitCover {
    SeparableTower parent;
    std::vector<CoverBranch> branches;
    std::string provenance;

    std::vector<std::size_t> nontrivial() const;
};

// identity cover: the algebra covering itself
SplitCover identity_cover(const SeparableTower& A);

// compose: refine each branch of `base` by a cover of that branch
SplitCover refine_cover(const SplitCover& base, const std::vector<SplitCover>& per_branch);

// Re-root a cover of a subtower of A to a cover of A itself: each branch
// gains copies of the upper levels with mapped coefficients.
SplitCover lift_cover(const SplitCover& base, const SeparableTower& A);

struct QuasiInverse {
    SplitCover cover;       // splits performed (identity cover when none)
    AlgebraElement xstar;   // lives in the parent algebra
};

// The unique xstar with x*xstar*x = x and xstar*x*xstar = xstar.
QuasiInverse quasi_inverse(const AlgebraElement& x);

// e = x * xstar; satisfies e^2 = e and e*x = x
AlgebraElement idempotent_of(const AlgebraElement& x);

struct InvOutcome {
    bool invertible = false;
    AlgebraElement value;  // the inverse when invertible, zero otherwise
};

struct InvertibleSplit {
    SplitCover cover;
    std::vector<InvOutcome> outcomes;  // parallel to cover.branches
};

// Decide "x = 0 or x invertible" by splitting off the idempotent of x. On
// every nontrivial branch the restriction of x is exactly zero or exactly
// invertible, with the inverse supplied.
InvertibleSplit is_invertible_split(const AlgebraElement& x);

// A = A/<e> x A/<1-e>, in that order, so e restricts to 0 on the first
// group of branches and to 1 on the second. Splitting may also split levels
// below the one carrying e, so more than two branches can come back.
SplitCover split_by_idempotent(const SeparableTower& A, const AlgebraElement& e);

// One group of branches per idempotent, in input order: branch i covers
// A/<1-es[i]>. The family must be orthogonal and sum to 1.
SplitCover split_fundamental(const SeparableTower& A, const std::vector<AlgebraElement>& es);

// CRT reconstruction: the unique parent element restricting to parts[i] on
// the i-th nontrivial branch. parts holds one element per nontrivial branch,
// in branch order.
AlgebraElement amalgamate(const SplitCover& cover, const std::vector<AlgebraElement>& parts);

// least-degree monic rational polynomial vanishing on x
RatPoly minimal_polynomial(const AlgebraElement& x);

}  // namespace dyneval
