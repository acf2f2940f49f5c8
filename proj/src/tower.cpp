#include "dyneval/tower.hpp"

#include "dyneval/bezout.hpp"

#include <algorithm>
#include <utility>

namespace dyneval {

// ---- nested normal forms -----------------------------------------------------

bool Nested::is_zero() const {
    if (is_leaf()) return leaf().is_zero();
    return kids().empty();
}

bool operator==(const Nested& a, const Nested& b) {
    if (a.is_leaf() != b.is_leaf()) return false;
    if (a.is_leaf()) return a.leaf() == b.leaf();
    const auto& ka = a.kids();
    const auto& kb = b.kids();
    if (ka.size() != kb.size()) return false;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (!(ka[i] == kb[i])) return false;
    return true;
}

namespace {

using Vec = std::vector<Nested>;

void trim_vec(Vec& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

Nested nz_zero(int depth) {
    if (depth == 0) return Nested(BigRational(0));
    return Nested(Vec{});
}

Nested nz_rat(int depth, const BigRational& q) {
    if (q.is_zero()) return nz_zero(depth);
    if (depth == 0) return Nested(q);
    Vec k;
    k.push_back(nz_rat(depth - 1, q));
    return Nested(std::move(k));
}

Nested nz_add(int depth, const Nested& a, const Nested& b) {
    if (depth == 0) return Nested(a.leaf() + b.leaf());
    const auto& ka = a.kids();
    const auto& kb = b.kids();
    const std::size_t n = std::max(ka.size(), kb.size());
    Vec out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < ka.size() && i < kb.size())
            out.push_back(nz_add(depth - 1, ka[i], kb[i]));
        else
            out.push_back(i < ka.size() ? ka[i] : kb[i]);
    }
    trim_vec(out);
    return Nested(std::move(out));
}

Nested nz_neg(int depth, const Nested& a) {
    if (depth == 0) return Nested(-a.leaf());
    Vec out;
    out.reserve(a.kids().size());
    for (const auto& k : a.kids()) out.push_back(nz_neg(depth - 1, k));
    return Nested(std::move(out));
}

Nested nz_sub(int depth, const Nested& a, const Nested& b) {
    return nz_add(depth, a, nz_neg(depth, b));
}

Nested nz_mul_int(int depth, const Nested& a, long m) {
    if (m == 0) return nz_zero(depth);
    if (depth == 0) return Nested(a.leaf() * BigRational(m));
    Vec out;
    out.reserve(a.kids().size());
    for (const auto& k : a.kids()) out.push_back(nz_mul_int(depth - 1, k, m));
    trim_vec(out);
    return Nested(std::move(out));
}

Nested nz_mul(const SeparableTower& A, int depth, const Nested& a, const Nested& b);

// Reduce a coefficient vector in generator `depth` modulo that level's monic
// minimal polynomial. Entries have depth-1.
void reduce_vec(const SeparableTower& A, int depth, Vec& v) {
    const auto& mp = A.level(depth).minpoly;
    const std::size_t deg = mp.size() - 1;
    for (std::size_t top = v.size(); top-- > deg;) {
        if (v[top].is_zero()) continue;
        const Nested c = std::move(v[top]);
        v[top] = nz_zero(depth - 1);
        for (std::size_t j = 0; j < deg; ++j)
            v[top - deg + j] =
                nz_sub(depth - 1, v[top - deg + j], nz_mul(A, depth - 1, c, mp[j]));
    }
    trim_vec(v);
}

Nested nz_mul(const SeparableTower& A, int depth, const Nested& a, const Nested& b) {
    if (depth == 0) return Nested(a.leaf() * b.leaf());
    const auto& ka = a.kids();
    const auto& kb = b.kids();
    if (ka.empty() || kb.empty()) return nz_zero(depth);
    Vec out(ka.size() + kb.size() - 1, nz_zero(depth - 1));
    for (std::size_t i = 0; i < ka.size(); ++i)
        for (std::size_t j = 0; j < kb.size(); ++j)
            out[i + j] = nz_add(depth - 1, out[i + j], nz_mul(A, depth - 1, ka[i], kb[j]));
    reduce_vec(A, depth, out);
    return Nested(std::move(out));
}

// renormalize a shape-correct but possibly over-degree value
Nested nz_renorm(const SeparableTower& A, int depth, const Nested& raw) {
    if (depth == 0) return raw;
    Vec out;
    out.reserve(raw.kids().size());
    for (const auto& k : raw.kids()) out.push_back(nz_renorm(A, depth - 1, k));
    reduce_vec(A, depth, out);
    return Nested(std::move(out));
}

void check_shape(int depth, const Nested& v) {
    if (depth == 0) {
        if (!v.is_leaf()) throw precondition_error("nested value is deeper than the algebra");
        return;
    }
    if (v.is_leaf()) throw precondition_error("nested value is shallower than the algebra");
    for (const auto& k : v.kids()) check_shape(depth - 1, k);
}

std::optional<BigRational> nz_as_rational(const Nested& v) {
    const Nested* cur = &v;
    while (!cur->is_leaf()) {
        if (cur->kids().empty()) return BigRational(0);
        if (cur->kids().size() > 1) return std::nullopt;
        cur = &cur->kids()[0];
    }
    return cur->leaf();
}

void coords_rec(const SeparableTower& A, int depth, const Nested& v,
                std::vector<BigRational>& out) {
    if (depth == 0) {
        out.push_back(v.leaf());
        return;
    }
    const int deg = A.level_degree(depth);
    const auto& ks = v.kids();
    const Nested zero = nz_zero(depth - 1);
    for (int i = 0; i < deg; ++i)
        coords_rec(A, depth - 1, i < static_cast<int>(ks.size()) ? ks[i] : zero, out);
}

Nested coords_build(const SeparableTower& A, int depth, const BigRational* flat,
                    long dim_here) {
    if (depth == 0) return Nested(*flat);
    const int deg = A.level_degree(depth);
    const long dim_low = dim_here / deg;
    Vec out;
    out.reserve(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i)
        out.push_back(coords_build(A, depth - 1, flat + i * dim_low, dim_low));
    trim_vec(out);
    return Nested(std::move(out));
}

void check_same_owner(const AlgebraElement& a, const AlgebraElement& b) {
    if (!a.owner().same(b.owner()))
        throw precondition_error("elements live in different algebras");
}

}  // namespace

// ---- towers --------------------------------------------------------------------

SeparableTower SeparableTower::rationals() { return SeparableTower(); }

SeparableTower SeparableTower::trivial() {
    SeparableTower t;
    t.trivial_ = true;
    return t;
}

const TowerLevel& SeparableTower::level(int k) const {
    if (trivial_ || k < 1 || k > depth_ || !data_)
        throw internal_error("tower level index out of range");
    return data_->levels[static_cast<std::size_t>(k) - 1];
}

long SeparableTower::dimension() const {
    if (trivial_) return 0;
    long d = 1;
    for (int k = 1; k <= depth_; ++k) d *= level_degree(k);
    return d;
}

SeparableTower SeparableTower::subtower(int new_depth) const {
    if (new_depth < 0 || new_depth > depth_)
        throw internal_error("subtower depth out of range");
    if (trivial_) return *this;
    SeparableTower t;
    t.data_ = data_;
    t.depth_ = new_depth;
    return t;
}

bool SeparableTower::same(const SeparableTower& o) const {
    if (trivial_ != o.trivial_) return false;
    if (trivial_) return true;
    if (depth_ != o.depth_) return false;
    if (data_ == o.data_ || depth_ == 0) return true;
    for (int k = 1; k <= depth_; ++k) {
        const TowerLevel& a = level(k);
        const TowerLevel& b = o.level(k);
        if (a.name != b.name || a.minpoly.size() != b.minpoly.size()) return false;
        for (std::size_t i = 0; i < a.minpoly.size(); ++i)
            if (!(a.minpoly[i] == b.minpoly[i])) return false;
    }
    return true;
}

bool SeparableTower::has_generator(const std::string& name) const {
    return generator_level(name).has_value();
}

std::optional<int> SeparableTower::generator_level(const std::string& name) const {
    for (int k = 1; k <= depth_; ++k)
        if (level(k).name == name) return k;
    return std::nullopt;
}

// ---- elements --------------------------------------------------------------------

AlgebraElement::AlgebraElement()
    : owner_(SeparableTower::rationals()), repr_(BigRational(0)) {}

AlgebraElement AlgebraElement::from_rational(const SeparableTower& A, BigRational q) {
    if (A.is_trivial()) return AlgebraElement(A, Nested(BigRational(0)));
    return AlgebraElement(A, nz_rat(A.depth(), q));
}

AlgebraElement AlgebraElement::zero(const SeparableTower& A) {
    return from_rational(A, BigRational(0));
}

AlgebraElement AlgebraElement::one(const SeparableTower& A) {
    return from_rational(A, BigRational(1));
}

AlgebraElement AlgebraElement::generator(const SeparableTower& A, int k) {
    if (A.is_trivial() || k < 1 || k > A.depth())
        throw precondition_error("no such generator");
    Vec pair;
    pair.push_back(nz_zero(k - 1));
    pair.push_back(nz_rat(k - 1, BigRational(1)));
    Nested v(std::move(pair));
    for (int d = k + 1; d <= A.depth(); ++d) {
        Vec wrap;
        wrap.push_back(std::move(v));
        v = Nested(std::move(wrap));
    }
    // from_nested reduces, so a generator with a degree-1 level collapses to
    // its rational value as it should
    return from_nested(A, std::move(v));
}

AlgebraElement AlgebraElement::from_nested(const SeparableTower& A, Nested raw) {
    if (A.is_trivial()) return AlgebraElement(A, Nested(BigRational(0)));
    check_shape(A.depth(), raw);
    return AlgebraElement(A, nz_renorm(A, A.depth(), raw));
}

bool AlgebraElement::is_zero() const {
    if (owner_.is_trivial()) return true;
    return repr_.is_zero();
}

bool AlgebraElement::is_one() const {
    if (owner_.is_trivial()) return true;
    auto r = nz_as_rational(repr_);
    return r.has_value() && r->is_one();
}

std::optional<BigRational> AlgebraElement::as_rational() const {
    if (owner_.is_trivial()) return BigRational(0);
    return nz_as_rational(repr_);
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    check_same_owner(a, b);
    if (a.owner_.is_trivial()) return a;
    return AlgebraElement(a.owner_, nz_add(a.owner_.depth(), a.repr_, b.repr_));
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    check_same_owner(a, b);
    if (a.owner_.is_trivial()) return a;
    return AlgebraElement(a.owner_, nz_sub(a.owner_.depth(), a.repr_, b.repr_));
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    check_same_owner(a, b);
    if (a.owner_.is_trivial()) return a;
    return AlgebraElement(a.owner_, nz_mul(a.owner_, a.owner_.depth(), a.repr_, b.repr_));
}

AlgebraElement AlgebraElement::operator-() const {
    if (owner_.is_trivial()) return *this;
    return AlgebraElement(owner_, nz_neg(owner_.depth(), repr_));
}

AlgebraElement AlgebraElement::mul_int(long k) const {
    if (owner_.is_trivial()) return *this;
    return AlgebraElement(owner_, nz_mul_int(owner_.depth(), repr_, k));
}

AlgebraElement AlgebraElement::pow(long e) const {
    if (e < 0) throw precondition_error("negative exponent");
    AlgebraElement acc = one(owner_);
    AlgebraElement base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.owner_.same(b.owner_) && a.repr_ == b.repr_;
}

int AlgebraElement::compare(const AlgebraElement& o) const {
    check_same_owner(*this, o);
    const std::vector<BigRational> u = coords();
    const std::vector<BigRational> v = o.coords();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const int c = u[i].compare(v[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::vector<BigRational> AlgebraElement::coords() const {
    std::vector<BigRational> out;
    if (owner_.is_trivial()) return out;
    out.reserve(static_cast<std::size_t>(owner_.dimension()));
    coords_rec(owner_, owner_.depth(), repr_, out);
    return out;
}

AlgebraElement AlgebraElement::from_coords(const SeparableTower& A,
                                           const std::vector<BigRational>& v) {
    if (static_cast<long>(v.size()) != A.dimension())
        throw precondition_error("coordinate vector has the wrong length");
    if (A.is_trivial()) return zero(A);
    return AlgebraElement(A, coords_build(A, A.depth(), v.data(), A.dimension()));
}

// ---- polynomials in the top generator ------------------------------------------

ElemPoly top_poly(const AlgebraElement& x) {
    const SeparableTower& A = x.owner();
    if (A.is_trivial() || A.depth() == 0)
        throw precondition_error("element has no top generator");
    const SeparableTower S = A.subtower(A.depth() - 1);
    std::vector<AlgebraElement> coeffs;
    coeffs.reserve(x.repr().kids().size());
    for (const auto& k : x.repr().kids())
        coeffs.push_back(AlgebraElement::from_nested(S, k));
    return ElemPoly(std::move(coeffs));
}

AlgebraElement from_top_poly(const SeparableTower& A, const ElemPoly& p) {
    if (A.is_trivial()) return AlgebraElement::zero(A);
    if (A.depth() == 0) throw precondition_error("algebra has no top generator");
    const SeparableTower S = A.subtower(A.depth() - 1);
    Vec kids;
    kids.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p[i].owner().same(S))
            throw precondition_error("coefficients are not over the subtower");
        kids.push_back(p[i].repr());
    }
    return AlgebraElement::from_nested(A, Nested(std::move(kids)));
}

namespace {

ElemPoly level_poly(const SeparableTower& A, int k, const std::vector<Nested>& coeffs) {
    const SeparableTower S = A.subtower(k - 1);
    std::vector<AlgebraElement> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(AlgebraElement::from_nested(S, c));
    return ElemPoly(std::move(out));
}

}  // namespace

ElemPoly level_minpoly(const SeparableTower& A, int k) {
    return level_poly(A, k, A.level(k).minpoly);
}

ElemPoly level_cert_s(const SeparableTower& A, int k) {
    return level_poly(A, k, A.level(k).cert_s);
}

ElemPoly level_cert_t(const SeparableTower& A, int k) {
    return level_poly(A, k, A.level(k).cert_t);
}

SeparableTower extend_tower(const SeparableTower& A, std::string name, const ElemPoly& minpoly,
                            const ElemPoly& cert_s, const ElemPoly& cert_t) {
    if (A.is_trivial()) throw precondition_error("cannot extend the zero ring");
    if (!minpoly.is_monic()) throw precondition_error("minimal polynomial must be monic");
    if (minpoly.size() < 2) throw precondition_error("minimal polynomial must be nonconstant");
    if (name.empty()) throw precondition_error("generator name must be nonempty");
    if (A.has_generator(name)) throw precondition_error("generator name already in use");
    auto check_over = [&](const ElemPoly& p) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!p[i].owner().same(A))
                throw precondition_error("polynomial is not over the base algebra");
    };
    check_over(minpoly);
    check_over(cert_s);
    check_over(cert_t);
    const ElemPoly lhs = cert_s * minpoly + cert_t * derivative(minpoly);
    if (!(lhs == ElemPoly::constant(AlgebraElement::one(A))))
        throw precondition_error("separability certificate does not verify");

    auto data = std::make_shared<TowerData>();
    data->levels.reserve(static_cast<std::size_t>(A.depth()) + 1);
    for (int k = 1; k <= A.depth(); ++k) data->levels.push_back(A.level(k));
    TowerLevel lvl;
    lvl.name = std::move(name);
    auto strip = [](const ElemPoly& p) {
        std::vector<Nested> out;
        out.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p[i].repr());
        return out;
    };
    lvl.minpoly = strip(minpoly);
    lvl.cert_s = strip(cert_s);
    lvl.cert_t = strip(cert_t);
    data->levels.push_back(std::move(lvl));

    SeparableTower out;
    out.data_ = std::move(data);
    out.depth_ = A.depth() + 1;
    return out;
}

std::string next_generator_name(const SeparableTower& A) {
    long best = 0;
    for (int k = 1; k <= A.depth(); ++k) {
        const std::string& n = A.level(k).name;
        if (n.size() < 2 || n.size() > 10 || n[0] != 'a' || n[1] == '0') continue;
        bool digits = true;
        for (std::size_t i = 1; i < n.size(); ++i)
            if (n[i] < '0' || n[i] > '9') digits = false;
        if (!digits) continue;
        best = std::max(best, std::stol(n.substr(1)));
    }
    return "a" + std::to_string(best + 1);
}

AlgebraElement normal_form(const SeparableTower& A, const Nested& raw) {
    return AlgebraElement::from_nested(A, raw);
}

// ---- restriction maps -----------------------------------------------------------

namespace {

AlgebraElement apply_nested(const SeparableTower& to, const std::vector<AlgebraElement>& images,
                            int depth, const Nested& v) {
    if (depth == 0) return AlgebraElement::from_rational(to, v.leaf());
    AlgebraElement acc = AlgebraElement::zero(to);
    const auto& ks = v.kids();
    for (std::size_t i = ks.size(); i-- > 0;)
        acc = acc * images[static_cast<std::size_t>(depth) - 1] + apply_nested(to, images, depth - 1, ks[i]);
    return acc;
}

}  // namespace

RestrictionMap::RestrictionMap()
    : from_(SeparableTower::rationals()), to_(SeparableTower::rationals()), identity_(true) {}

RestrictionMap RestrictionMap::identity(const SeparableTower& A) {
    std::vector<AlgebraElement> imgs;
    imgs.reserve(static_cast<std::size_t>(A.depth()));
    for (int k = 1; k <= A.depth(); ++k) imgs.push_back(AlgebraElement::generator(A, k));
    return RestrictionMap(A, A, std::move(imgs));
}

RestrictionMap RestrictionMap::to_trivial(const SeparableTower& A) {
    const SeparableTower T = SeparableTower::trivial();
    std::vector<AlgebraElement> imgs(static_cast<std::size_t>(A.depth()),
                                     AlgebraElement::zero(T));
    return RestrictionMap(A, T, std::move(imgs));
}

RestrictionMap::RestrictionMap(SeparableTower from, SeparableTower to,
                               std::vector<AlgebraElement> images)
    : from_(std::move(from)), to_(std::move(to)), images_(std::move(images)) {
    if (from_.is_trivial() && !to_.is_trivial())
        throw precondition_error("no unital map out of the zero ring");
    if (images_.size() != static_cast<std::size_t>(from_.depth()))
        throw precondition_error("need one generator image per level");
    for (const auto& img : images_)
        if (!img.owner().same(to_))
            throw precondition_error("generator image lives in the wrong algebra");
    identity_ = from_.same(to_);
    if (identity_)
        for (int k = 1; k <= from_.depth() && identity_; ++k)
            identity_ = images_[static_cast<std::size_t>(k) - 1] ==
                        AlgebraElement::generator(to_, k);
}

AlgebraElement RestrictionMap::apply(const AlgebraElement& x) const {
    if (!x.owner().same(from_))
        throw precondition_error("element is outside the map's source");
    if (identity_) return x;
    if (to_.is_trivial() || from_.is_trivial()) return AlgebraElement::zero(to_);
    return apply_nested(to_, images_, from_.depth(), x.repr());
}

ElemPoly RestrictionMap::apply_poly(const ElemPoly& p) const {
    return map_coeffs(p, [&](const AlgebraElement& c) { return apply(c); });
}

RestrictionMap RestrictionMap::then(const RestrictionMap& next) const {
    if (!to_.same(next.from_))
        throw precondition_error("maps do not compose");
    if (identity_) return next;
    if (next.identity_) return *this;
    std::vector<AlgebraElement> imgs;
    imgs.reserve(images_.size());
    for (const auto& img : images_) imgs.push_back(next.apply(img));
    return RestrictionMap(from_, next.to_, std::move(imgs));
}

bool RestrictionMap::check_homomorphism() const {
    if (to_.is_trivial() || from_.depth() == 0) return true;
    for (int k = 1; k <= from_.depth(); ++k) {
        const ElemPoly p = level_minpoly(from_, k);
        const AlgebraElement val = evaluate_mapped(
            p, images_[static_cast<std::size_t>(k) - 1], [&](const AlgebraElement& c) {
                return apply_nested(to_, images_, k - 1, c.repr());
            });
        if (!val.is_zero()) return false;
    }
    return true;
}

// ---- covers ----------------------------------------------------------------------

std::vector<std::size_t> SplitCover::nontrivial() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (!branches[i].component.is_trivial()) out.push_back(i);
    return out;
}

SplitCover identity_cover(const SeparableTower& A) {
    return SplitCover{A, {CoverBranch{A, RestrictionMap::identity(A)}}, "identity"};
}

SplitCover refine_cover(const SplitCover& base, const std::vector<SplitCover>& per_branch) {
    if (per_branch.size() != base.branches.size())
        throw precondition_error("need one refinement per branch");
    SplitCover out;
    out.parent = base.parent;
    out.provenance = base.provenance + "; refined";
    for (std::size_t i = 0; i < base.branches.size(); ++i) {
        if (!per_branch[i].parent.same(base.branches[i].component))
            throw precondition_error("refinement does not cover its branch");
        for (const auto& sub : per_branch[i].branches)
            out.branches.push_back(
                CoverBranch{sub.component, base.branches[i].restrict.then(sub.restrict)});
    }
    return out;
}

namespace {

// view an element of a lower tower inside an extension of it
AlgebraElement embed_up(const SeparableTower& bigger, const AlgebraElement& x) {
    if (bigger.same(x.owner())) return x;
    const int extra = bigger.depth() - x.owner().depth();
    if (extra < 0 || !bigger.subtower(x.owner().depth()).same(x.owner()))
        throw internal_error("not a subtower embedding");
    if (x.is_zero()) return AlgebraElement::zero(bigger);
    Nested v = x.repr();
    for (int i = 0; i < extra; ++i) {
        Vec wrap;
        wrap.push_back(std::move(v));
        v = Nested(std::move(wrap));
    }
    return AlgebraElement::from_nested(bigger, std::move(v));
}

// Extend a map defined on A's levels 1..k0 (into C) across A's upper levels,
// rebuilding each level on top of C with mapped coefficients. The certificate
// identities survive the mapping, and extend_tower revalidates them.
CoverBranch carry_upper_levels(const SeparableTower& A, int k0, SeparableTower C,
                               std::vector<AlgebraElement> images) {
    for (int k = k0 + 1; k <= A.depth(); ++k) {
        if (C.is_trivial())
            return CoverBranch{SeparableTower::trivial(), RestrictionMap::to_trivial(A)};
        const RestrictionMap part(A.subtower(k - 1), C, images);
        const ElemPoly pm = part.apply_poly(level_minpoly(A, k));
        const ElemPoly sm = part.apply_poly(level_cert_s(A, k));
        const ElemPoly tm = part.apply_poly(level_cert_t(A, k));
        SeparableTower C2 = extend_tower(C, A.level(k).name, pm, sm, tm);
        std::vector<AlgebraElement> lifted;
        lifted.reserve(images.size() + 1);
        for (const auto& img : images) lifted.push_back(embed_up(C2, img));
        lifted.push_back(AlgebraElement::generator(C2, C2.depth()));
        images = std::move(lifted);
        C = std::move(C2);
    }
    return CoverBranch{C, RestrictionMap(A, C, std::move(images))};
}

}  // namespace

SplitCover lift_cover(const SplitCover& base, const SeparableTower& A) {
    const int k0 = base.parent.depth();
    if (base.parent.is_trivial() || !base.parent.same(A.subtower(k0)))
        throw precondition_error("cover is not over a subtower");
    SplitCover out;
    out.parent = A;
    out.provenance = base.provenance;
    out.branches.reserve(base.branches.size());
    for (const auto& br : base.branches) {
        if (br.component.is_trivial()) {
            out.branches.push_back(
                CoverBranch{SeparableTower::trivial(), RestrictionMap::to_trivial(A)});
            continue;
        }
        out.branches.push_back(carry_upper_levels(A, k0, br.component, br.restrict.images()));
    }
    return out;
}

// ---- amalgamation ----------------------------------------------------------------

namespace {

// exact elimination; unique solution required
std::vector<BigRational> solve_unique(std::vector<std::vector<BigRational>> M,
                                      std::vector<BigRational> rhs, std::size_t cols) {
    const std::size_t rows = M.size();
    std::size_t r = 0;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && M[pr][c].is_zero()) ++pr;
        if (pr == rows) continue;
        std::swap(M[pr], M[r]);
        std::swap(rhs[pr], rhs[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (M[i][c].is_zero()) continue;
            const BigRational f = M[i][c] / M[r][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
            rhs[i] -= f * rhs[r];
        }
        ++r;
        ++rank;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!rhs[i].is_zero())
            throw precondition_error("branch values are inconsistent with the cover");
    if (rank < cols) throw internal_error("restriction system is underdetermined");
    std::vector<BigRational> x(cols, BigRational(0));
    for (std::size_t i = cols; i-- > 0;) {
        BigRational acc = std::move(rhs[i]);
        for (std::size_t j = i + 1; j < cols; ++j) acc -= M[i][j] * x[j];
        x[i] = acc / M[i][i];
    }
    return x;
}

}  // namespace

AlgebraElement amalgamate(const SplitCover& cover, const std::vector<AlgebraElement>& parts) {
    const SeparableTower& A = cover.parent;
    const std::vector<std::size_t> nt = cover.nontrivial();
    if (parts.size() != nt.size())
        throw precondition_error("need one element per nontrivial branch");
    if (A.is_trivial()) return AlgebraElement::zero(A);
    if (nt.empty()) throw precondition_error("cover has no nontrivial branches");
    for (std::size_t i = 0; i < nt.size(); ++i) {
        const CoverBranch& br = cover.branches[nt[i]];
        if (!br.restrict.from().same(A))
            throw precondition_error("cover branch does not restrict from the parent");
        if (!parts[i].owner().same(br.component))
            throw precondition_error("part lives in the wrong branch component");
    }

    const std::size_t dim = static_cast<std::size_t>(A.dimension());
    std::vector<AlgebraElement> basis;
    basis.reserve(dim);
    {
        std::vector<BigRational> unit(dim, BigRational(0));
        for (std::size_t j = 0; j < dim; ++j) {
            unit[j] = BigRational(1);
            basis.push_back(AlgebraElement::from_coords(A, unit));
            unit[j] = BigRational(0);
        }
    }

    std::vector<std::vector<BigRational>> M;
    std::vector<BigRational> rhs;
    for (std::size_t i = 0; i < nt.size(); ++i) {
        const CoverBranch& br = cover.branches[nt[i]];
        const std::size_t bdim = static_cast<std::size_t>(br.component.dimension());
        const std::size_t row0 = M.size();
        M.resize(row0 + bdim, std::vector<BigRational>(dim, BigRational(0)));
        for (std::size_t j = 0; j < dim; ++j) {
            const std::vector<BigRational> col = br.restrict.apply(basis[j]).coords();
            for (std::size_t t = 0; t < bdim; ++t) M[row0 + t][j] = col[t];
        }
        for (const BigRational& v : parts[i].coords()) rhs.push_back(v);
    }

    const std::vector<BigRational> sol = solve_unique(std::move(M), std::move(rhs), dim);
    const AlgebraElement x = AlgebraElement::from_coords(A, sol);
    for (std::size_t i = 0; i < nt.size(); ++i)
        if (!(cover.branches[nt[i]].restrict.apply(x) == parts[i]))
            throw internal_error("amalgamated element fails to restrict back");
    return x;
}

// ---- quasi-inverse and splitting ---------------------------------------------------

QuasiInverse quasi_inverse(const AlgebraElement& x) {
    const SeparableTower& A = x.owner();
    if (A.is_trivial())
        return QuasiInverse{SplitCover{A, {}, "zero ring"}, AlgebraElement::zero(A)};
    if (auto r = x.as_rational()) {
        AlgebraElement xs = r->is_zero() ? AlgebraElement::zero(A)
                                         : AlgebraElement::from_rational(A, r->inverse());
        return QuasiInverse{identity_cover(A), std::move(xs)};
    }

    const int d = A.depth();
    const SeparableTower S = A.subtower(d - 1);
    const ElemPoly p = level_minpoly(A, d);
    const ElemPoly s = level_cert_s(A, d);
    const ElemPoly t = level_cert_t(A, d);
    const ElemPoly q = top_poly(x);

    GcdSplit bz = gcd_split(S, p, q);
    SplitCover lifted = lift_cover(bz.cover, A);
    lifted.provenance = "quasi-inverse splits";

    // On each branch p = a1*g and c*a1 + d*b1 = 1. With the mapped certificate
    // s*p + t*p' = 1 one gets u = s*a1 + t*a1' satisfying u*g = 1 mod a1, so
    // g*u^2*d is 0 mod g and the inverse of x mod a1: the quasi-inverse.
    std::vector<AlgebraElement> parts;
    for (const std::size_t idx : lifted.nontrivial()) {
        const RestrictionMap& phi = bz.cover.branches[idx].restrict;
        const BezoutCertificate& cert = bz.certs[idx];
        const ElemPoly pm = phi.apply_poly(p);
        const ElemPoly u =
            phi.apply_poly(s) * cert.a1 + phi.apply_poly(t) * derivative(cert.a1);
        const ElemPoly w = monic_divmod(cert.g * u * u * cert.d, pm).second;
        parts.push_back(from_top_poly(lifted.branches[idx].component, w));
    }
    AlgebraElement xstar = amalgamate(lifted, parts);
    return QuasiInverse{std::move(lifted), std::move(xstar)};
}

AlgebraElement idempotent_of(const AlgebraElement& x) {
    return quasi_inverse(x).xstar * x;
}

namespace {

// Component of A at level k for one monic factor f of the mapped level
// polynomial: the quotient by f, with upper levels carried across. h is the
// complementary factor, used to transport the separability certificate.
CoverBranch quotient_branch(const SeparableTower& A, int k, const SeparableTower& Sj,
                            const RestrictionMap& phi, const ElemPoly& f, const ElemPoly& h,
                            const ElemPoly& t_j) {
    if (f.size() == 1)
        return CoverBranch{SeparableTower::trivial(), RestrictionMap::to_trivial(A)};
    std::vector<AlgebraElement> images = phi.images();
    SeparableTower C = Sj;
    if (f.size() == 2) {
        // linear factor: the level collapses onto a witness in the base
        images.push_back(-f[0]);
    } else {
        // t_j*h is a certificate partner for f; reduce it mod f and recover
        // the matching cofactor by exact division
        const ElemPoly one = ElemPoly::constant(AlgebraElement::one(Sj));
        const ElemPoly t_red = monic_divmod(t_j * h, f).second;
        const ElemPoly s_red = monic_div_exact(one - t_red * derivative(f), f);
        C = extend_tower(Sj, A.level(k).name, f, s_red, t_red);
        std::vector<AlgebraElement> up;
        up.reserve(images.size() + 1);
        for (const auto& img : images) up.push_back(embed_up(C, img));
        up.push_back(AlgebraElement::generator(C, C.depth()));
        images = std::move(up);
    }
    return carry_upper_levels(A, k, std::move(C), std::move(images));
}

// returns the cover plus the index of the first branch where e restricts to 1
std::pair<SplitCover, std::size_t> split_by_idempotent_sides(const SeparableTower& A,
                                                             const AlgebraElement& e) {
    if (!e.owner().same(A))
        throw precondition_error("idempotent lives in a different algebra");
    if (A.is_trivial()) return {SplitCover{A, {}, "idempotent split"}, 0};
    if (!(e * e == e)) throw precondition_error("element is not idempotent");

    if (auto r = e.as_rational()) {
        SplitCover out{A, {}, "idempotent split"};
        const CoverBranch self{A, RestrictionMap::identity(A)};
        const CoverBranch none{SeparableTower::trivial(), RestrictionMap::to_trivial(A)};
        if (r->is_zero()) {
            out.branches = {self, none};
        } else {
            out.branches = {none, self};
        }
        return {std::move(out), 1};
    }

    // topmost level whose generator e actually involves
    int k = A.depth();
    const Nested* v = &e.repr();
    while (k >= 1 && v->kids().size() == 1) {
        v = &v->kids()[0];
        --k;
    }
    if (k < 1) throw internal_error("nonconstant idempotent with constant shape");

    const SeparableTower S = A.subtower(k - 1);
    const ElemPoly p = level_minpoly(A, k);
    const ElemPoly t = level_cert_t(A, k);
    ElemPoly E;
    {
        std::vector<AlgebraElement> coeffs;
        coeffs.reserve(v->kids().size());
        for (const auto& kid : v->kids()) coeffs.push_back(AlgebraElement::from_nested(S, kid));
        E = ElemPoly(std::move(coeffs));
    }

    GcdSplit bz = gcd_split(S, p, E);
    std::vector<CoverBranch> zeros, ones;
    for (std::size_t j = 0; j < bz.cover.branches.size(); ++j) {
        const CoverBranch& br = bz.cover.branches[j];
        if (br.component.is_trivial()) {
            zeros.push_back(
                CoverBranch{SeparableTower::trivial(), RestrictionMap::to_trivial(A)});
            ones.push_back(
                CoverBranch{SeparableTower::trivial(), RestrictionMap::to_trivial(A)});
            continue;
        }
        const ElemPoly t_j = br.restrict.apply_poly(t);
        const ElemPoly& g = bz.certs[j].g;
        const ElemPoly& a1 = bz.certs[j].a1;
        // e vanishes mod g (g divides E) and is 1 mod a1 (E invertible there)
        zeros.push_back(quotient_branch(A, k, br.component, br.restrict, g, a1, t_j));
        ones.push_back(quotient_branch(A, k, br.component, br.restrict, a1, g, t_j));
    }
    const std::size_t boundary = zeros.size();
    SplitCover out{A, {}, "idempotent split"};
    out.branches = std::move(zeros);
    for (auto& b : ones) out.branches.push_back(std::move(b));
    return {std::move(out), boundary};
}

}  // namespace

SplitCover split_by_idempotent(const SeparableTower& A, const AlgebraElement& e) {
    return split_by_idempotent_sides(A, e).first;
}

InvertibleSplit is_invertible_split(const AlgebraElement& x) {
    const SeparableTower& A = x.owner();
    if (A.is_trivial()) return InvertibleSplit{SplitCover{A, {}, "zero-or-invertible"}, {}};

    QuasiInverse qi = quasi_inverse(x);
    const AlgebraElement e = x * qi.xstar;
    if (e.is_one())
        return InvertibleSplit{identity_cover(A), {InvOutcome{true, qi.xstar}}};
    if (e.is_zero())
        return InvertibleSplit{identity_cover(A), {InvOutcome{false, AlgebraElement::zero(A)}}};

    auto [cover, boundary] = split_by_idempotent_sides(A, e);
    InvertibleSplit out;
    out.outcomes.reserve(cover.branches.size());
    for (std::size_t i = 0; i < cover.branches.size(); ++i) {
        const CoverBranch& br = cover.branches[i];
        if (br.component.is_trivial()) {
            out.outcomes.push_back(InvOutcome{false, AlgebraElement::zero(br.component)});
            continue;
        }
        const AlgebraElement er = br.restrict.apply(e);
        if (i < boundary) {
            if (!er.is_zero()) throw internal_error("idempotent split missed the zero side");
            out.outcomes.push_back(InvOutcome{false, AlgebraElement::zero(br.component)});
        } else {
            if (!er.is_one()) throw internal_error("idempotent split missed the unit side");
            out.outcomes.push_back(InvOutcome{true, br.restrict.apply(qi.xstar)});
        }
    }
    out.cover = std::move(cover);
    out.cover.provenance = "zero-or-invertible";
    return out;
}

SplitCover split_fundamental(const SeparableTower& A, const std::vector<AlgebraElement>& es) {
    for (const auto& e : es)
        if (!e.owner().same(A))
            throw precondition_error("idempotent lives in a different algebra");
    if (A.is_trivial()) return SplitCover{A, {}, "fundamental system"};

    AlgebraElement sum = AlgebraElement::zero(A);
    for (const auto& e : es) sum = sum + e;
    if (!sum.is_one()) throw precondition_error("idempotents do not sum to 1");
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j)
            if (!(es[i] * es[j]).is_zero())
                throw precondition_error("idempotents " + std::to_string(i + 1) + " and " +
                                         std::to_string(j + 1) + " are not orthogonal");

    const std::size_t n = es.size();
    std::vector<std::vector<CoverBranch>> groups(n);
    std::vector<CoverBranch> work;
    work.push_back(CoverBranch{A, RestrictionMap::identity(A)});
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 == n) {
            groups[i] = std::move(work);
            break;
        }
        std::vector<CoverBranch> next_work;
        for (const CoverBranch& piece : work) {
            if (piece.component.is_trivial()) {
                groups[i].push_back(piece);
                next_work.push_back(piece);
                continue;
            }
            const AlgebraElement ei = piece.restrict.apply(es[i]);
            auto [sc, boundary] = split_by_idempotent_sides(piece.component, ei);
            for (std::size_t b = 0; b < sc.branches.size(); ++b) {
                CoverBranch composed{sc.branches[b].component,
                                     piece.restrict.then(sc.branches[b].restrict)};
                if (b >= boundary)
                    groups[i].push_back(std::move(composed));
                else
                    next_work.push_back(std::move(composed));
            }
        }
        work = std::move(next_work);
    }

    SplitCover out{A, {}, "fundamental system"};
    for (auto& g : groups)
        for (auto& b : g) out.branches.push_back(std::move(b));
    return out;
}

// ---- minimal polynomial -------------------------------------------------------------

RatPoly minimal_polynomial(const AlgebraElement& x) {
    const SeparableTower& A = x.owner();
    if (A.is_trivial()) return RatPoly::constant(BigRational(1));
    const long dim = A.dimension();

    std::vector<std::vector<BigRational>> rows;
    std::vector<std::size_t> pivots;
    std::vector<std::vector<BigRational>> combos;
    AlgebraElement pw = AlgebraElement::one(A);
    for (long n = 0; n <= dim; ++n) {
        std::vector<BigRational> vec = pw.coords();
        std::vector<BigRational> combo(static_cast<std::size_t>(n) + 1, BigRational(0));
        combo[static_cast<std::size_t>(n)] = BigRational(1);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const BigRational lead = vec[pivots[r]];
            if (lead.is_zero()) continue;
            const BigRational f = lead / rows[r][pivots[r]];
            for (std::size_t c = 0; c < vec.size(); ++c) vec[c] -= f * rows[r][c];
            for (std::size_t i = 0; i < combos[r].size(); ++i) combo[i] -= f * combos[r][i];
        }
        std::size_t piv = vec.size();
        for (std::size_t c = 0; c < vec.size(); ++c)
            if (!vec[c].is_zero()) {
                piv = c;
                break;
            }
        if (piv == vec.size()) return RatPoly(std::move(combo));
        rows.push_back(std::move(vec));
        pivots.push_back(piv);
        combos.push_back(std::move(combo));
        pw = pw * x;
    }
    throw internal_error("no linear dependence within the algebra dimension");
}

// ---- rendering ------------------------------------------------------------------------

namespace {

CoeffText elem_text_rec(const AlgebraElement& x) {
    if (x.owner().is_trivial()) return {"0", false};
    if (x.owner().depth() == 0) return {x.as_rational()->str(), false};
    const ElemPoly p = top_poly(x);
    if (p.is_zero()) return {"0", false};
    if (p.size() == 1) return elem_text_rec(p[0]);
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!p[i].is_zero()) ++nonzero;
    std::string s = render_poly(p, x.owner().level(x.owner().depth()).name,
                                [](const AlgebraElement& c) { return elem_text_rec(c); });
    return {std::move(s), nonzero >= 2};
}

}  // namespace

CoeffText AlgebraElement::render_text() const { return elem_text_rec(*this); }

std::string SeparableTower::render() const {
    if (trivial_) return "0";
    if (depth_ == 0) return "Q";
    std::string names, polys;
    for (int k = 1; k <= depth_; ++k) {
        if (k > 1) {
            names += ",";
            polys += ", ";
        }
        names += level(k).name;
        polys += render_poly(level_minpoly(*this, k), level(k).name,
                             [](const AlgebraElement& c) { return c.render_text(); });
    }
    return "Q[" + names + " | " + polys + "]";
}

}  // namespace dyneval
