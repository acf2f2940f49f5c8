#include "dyneval/series.hpp"

#include "dyneval/upoly.hpp"

#include <algorithm>
#include <utility>

namespace dyneval {

TruncatedSeries::TruncatedSeries(SeparableTower owner, int order)
    : owner_(std::move(owner)), order_(order) {
    if (order_ < 0) throw precondition_error("series order must be nonnegative");
    coeffs_.assign(static_cast<std::size_t>(order_) + 1, AlgebraElement::zero(owner_));
}

TruncatedSeries::TruncatedSeries(SeparableTower owner, int order,
                                 std::vector<AlgebraElement> coeffs)
    : owner_(std::move(owner)), order_(order), coeffs_(std::move(coeffs)) {
    if (order_ < 0) throw precondition_error("series order must be nonnegative");
    for (const AlgebraElement& c : coeffs_)
        if (!c.owner().same(owner_))
            throw precondition_error("coefficient is not over the owner algebra");
    coeffs_.resize(static_cast<std::size_t>(order_) + 1, AlgebraElement::zero(owner_));
}

TruncatedSeries TruncatedSeries::constant(const SeparableTower& owner, AlgebraElement c,
                                          int order) {
    return TruncatedSeries(owner, order, std::vector<AlgebraElement>{std::move(c)});
}

TruncatedSeries TruncatedSeries::from_poly(const SeparableTower& owner, const ElemPoly& p,
                                           int order) {
    std::vector<AlgebraElement> cs;
    cs.reserve(std::min(p.size(), static_cast<std::size_t>(order) + 1));
    for (std::size_t i = 0; i < p.size() && i <= static_cast<std::size_t>(order); ++i)
        cs.push_back(p[i]);
    return TruncatedSeries(owner, order, std::move(cs));
}

const AlgebraElement& TruncatedSeries::coeff(int i) const {
    if (i < 0 || i > order_) throw precondition_error("coefficient index out of range");
    return coeffs_[static_cast<std::size_t>(i)];
}

bool TruncatedSeries::is_zero() const {
    for (const AlgebraElement& c : coeffs_)
        if (!c.is_zero()) return false;
    return true;
}

namespace {

void check_owners(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.owner().same(b.owner())) throw precondition_error("series live over different algebras");
}

}  // namespace

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_owners(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<AlgebraElement> cs;
    cs.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) cs.push_back(a.coeff(i) + b.coeff(i));
    return TruncatedSeries(a.owner(), n, std::move(cs));
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_owners(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<AlgebraElement> cs;
    cs.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) cs.push_back(a.coeff(i) - b.coeff(i));
    return TruncatedSeries(a.owner(), n, std::move(cs));
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_owners(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<AlgebraElement> cs(static_cast<std::size_t>(n) + 1,
                                   AlgebraElement::zero(a.owner()));
    for (int i = 0; i <= n; ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (int j = 0; i + j <= n; ++j)
            cs[static_cast<std::size_t>(i + j)] =
                cs[static_cast<std::size_t>(i + j)] + a.coeff(i) * b.coeff(j);
    }
    return TruncatedSeries(a.owner(), n, std::move(cs));
}

TruncatedSeries TruncatedSeries::operator-() const {
    std::vector<AlgebraElement> cs;
    cs.reserve(coeffs_.size());
    for (const AlgebraElement& c : coeffs_) cs.push_back(-c);
    return TruncatedSeries(owner_, order_, std::move(cs));
}

TruncatedSeries operator*(const AlgebraElement& s, const TruncatedSeries& u) {
    std::vector<AlgebraElement> cs;
    cs.reserve(static_cast<std::size_t>(u.order()) + 1);
    for (int i = 0; i <= u.order(); ++i) cs.push_back(s * u.coeff(i));
    return TruncatedSeries(u.owner(), u.order(), std::move(cs));
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_owners(a, b);
    if (a.order() != b.order()) return false;
    for (int i = 0; i <= a.order(); ++i)
        if (!(a.coeff(i) == b.coeff(i))) return false;
    return true;
}

TruncatedSeries TruncatedSeries::derivative_wrt_t() const {
    if (order_ == 0) return TruncatedSeries(owner_, 0);
    std::vector<AlgebraElement> cs;
    cs.reserve(static_cast<std::size_t>(order_));
    for (int i = 1; i <= order_; ++i)
        cs.push_back(coeffs_[static_cast<std::size_t>(i)].mul_int(i));
    return TruncatedSeries(owner_, order_ - 1, std::move(cs));
}

TruncatedSeries TruncatedSeries::truncate(int new_order) const {
    if (new_order > order_) throw precondition_error("cannot truncate upward");
    std::vector<AlgebraElement> cs(coeffs_.begin(),
                                   coeffs_.begin() + static_cast<std::ptrdiff_t>(new_order) + 1);
    return TruncatedSeries(owner_, new_order, std::move(cs));
}

TruncatedSeries TruncatedSeries::ramify(int m) const {
    if (m < 1) throw precondition_error("ramification factor must be positive");
    const int n = m * order_;
    std::vector<AlgebraElement> cs(static_cast<std::size_t>(n) + 1,
                                   AlgebraElement::zero(owner_));
    for (int i = 0; i <= order_; ++i) cs[static_cast<std::size_t>(m * i)] = coeffs_[static_cast<std::size_t>(i)];
    return TruncatedSeries(owner_, n, std::move(cs));
}

// w <- w(2 - uw) doubles the number of correct coefficients each pass
TruncatedSeries TruncatedSeries::inverse() const {
    const QuasiInverse qi = quasi_inverse(coeffs_[0]);
    if (!(coeffs_[0] * qi.xstar).is_one())
        throw precondition_error("constant term is not invertible");
    TruncatedSeries w = constant(owner_, qi.xstar, order_);
    const TruncatedSeries two = constant(owner_, AlgebraElement::one(owner_).mul_int(2), order_);
    int correct = 1;
    while (correct <= order_) {
        w = w * (two - *this * w);
        correct *= 2;
    }
    if (!ring_ops<TruncatedSeries>::is_one(*this * w))
        throw internal_error("series inverse failed to converge");
    return w;
}

std::string TruncatedSeries::render(const std::string& var) const {
    const ElemPoly p{std::vector<AlgebraElement>(coeffs_)};
    std::string out = render_poly(
        p, var, [](const AlgebraElement& c) { return c.render_text(); }, true);
    out += " + O(" + var + "^" + std::to_string(order_ + 1) + ")";
    return out;
}

TruncatedSeries substitute(const UniPoly<TruncatedSeries>& G, const TruncatedSeries& y) {
    if (G.is_zero()) return ring_ops<TruncatedSeries>::zero_like(y);
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (!G[i].owner().same(y.owner()))
            throw precondition_error("series live over different algebras");
        if (G[i].order() != y.order())
            throw precondition_error("series orders differ");
    }
    return evaluate(G, y);
}

}  // namespace dyneval
