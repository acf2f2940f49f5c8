#include "dyneval/split_value.hpp"

#include <algorithm>

namespace dyneval {

SplitValue::SplitValue(SeparableTower owner, std::vector<SplitTerm> terms)
    : owner_(std::move(owner)) {
    for (const SplitTerm& t : terms)
        if (!t.e.owner().same(owner_))
            throw precondition_error("idempotent is not over the owner algebra");
    if (owner_.is_trivial()) {
        terms_.clear();
        return;
    }
    AlgebraElement sum = AlgebraElement::zero(owner_);
    for (const SplitTerm& t : terms) {
        if (!(t.e * t.e == t.e)) throw precondition_error("term is not an idempotent");
        sum = sum + t.e;
    }
    if (!sum.is_one()) throw precondition_error("idempotents do not sum to 1");
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (!(terms[i].e * terms[j].e).is_zero())
                throw precondition_error("idempotents are not orthogonal");

    // canonicalize: merge payload duplicates, drop zero idempotents, sort
    std::sort(terms.begin(), terms.end(),
              [](const SplitTerm& a, const SplitTerm& b) { return a.payload < b.payload; });
    for (SplitTerm& t : terms) {
        if (!terms_.empty() && terms_.back().payload == t.payload) {
            terms_.back().e = terms_.back().e + t.e;
            continue;
        }
        terms_.push_back(std::move(t));
    }
    std::erase_if(terms_, [](const SplitTerm& t) { return t.e.is_zero(); });
}

SplitValue SplitValue::constant(const SeparableTower& owner, long payload) {
    if (owner.is_trivial()) return SplitValue(owner, {});
    return SplitValue(owner, {SplitTerm{AlgebraElement::one(owner), payload}});
}

long SplitValue::constant_payload() const {
    if (!is_constant()) throw precondition_error("value differs between components");
    return terms_[0].payload;
}

SplitValue SplitValue::restrict_along(const RestrictionMap& map) const {
    if (!map.from().same(owner_)) throw precondition_error("map does not start at the owner");
    std::vector<SplitTerm> out;
    out.reserve(terms_.size());
    for (const SplitTerm& t : terms_) out.push_back(SplitTerm{map.apply(t.e), t.payload});
    return SplitValue(map.to(), std::move(out));
}

std::string SplitValue::render() const {
    if (terms_.empty()) return "0 (zero ring)";
    std::string out;
    for (const SplitTerm& t : terms_) {
        if (!out.empty()) out += " + ";
        out += t.e.render() + "*<" + std::to_string(t.payload) + ">";
    }
    return out;
}

bool sv_eq(const SplitValue& u, const SplitValue& v) {
    if (!u.owner().same(v.owner())) throw precondition_error("values live over different algebras");
    for (const SplitTerm& a : u.terms())
        for (const SplitTerm& b : v.terms())
            if (a.payload != b.payload && !(a.e * b.e).is_zero()) return false;
    return true;
}

SplitValue sv_amalgamate(const SplitCover& cover, const std::vector<long>& payloads) {
    const std::vector<const CoverBranch*> nt = [&] {
        std::vector<const CoverBranch*> v;
        for (const CoverBranch& br : cover.branches)
            if (!br.component.is_trivial()) v.push_back(&br);
        return v;
    }();
    if (nt.size() != payloads.size())
        throw precondition_error("one payload per nontrivial branch required");
    if (cover.parent.is_trivial()) return SplitValue(cover.parent, {});

    // indicator of branch i: amalgamate 1 there, 0 elsewhere
    std::vector<SplitTerm> terms;
    terms.reserve(nt.size());
    for (std::size_t i = 0; i < nt.size(); ++i) {
        std::vector<AlgebraElement> parts;
        parts.reserve(nt.size());
        for (std::size_t j = 0; j < nt.size(); ++j)
            parts.push_back(i == j ? AlgebraElement::one(nt[j]->component)
                                   : AlgebraElement::zero(nt[j]->component));
        terms.push_back(SplitTerm{amalgamate(cover, parts), payloads[i]});
    }
    return SplitValue(cover.parent, std::move(terms));
}

}  // namespace dyneval
