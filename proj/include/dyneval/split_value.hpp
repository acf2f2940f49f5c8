#pragma once

// Formal sums sum(e_i * b_i) of orthogonal idempotents against discrete
// payloads: the value of a discrete quantity that genuinely differs between
// components of an algebra. Payloads are plain integers; a tag enum fits in
// one.

#include "dyneval/tower.hpp"

#include <string>
#include <vector>

namespace dyneval {

struct SplitTerm {
    AlgebraElement e;
    long payload = 0;
};

class SplitValue {
public:
    // validates the fundamental system, then canonicalizes: terms with equal
    // payloads merge, terms with zero idempotent drop, order is by payload
    SplitValue(SeparableTower owner, std::vector<SplitTerm> terms);

    static SplitValue constant(const SeparableTower& owner, long payload);

    const SeparableTower& owner() const { return owner_; }
    const std::vector<SplitTerm>& terms() const { return terms_; }

    // the payload when the value is constant across all components
    bool is_constant() const { return terms_.size() == 1 && terms_[0].e.is_one(); }
    long constant_payload() const;

    SplitValue restrict_along(const RestrictionMap& map) const;

    std::string render() const;

private:
    SeparableTower owner_;
    std::vector<SplitTerm> terms_;
};

// equality test: u = v iff e_i * d_j = 0 whenever the payloads differ
bool sv_eq(const SplitValue& u, const SplitValue& v);

// Assemble per-branch constants over a cover into one SplitValue on the
// parent, using the branch indicator idempotents. One payload per nontrivial
// branch, in branch order.
SplitValue sv_amalgamate(const SplitCover& cover, const std::vector<long>& payloads);

}  // namespace dyneval
