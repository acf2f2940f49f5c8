#pragma once

// Gcd of univariate polynomials over a tower algebra. The coefficient ring is
// only regular, not a field, so the Euclidean chain asks whether each leading
// coefficient is invertible and splits the algebra when the answer differs
// between components. Results come back per branch with full certificates.

#include "dyneval/tower.hpp"

#include <vector>

namespace dyneval {

struct BezoutCertificate {
    ElemPoly g;   // monic gcd on this branch (zero polynomial for gcd(0,0))
    ElemPoly a1;  // a = a1 * g
    ElemPoly b1;  // b = b1 * g
    ElemPoly c;   // c * a1 + d * b1 = 1
    ElemPoly d;
};

struct GcdSplit {
    SplitCover cover;
    // parallel to cover.branches; trivial branches carry empty certificates
    std::vector<BezoutCertificate> certs;
};

// Extended Euclid over A[X] with dynamic splitting. The tower argument is
// explicit because either polynomial may be zero and carry no owner.
GcdSplit gcd_split(const SeparableTower& A, const ElemPoly& a, const ElemPoly& b);

struct SeparableAssociate {
    ElemPoly h;  // monic, separable, same roots as f
    ElemPoly g;  // f = h * g
    ElemPoly q;  // f' = q * g
    ElemPoly r;  // r * h + s * q = 1
    ElemPoly s;
};

struct SeparableSplit {
    SplitCover cover;
    std::vector<SeparableAssociate> parts;  // parallel to cover.branches
};

// Strip repeated factors from a monic f: h = f / gcd(f, f'), with the
// certificate quintuple per branch.
SeparableSplit separable_associate(const SeparableTower& A, const ElemPoly& f);

}  // namespace dyneval
