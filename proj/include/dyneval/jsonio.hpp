#pragma once

// JSON documents for machine-readable output. Every document is
// self-contained: towers travel with their level data, so a verifier can
// rebuild the algebras and re-check each claimed identity by plain
// arithmetic, with no access to the run that produced the document.
// Rationals are always "p/q" strings, never floats.

#include "dyneval/bezout.hpp"
#include "dyneval/cover.hpp"
#include "dyneval/puiseux.hpp"
#include "dyneval/tower.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace dyneval {

using ordered_json = nlohmann::ordered_json;

ordered_json tower_to_json(const SeparableTower& A);
SeparableTower tower_from_json(const ordered_json& j);

ordered_json elem_to_json(const AlgebraElement& x);
AlgebraElement elem_from_json(const ordered_json& j, const SeparableTower& owner);

ordered_json poly_to_json(const ElemPoly& p);
ElemPoly poly_from_json(const ordered_json& j, const SeparableTower& owner);

// document builders, one per CLI command
ordered_json qinv_document(const AlgebraElement& x, const QuasiInverse& qi);
ordered_json gcd_document(const SeparableTower& A, const ElemPoly& a, const ElemPoly& b,
                          const GcdSplit& result);
ordered_json sqfree_document(const SeparableTower& A, const ElemPoly& f,
                             const SeparableSplit& result);
ordered_json factor_document(const SeparableTower& A, const ElemPoly& f,
                             const FactorResult& result);
ordered_json puiseux_document(const CurveInput& curve, const PuiseuxResult& result);

struct VerifyCheck {
    std::string name;
    bool ok = false;
};

// Re-check every identity a document claims. Unknown or malformed documents
// throw parse_error; a failed identity is reported, not thrown.
std::vector<VerifyCheck> verify_document(const ordered_json& doc);

}  // namespace dyneval
