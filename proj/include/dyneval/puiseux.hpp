#pragma once

// Newton-Puiseux expansion of a monic plane-curve polynomial G(X, Y) over the
// dynamic closure of Q: polygon recursion with root finding over growing
// towers, then quadratic Newton lifting of the separated branches. Output is
// exact modulo T^{N+1} after the ramification X = T^m.

#include "dyneval/cover.hpp"
#include "dyneval/series.hpp"
#include "dyneval/split_value.hpp"
#include "dyneval/tower.hpp"

#include <string>
#include <vector>

namespace dyneval {

// bivariate input over Q: outer index = power of Y, inner = power of X
struct CurveInput {
    BiPoly G;
    int order = 6;  // N: results are stated modulo T^{N+1}
};

struct PolygonEdge {
    long p = 0;  // slope p/q in lowest terms, q >= 1; the Puiseux exponent
    long q = 1;
    int length = 0;  // horizontal span: number of roots with this exponent
};

// Lower-hull edges of {(i, val_X coeff_i)}, slopes nonincreasing. A curve
// whose every non-leading coefficient vanishes has no polygon to read:
// that input is rejected with "increase input order".
std::vector<PolygonEdge> newton_polygon(const CurveInput& curve);

struct PuiseuxBranch {
    TruncatedSeries series;  // alpha in T, order N
    int copies = 1;          // multiplicity this series stands for
    bool separated = true;   // false: a cluster that did not separate by order N
};

struct PuiseuxLeaf {
    TreePath leaf;
    SeparableTower algebra;
    long m = 1;  // ramification index on this leaf
    std::vector<PuiseuxBranch> branches;  // canonical order; copies sum to deg_Y G
};

struct PuiseuxResult {
    CoverTree tree;
    int order = 0;
    std::vector<PuiseuxLeaf> leaves;

    // Ramification as a formal sum over the root algebra. Only available
    // when every leaf is a plain quotient of the root (no extensions), which
    // is when indicator idempotents exist; otherwise this throws and the
    // per-leaf m values above are the data.
    SplitValue m_as_split_value() const;
};

PuiseuxResult newton_puiseux(const CurveInput& curve);

}  // namespace dyneval
