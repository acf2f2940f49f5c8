#pragma once

// Text grammar for polynomial expressions and tower specs.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | atom ('^' nat)?
//   atom   := rational | ident | '(' expr ')'
//
// Rationals are single tokens ("13/36"); there is no division operator.
// Tower specs are comma-separated "name:minpoly" pairs, each minpoly written
// in its own generator's name over the previously declared ones.

#include "dyneval/tower.hpp"
#include "dyneval/upoly.hpp"

#include <string>

namespace dyneval {

using BiElemPoly = UniPoly<ElemPoly>;

// element of A; variables are A's generator names
AlgebraElement eval_element(const std::string& src, const SeparableTower& A);

// polynomial over A in the variable `var` (plus generator names)
ElemPoly eval_poly(const std::string& src, const SeparableTower& A, const std::string& var);

// bivariate: outer variable `outer` (Y), inner variable `inner` (X)
BiElemPoly eval_bipoly(const std::string& src, const SeparableTower& A, const std::string& outer,
                       const std::string& inner);

SeparableTower parse_tower(const std::string& spec);

// canonical printers matching what eval_* parses
std::string render_elem_poly(const ElemPoly& p, const std::string& var);
std::string render_bi_elem_poly(const BiElemPoly& G, const std::string& outer,
                                const std::string& inner);

}  // namespace dyneval
