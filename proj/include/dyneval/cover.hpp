#pragma once

// The dynamic-evaluation engine. A CoverTree records the case analysis a
// computation performed: split edges where an algebra decomposed into a
// product, and extend edges where a root was adjoined. Root solving works
// against a tree leaf and grows the tree underneath it as it decides things.

#include "dyneval/bezout.hpp"
#include "dyneval/tower.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dyneval {

struct CoverNode {
    SeparableTower algebra;
    RestrictionMap from_parent;  // parent algebra -> this algebra; identity at the root
    std::string provenance;
    std::vector<CoverNode> children;

    bool is_leaf() const { return children.empty(); }
};

// Leaves are addressed by root-to-leaf child-index paths.
using TreePath = std::vector<int>;

class CoverTree {
public:
    explicit CoverTree(SeparableTower root_algebra);

    const CoverNode& root() const { return root_; }
    const CoverNode& node_at(const TreePath& path) const;
    const SeparableTower& algebra_at(const TreePath& path) const;

    // nontrivial leaves in depth-first, left-to-right order
    std::vector<TreePath> nontrivial_leaves() const;

    // all paths strictly below `from` that are nontrivial leaves
    std::vector<TreePath> nontrivial_leaves_below(const TreePath& from) const;

    void split_leaf(const TreePath& leaf, const SplitCover& cover);
    void extend_leaf(const TreePath& leaf, SeparableTower extended, std::string provenance);

    // composition of edge maps from `ancestor` down to `descendant`
    RestrictionMap map_between(const TreePath& ancestor, const TreePath& descendant) const;
    RestrictionMap map_to(const TreePath& path) const;  // from the root

    // the leaf decomposition as one flat cover of the root algebra
    SplitCover as_cover() const;

    std::string render() const;  // indented text

private:
    CoverNode& node_mut(const TreePath& path);
    CoverNode root_;
};

// restriction of a root-algebra element along a root-to-leaf path
AlgebraElement restrict_along(const CoverTree& tree, const AlgebraElement& x, const TreePath& path);

// Fresh generator names, deterministic per top-level computation: a1, a2, ...
// skipping names the target tower already uses.
class NameSupply {
public:
    std::string fresh(const SeparableTower& A);

private:
    long next_ = 1;
};

struct LeafWitness {
    TreePath leaf;
    AlgebraElement witness;
};

// Refine/extend the tree below `leaf` until the monic nonconstant f (given
// over the leaf's algebra) has a root on every nontrivial leaf beneath.
// Returns the witnesses in leaf order.
std::vector<LeafWitness> solve_into(CoverTree& tree, const TreePath& leaf, const ElemPoly& f,
                                    NameSupply& names);

struct SolveResult {
    CoverTree tree;
    std::vector<LeafWitness> witnesses;
};

SolveResult solve_monic(const SeparableTower& A, const ElemPoly& f);

struct RootMult {
    AlgebraElement root;
    int multiplicity = 0;
};

struct LeafRoots {
    TreePath leaf;
    std::vector<RootMult> roots;  // discovery order; multiplicities sum to deg f
};

// Full linear factorization below a leaf: on every nontrivial leaf beneath,
// f factors exactly into (X - root)^multiplicity terms.
std::vector<LeafRoots> factor_into(CoverTree& tree, const TreePath& leaf, const ElemPoly& f,
                                   NameSupply& names);

struct FactorResult {
    CoverTree tree;
    std::vector<LeafRoots> report;
};

FactorResult factor_linear(const SeparableTower& A, const ElemPoly& f);

}  // namespace dyneval
