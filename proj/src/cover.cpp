#include "dyneval/cover.hpp"

#include <algorithm>
#include <utility>

namespace dyneval {

// ---- cover tree ------------------------------------------------------------

CoverTree::CoverTree(SeparableTower root_algebra) {
    root_.from_parent = RestrictionMap::identity(root_algebra);
    root_.algebra = std::move(root_algebra);
}

const CoverNode& CoverTree::node_at(const TreePath& path) const {
    const CoverNode* cur = &root_;
    for (const int i : path) {
        if (i < 0 || static_cast<std::size_t>(i) >= cur->children.size())
            throw internal_error("path leaves the tree");
        cur = &cur->children[static_cast<std::size_t>(i)];
    }
    return *cur;
}

CoverNode& CoverTree::node_mut(const TreePath& path) {
    return const_cast<CoverNode&>(node_at(path));
}

const SeparableTower& CoverTree::algebra_at(const TreePath& path) const {
    return node_at(path).algebra;
}

namespace {

void collect_leaves(const CoverNode& node, TreePath& prefix, bool nontrivial_only,
                    std::vector<TreePath>& out) {
    if (node.is_leaf()) {
        if (!nontrivial_only || !node.algebra.is_trivial()) out.push_back(prefix);
        return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        prefix.push_back(static_cast<int>(i));
        collect_leaves(node.children[i], prefix, nontrivial_only, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<TreePath> CoverTree::nontrivial_leaves() const {
    std::vector<TreePath> out;
    TreePath prefix;
    collect_leaves(root_, prefix, true, out);
    return out;
}

std::vector<TreePath> CoverTree::nontrivial_leaves_below(const TreePath& from) const {
    const CoverNode& top = node_at(from);
    std::vector<TreePath> out;
    for (std::size_t i = 0; i < top.children.size(); ++i) {
        TreePath prefix = from;
        prefix.push_back(static_cast<int>(i));
        collect_leaves(top.children[i], prefix, true, out);
    }
    return out;
}

void CoverTree::split_leaf(const TreePath& leaf, const SplitCover& cover) {
    CoverNode& node = node_mut(leaf);
    if (!node.is_leaf()) throw internal_error("node is already split");
    if (!cover.parent.same(node.algebra))
        throw precondition_error("cover does not split this leaf");
    if (cover.branches.empty()) throw precondition_error("cannot graft an empty cover");
    node.children.reserve(cover.branches.size());
    for (const CoverBranch& br : cover.branches) {
        CoverNode child;
        child.algebra = br.component;
        child.from_parent = br.restrict;
        child.provenance = cover.provenance;
        node.children.push_back(std::move(child));
    }
}

void CoverTree::extend_leaf(const TreePath& leaf, SeparableTower extended,
                            std::string provenance) {
    CoverNode& node = node_mut(leaf);
    if (!node.is_leaf()) throw internal_error("node is already split");
    if (node.algebra.is_trivial()) throw precondition_error("cannot extend the zero ring");
    if (!extended.subtower(node.algebra.depth()).same(node.algebra))
        throw precondition_error("extension does not sit above this leaf");
    std::vector<AlgebraElement> images;
    images.reserve(static_cast<std::size_t>(node.algebra.depth()));
    for (int k = 1; k <= node.algebra.depth(); ++k)
        images.push_back(AlgebraElement::generator(extended, k));
    CoverNode child;
    child.from_parent = RestrictionMap(node.algebra, extended, std::move(images));
    child.algebra = std::move(extended);
    child.provenance = std::move(provenance);
    node.children.push_back(std::move(child));
}

RestrictionMap CoverTree::map_between(const TreePath& ancestor, const TreePath& descendant) const {
    if (ancestor.size() > descendant.size() ||
        !std::equal(ancestor.begin(), ancestor.end(), descendant.begin()))
        throw internal_error("paths are not nested");
    const CoverNode* cur = &node_at(ancestor);
    RestrictionMap acc = RestrictionMap::identity(cur->algebra);
    for (std::size_t step = ancestor.size(); step < descendant.size(); ++step) {
        cur = &cur->children.at(static_cast<std::size_t>(descendant[step]));
        acc = acc.then(cur->from_parent);
    }
    return acc;
}

RestrictionMap CoverTree::map_to(const TreePath& path) const {
    return map_between(TreePath{}, path);
}

SplitCover CoverTree::as_cover() const {
    SplitCover out;
    out.parent = root_.algebra;
    out.provenance = "case tree";
    std::vector<TreePath> leaves;
    TreePath prefix;
    collect_leaves(root_, prefix, false, leaves);
    out.branches.reserve(leaves.size());
    for (const TreePath& p : leaves)
        out.branches.push_back(CoverBranch{algebra_at(p), map_to(p)});
    return out;
}

namespace {

void render_node(const CoverNode& node, int depth, std::string& out) {
    if (!out.empty()) out += "\n";
    out += std::string(static_cast<std::size_t>(2 * depth), ' ');
    out += node.algebra.render();
    if (depth > 0 && !node.provenance.empty()) out += "  (" + node.provenance + ")";
    for (const CoverNode& c : node.children) render_node(c, depth + 1, out);
}

}  // namespace

std::string CoverTree::render() const {
    std::string out;
    render_node(root_, 0, out);
    return out;
}

AlgebraElement restrict_along(const CoverTree& tree, const AlgebraElement& x,
                              const TreePath& path) {
    return tree.map_to(path).apply(x);
}

std::string NameSupply::fresh(const SeparableTower& A) {
    while (true) {
        std::string candidate = "a" + std::to_string(next_++);
        if (!A.has_generator(candidate)) return candidate;
    }
}

// ---- root search ----------------------------------------------------------------

namespace {

// positive divisors found by capped trial division; for huge inputs the list
// is deliberately partial, which only makes the rational-root probe weaker
std::vector<mpz_class> divisors_capped(const mpz_class& n) {
    std::vector<mpz_class> out;
    mpz_class d = 1;
    long iter = 0;
    while (iter < 100000 && d * d <= n) {
        if (n % d == 0) {
            out.push_back(d);
            mpz_class co = n / d;
            out.push_back(std::move(co));
        }
        ++d;
        ++iter;
    }
    return out;
}

std::optional<RatPoly> as_rational_poly(const ElemPoly& p) {
    std::vector<BigRational> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto r = p[i].as_rational();
        if (!r) return std::nullopt;
        out.push_back(std::move(*r));
    }
    return RatPoly(std::move(out));
}

// candidate rational roots of a monic rational polynomial with nonzero
// constant term, cheapest plausible values first
std::vector<BigRational> rational_candidates(const RatPoly& h) {
    mpz_class den_lcm = 1;
    for (std::size_t i = 0; i < h.size(); ++i) den_lcm = lcm(den_lcm, h[i].den());
    const BigRational scaled = h[0] * BigRational(mpq_class(den_lcm));
    mpz_class num = abs(scaled.num());
    const std::vector<mpz_class> ps = divisors_capped(num);
    const std::vector<mpz_class> qs = divisors_capped(den_lcm);
    std::vector<BigRational> cands;
    cands.reserve(2 * ps.size() * qs.size());
    for (const mpz_class& p : ps)
        for (const mpz_class& q : qs) {
            BigRational v{mpq_class(p, q)};
            cands.push_back(v);
            cands.push_back(-v);
        }
    auto abs_of = [](const BigRational& v) { return v.sign() < 0 ? -v : v; };
    std::sort(cands.begin(), cands.end(), [&](const BigRational& a, const BigRational& b) {
        const int c = abs_of(a).compare(abs_of(b));
        if (c != 0) return c < 0;
        return a.sign() > b.sign();
    });
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const BigRational& a, const BigRational& b) { return a == b; }),
                cands.end());
    return cands;
}

// root of the monic separable h over the leaf algebra, by trying cheap
// witnesses before extending the tower
LeafWitness solve_separable(CoverTree& tree, const TreePath& path, const ElemPoly& h,
                            NameSupply& names) {
    const SeparableTower B = tree.algebra_at(path);
    const int deg = static_cast<int>(h.size()) - 1;
    if (deg == 1) return LeafWitness{path, -h[0]};

    if (h[0].is_zero()) return LeafWitness{path, AlgebraElement::zero(B)};

    if (auto hr = as_rational_poly(h)) {
        for (const BigRational& cand : rational_candidates(*hr))
            if (evaluate(*hr, cand).is_zero())
                return LeafWitness{path, AlgebraElement::from_rational(B, cand)};
    }

    for (int k = 1; k <= B.depth(); ++k) {
        const AlgebraElement g = AlgebraElement::generator(B, k);
        if (evaluate(h, g).is_zero()) return LeafWitness{path, g};
        if (evaluate(h, -g).is_zero()) return LeafWitness{path, -g};
    }

    // no cheap root: depress the polynomial (kill the subleading term) and
    // adjoin a root of the result
    const AlgebraElement t =
        h[static_cast<std::size_t>(deg) - 1] * AlgebraElement::from_rational(B, BigRational(-1, deg));
    const ElemPoly shift(std::vector<AlgebraElement>{t, AlgebraElement::one(B)});
    const ElemPoly depressed = evaluate_mapped(
        h, shift, [](const AlgebraElement& c) { return ElemPoly::constant(c); });
    const std::string name = names.fresh(B);
    SeparableTower ext = adjoin_root(B, name, depressed);
    tree.extend_leaf(path, ext, "adjoined " + name);
    TreePath deeper = path;
    deeper.push_back(static_cast<int>(tree.node_at(path).children.size()) - 1);
    const RestrictionMap& incl = tree.node_at(deeper).from_parent;
    const AlgebraElement witness =
        AlgebraElement::generator(ext, ext.depth()) + incl.apply(t);
    if (!evaluate_mapped(h, witness, [&](const AlgebraElement& c) { return incl.apply(c); })
             .is_zero())
        throw internal_error("adjoined generator is not a root");
    return LeafWitness{deeper, witness};
}

}  // namespace

std::vector<LeafWitness> solve_into(CoverTree& tree, const TreePath& leaf, const ElemPoly& f,
                                    NameSupply& names) {
    const SeparableTower A = tree.algebra_at(leaf);
    if (!tree.node_at(leaf).is_leaf()) throw precondition_error("not a leaf");
    if (A.is_trivial()) return {};
    if (!f.is_monic()) throw precondition_error("polynomial must be monic");
    if (f.size() < 2) throw precondition_error("polynomial must be nonconstant");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!f[i].owner().same(A))
            throw precondition_error("polynomial is not over the leaf algebra");

    SeparableSplit ss = separable_associate(A, f);
    std::vector<std::pair<TreePath, ElemPoly>> jobs;
    if (ss.cover.branches.size() == 1 && ss.cover.branches[0].restrict.is_identity()) {
        jobs.emplace_back(leaf, ss.parts[0].h);
    } else {
        tree.split_leaf(leaf, ss.cover);
        for (std::size_t i = 0; i < ss.cover.branches.size(); ++i) {
            if (ss.cover.branches[i].component.is_trivial()) continue;
            TreePath p = leaf;
            p.push_back(static_cast<int>(i));
            jobs.emplace_back(std::move(p), ss.parts[i].h);
        }
    }

    std::vector<LeafWitness> out;
    out.reserve(jobs.size());
    for (const auto& [path, h] : jobs) out.push_back(solve_separable(tree, path, h, names));
    return out;
}

SolveResult solve_monic(const SeparableTower& A, const ElemPoly& f) {
    SolveResult out{CoverTree(A), {}};
    if (A.is_trivial()) return out;
    NameSupply names;
    out.witnesses = solve_into(out.tree, {}, f, names);
    return out;
}

// ---- full linear factorization ----------------------------------------------------

std::vector<LeafRoots> factor_into(CoverTree& tree, const TreePath& leaf, const ElemPoly& f,
                                   NameSupply& names) {
    const SeparableTower A = tree.algebra_at(leaf);
    if (!tree.node_at(leaf).is_leaf()) throw precondition_error("not a leaf");
    if (A.is_trivial()) return {};
    if (!f.is_monic()) throw precondition_error("polynomial must be monic");
    if (f.size() < 2) throw precondition_error("polynomial must be nonconstant");

    struct Job {
        TreePath path;
        ElemPoly rem;
        std::vector<RootMult> acc;
    };
    std::vector<Job> stack;
    stack.push_back(Job{leaf, f, {}});
    std::vector<LeafRoots> out;

    while (!stack.empty()) {
        Job job = std::move(stack.back());
        stack.pop_back();
        const SeparableTower B = tree.algebra_at(job.path);
        if (B.is_trivial()) continue;
        if (job.rem.size() == 1) {
            out.push_back(LeafRoots{std::move(job.path), std::move(job.acc)});
            continue;
        }
        const std::vector<LeafWitness> wits = solve_into(tree, job.path, job.rem, names);
        std::vector<Job> next;
        next.reserve(wits.size());
        for (const LeafWitness& lw : wits) {
            const RestrictionMap m = tree.map_between(job.path, lw.leaf);
            ElemPoly rem = m.apply_poly(job.rem);
            std::vector<RootMult> acc;
            acc.reserve(job.acc.size() + 1);
            for (const RootMult& rm : job.acc)
                acc.push_back(RootMult{m.apply(rm.root), rm.multiplicity});
            const ElemPoly lin(std::vector<AlgebraElement>{
                -lw.witness, AlgebraElement::one(lw.witness.owner())});
            int mult = 0;
            while (true) {
                auto [q, r] = monic_divmod(rem, lin);
                if (!r.is_zero()) break;
                rem = std::move(q);
                ++mult;
            }
            if (mult == 0) throw internal_error("witness is not a root of the remainder");
            bool merged = false;
            for (RootMult& rm : acc)
                if (rm.root == lw.witness) {
                    rm.multiplicity += mult;
                    merged = true;
                    break;
                }
            if (!merged) acc.push_back(RootMult{lw.witness, mult});
            next.push_back(Job{lw.leaf, std::move(rem), std::move(acc)});
        }
        for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(std::move(*it));
    }
    return out;
}

FactorResult factor_linear(const SeparableTower& A, const ElemPoly& f) {
    FactorResult out{CoverTree(A), {}};
    if (A.is_trivial()) return out;
    NameSupply names;
    out.report = factor_into(out.tree, {}, f, names);
    return out;
}

}  // namespace dyneval
