#include "dyneval/puiseux.hpp"

#include "dyneval/bezout.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

namespace dyneval {

namespace {

// bivariate working form: outer index = power of Y, inner = power of sigma
using BiElem = UniPoly<ElemPoly>;

struct Pt {
    long i = 0;
    long v = 0;
};

// lower convex hull of points with strictly increasing i; collinear interior
// points fold into their edge
std::vector<std::pair<Pt, Pt>> lower_hull(const std::vector<Pt>& pts) {
    std::vector<Pt> h;
    for (const Pt& p : pts) {
        while (h.size() >= 2) {
            const Pt& a = h[h.size() - 2];
            const Pt& b = h.back();
            const long long cr = static_cast<long long>(b.i - a.i) * (p.v - a.v) -
                                 static_cast<long long>(b.v - a.v) * (p.i - a.i);
            if (cr <= 0)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    std::vector<std::pair<Pt, Pt>> edges;
    for (std::size_t k = 0; k + 1 < h.size(); ++k) edges.emplace_back(h[k], h[k + 1]);
    return edges;
}

ElemPoly ramify_poly(const ElemPoly& p, long q, const SeparableTower& A) {
    if (p.is_zero() || q == 1) return p;
    std::vector<AlgebraElement> cs(static_cast<std::size_t>(q) * (p.size() - 1) + 1,
                                   AlgebraElement::zero(A));
    for (std::size_t i = 0; i < p.size(); ++i) cs[static_cast<std::size_t>(q) * i] = p[i];
    return ElemPoly(std::move(cs));
}

BiElem apply_bi(const RestrictionMap& m, const BiElem& H) {
    std::vector<ElemPoly> cs;
    cs.reserve(H.size());
    for (std::size_t i = 0; i < H.size(); ++i) cs.push_back(m.apply_poly(H[i]));
    return BiElem(std::move(cs));
}

// A work item: over its leaf, the roots this item stands for are
// pre(sigma) + sigma^E * y for the roots y of H(sigma, Y) with val(y) > 0
// (val(y) >= 0 at the very top). X = sigma^Q throughout.
struct Task {
    TreePath path;
    BiElem H;
    ElemPoly pre;
    long Q = 1;
    long E = 0;
    int count = 0;   // how many roots, with multiplicity
    int rounds = 0;  // polygon recursion depth, for the sanity bound
    bool top = false;
    bool edge = false;  // edge stage: the fields below are meaningful
    long p = 0, q = 1;  // edge slope p/q in lowest terms
    long iL = 0, vL = 0, iR = 0;
};

// A settled cluster of roots. Liftable records still carry their local
// equation for the final Newton lift; the rest are exact as they stand.
struct Record {
    TreePath path;
    bool liftable = false;
    BiElem H;  // liftable only
    long Q = 1;
    ElemPoly pre;
    long E = 0;  // liftable only: scale of the remaining correction
    int copies = 1;
    bool separated = true;
};

struct Expander {
    CoverTree& tree;
    NameSupply names;
    std::vector<Record> records;
    std::vector<Task> stack;
    const int N;
    const int n;

    Expander(CoverTree& t, int order, int degree) : tree(t), N(order), n(degree) {}

    void run() {
        while (!stack.empty()) {
            Task t = std::move(stack.back());
            stack.pop_back();
            const CoverNode& node = tree.node_at(t.path);
            if (!node.is_leaf()) {
                // the leaf grew children since this task was queued: reroute
                const std::vector<TreePath> subs = tree.nontrivial_leaves_below(t.path);
                for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
                    const RestrictionMap m = tree.map_between(t.path, *it);
                    Task c = t;
                    c.path = *it;
                    c.H = apply_bi(m, t.H);
                    c.pre = m.apply_poly(t.pre);
                    stack.push_back(std::move(c));
                }
                continue;
            }
            if (node.algebra.is_trivial()) continue;
            if (t.edge)
                edge_pass(std::move(t));
            else
                expand(std::move(t));
        }
    }

    void expand(Task task) {
        if (task.rounds > N * n + n + 16) throw internal_error("expansion did not stabilize");
        const SeparableTower A = tree.algebra_at(task.path);
        BiElem H = std::move(task.H);
        if (H.is_zero()) throw internal_error("expansion polynomial vanished");

        // exact roots y = 0 peel off first
        std::size_t i0 = 0;
        while (i0 < H.size() && H[i0].is_zero()) ++i0;
        if (i0 > 0) {
            records.push_back(Record{task.path, false, BiElem(), task.Q, task.pre, 0,
                                     static_cast<int>(i0), i0 == 1});
            H = shift_down(H, i0);
            task.count -= static_cast<int>(i0);
        }
        if (H.size() == 1) {
            if (task.count != 0) throw internal_error("leftover roots after deflation");
            return;
        }

        // every remaining correction sits beyond the output horizon: stop
        if (!task.top && task.E >= static_cast<long>(N) * task.Q) {
            records.push_back(Record{task.path, false, BiElem(), task.Q, task.pre, 0, task.count,
                                     task.count == 1});
            return;
        }

        // pin each coefficient's sigma-valuation, splitting when undecided
        std::vector<long> vals(H.size(), -1);
        for (std::size_t i = 0; i < H.size(); ++i) {
            const ElemPoly& hi = H[i];
            if (hi.is_zero()) continue;
            for (std::size_t j = 0; j < hi.size(); ++j) {
                if (hi[j].is_zero()) continue;
                const InvertibleSplit is = is_invertible_split(hi[j]);
                if (is.cover.branches.size() == 1) {
                    if (!is.outcomes[0].invertible)
                        throw internal_error("nonzero coefficient tested as zero");
                    vals[i] = static_cast<long>(j);
                    break;
                }
                tree.split_leaf(task.path, is.cover);
                task.H = std::move(H);
                stack.push_back(std::move(task));  // reroute distributes it
                return;
            }
            if (vals[i] < 0) throw internal_error("coefficient valuation undecided");
        }

        std::vector<Pt> pts;
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i] >= 0) pts.push_back(Pt{static_cast<long>(i), vals[i]});

        long consumed = 0;
        std::vector<Task> children;
        for (const auto& [L, R] : lower_hull(pts)) {
            const long dp = L.v - R.v;
            const long di = R.i - L.i;
            if (dp < 0) continue;              // would mean val(y) < 0: not a root of ours
            if (dp == 0 && !task.top) continue;  // val(y) = 0 allowed only at the top
            consumed += di;
            const long g = std::gcd(dp, di);
            Task e;
            e.path = task.path;
            e.H = H;
            e.pre = task.pre;
            e.Q = task.Q;
            e.E = task.E;
            e.count = static_cast<int>(di);
            e.rounds = task.rounds;
            e.top = task.top;
            e.edge = true;
            e.p = dp / g;
            e.q = di / g;
            e.iL = L.i;
            e.vL = L.v;
            e.iR = R.i;
            children.push_back(std::move(e));
        }
        if (consumed != task.count) throw internal_error("polygon does not account for all roots");
        for (auto it = children.rbegin(); it != children.rend(); ++it)
            stack.push_back(std::move(*it));
    }

    void edge_pass(Task task) {
        const SeparableTower A = tree.algebra_at(task.path);
        const long Eedge = task.q * task.vL + task.p * task.iL;

        // substitute sigma -> sigma^q, y -> sigma^p * z and divide by sigma^Eedge
        std::vector<ElemPoly> h2;
        h2.reserve(task.H.size());
        for (std::size_t i = 0; i < task.H.size(); ++i) {
            const ElemPoly& hi = task.H[i];
            std::vector<AlgebraElement> cs;
            for (std::size_t j = 0; j < hi.size(); ++j) {
                if (hi[j].is_zero()) continue;
                const long exp = task.q * static_cast<long>(j) + task.p * static_cast<long>(i) - Eedge;
                if (exp < 0) throw internal_error("edge exponent went negative");
                if (static_cast<std::size_t>(exp) >= cs.size())
                    cs.resize(static_cast<std::size_t>(exp) + 1, AlgebraElement::zero(A));
                cs[static_cast<std::size_t>(exp)] = hi[j];
            }
            h2.push_back(ElemPoly(std::move(cs)));
        }
        const BiElem H2(std::move(h2));

        // the edge's characteristic polynomial: the sigma-constant layer
        std::vector<AlgebraElement> fib;
        fib.reserve(H2.size());
        for (std::size_t i = 0; i < H2.size(); ++i)
            fib.push_back(H2[i].size() > 0 ? H2[i][0] : AlgebraElement::zero(A));
        const ElemPoly phi{std::vector<AlgebraElement>(fib)};
        if (phi.is_zero() || static_cast<long>(phi.size()) - 1 != task.iR)
            throw internal_error("edge polynomial has the wrong degree");
        std::size_t low = 0;
        while (phi[low].is_zero()) ++low;
        if (static_cast<long>(low) != task.iL)
            throw internal_error("edge polynomial has the wrong co-degree");
        const ElemPoly psi = shift_down(phi, low);
        const QuasiInverse qinv = quasi_inverse(psi.lead());
        if (!(psi.lead() * qinv.xstar).is_one())
            throw internal_error("edge leading coefficient is not invertible");
        const ElemPoly phihat = qinv.xstar * psi;
        if (!phihat.is_monic()) throw internal_error("edge polynomial failed to normalize");

        const std::vector<LeafRoots> report = factor_into(tree, task.path, phihat, names);
        std::vector<Task> pushes;
        for (const LeafRoots& lr : report) {
            const RestrictionMap mp = tree.map_between(task.path, lr.leaf);
            const SeparableTower B = tree.algebra_at(lr.leaf);
            const BiElem H2r = apply_bi(mp, H2);
            const ElemPoly pre1 = ramify_poly(mp.apply_poly(task.pre), task.q, B);
            const long E3 = task.E * task.q + task.p;
            const long Q3 = task.Q * task.q;
            auto mk_task = [&](TreePath pathx, BiElem Hx, ElemPoly prex, int cnt) {
                Task t;
                t.path = std::move(pathx);
                t.H = std::move(Hx);
                t.pre = std::move(prex);
                t.Q = Q3;
                t.E = E3;
                t.count = cnt;
                t.rounds = task.rounds + 1;
                return t;
            };
            for (const RootMult& rm : lr.roots) {
                // recenter: z = root + y, val(y) > 0
                const BiElem shiftp(std::vector<ElemPoly>{
                    ElemPoly::constant(rm.root), ElemPoly::constant(AlgebraElement::one(B))});
                const BiElem H3 = evaluate_mapped(
                    H2r, shiftp, [](const ElemPoly& c) { return BiElem::constant(c); });
                const ElemPoly pre3 =
                    pre1 + shift_up(ElemPoly::constant(rm.root), static_cast<std::size_t>(E3));
                if (rm.multiplicity > 1) {
                    pushes.push_back(mk_task(lr.leaf, H3, pre3, rm.multiplicity));
                    continue;
                }
                // a simple root lifts directly once dH/dY(0,0) is invertible
                const AlgebraElement c = H3.size() > 1 && H3[1].size() > 0
                                             ? H3[1][0]
                                             : AlgebraElement::zero(B);
                const InvertibleSplit is = is_invertible_split(c);
                if (is.cover.branches.size() == 1) {
                    if (is.outcomes[0].invertible)
                        records.push_back(Record{lr.leaf, true, H3, Q3, pre3, E3, 1, true});
                    else
                        pushes.push_back(mk_task(lr.leaf, H3, pre3, 1));
                } else if (!tree.node_at(lr.leaf).is_leaf()) {
                    pushes.push_back(mk_task(lr.leaf, H3, pre3, 1));
                } else {
                    tree.split_leaf(lr.leaf, is.cover);
                    for (std::size_t bi = 0; bi < is.cover.branches.size(); ++bi) {
                        const CoverBranch& br = is.cover.branches[bi];
                        if (br.component.is_trivial()) continue;
                        TreePath cp = lr.leaf;
                        cp.push_back(static_cast<int>(bi));
                        BiElem H3r = apply_bi(br.restrict, H3);
                        ElemPoly pre3r = br.restrict.apply_poly(pre3);
                        if (is.outcomes[bi].invertible)
                            records.push_back(Record{std::move(cp), true, std::move(H3r), Q3,
                                                     std::move(pre3r), E3, 1, true});
                        else
                            pushes.push_back(
                                mk_task(std::move(cp), std::move(H3r), std::move(pre3r), 1));
                    }
                }
            }
        }
        for (auto it = pushes.rbegin(); it != pushes.rend(); ++it) stack.push_back(std::move(*it));
    }
};

// quadratic Newton refinement of the val > 0 root of H, exact at order NS
TruncatedSeries lift_record(const SeparableTower& B, const BiElem& H, int NS) {
    std::vector<TruncatedSeries> cs;
    cs.reserve(H.size());
    for (std::size_t i = 0; i < H.size(); ++i)
        cs.push_back(TruncatedSeries::from_poly(B, H[i], NS));
    const UniPoly<TruncatedSeries> Hs(std::move(cs));
    const UniPoly<TruncatedSeries> Hd = derivative(Hs);
    TruncatedSeries y(B, NS);
    for (int it = 0; it < 64; ++it) {
        const TruncatedSeries res = substitute(Hs, y);
        if (res.is_zero()) break;
        y = y - res * substitute(Hd, y).inverse();
    }
    if (!substitute(Hs, y).is_zero()) throw internal_error("branch lift did not converge");
    if (!y.coeff(0).is_zero()) throw internal_error("lifted branch moved its constant term");
    return y;
}

}  // namespace

std::vector<PolygonEdge> newton_polygon(const CurveInput& curve) {
    const BiPoly& G = curve.G;
    if (G.size() < 2) throw precondition_error("curve must be nonconstant in Y");
    if (!ring_ops<RatPoly>::is_one(G.lead()))
        throw precondition_error("curve must be monic in Y");
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (G[i].is_zero()) continue;
        std::size_t v = 0;
        while (G[i][v].is_zero()) ++v;
        pts.push_back(Pt{static_cast<long>(i), static_cast<long>(v)});
    }
    if (pts.size() < 2)
        throw precondition_error("every lower coefficient vanishes; increase input order");
    std::vector<PolygonEdge> out;
    for (const auto& [L, R] : lower_hull(pts)) {
        const long dp = L.v - R.v;
        const long di = R.i - L.i;
        const long g = std::gcd(dp < 0 ? -dp : dp, di);
        out.push_back(PolygonEdge{dp / g, di / g, static_cast<int>(di)});
    }
    return out;
}

PuiseuxResult newton_puiseux(const CurveInput& curve) {
    const BiPoly& G = curve.G;
    if (curve.order < 0) throw precondition_error("output order must be nonnegative");
    if (G.size() < 2) throw precondition_error("curve must be nonconstant in Y");
    if (!ring_ops<RatPoly>::is_one(G.lead()))
        throw precondition_error("curve must be monic in Y");

    const SeparableTower Q0 = SeparableTower::rationals();
    const int n = static_cast<int>(G.size()) - 1;
    const int N = curve.order;
    PuiseuxResult out{CoverTree(Q0), N, {}};

    Expander ex(out.tree, N, n);
    {
        Task t0;
        t0.path = {};
        std::vector<ElemPoly> hs;
        hs.reserve(G.size());
        for (std::size_t i = 0; i < G.size(); ++i) {
            std::vector<AlgebraElement> cs;
            cs.reserve(G[i].size());
            for (std::size_t j = 0; j < G[i].size(); ++j)
                cs.push_back(AlgebraElement::from_rational(Q0, G[i][j]));
            hs.push_back(ElemPoly(std::move(cs)));
        }
        t0.H = BiElem(std::move(hs));
        t0.pre = ElemPoly();
        t0.count = n;
        t0.top = true;
        ex.stack.push_back(std::move(t0));
    }
    ex.run();

    // reroute records created before later refinements of their leaf
    std::map<TreePath, std::vector<Record>> perleaf;
    for (const Record& r : ex.records) {
        const CoverNode& node = out.tree.node_at(r.path);
        if (node.is_leaf()) {
            if (!node.algebra.is_trivial()) perleaf[r.path].push_back(r);
            continue;
        }
        for (const TreePath& sub : out.tree.nontrivial_leaves_below(r.path)) {
            const RestrictionMap m = out.tree.map_between(r.path, sub);
            Record r2 = r;
            r2.path = sub;
            r2.pre = m.apply_poly(r.pre);
            if (r.liftable) r2.H = apply_bi(m, r.H);
            perleaf[sub].push_back(std::move(r2));
        }
    }

    for (const TreePath& lp : out.tree.nontrivial_leaves()) {
        const std::vector<Record>& recs = perleaf[lp];
        const SeparableTower B = out.tree.algebra_at(lp);
        long total = 0;
        for (const Record& r : recs) total += r.copies;
        if (total != n) throw internal_error("branch multiplicities do not sum to the degree");

        struct Built {
            std::vector<AlgebraElement> sigma;  // coefficient per sigma power
            long Q = 1;
            int copies = 1;
            bool separated = true;
            long mr = 1;
        };
        std::vector<Built> built;
        built.reserve(recs.size());
        for (const Record& r : recs) {
            Built b;
            b.Q = r.Q;
            b.copies = r.copies;
            b.separated = r.separated;
            b.sigma.assign(r.pre.size(), AlgebraElement::zero(B));
            for (std::size_t i = 0; i < r.pre.size(); ++i) b.sigma[i] = r.pre[i];
            if (r.liftable) {
                const long NS = static_cast<long>(N) * r.Q - r.E;
                if (NS >= 1) {
                    const TruncatedSeries y = lift_record(B, r.H, static_cast<int>(NS));
                    const std::size_t need = static_cast<std::size_t>(r.E + NS) + 1;
                    if (b.sigma.size() < need) b.sigma.resize(need, AlgebraElement::zero(B));
                    for (int k = 1; k <= y.order(); ++k) {
                        const std::size_t at = static_cast<std::size_t>(r.E + k);
                        b.sigma[at] = b.sigma[at] + y.coeff(k);
                    }
                }
            }
            long g = 0;
            for (std::size_t e = 0; e < b.sigma.size(); ++e)
                if (!b.sigma[e].is_zero()) g = std::gcd(g, static_cast<long>(e));
            b.mr = b.Q / std::gcd(b.Q, g);
            built.push_back(std::move(b));
        }
        long m = 1;
        for (const Built& b : built) m = std::lcm(m, b.mr);

        std::vector<PuiseuxBranch> branches;
        branches.reserve(built.size());
        for (const Built& b : built) {
            std::vector<AlgebraElement> ts(static_cast<std::size_t>(N) + 1,
                                           AlgebraElement::zero(B));
            for (std::size_t e = 0; e < b.sigma.size(); ++e) {
                if (b.sigma[e].is_zero()) continue;
                const long num = static_cast<long>(e) * m;
                if (num % b.Q != 0) throw internal_error("ramification misses an exponent");
                const long te = num / b.Q;
                if (te <= N) ts[static_cast<std::size_t>(te)] = b.sigma[e];
            }
            branches.push_back(PuiseuxBranch{TruncatedSeries(B, N, std::move(ts)), b.copies,
                                             b.separated});
        }
        std::sort(branches.begin(), branches.end(),
                  [&](const PuiseuxBranch& a, const PuiseuxBranch& c) {
                      for (int i = 0; i <= N; ++i) {
                          const int cm = a.series.coeff(i).compare(c.series.coeff(i));
                          if (cm != 0) return cm < 0;
                      }
                      if (a.copies != c.copies) return a.copies < c.copies;
                      return a.separated && !c.separated;
                  });
        out.leaves.push_back(PuiseuxLeaf{lp, B, m, std::move(branches)});
    }
    return out;
}

SplitValue PuiseuxResult::m_as_split_value() const {
    const SeparableTower& root = tree.root().algebra;
    if (root.is_trivial()) return SplitValue::constant(root, 1);
    if (tree.root().is_leaf()) {
        if (leaves.size() != 1) throw internal_error("leafless result over a nontrivial algebra");
        return SplitValue::constant(root, leaves[0].m);
    }
    long dims = 0;
    for (const PuiseuxLeaf& l : leaves) dims += l.algebra.dimension();
    if (dims != root.dimension())
        throw precondition_error(
            "ramification lives on extension leaves; read the per-leaf values");
    std::vector<long> payloads;
    payloads.reserve(leaves.size());
    for (const PuiseuxLeaf& l : leaves) payloads.push_back(l.m);
    return sv_amalgamate(tree.as_cover(), payloads);
}

}  // namespace dyneval
