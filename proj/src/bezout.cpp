#include "dyneval/bezout.hpp"

#include <utility>

namespace dyneval {

namespace {

void check_over(const SeparableTower& A, const ElemPoly& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!p[i].owner().same(A))
            throw precondition_error("polynomial is not over the given algebra");
}

// One branch of the Euclidean chain. Both Bezout rows keep their expression
// in terms of the restricted inputs: r0 = u0*a0 + v0*b0 and likewise for r1.
struct ChainItem {
    CoverBranch where;  // component plus the composed map from the call algebra
    ElemPoly a0, b0;
    ElemPoly r0, u0, v0;
    ElemPoly r1, u1, v1;
};

ChainItem restrict_item(const ChainItem& it, const CoverBranch& sub) {
    ChainItem out;
    out.where = CoverBranch{sub.component, it.where.restrict.then(sub.restrict)};
    const RestrictionMap& m = sub.restrict;
    out.a0 = m.apply_poly(it.a0);
    out.b0 = m.apply_poly(it.b0);
    out.r0 = m.apply_poly(it.r0);
    out.u0 = m.apply_poly(it.u0);
    out.v0 = m.apply_poly(it.v0);
    out.r1 = m.apply_poly(it.r1);
    out.u1 = m.apply_poly(it.u1);
    out.v1 = m.apply_poly(it.v1);
    return out;
}

// the chain is done; monicize the surviving row, splitting further if its
// leading coefficient is a zero divisor
void finish_item(GcdSplit& out, std::vector<ChainItem>& stack, ChainItem it) {
    const SeparableTower& B = it.where.component;
    if (it.r0.is_zero()) {
        // gcd(0, 0): everything vanished on this branch
        const ElemPoly one = ElemPoly::constant(AlgebraElement::one(B));
        BezoutCertificate cert;
        cert.g = ElemPoly();
        cert.a1 = one;
        cert.b1 = ElemPoly();
        cert.c = one;
        cert.d = ElemPoly();
        out.cover.branches.push_back(it.where);
        out.certs.push_back(std::move(cert));
        return;
    }
    InvertibleSplit is = is_invertible_split(it.r0.lead());
    if (is.cover.branches.size() == 1 && is.outcomes[0].invertible) {
        const AlgebraElement& inv = is.outcomes[0].value;
        BezoutCertificate cert;
        cert.g = inv * it.r0;
        cert.c = inv * it.u0;
        cert.d = inv * it.v0;
        // g is monic, hence regular, so the divisions are exact and the
        // identity c*a1 + d*b1 = 1 follows by cancelling g
        cert.a1 = monic_div_exact(it.a0, cert.g);
        cert.b1 = monic_div_exact(it.b0, cert.g);
        out.cover.branches.push_back(std::move(it.where));
        out.certs.push_back(std::move(cert));
        return;
    }
    if (is.cover.branches.size() <= 1)
        throw internal_error("trimmed polynomial with vanishing leading coefficient");
    for (std::size_t i = is.cover.branches.size(); i-- > 0;)
        stack.push_back(restrict_item(it, is.cover.branches[i]));
}

}  // namespace

GcdSplit gcd_split(const SeparableTower& A, const ElemPoly& a, const ElemPoly& b) {
    check_over(A, a);
    check_over(A, b);
    GcdSplit out;
    out.cover.parent = A;
    out.cover.provenance = "gcd";
    if (A.is_trivial()) return out;

    std::vector<ChainItem> stack;
    {
        ChainItem root;
        root.where = CoverBranch{A, RestrictionMap::identity(A)};
        root.a0 = a;
        root.b0 = b;
        root.r0 = a;
        root.u0 = ElemPoly::constant(AlgebraElement::one(A));
        root.v0 = ElemPoly();
        root.r1 = b;
        root.u1 = ElemPoly();
        root.v1 = ElemPoly::constant(AlgebraElement::one(A));
        stack.push_back(std::move(root));
    }

    while (!stack.empty()) {
        ChainItem it = std::move(stack.back());
        stack.pop_back();
        if (it.where.component.is_trivial()) {
            out.cover.branches.push_back(std::move(it.where));
            out.certs.push_back(BezoutCertificate{});
            continue;
        }
        while (true) {
            if (it.r1.is_zero()) {
                finish_item(out, stack, std::move(it));
                break;
            }
            if (it.r0.is_zero()) {
                std::swap(it.r0, it.r1);
                std::swap(it.u0, it.u1);
                std::swap(it.v0, it.v1);
                finish_item(out, stack, std::move(it));
                break;
            }
            if (*it.r0.degree() < *it.r1.degree()) {
                std::swap(it.r0, it.r1);
                std::swap(it.u0, it.u1);
                std::swap(it.v0, it.v1);
            }
            InvertibleSplit is = is_invertible_split(it.r1.lead());
            if (is.cover.branches.size() > 1) {
                for (std::size_t i = is.cover.branches.size(); i-- > 0;)
                    stack.push_back(restrict_item(it, is.cover.branches[i]));
                break;
            }
            if (!is.outcomes[0].invertible)
                throw internal_error("trimmed polynomial with vanishing leading coefficient");
            const AlgebraElement& inv = is.outcomes[0].value;
            const ElemPoly m = inv * it.r1;
            auto [q, rem] = monic_divmod(it.r0, m);
            const ElemPoly iq = inv * q;
            ElemPoly nu = it.u0 - iq * it.u1;
            ElemPoly nv = it.v0 - iq * it.v1;
            it.r0 = std::move(it.r1);
            it.u0 = std::move(it.u1);
            it.v0 = std::move(it.v1);
            it.r1 = std::move(rem);
            it.u1 = std::move(nu);
            it.v1 = std::move(nv);
        }
    }
    return out;
}

SeparableSplit separable_associate(const SeparableTower& A, const ElemPoly& f) {
    check_over(A, f);
    if (!f.is_monic()) throw precondition_error("polynomial must be monic");
    SeparableSplit out;
    out.cover.parent = A;
    out.cover.provenance = "separable associate";
    if (A.is_trivial()) return out;

    GcdSplit bz1 = gcd_split(A, f, derivative(f));
    for (std::size_t j = 0; j < bz1.cover.branches.size(); ++j) {
        const CoverBranch& br = bz1.cover.branches[j];
        if (br.component.is_trivial()) {
            out.cover.branches.push_back(br);
            out.parts.push_back(SeparableAssociate{});
            continue;
        }
        const ElemPoly& h = bz1.certs[j].a1;
        const ElemPoly& g = bz1.certs[j].g;
        const ElemPoly& q = bz1.certs[j].b1;
        GcdSplit bz2 = gcd_split(br.component, h, q);
        for (std::size_t i = 0; i < bz2.cover.branches.size(); ++i) {
            const CoverBranch& sub = bz2.cover.branches[i];
            RestrictionMap composed = br.restrict.then(sub.restrict);
            if (sub.component.is_trivial()) {
                out.cover.branches.push_back(CoverBranch{sub.component, std::move(composed)});
                out.parts.push_back(SeparableAssociate{});
                continue;
            }
            const ElemPoly& g2 = bz2.certs[i].g;
            if (!(g2.size() == 1 && g2[0].is_one()))
                throw internal_error("separable part shares a root with its cofactor");
            SeparableAssociate sa;
            sa.h = sub.restrict.apply_poly(h);
            sa.g = sub.restrict.apply_poly(g);
            sa.q = sub.restrict.apply_poly(q);
            sa.r = bz2.certs[i].c;
            sa.s = bz2.certs[i].d;
            if (f.size() >= 2 && sa.h.size() < 2)
                throw internal_error("separable part of a nonconstant polynomial is constant");
            out.cover.branches.push_back(CoverBranch{sub.component, std::move(composed)});
            out.parts.push_back(std::move(sa));
        }
    }
    return out;
}

SeparableTower adjoin_root(const SeparableTower& A, const std::string& name,
                           const ElemPoly& p) {
    if (A.is_trivial()) throw precondition_error("cannot extend the zero ring");
    if (!p.is_monic()) throw precondition_error("polynomial must be monic");
    if (p.size() < 2) throw precondition_error("polynomial must be nonconstant");

    GcdSplit bz = gcd_split(A, p, derivative(p));
    const std::vector<std::size_t> nt = bz.cover.nontrivial();
    std::size_t cdeg = 0, ddeg = 0;
    for (const std::size_t idx : nt) {
        const ElemPoly& g = bz.certs[idx].g;
        if (!(g.size() == 1 && g[0].is_one()))
            throw precondition_error("polynomial is not separable");
        cdeg = std::max(cdeg, bz.certs[idx].c.size());
        ddeg = std::max(ddeg, bz.certs[idx].d.size());
    }

    // with a unit gcd the certificate reads c*p + d*p' = 1 on every branch;
    // pull the coefficients back through the cover one position at a time
    auto assemble = [&](std::size_t len, auto pick) {
        std::vector<AlgebraElement> coeffs;
        for (std::size_t pos = 0; pos < len; ++pos) {
            std::vector<AlgebraElement> parts;
            parts.reserve(nt.size());
            for (const std::size_t idx : nt) {
                const ElemPoly& src = pick(bz.certs[idx]);
                parts.push_back(pos < src.size()
                                    ? src[pos]
                                    : AlgebraElement::zero(bz.cover.branches[idx].component));
            }
            coeffs.push_back(amalgamate(bz.cover, parts));
        }
        return ElemPoly(std::move(coeffs));
    };
    const ElemPoly s = assemble(cdeg, [](const BezoutCertificate& c) -> const ElemPoly& {
        return c.c;
    });
    const ElemPoly t = assemble(ddeg, [](const BezoutCertificate& c) -> const ElemPoly& {
        return c.d;
    });
    return extend_tower(A, name, p, s, t);
}

}  // namespace dyneval
