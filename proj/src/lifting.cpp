#include "dendro/lifting.hpp"

#include <stdexcept>

namespace dendro {

LiftingProblem::LiftingProblem(PresheafMap i, PresheafMap p, PresheafMap t, PresheafMap b)
    : left(std::move(i)), right(std::move(p)), top(std::move(t)), bottom(std::move(b)) {
    if (!(top.source() == left.source()) || !(top.target() == right.source()) ||
        !(bottom.source() == left.target()) || !(bottom.target() == right.target()))
        throw std::invalid_argument("lifting problem: boundary objects do not match");
    if (!(compose(right, top) == compose(bottom, left)))
        throw std::invalid_argument("lifting problem: square does not commute");
}

std::optional<PresheafMap> solve_lift(const LiftingProblem& pr) {
    const Site& site = pr.left.source().site();
    const Presheaf& B = pr.left.target();
    const Presheaf& X = pr.right.source();

    NatSearchOptions opts;
    opts.first_only = true;
    opts.forced.resize(static_cast<std::size_t>(site.n_trees()));
    opts.allowed.resize(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        opts.forced[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(B.card(t)), -1);
        opts.allowed[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(B.card(t)));
        // h(i(a)) = top(a)
        for (int a = 0; a < pr.left.source().card(t); ++a) {
            int b = pr.left.at(t, a);
            int want = pr.top.at(t, a);
            int& slot = opts.forced[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)];
            if (slot != -1 && slot != want) return std::nullopt;  // contradictory constraints
            slot = want;
        }
        // p(h(b)) = bottom(b)
        for (int b = 0; b < B.card(t); ++b) {
            auto& allow = opts.allowed[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)];
            for (int x = 0; x < X.card(t); ++x)
                if (pr.right.at(t, x) == pr.bottom.at(t, b)) allow.push_back(x);
            if (allow.empty()) return std::nullopt;
        }
    }
    auto sols = natural_maps(B, X, opts);
    if (sols.empty()) return std::nullopt;
    return PresheafMap(pr.left.target_ptr(), pr.right.source_ptr(), std::move(sols.front()), false);
}

bool has_rlp(const PresheafMap& i, const PresheafMap& p) {
    auto bottoms = hom_maps(i.target_ptr(), p.target_ptr());
    auto tops = hom_maps(i.source_ptr(), p.source_ptr());
    for (const auto& bottom : bottoms) {
        PresheafMap bl = compose(bottom, i);
        for (const auto& top : tops) {
            if (!(compose(p, top) == bl)) continue;
            LiftingProblem prob(i, p, top, bottom);
            if (!solve_lift(prob)) return false;
        }
    }
    return true;
}

bool has_rlp_family(const PresheafMap& p, const std::vector<PresheafMap>& family) {
    for (const auto& i : family)
        if (!has_rlp(i, p)) return false;
    return true;
}

bool has_llp_family(const PresheafMap& i, const std::vector<PresheafMap>& family) {
    for (const auto& p : family)
        if (!has_rlp(i, p)) return false;
    return true;
}

std::vector<PresheafMap> boundary_inclusions(const Site& site, int max_size) {
    std::vector<PresheafMap> out;
    for (int t = 0; t < site.n_trees(); ++t) {
        if (site.tree(t).size() > max_size) continue;
        Representable rep = representable(site, site.tree(t));
        out.push_back(boundary(rep).inclusion());
    }
    return out;
}

std::vector<PresheafMap> horn_inclusions(const Site& site, int max_size) {
    const bool very_inner = site.flavor() == Flavor::Closed;
    std::vector<PresheafMap> out;
    for (int t = 0; t < site.n_trees(); ++t) {
        const Tree& tr = site.tree(t);
        if (tr.size() > max_size) continue;
        Representable rep = representable(site, tr);
        for (EdgeId e : tr.inner_edges()) {
            if (very_inner && tr.is_stump(e)) continue;
            out.push_back(horn(rep, e, very_inner).inclusion());
        }
    }
    return out;
}

bool is_trivial_fib_upto(const PresheafMap& p, int max_size) {
    return has_rlp_family(p, boundary_inclusions(p.source().site(), max_size));
}

bool is_inner_fib_upto(const PresheafMap& p, int max_size) {
    return has_rlp_family(p, horn_inclusions(p.source().site(), max_size));
}

bool is_operad_upto(PresheafPtr x, int max_size) {
    auto term = std::make_shared<Presheaf>(Presheaf::terminal(x->site()));
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(x->site().n_trees()));
    for (int t = 0; t < x->site().n_trees(); ++t)
        comp[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(x->card(t)), 0);
    PresheafMap to_term(x, term, std::move(comp), false);
    return is_inner_fib_upto(to_term, max_size);
}

PresheafMap coskeletal_reduction(const PresheafMap& i, int n) {
    if (n < 0) throw std::invalid_argument("coskeletal_reduction: n must be >= 0");
    // corner map of the square of skeleta
    Subobject skA_n = skeleton(i.source_ptr(), n);
    Subobject skA_n1 = skeleton(i.source_ptr(), n - 1);
    Subobject skB_n = skeleton(i.target_ptr(), n);
    Subobject skB_n1 = skeleton(i.target_ptr(), n - 1);

    const Site& site = i.source().site();
    auto comp_into = [&](const Subobject& src, const Subobject& dst, bool through_i) {
        // inclusion/restriction src.object -> dst.object
        std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t)
            for (int x = 0; x < src.ambient->card(t); ++x) {
                if (!src.contains(t, x)) continue;
                int y = through_i ? i.at(t, x) : x;
                int yi = dst.index_in_sub[static_cast<std::size_t>(t)][static_cast<std::size_t>(y)];
                if (yi < 0) throw std::logic_error("coskeletal_reduction: image escapes skeleton");
                comp[static_cast<std::size_t>(t)].push_back(yi);
            }
        return comp;
    };

    PresheafMap a(skA_n1.object, skA_n.object, comp_into(skA_n1, skA_n, false), false);
    PresheafMap b(skA_n1.object, skB_n1.object, comp_into(skA_n1, skB_n1, true), false);
    auto po = pushout(a, b);
    PresheafMap skA_to_skB(skA_n.object, skB_n.object, comp_into(skA_n, skB_n, true), false);
    PresheafMap skB_incl(skB_n1.object, skB_n.object, comp_into(skB_n1, skB_n, false), false);
    // induced map out of the pushout, defined on classes via either leg
    std::vector<std::vector<int>> corner(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        corner[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(po.object->card(t)), -1);
        for (int x = 0; x < skA_n.object->card(t); ++x) {
            int cls = po.from_left.at(t, x);
            int val = skA_to_skB.at(t, x);
            auto& slot = corner[static_cast<std::size_t>(t)][static_cast<std::size_t>(cls)];
            if (slot != -1 && slot != val) throw std::logic_error("corner map ill defined");
            slot = val;
        }
        for (int x = 0; x < skB_n1.object->card(t); ++x) {
            int cls = po.from_right.at(t, x);
            int val = skB_incl.at(t, x);
            auto& slot = corner[static_cast<std::size_t>(t)][static_cast<std::size_t>(cls)];
            if (slot != -1 && slot != val) throw std::logic_error("corner map ill defined");
            slot = val;
        }
        for (int v : corner[static_cast<std::size_t>(t)])
            if (v < 0) throw std::logic_error("corner map left a class unassigned");
    }
    return PresheafMap(po.object, skB_n.object, std::move(corner), true);
}

}  // namespace dendro
