#include "dendro/presheaf.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dendro {

Presheaf::Presheaf(const Site& site, std::vector<int> cards,
                   std::vector<std::vector<int>> actions_by_slot, bool validate)
    : site_(&site), card_(std::move(cards)), actions_(std::move(actions_by_slot)) {
    if (static_cast<int>(card_.size()) != site.n_trees())
        throw std::invalid_argument("presheaf: wrong number of trees");
    if (static_cast<int>(actions_.size()) != site.n_action_slots())
        throw std::invalid_argument("presheaf: wrong number of action slots");
    if (validate) {
        std::string why;
        if (!check_functorial(&why)) throw std::invalid_argument("presheaf not functorial: " + why);
    }
}

Presheaf Presheaf::empty(const Site& site) {
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()), 0);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    return Presheaf(site, std::move(cards), std::move(actions), false);
}

Presheaf Presheaf::terminal(const Site& site) {
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()), 1);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()),
                                          std::vector<int>{0});
    return Presheaf(site, std::move(cards), std::move(actions), false);
}

long long Presheaf::total_elements() const {
    return std::accumulate(card_.begin(), card_.end(), 0LL);
}

bool Presheaf::check_functorial(std::string* why) const {
    const Site& s = *site_;
    const int n = s.n_trees();
    // shapes
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m = 0; m < s.n_hom(a, b); ++m) {
                const auto& arr = action(a, b, m);
                if (static_cast<int>(arr.size()) != card(b)) {
                    if (why) *why = "action array size mismatch";
                    return false;
                }
                for (int v : arr)
                    if (v < 0 || v >= card(a)) {
                        if (why) *why = "action value out of range";
                        return false;
                    }
            }
    // identities
    for (int t = 0; t < n; ++t) {
        int id = s.identity_index(t);
        for (int x = 0; x < card(t); ++x)
            if (act(t, t, id, x) != x) {
                if (why) *why = "identity action is not the identity";
                return false;
            }
    }
    // composition
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int f = 0; f < s.n_hom(a, b); ++f)
                    for (int g = 0; g < s.n_hom(b, c); ++g) {
                        int gf = s.compose_index(a, b, c, f, g);
                        for (int x = 0; x < card(c); ++x) {
                            if (act(a, c, gf, x) != act(a, b, f, act(b, c, g, x))) {
                                if (why) {
                                    std::ostringstream os;
                                    os << "composition fails at trees (" << a << "," << b << ","
                                       << c << ")";
                                    *why = os.str();
                                }
                                return false;
                            }
                        }
                    }
    return true;
}

PresheafMap::PresheafMap(PresheafPtr src, PresheafPtr dst, std::vector<std::vector<int>> components,
                         bool validate)
    : src_(std::move(src)), dst_(std::move(dst)), comp_(std::move(components)) {
    const Site& s = src_->site();
    if (&s != &dst_->site()) throw std::invalid_argument("presheaf map: site mismatch");
    if (static_cast<int>(comp_.size()) != s.n_trees())
        throw std::invalid_argument("presheaf map: wrong component count");
    for (int t = 0; t < s.n_trees(); ++t) {
        if (static_cast<int>(comp_[static_cast<std::size_t>(t)].size()) != src_->card(t))
            throw std::invalid_argument("presheaf map: wrong component size");
        for (int v : comp_[static_cast<std::size_t>(t)])
            if (v < 0 || v >= dst_->card(t))
                throw std::invalid_argument("presheaf map: value out of range");
    }
    if (validate) {
        for (int a = 0; a < s.n_trees(); ++a)
            for (int b = 0; b < s.n_trees(); ++b)
                for (int m = 0; m < s.n_hom(a, b); ++m)
                    for (int x = 0; x < src_->card(b); ++x)
                        if (dst_->act(a, b, m, at(b, x)) != at(a, src_->act(a, b, m, x)))
                            throw std::invalid_argument("presheaf map is not natural");
    }
}

bool PresheafMap::is_injective() const {
    for (int t = 0; t < src_->site().n_trees(); ++t) {
        std::vector<char> seen(static_cast<std::size_t>(dst_->card(t)), 0);
        for (int x = 0; x < src_->card(t); ++x) {
            int y = at(t, x);
            if (seen[static_cast<std::size_t>(y)]) return false;
            seen[static_cast<std::size_t>(y)] = 1;
        }
    }
    return true;
}

bool PresheafMap::is_surjective() const {
    for (int t = 0; t < src_->site().n_trees(); ++t) {
        std::vector<char> seen(static_cast<std::size_t>(dst_->card(t)), 0);
        for (int x = 0; x < src_->card(t); ++x) seen[static_cast<std::size_t>(at(t, x))] = 1;
        for (char c : seen)
            if (!c) return false;
    }
    return true;
}

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
    if (&f.target() != &g.source() && !(f.target() == g.source()))
        throw std::invalid_argument("compose: middle objects differ");
    const Site& s = f.source().site();
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(s.n_trees()));
    for (int t = 0; t < s.n_trees(); ++t) {
        comp[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(f.source().card(t)));
        for (int x = 0; x < f.source().card(t); ++x)
            comp[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = g.at(t, f.at(t, x));
    }
    return PresheafMap(f.source_ptr(), g.target_ptr(), std::move(comp), false);
}

PresheafMap identity_map(PresheafPtr x) {
    const Site& s = x->site();
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(s.n_trees()));
    for (int t = 0; t < s.n_trees(); ++t) {
        comp[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(x->card(t)));
        std::iota(comp[static_cast<std::size_t>(t)].begin(), comp[static_cast<std::size_t>(t)].end(), 0);
    }
    return PresheafMap(x, x, std::move(comp), false);
}

PresheafMap Subobject::inclusion() const {
    const Site& s = ambient->site();
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(s.n_trees()));
    for (int t = 0; t < s.n_trees(); ++t)
        for (int x = 0; x < ambient->card(t); ++x)
            if (mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)])
                comp[static_cast<std::size_t>(t)].push_back(x);
    return PresheafMap(object, ambient, std::move(comp), false);
}

Subobject make_subobject(PresheafPtr ambient, std::vector<std::vector<char>> mask) {
    const Site& s = ambient->site();
    // closure under all actions
    for (int a = 0; a < s.n_trees(); ++a)
        for (int b = 0; b < s.n_trees(); ++b)
            for (int m = 0; m < s.n_hom(a, b); ++m)
                for (int x = 0; x < ambient->card(b); ++x)
                    if (mask[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)] &&
                        !mask[static_cast<std::size_t>(a)]
                             [static_cast<std::size_t>(ambient->act(a, b, m, x))])
                        throw std::invalid_argument("subobject mask not closed under actions");
    Subobject sub;
    sub.ambient = ambient;
    sub.mask = std::move(mask);
    sub.index_in_sub.resize(static_cast<std::size_t>(s.n_trees()));
    std::vector<int> cards(static_cast<std::size_t>(s.n_trees()), 0);
    for (int t = 0; t < s.n_trees(); ++t) {
        auto& idx = sub.index_in_sub[static_cast<std::size_t>(t)];
        idx.assign(static_cast<std::size_t>(ambient->card(t)), -1);
        for (int x = 0; x < ambient->card(t); ++x)
            if (sub.mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)])
                idx[static_cast<std::size_t>(x)] = cards[static_cast<std::size_t>(t)]++;
    }
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(s.n_action_slots()));
    for (int a = 0; a < s.n_trees(); ++a)
        for (int b = 0; b < s.n_trees(); ++b)
            for (int m = 0; m < s.n_hom(a, b); ++m) {
                auto& arr = actions[static_cast<std::size_t>(s.flat_index(a, b, m))];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(b)]));
                for (int x = 0; x < ambient->card(b); ++x) {
                    int xi = sub.index_in_sub[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)];
                    if (xi < 0) continue;
                    arr[static_cast<std::size_t>(xi)] =
                        sub.index_in_sub[static_cast<std::size_t>(a)]
                                        [static_cast<std::size_t>(ambient->act(a, b, m, x))];
                }
            }
    sub.object = std::make_shared<Presheaf>(s, std::move(cards), std::move(actions), false);
    return sub;
}

Subobject generated_subobject(PresheafPtr ambient,
                              const std::vector<std::pair<int, int>>& elements) {
    const Site& s = ambient->site();
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(s.n_trees()));
    for (int t = 0; t < s.n_trees(); ++t)
        mask[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(ambient->card(t)), 0);
    std::vector<std::pair<int, int>> work = elements;
    for (auto& [t, x] : work) mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = 1;
    while (!work.empty()) {
        auto [b, x] = work.back();
        work.pop_back();
        for (int a = 0; a < s.n_trees(); ++a)
            for (int m = 0; m < s.n_hom(a, b); ++m) {
                int y = ambient->act(a, b, m, x);
                auto& cell = mask[static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
                if (!cell) {
                    cell = 1;
                    work.emplace_back(a, y);
                }
            }
    }
    return make_subobject(ambient, std::move(mask));
}

int Representable::element_index(int t, const std::vector<EdgeId>& edge_map) const {
    const auto& v = elements[static_cast<std::size_t>(t)];
    int lo = 0, hi = static_cast<int>(v.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (v[static_cast<std::size_t>(mid)].edge_map() < edge_map)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < static_cast<int>(v.size()) && v[static_cast<std::size_t>(lo)].edge_map() == edge_map)
        return lo;
    return -1;
}

Representable representable(const Site& site, const Tree& t) {
    if (t.flavor() != site.flavor())
        throw std::invalid_argument("representable: flavor mismatch with site");
    Representable rep;
    rep.target = std::make_shared<const Tree>(t);
    rep.elements.resize(static_cast<std::size_t>(site.n_trees()));
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()));
    for (int s = 0; s < site.n_trees(); ++s) {
        rep.elements[static_cast<std::size_t>(s)] = hom_set(site.tree(s), t);
        cards[static_cast<std::size_t>(s)] =
            static_cast<int>(rep.elements[static_cast<std::size_t>(s)].size());
    }
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int a = 0; a < site.n_trees(); ++a)
        for (int b = 0; b < site.n_trees(); ++b)
            for (int m = 0; m < site.n_hom(a, b); ++m) {
                const auto& f = site.hom(a, b)[static_cast<std::size_t>(m)];
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(a, b, m))];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(b)]));
                for (int x = 0; x < cards[static_cast<std::size_t>(b)]; ++x) {
                    const auto& g = rep.elements[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)];
                    std::vector<EdgeId> comp(static_cast<std::size_t>(f.source().n_edges()));
                    for (EdgeId e = 0; e < f.source().n_edges(); ++e) comp[static_cast<std::size_t>(e)] = g(f(e));
                    int idx = rep.element_index(a, comp);
                    if (idx < 0) throw std::logic_error("representable: composite not found");
                    arr[static_cast<std::size_t>(x)] = idx;
                }
            }
    rep.presheaf = std::make_shared<Presheaf>(site, std::move(cards), std::move(actions), false);
    return rep;
}

namespace {

// Marks the image of (face or other morphism) d: F -> target inside the
// representable of target.
void mark_image(const Site& site, const Representable& rep, const TreeMorphism& d,
                std::vector<std::vector<char>>& mask) {
    for (int s = 0; s < site.n_trees(); ++s) {
        for (const auto& h : hom_set(site.tree(s), d.source())) {
            std::vector<EdgeId> comp(static_cast<std::size_t>(h.source().n_edges()));
            for (EdgeId e = 0; e < h.source().n_edges(); ++e)
                comp[static_cast<std::size_t>(e)] = d(h(e));
            int idx = rep.element_index(s, comp);
            if (idx < 0) throw std::logic_error("face composite missing from representable");
            mask[static_cast<std::size_t>(s)][static_cast<std::size_t>(idx)] = 1;
        }
    }
}

std::vector<std::vector<char>> empty_mask(const Site& site, const Presheaf& x) {
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t)
        mask[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(x.card(t)), 0);
    return mask;
}

}  // namespace

Subobject boundary(const Representable& rep) {
    const Site& site = rep.presheaf->site();
    auto mask = empty_mask(site, *rep.presheaf);
    for (const auto& em : elementary_maps(*rep.target)) {
        if (em.kind == ElementaryKind::Degeneracy) continue;
        mark_image(site, rep, em.map, mask);
    }
    return make_subobject(rep.presheaf, std::move(mask));
}

Subobject horn(const Representable& rep, EdgeId e, bool very_inner_only) {
    const Tree& t = *rep.target;
    if (e < 0 || e >= t.n_edges() || !t.is_inner(e))
        throw std::invalid_argument("horn: edge is not inner");
    if (very_inner_only && t.is_stump(e))
        throw std::invalid_argument("horn: edge is immediately below a stump, not very inner");
    const Site& site = rep.presheaf->site();
    auto mask = empty_mask(site, *rep.presheaf);
    for (const auto& em : elementary_maps(t)) {
        if (em.kind == ElementaryKind::Degeneracy) continue;
        bool contains_e = false;
        for (EdgeId v : em.map.edge_map())
            if (v == e) contains_e = true;
        if (contains_e) mark_image(site, rep, em.map, mask);
    }
    return make_subobject(rep.presheaf, std::move(mask));
}

Subobject spine(const Representable& rep) {
    const Tree& t = *rep.target;
    const Site& site = rep.presheaf->site();
    if (t.n_vertices() == 0) {
        auto mask = empty_mask(site, *rep.presheaf);
        for (auto& row : mask) std::fill(row.begin(), row.end(), 1);
        return make_subobject(rep.presheaf, std::move(mask));
    }
    auto mask = empty_mask(site, *rep.presheaf);
    for (EdgeId v : t.vertex_edges()) {
        int k = static_cast<int>(t.inputs(v).size());
        Tree cor = corolla(k, t.flavor());
        std::vector<EdgeId> em(static_cast<std::size_t>(cor.n_edges()));
        em[0] = v;
        for (int i = 0; i < k; ++i)
            em[static_cast<std::size_t>(i + 1)] = t.inputs(v)[static_cast<std::size_t>(i)];
        mark_image(site, rep, TreeMorphism(cor, t, std::move(em)), mask);
    }
    return make_subobject(rep.presheaf, std::move(mask));
}

Subobject skeleton(PresheafPtr x, int n) {
    const Site& site = x->site();
    auto mask = empty_mask(site, *x);
    for (int t = 0; t < site.n_trees(); ++t)
        if (site.tree(t).size() <= n)
            std::fill(mask[static_cast<std::size_t>(t)].begin(),
                      mask[static_cast<std::size_t>(t)].end(), 1);
    // ascending size: degeneracy images of already-marked elements
    for (int t = 0; t < site.n_trees(); ++t) {
        if (site.tree(t).size() <= n) continue;
        for (const auto& d : site.degeneracies_of(t)) {
            for (int y = 0; y < x->card(d.target); ++y)
                if (mask[static_cast<std::size_t>(d.target)][static_cast<std::size_t>(y)])
                    mask[static_cast<std::size_t>(t)]
                        [static_cast<std::size_t>(x->act(t, d.target, d.hom_index, y))] = 1;
        }
    }
    return make_subobject(x, std::move(mask));
}

PresheafMap skeleton_map(const PresheafMap& f, int n) {
    Subobject ss = skeleton(f.source_ptr(), n);
    Subobject sd = skeleton(f.target_ptr(), n);
    const Site& site = f.source().site();
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        for (int x = 0; x < f.source().card(t); ++x) {
            if (!ss.contains(t, x)) continue;
            int y = f.at(t, x);
            if (!sd.contains(t, y))
                throw std::logic_error("skeleton_map: image leaves the skeleton");
            comp[static_cast<std::size_t>(t)].push_back(
                sd.index_in_sub[static_cast<std::size_t>(t)][static_cast<std::size_t>(y)]);
        }
    }
    return PresheafMap(ss.object, sd.object, std::move(comp));
}

int ProductResult::pair_index(int t, int left, int right) const {
    const auto& p = pairs[static_cast<std::size_t>(t)];
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        if (p[static_cast<std::size_t>(i)].first == left && p[static_cast<std::size_t>(i)].second == right)
            return i;
    return -1;
}

ProductResult product(PresheafPtr a, PresheafPtr b) {
    const Site& site = a->site();
    if (&site != &b->site()) throw std::invalid_argument("product: site mismatch");
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()));
    std::vector<std::vector<std::pair<int, int>>> pairs(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        cards[static_cast<std::size_t>(t)] = a->card(t) * b->card(t);
        for (int l = 0; l < a->card(t); ++l)
            for (int r = 0; r < b->card(t); ++r) pairs[static_cast<std::size_t>(t)].emplace_back(l, r);
    }
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(s, t, m))];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(t)]));
                for (int x = 0; x < cards[static_cast<std::size_t>(t)]; ++x) {
                    auto [l, r] = pairs[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
                    int la = a->act(s, t, m, l), rb = b->act(s, t, m, r);
                    arr[static_cast<std::size_t>(x)] = la * b->card(s) + rb;
                }
            }
    ProductResult out;
    out.object = std::make_shared<Presheaf>(site, std::move(cards), std::move(actions), false);
    out.pairs = std::move(pairs);
    std::vector<std::vector<int>> pl(static_cast<std::size_t>(site.n_trees())),
        pr(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t)
        for (auto& [l, r] : out.pairs[static_cast<std::size_t>(t)]) {
            pl[static_cast<std::size_t>(t)].push_back(l);
            pr[static_cast<std::size_t>(t)].push_back(r);
        }
    out.proj_left = PresheafMap(out.object, a, std::move(pl), false);
    out.proj_right = PresheafMap(out.object, b, std::move(pr), false);
    return out;
}

CoproductResult coproduct(PresheafPtr a, PresheafPtr b) {
    const Site& site = a->site();
    if (&site != &b->site()) throw std::invalid_argument("coproduct: site mismatch");
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) cards[static_cast<std::size_t>(t)] = a->card(t) + b->card(t);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(s, t, m))];
                for (int x = 0; x < a->card(t); ++x) arr.push_back(a->act(s, t, m, x));
                for (int x = 0; x < b->card(t); ++x) arr.push_back(a->card(s) + b->act(s, t, m, x));
            }
    CoproductResult out;
    out.object = std::make_shared<Presheaf>(site, std::move(cards), std::move(actions), false);
    std::vector<std::vector<int>> il(static_cast<std::size_t>(site.n_trees())),
        ir(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        for (int x = 0; x < a->card(t); ++x) il[static_cast<std::size_t>(t)].push_back(x);
        for (int x = 0; x < b->card(t); ++x) ir[static_cast<std::size_t>(t)].push_back(a->card(t) + x);
    }
    out.inj_left = PresheafMap(a, out.object, std::move(il), false);
    out.inj_right = PresheafMap(b, out.object, std::move(ir), false);
    return out;
}

PullbackResult pullback(const PresheafMap& f, const PresheafMap& g) {
    if (!(f.target() == g.target())) throw std::invalid_argument("pullback: targets differ");
    auto prod = product(f.source_ptr(), g.source_ptr());
    const Site& site = f.source().site();
    auto mask = empty_mask(site, *prod.object);
    for (int t = 0; t < site.n_trees(); ++t)
        for (int x = 0; x < prod.object->card(t); ++x) {
            auto [l, r] = prod.pairs[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
            if (f.at(t, l) == g.at(t, r)) mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = 1;
        }
    Subobject sub = make_subobject(prod.object, std::move(mask));
    PullbackResult out;
    out.object = sub.object;
    out.to_left = compose(prod.proj_left, sub.inclusion());
    out.to_right = compose(prod.proj_right, sub.inclusion());
    return out;
}

Subobject equalizer(const PresheafMap& f, const PresheafMap& g) {
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
        throw std::invalid_argument("equalizer: maps not parallel");
    const Site& site = f.source().site();
    auto mask = empty_mask(site, f.source());
    for (int t = 0; t < site.n_trees(); ++t)
        for (int x = 0; x < f.source().card(t); ++x)
            if (f.at(t, x) == g.at(t, x)) mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = 1;
    return make_subobject(f.source_ptr(), std::move(mask));
}

namespace {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;  // smaller index becomes the root
        return true;
    }
};

// Builds a quotient presheaf from per-tree partitions (given by find-roots).
struct ClassTable {
    std::vector<std::vector<int>> class_of;  // per tree, element -> class index
    std::vector<int> n_classes;
};

ClassTable classes_from_uf(const Site& site, const std::vector<int>& cards,
                           std::vector<UnionFind>& uf) {
    ClassTable ct;
    ct.class_of.resize(static_cast<std::size_t>(site.n_trees()));
    ct.n_classes.assign(static_cast<std::size_t>(site.n_trees()), 0);
    for (int t = 0; t < site.n_trees(); ++t) {
        auto& co = ct.class_of[static_cast<std::size_t>(t)];
        co.assign(static_cast<std::size_t>(cards[static_cast<std::size_t>(t)]), -1);
        for (int x = 0; x < cards[static_cast<std::size_t>(t)]; ++x) {
            int r = uf[static_cast<std::size_t>(t)].find(x);
            if (co[static_cast<std::size_t>(r)] == -1)
                co[static_cast<std::size_t>(r)] = ct.n_classes[static_cast<std::size_t>(t)]++;
            co[static_cast<std::size_t>(x)] = co[static_cast<std::size_t>(r)];
        }
    }
    return ct;
}
}  // namespace

PushoutResult pushout(const PresheafMap& f, const PresheafMap& g) {
    if (!(f.source() == g.source())) throw std::invalid_argument("pushout: sources differ");
    const Site& site = f.source().site();
    auto cop = coproduct(f.target_ptr(), g.target_ptr());
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) cards[static_cast<std::size_t>(t)] = cop.object->card(t);
    std::vector<UnionFind> uf;
    uf.reserve(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) uf.emplace_back(cards[static_cast<std::size_t>(t)]);
    for (int t = 0; t < site.n_trees(); ++t)
        for (int a = 0; a < f.source().card(t); ++a)
            uf[static_cast<std::size_t>(t)].unite(cop.inj_left.at(t, f.at(t, a)),
                                                  cop.inj_right.at(t, g.at(t, a)));
    ClassTable ct = classes_from_uf(site, cards, uf);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(s, t, m))];
                arr.assign(static_cast<std::size_t>(ct.n_classes[static_cast<std::size_t>(t)]), -1);
                for (int x = 0; x < cop.object->card(t); ++x) {
                    int cls = ct.class_of[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
                    int img = ct.class_of[static_cast<std::size_t>(s)]
                                         [static_cast<std::size_t>(cop.object->act(s, t, m, x))];
                    if (arr[static_cast<std::size_t>(cls)] == -1)
                        arr[static_cast<std::size_t>(cls)] = img;
                    else if (arr[static_cast<std::size_t>(cls)] != img)
                        throw std::logic_error("pushout: action not well defined on classes");
                }
            }
    PushoutResult out;
    out.object = std::make_shared<Presheaf>(site, ct.n_classes, std::move(actions), true);
    std::vector<std::vector<int>> lb(static_cast<std::size_t>(site.n_trees())),
        rc(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        for (int x = 0; x < f.target().card(t); ++x)
            lb[static_cast<std::size_t>(t)].push_back(
                ct.class_of[static_cast<std::size_t>(t)]
                           [static_cast<std::size_t>(cop.inj_left.at(t, x))]);
        for (int x = 0; x < g.target().card(t); ++x)
            rc[static_cast<std::size_t>(t)].push_back(
                ct.class_of[static_cast<std::size_t>(t)]
                           [static_cast<std::size_t>(cop.inj_right.at(t, x))]);
    }
    out.from_left = PresheafMap(f.target_ptr(), out.object, std::move(lb));
    out.from_right = PresheafMap(g.target_ptr(), out.object, std::move(rc));
    return out;
}

ImageFactorization image_factorization(const PresheafMap& f) {
    const Site& site = f.source().site();
    auto mask = empty_mask(site, f.target());
    for (int t = 0; t < site.n_trees(); ++t)
        for (int x = 0; x < f.source().card(t); ++x)
            mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(f.at(t, x))] = 1;
    Subobject image = make_subobject(f.target_ptr(), std::move(mask));
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t)
        for (int x = 0; x < f.source().card(t); ++x)
            comp[static_cast<std::size_t>(t)].push_back(
                image.index_in_sub[static_cast<std::size_t>(t)]
                                  [static_cast<std::size_t>(f.at(t, x))]);
    ImageFactorization out{PresheafMap(f.source_ptr(), image.object, std::move(comp), false),
                           std::move(image)};
    return out;
}

QuotientResult quotient_by_pairs(PresheafPtr x,
                                 const std::vector<std::tuple<int, int, int>>& pairs) {
    const Site& site = x->site();
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) cards[static_cast<std::size_t>(t)] = x->card(t);
    std::vector<UnionFind> uf;
    for (int t = 0; t < site.n_trees(); ++t) uf.emplace_back(cards[static_cast<std::size_t>(t)]);
    std::vector<std::tuple<int, int, int>> work = pairs;
    for (auto& [t, a, b] : work) uf[static_cast<std::size_t>(t)].unite(a, b);
    // propagate the congruence along all actions until stable
    while (!work.empty()) {
        auto [t, a, b] = work.back();
        work.pop_back();
        for (int s = 0; s < site.n_trees(); ++s)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                int ia = x->act(s, t, m, a), ib = x->act(s, t, m, b);
                if (uf[static_cast<std::size_t>(s)].unite(ia, ib)) work.emplace_back(s, ia, ib);
            }
    }
    ClassTable ct = classes_from_uf(site, cards, uf);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(s, t, m))];
                arr.assign(static_cast<std::size_t>(ct.n_classes[static_cast<std::size_t>(t)]), 0);
                for (int e = 0; e < x->card(t); ++e)
                    arr[static_cast<std::size_t>(ct.class_of[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)])] =
                        ct.class_of[static_cast<std::size_t>(s)][static_cast<std::size_t>(x->act(s, t, m, e))];
            }
    QuotientResult out;
    out.object = std::make_shared<Presheaf>(site, ct.n_classes, std::move(actions), true);
    out.projection = PresheafMap(x, out.object, ct.class_of);
    return out;
}

namespace {

// Backtracking search for natural maps with per-element constraints.
struct NatSolver {
    const Presheaf& src;
    const Presheaf& dst;
    const Site& site;
    const NatSearchOptions& opts;

    struct Var {
        int tree, elt;
    };
    std::vector<Var> vars;
    std::vector<std::vector<int>> var_id;  // per tree, per element
    std::vector<int> value;

    // Constraint instance: for f = hom(s,t)[m] and x in src_t:
    //   dst.act(s,t,m, value(t,x)) == value(s, src.act(s,t,m,x))
    struct Con {
        int s, t, m, x, other_var;
    };
    std::vector<std::vector<Con>> checks_at;  // constraints to test once var assigned

    std::vector<std::vector<std::vector<int>>> results;
    bool stop = false;

    NatSolver(const Presheaf& a, const Presheaf& b, const NatSearchOptions& o)
        : src(a), dst(b), site(a.site()), opts(o) {
        var_id.resize(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t) {
            var_id[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(src.card(t)));
            for (int x = 0; x < src.card(t); ++x) {
                var_id[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] =
                    static_cast<int>(vars.size());
                vars.push_back({t, x});
            }
        }
        value.assign(vars.size(), -1);
        checks_at.resize(vars.size());
        for (int s = 0; s < site.n_trees(); ++s)
            for (int t = 0; t < site.n_trees(); ++t)
                for (int m = 0; m < site.n_hom(s, t); ++m)
                    for (int x = 0; x < src.card(t); ++x) {
                        int v1 = var_id[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
                        int v2 = var_id[static_cast<std::size_t>(s)]
                                       [static_cast<std::size_t>(src.act(s, t, m, x))];
                        int later = std::max(v1, v2);
                        int other = v1 == later ? v2 : v1;
                        checks_at[static_cast<std::size_t>(later)].push_back({s, t, m, x, other});
                    }
    }

    bool ok(int vid) const {
        for (const auto& c : checks_at[static_cast<std::size_t>(vid)]) {
            int vt = value[static_cast<std::size_t>(
                var_id[static_cast<std::size_t>(c.t)][static_cast<std::size_t>(c.x)])];
            int vs = value[static_cast<std::size_t>(
                var_id[static_cast<std::size_t>(c.s)]
                      [static_cast<std::size_t>(src.act(c.s, c.t, c.m, c.x))])];
            if (vt < 0 || vs < 0) continue;  // the other endpoint not yet assigned
            if (dst.act(c.s, c.t, c.m, vt) != vs) return false;
        }
        return true;
    }

    void emit() {
        std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t) {
            comp[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(src.card(t)));
            for (int x = 0; x < src.card(t); ++x)
                comp[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] =
                    value[static_cast<std::size_t>(
                        var_id[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)])];
        }
        results.push_back(std::move(comp));
        if (opts.first_only) stop = true;
    }

    void run(std::size_t vid) {
        if (stop) return;
        if (vid == vars.size()) {
            emit();
            return;
        }
        auto [t, x] = vars[vid];
        int forced = -1;
        if (!opts.forced.empty()) forced = opts.forced[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
        const std::vector<int>* allowed = nullptr;
        if (!opts.allowed.empty() &&
            !opts.allowed[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)].empty())
            allowed = &opts.allowed[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];

        auto try_value = [&](int v) {
            if (stop) return;
            value[vid] = v;
            if (ok(static_cast<int>(vid))) run(vid + 1);
            value[vid] = -1;
        };
        if (forced >= 0) {
            if (!allowed || std::find(allowed->begin(), allowed->end(), forced) != allowed->end())
                try_value(forced);
        } else if (allowed) {
            for (int v : *allowed) try_value(v);
        } else {
            for (int v = 0; v < dst.card(t); ++v) try_value(v);
        }
    }
};

}  // namespace

std::vector<std::vector<std::vector<int>>> natural_maps(const Presheaf& src, const Presheaf& dst,
                                                        const NatSearchOptions& opts) {
    NatSolver solver(src, dst, opts);
    solver.run(0);
    return std::move(solver.results);
}

std::vector<PresheafMap> hom_maps(PresheafPtr src, PresheafPtr dst) {
    NatSearchOptions opts;
    std::vector<PresheafMap> out;
    for (auto& comp : natural_maps(*src, *dst, opts))
        out.emplace_back(src, dst, std::move(comp), false);
    return out;
}

long long count_hom_maps(const Presheaf& src, const Presheaf& dst) {
    NatSearchOptions opts;
    return static_cast<long long>(natural_maps(src, dst, opts).size());
}

PresheafMap yoneda_map(const Representable& rep, PresheafPtr x, int element) {
    const Site& site = x->site();
    int t_idx = site.index_of(rep.target->key());
    if (t_idx < 0) throw std::invalid_argument("yoneda_map: representing tree not in site");
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
    for (int s = 0; s < site.n_trees(); ++s) {
        comp[static_cast<std::size_t>(s)].resize(
            static_cast<std::size_t>(rep.presheaf->card(s)));
        for (int m = 0; m < rep.presheaf->card(s); ++m)
            comp[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)] =
                x->act(s, t_idx, m, element);
    }
    return PresheafMap(rep.presheaf, x, std::move(comp), false);
}

}  // namespace dendro
