#include "dendro/lean.hpp"

#include <algorithm>
#include <stdexcept>

namespace dendro {

Presheaf restrict_presheaf(const Presheaf& x, const Site& smaller) {
    const Site& big = x.site();
    if (smaller.flavor() != big.flavor())
        throw std::invalid_argument("restrict: flavor mismatch");
    if (smaller.max_size() > big.max_size())
        throw std::invalid_argument("restrict: target site is larger");
    std::vector<int> big_of(static_cast<std::size_t>(smaller.n_trees()));
    for (int t = 0; t < smaller.n_trees(); ++t) {
        int b = big.index_of(smaller.tree(t).key());
        if (b < 0) throw std::logic_error("restrict: tree missing in big site");
        big_of[static_cast<std::size_t>(t)] = b;
    }
    std::vector<int> cards(static_cast<std::size_t>(smaller.n_trees()));
    for (int t = 0; t < smaller.n_trees(); ++t)
        cards[static_cast<std::size_t>(t)] = x.card(big_of[static_cast<std::size_t>(t)]);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(smaller.n_action_slots()));
    for (int s = 0; s < smaller.n_trees(); ++s)
        for (int t = 0; t < smaller.n_trees(); ++t)
            for (int m = 0; m < smaller.n_hom(s, t); ++m) {
                // hom-sets agree between the two full subcategories
                int bm = big.find_morphism(big_of[static_cast<std::size_t>(s)],
                                           big_of[static_cast<std::size_t>(t)],
                                           smaller.hom(s, t)[static_cast<std::size_t>(m)].edge_map());
                if (bm < 0) throw std::logic_error("restrict: morphism missing in big site");
                actions[static_cast<std::size_t>(smaller.flat_index(s, t, m))] =
                    x.action(big_of[static_cast<std::size_t>(s)], big_of[static_cast<std::size_t>(t)], bm);
            }
    return Presheaf(smaller, std::move(cards), std::move(actions), false);
}

LeanObject::LeanObject(int degree, Presheaf data)
    : degree_(degree),
      data_(std::make_shared<Presheaf>(std::move(data))),
      cache_(std::make_shared<EvalCache>()) {
    if (data_->site().max_size() != degree)
        throw std::invalid_argument("lean object: data must live on the degree site");
}

int LeanObject::Eval::find(const std::vector<std::vector<int>>& family) const {
    for (std::size_t i = 0; i < families.size(); ++i)
        if (families[i] == family) return static_cast<int>(i);
    return -1;
}

const LeanObject::Eval& LeanObject::evaluate(const Tree& t) const {
    if (t.flavor() != flavor()) throw std::invalid_argument("evaluate: flavor mismatch");
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->entries.find(t.key());
    if (it == cache_->entries.end()) {
        auto eval = std::make_shared<Eval>();
        eval->rep = representable(site(), t);
        NatSearchOptions opts;
        eval->families = natural_maps(*eval->rep.presheaf, *data_, opts);
        it = cache_->entries.emplace(t.key(), std::move(eval)).first;
    }
    return *it->second;
}

std::vector<int> LeanObject::eval_action(const TreeMorphism& f) const {
    const Eval& et = evaluate(f.target());
    const Eval& es = evaluate(f.source());
    const Site& st = site();
    // postcomposition with f: hom(u, source) -> hom(u, target)
    std::vector<std::vector<int>> postcompose(static_cast<std::size_t>(st.n_trees()));
    for (int u = 0; u < st.n_trees(); ++u) {
        const auto& elems = es.rep.elements[static_cast<std::size_t>(u)];
        postcompose[static_cast<std::size_t>(u)].resize(elems.size());
        for (std::size_t i = 0; i < elems.size(); ++i) {
            std::vector<EdgeId> comp(static_cast<std::size_t>(elems[i].source().n_edges()));
            for (EdgeId e = 0; e < elems[i].source().n_edges(); ++e)
                comp[static_cast<std::size_t>(e)] = f(elems[i](e));
            int idx = et.rep.element_index(u, comp);
            if (idx < 0) throw std::logic_error("eval_action: composite missing");
            postcompose[static_cast<std::size_t>(u)][i] = idx;
        }
    }
    std::vector<int> out(static_cast<std::size_t>(et.size()));
    for (int fi = 0; fi < et.size(); ++fi) {
        std::vector<std::vector<int>> pulled(static_cast<std::size_t>(st.n_trees()));
        for (int u = 0; u < st.n_trees(); ++u) {
            auto& row = pulled[static_cast<std::size_t>(u)];
            row.resize(es.rep.elements[static_cast<std::size_t>(u)].size());
            for (std::size_t i = 0; i < row.size(); ++i)
                row[i] = et.families[static_cast<std::size_t>(fi)][static_cast<std::size_t>(u)]
                                    [static_cast<std::size_t>(
                                        postcompose[static_cast<std::size_t>(u)][i])];
        }
        int idx = es.find(pulled);
        if (idx < 0) throw std::logic_error("eval_action: pulled family is not compatible");
        out[static_cast<std::size_t>(fi)] = idx;
    }
    return out;
}

std::vector<int> LeanObject::unit_component(const Presheaf& x, int tree_index, const Tree& t) const {
    const Eval& ev = evaluate(t);
    const Site& big = x.site();
    const Site& deg = site();
    std::vector<int> out(static_cast<std::size_t>(x.card(tree_index)));
    for (int elt = 0; elt < x.card(tree_index); ++elt) {
        std::vector<std::vector<int>> family(static_cast<std::size_t>(deg.n_trees()));
        for (int u = 0; u < deg.n_trees(); ++u) {
            int bu = big.index_of(deg.tree(u).key());
            if (bu < 0) throw std::logic_error("unit: tree missing in big site");
            const auto& alphas = ev.rep.elements[static_cast<std::size_t>(u)];
            auto& row = family[static_cast<std::size_t>(u)];
            row.resize(alphas.size());
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                int bm = big.find_morphism(bu, tree_index, alphas[i].edge_map());
                if (bm < 0) throw std::logic_error("unit: morphism missing in big site");
                row[i] = x.act(bu, tree_index, bm, elt);
            }
        }
        int idx = ev.find(family);
        if (idx < 0) throw std::logic_error("unit: family of an element is not compatible");
        out[static_cast<std::size_t>(elt)] = idx;
    }
    return out;
}

LeanObject coskeleton(const Presheaf& x, int n) {
    if (n > x.site().max_size())
        throw std::invalid_argument("coskeleton: degree above the stored truncation");
    const Site& deg = Site::get(x.site().flavor(), n);
    return LeanObject(n, restrict_presheaf(x, deg));
}

Presheaf materialize(const LeanObject& lean, const Site& site) {
    if (site.flavor() != lean.flavor()) throw std::invalid_argument("materialize: flavor mismatch");
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t)
        cards[static_cast<std::size_t>(t)] = lean.evaluate(site.tree(t)).size();
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m)
                actions[static_cast<std::size_t>(site.flat_index(s, t, m))] =
                    lean.eval_action(site.hom(s, t)[static_cast<std::size_t>(m)]);
    return Presheaf(site, std::move(cards), std::move(actions), true);
}

PresheafMap coskeleton_unit(PresheafPtr x, int n) {
    LeanObject lean = coskeleton(*x, n);
    const Site& site = x->site();
    auto mat = std::make_shared<Presheaf>(materialize(lean, site));
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t)
        comp[static_cast<std::size_t>(t)] = lean.unit_component(*x, t, site.tree(t));
    return PresheafMap(x, mat, std::move(comp), true);
}

LeanObject cartesian_exponential(const Presheaf& e, const LeanObject& x) {
    const Site& deg = x.site();
    Presheaf e_res = e.site().max_size() == deg.max_size() ? e : restrict_presheaf(e, deg);
    auto e_ptr = std::make_shared<Presheaf>(std::move(e_res));

    // value at T: natural maps e x Omega[T] -> data
    std::vector<Representable> reps;
    std::vector<ProductResult> prods;
    std::vector<std::vector<std::vector<std::vector<int>>>> values;
    for (int t = 0; t < deg.n_trees(); ++t) {
        reps.push_back(representable(deg, deg.tree(t)));
        prods.push_back(product(e_ptr, reps.back().presheaf));
        NatSearchOptions opts;
        values.push_back(natural_maps(*prods.back().object, *x.data_ptr(), opts));
    }
    std::vector<int> cards;
    for (auto& v : values) cards.push_back(static_cast<int>(v.size()));

    std::vector<std::vector<int>> actions(static_cast<std::size_t>(deg.n_action_slots()));
    for (int s = 0; s < deg.n_trees(); ++s)
        for (int t = 0; t < deg.n_trees(); ++t)
            for (int m = 0; m < deg.n_hom(s, t); ++m) {
                const auto& f = deg.hom(s, t)[static_cast<std::size_t>(m)];
                // postcomposition hom(u,s) -> hom(u,t) on representables
                std::vector<std::vector<int>> post(static_cast<std::size_t>(deg.n_trees()));
                for (int u = 0; u < deg.n_trees(); ++u) {
                    const auto& elems =
                        reps[static_cast<std::size_t>(s)].elements[static_cast<std::size_t>(u)];
                    post[static_cast<std::size_t>(u)].resize(elems.size());
                    for (std::size_t i = 0; i < elems.size(); ++i) {
                        std::vector<EdgeId> comp(
                            static_cast<std::size_t>(elems[i].source().n_edges()));
                        for (EdgeId ed = 0; ed < elems[i].source().n_edges(); ++ed)
                            comp[static_cast<std::size_t>(ed)] = f(elems[i](ed));
                        int idx = reps[static_cast<std::size_t>(t)].element_index(u, comp);
                        if (idx < 0) throw std::logic_error("cartesian exponential: post map");
                        post[static_cast<std::size_t>(u)][i] = idx;
                    }
                }
                auto& arr = actions[static_cast<std::size_t>(deg.flat_index(s, t, m))];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(t)]));
                for (int h = 0; h < cards[static_cast<std::size_t>(t)]; ++h) {
                    // pull e x Omega[t] -> data back along id_e x f
                    std::vector<std::vector<int>> pulled(static_cast<std::size_t>(deg.n_trees()));
                    for (int u = 0; u < deg.n_trees(); ++u) {
                        int ce = e_ptr->card(u);
                        int cs = reps[static_cast<std::size_t>(s)].presheaf->card(u);
                        int ct = reps[static_cast<std::size_t>(t)].presheaf->card(u);
                        auto& row = pulled[static_cast<std::size_t>(u)];
                        row.resize(static_cast<std::size_t>(ce * cs));
                        for (int a = 0; a < ce; ++a)
                            for (int b = 0; b < cs; ++b) {
                                int tgt_pair =
                                    a * ct +
                                    post[static_cast<std::size_t>(u)][static_cast<std::size_t>(b)];
                                row[static_cast<std::size_t>(a * cs + b)] =
                                    values[static_cast<std::size_t>(t)][static_cast<std::size_t>(h)]
                                          [static_cast<std::size_t>(u)]
                                          [static_cast<std::size_t>(tgt_pair)];
                            }
                    }
                    int idx = -1;
                    const auto& vs = values[static_cast<std::size_t>(s)];
                    for (std::size_t i = 0; i < vs.size(); ++i)
                        if (vs[i] == pulled) idx = static_cast<int>(i);
                    if (idx < 0) throw std::logic_error("cartesian exponential: action escaped");
                    arr[static_cast<std::size_t>(h)] = idx;
                }
            }
    return LeanObject(x.degree(), Presheaf(deg, std::move(cards), std::move(actions), true));
}

std::optional<int> coskeletal_degree_search(const Presheaf& x, int bound) {
    auto xp = std::make_shared<Presheaf>(x);
    for (int m = 0; m <= bound; ++m) {
        if (m > x.site().max_size()) break;
        PresheafMap unit = coskeleton_unit(xp, m);
        if (unit.is_isomorphism()) return m;
    }
    return std::nullopt;
}

}  // namespace dendro
