#include "dendro/simplicial.hpp"

#include <algorithm>
#include <stdexcept>

namespace dendro {

bool Monotone::is_surjective() const {
    std::vector<char> hit(static_cast<std::size_t>(dst_dim + 1), 0);
    for (int v : values) hit[static_cast<std::size_t>(v)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::vector<Monotone> monotone_maps(int m, int k) {
    std::vector<Monotone> out;
    std::vector<int> cur(static_cast<std::size_t>(m + 1), 0);
    while (true) {
        out.push_back({m, k, cur});
        int i = m;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == k) --i;
        if (i < 0) break;
        int v = ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= m; ++j) cur[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

Monotone compose(const Monotone& g, const Monotone& f) {
    if (f.dst_dim != g.src_dim) throw std::invalid_argument("monotone compose mismatch");
    Monotone out{f.src_dim, g.dst_dim, {}};
    out.values.reserve(f.values.size());
    for (int v : f.values) out.values.push_back(g.values[static_cast<std::size_t>(v)]);
    return out;
}

Monotone monotone_identity(int n) {
    Monotone out{n, n, {}};
    for (int i = 0; i <= n; ++i) out.values.push_back(i);
    return out;
}

Monotone coface(int m, int i) {
    Monotone out{m - 1, m, {}};
    for (int j = 0; j <= m - 1; ++j) out.values.push_back(j < i ? j : j + 1);
    return out;
}

Monotone codegeneracy(int m, int i) {
    Monotone out{m + 1, m, {}};
    for (int j = 0; j <= m + 1; ++j) out.values.push_back(j <= i ? j : j - 1);
    return out;
}

int monotone_index(const Monotone& f) {
    auto all = monotone_maps(f.src_dim, f.dst_dim);
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i].values == f.values) return static_cast<int>(i);
    return -1;
}

SimplicialSet::SimplicialSet(int dim_bound, std::vector<int> cards,
                             std::vector<std::vector<std::vector<int>>> actions, bool validate)
    : K_(dim_bound), card_(std::move(cards)), act_(std::move(actions)) {
    if (static_cast<int>(card_.size()) != K_ + 1)
        throw std::invalid_argument("simplicial set: wrong card count");
    if (static_cast<int>(act_.size()) != (K_ + 1) * (K_ + 1))
        throw std::invalid_argument("simplicial set: wrong action table shape");
    if (validate && !check_identities())
        throw std::invalid_argument("simplicial identities fail");
}

int SimplicialSet::act(const Monotone& f, int x) const {
    if (f.src_dim > K_ || f.dst_dim > K_) throw std::invalid_argument("dimension out of range");
    int idx = monotone_index(f);
    return action(f.src_dim, f.dst_dim, idx)[static_cast<std::size_t>(x)];
}

bool SimplicialSet::check_identities() const {
    for (int m = 0; m <= K_; ++m)
        for (int k = 0; k <= K_; ++k) {
            auto maps = monotone_maps(m, k);
            const auto& table = act_[static_cast<std::size_t>(m * (K_ + 1) + k)];
            if (table.size() != maps.size()) return false;
            for (const auto& arr : table) {
                if (static_cast<int>(arr.size()) != card(k)) return false;
                for (int v : arr)
                    if (v < 0 || v >= card(m)) return false;
            }
        }
    for (int m = 0; m <= K_; ++m) {
        int id = monotone_index(monotone_identity(m));
        for (int x = 0; x < card(m); ++x)
            if (action(m, m, id)[static_cast<std::size_t>(x)] != x) return false;
    }
    for (int m = 0; m <= K_; ++m)
        for (int k = 0; k <= K_; ++k)
            for (int l = 0; l <= K_; ++l) {
                auto fs = monotone_maps(m, k);
                auto gs = monotone_maps(k, l);
                for (std::size_t fi = 0; fi < fs.size(); ++fi)
                    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
                        int gfi = monotone_index(compose(gs[gi], fs[fi]));
                        for (int x = 0; x < card(l); ++x) {
                            int via = action(m, k, static_cast<int>(fi))[static_cast<std::size_t>(
                                action(k, l, static_cast<int>(gi))[static_cast<std::size_t>(x)])];
                            if (action(m, l, gfi)[static_cast<std::size_t>(x)] != via) return false;
                        }
                    }
            }
    return true;
}

bool SimplicialSet::is_degenerate(int m, int x) const {
    for (int i = 0; i + 1 <= m; ++i) {
        Monotone s = codegeneracy(m - 1, i);  // [m] -> [m-1]
        Monotone d = coface(m, i);            // [m-1] -> [m], a section of s
        int y = act(d, x);
        if (act(s, y) == x) return true;
    }
    return false;
}

SimplicialSet::NormalForm SimplicialSet::normal_form(int m, int x) const {
    // invariant: original x equals X(surj)(elt)
    Monotone surj = monotone_identity(m);
    int dim = m, elt = x;
    bool reduced = true;
    while (reduced) {
        reduced = false;
        for (int i = 0; i + 1 <= dim; ++i) {
            Monotone s = codegeneracy(dim - 1, i);
            Monotone d = coface(dim, i);
            int y = act(d, elt);
            if (act(s, y) == elt) {
                surj = compose(s, surj);
                dim -= 1;
                elt = y;
                reduced = true;
                break;
            }
        }
    }
    return {dim, elt, surj};
}

namespace {

SimplicialSet build_from_elements(int K,
                                  const std::vector<std::vector<Monotone>>& elems_by_dim) {
    // Elements in dimension m are monotone maps into a fixed [n]; the action
    // is composition.
    std::vector<int> cards;
    for (int m = 0; m <= K; ++m)
        cards.push_back(static_cast<int>(elems_by_dim[static_cast<std::size_t>(m)].size()));
    std::vector<std::vector<std::vector<int>>> actions(static_cast<std::size_t>((K + 1) * (K + 1)));
    for (int m = 0; m <= K; ++m)
        for (int k = 0; k <= K; ++k) {
            auto maps = monotone_maps(m, k);
            auto& table = actions[static_cast<std::size_t>(m * (K + 1) + k)];
            table.resize(maps.size());
            for (std::size_t fi = 0; fi < maps.size(); ++fi) {
                auto& arr = table[fi];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(k)]));
                for (int x = 0; x < cards[static_cast<std::size_t>(k)]; ++x) {
                    Monotone comp = compose(
                        elems_by_dim[static_cast<std::size_t>(k)][static_cast<std::size_t>(x)],
                        maps[fi]);
                    const auto& row = elems_by_dim[static_cast<std::size_t>(m)];
                    int idx = -1;
                    for (std::size_t j = 0; j < row.size(); ++j)
                        if (row[j].values == comp.values) idx = static_cast<int>(j);
                    if (idx < 0) throw std::logic_error("simplex element table incomplete");
                    arr[static_cast<std::size_t>(x)] = idx;
                }
            }
        }
    return SimplicialSet(K, std::move(cards), std::move(actions), false);
}

}  // namespace

SimplicialSet standard_simplex(int n, int K) {
    std::vector<std::vector<Monotone>> elems(static_cast<std::size_t>(K + 1));
    for (int m = 0; m <= K; ++m) elems[static_cast<std::size_t>(m)] = monotone_maps(m, n);
    return build_from_elements(K, elems);
}

SimplicialSet simplex_boundary(int n, int K) {
    std::vector<std::vector<Monotone>> elems(static_cast<std::size_t>(K + 1));
    for (int m = 0; m <= K; ++m)
        for (auto& f : monotone_maps(m, n))
            if (!f.is_surjective()) elems[static_cast<std::size_t>(m)].push_back(f);
    return build_from_elements(K, elems);
}

SimplicialSet simplex_horn(int n, int i, int K) {
    std::vector<std::vector<Monotone>> elems(static_cast<std::size_t>(K + 1));
    for (int m = 0; m <= K; ++m)
        for (auto& f : monotone_maps(m, n)) {
            std::vector<char> hit(static_cast<std::size_t>(n + 1), 0);
            for (int v : f.values) hit[static_cast<std::size_t>(v)] = 1;
            bool misses_other = false;
            for (int v = 0; v <= n; ++v)
                if (v != i && !hit[static_cast<std::size_t>(v)]) misses_other = true;
            if (misses_other) elems[static_cast<std::size_t>(m)].push_back(f);
        }
    return build_from_elements(K, elems);
}

SimplicialSet sset_skeleton(const SimplicialSet& x, int j) {
    const int K = x.dim_bound();
    std::vector<std::vector<int>> keep(static_cast<std::size_t>(K + 1));
    std::vector<std::vector<int>> newindex(static_cast<std::size_t>(K + 1));
    std::vector<int> cards(static_cast<std::size_t>(K + 1), 0);
    for (int m = 0; m <= K; ++m) {
        newindex[static_cast<std::size_t>(m)].assign(static_cast<std::size_t>(x.card(m)), -1);
        for (int e = 0; e < x.card(m); ++e) {
            if (x.normal_form(m, e).dim <= j) {
                newindex[static_cast<std::size_t>(m)][static_cast<std::size_t>(e)] =
                    cards[static_cast<std::size_t>(m)]++;
                keep[static_cast<std::size_t>(m)].push_back(e);
            }
        }
    }
    std::vector<std::vector<std::vector<int>>> actions(static_cast<std::size_t>((K + 1) * (K + 1)));
    for (int m = 0; m <= K; ++m)
        for (int k = 0; k <= K; ++k) {
            auto maps = monotone_maps(m, k);
            auto& table = actions[static_cast<std::size_t>(m * (K + 1) + k)];
            table.resize(maps.size());
            for (std::size_t fi = 0; fi < maps.size(); ++fi) {
                auto& arr = table[fi];
                for (int e : keep[static_cast<std::size_t>(k)]) {
                    int img = x.action(m, k, static_cast<int>(fi))[static_cast<std::size_t>(e)];
                    int ni = newindex[static_cast<std::size_t>(m)][static_cast<std::size_t>(img)];
                    if (ni < 0) throw std::logic_error("skeleton not closed under actions");
                    arr.push_back(ni);
                }
            }
        }
    return SimplicialSet(K, std::move(cards), std::move(actions), false);
}

}  // namespace dendro
