#include "dendro/gset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dendro {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    const int n = order();
    if (n == 0) throw std::invalid_argument("group must be nonempty");
    for (const auto& row : table_)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("table not square");
    for (int a = 0; a < n; ++a) {
        if (mul(0, a) != a || mul(a, 0) != a) throw std::invalid_argument("0 is not a unit");
        bool has_inv = false;
        for (int b = 0; b < n; ++b)
            if (mul(a, b) == 0 && mul(b, a) == 0) has_inv = true;
        if (!has_inv) throw std::invalid_argument("missing inverse");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw std::invalid_argument("associativity fails");
}

int FiniteGroup::inverse(int a) const {
    for (int b = 0; b < order(); ++b)
        if (mul(a, b) == 0) return b;
    throw std::logic_error("no inverse");
}

FiniteGroup FiniteGroup::cyclic(int k) {
    if (k <= 0) throw std::invalid_argument("cyclic group needs k >= 1");
    std::vector<std::vector<int>> t(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k)));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % k;
    return FiniteGroup(std::move(t));
}

FiniteGroup FiniteGroup::symmetric(int k) {
    if (k < 0) throw std::invalid_argument("symmetric group needs k >= 0");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    // put the identity first (next_permutation starts there already)
    const int n = static_cast<int>(perms.size());
    auto index_of = [&](const std::vector<int>& q) {
        for (int i = 0; i < n; ++i)
            if (perms[static_cast<std::size_t>(i)] == q) return i;
        return -1;
    };
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<int> comp(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                comp[static_cast<std::size_t>(i)] =
                    perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(
                        perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)])];
            t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = index_of(comp);
        }
    return FiniteGroup(std::move(t));
}

FiniteGSet::FiniteGSet(FiniteGroup group, std::vector<std::vector<int>> action)
    : group_(std::move(group)), action_(std::move(action)) {
    const int n = size(), k = group_.order();
    for (const auto& row : action_)
        if (static_cast<int>(row.size()) != k) throw std::invalid_argument("action row size");
    for (int x = 0; x < n; ++x) {
        if (act(x, 0) != x) throw std::invalid_argument("unit does not act trivially");
        for (int g = 0; g < k; ++g) {
            if (act(x, g) < 0 || act(x, g) >= n) throw std::invalid_argument("action out of range");
            for (int h = 0; h < k; ++h)
                if (act(act(x, g), h) != act(x, group_.mul(g, h)))
                    throw std::invalid_argument("action not compatible with multiplication");
        }
    }
}

FiniteGSet FiniteGSet::regular(const FiniteGroup& g) {
    const int k = g.order();
    std::vector<std::vector<int>> a(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k)));
    for (int x = 0; x < k; ++x)
        for (int h = 0; h < k; ++h) a[static_cast<std::size_t>(x)][static_cast<std::size_t>(h)] = g.mul(x, h);
    return FiniteGSet(g, std::move(a));
}

FiniteGSet FiniteGSet::trivial_points(const FiniteGroup& g, int n) {
    std::vector<std::vector<int>> a(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(g.order())));
    for (int x = 0; x < n; ++x)
        for (int h = 0; h < g.order(); ++h) a[static_cast<std::size_t>(x)][static_cast<std::size_t>(h)] = x;
    return FiniteGSet(g, std::move(a));
}

FiniteGSet FiniteGSet::two_power(const FiniteGroup& g) {
    const int k = g.order();
    const int n = 1 << k;  // subsets of G as indicator functions
    std::vector<std::vector<int>> a(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(k)));
    for (int x = 0; x < n; ++x)
        for (int gg = 0; gg < k; ++gg) {
            int y = 0;
            for (int h = 0; h < k; ++h) {
                int bit = (x >> g.mul(gg, h)) & 1;  // (f.g)(h) = f(gh)
                y |= bit << h;
            }
            a[static_cast<std::size_t>(x)][static_cast<std::size_t>(gg)] = y;
        }
    return FiniteGSet(g, std::move(a));
}

FiniteGSet FiniteGSet::disjoint_union(const FiniteGSet& other) const {
    if (!(group_ == other.group_)) throw std::invalid_argument("union: groups differ");
    std::vector<std::vector<int>> a = action_;
    for (const auto& row : other.action_) {
        std::vector<int> shifted;
        for (int v : row) shifted.push_back(v + size());
        a.push_back(std::move(shifted));
    }
    return FiniteGSet(group_, std::move(a));
}

GMap::GMap(FiniteGSet s, FiniteGSet t, std::vector<int> v)
    : source(std::move(s)), target(std::move(t)), values(std::move(v)) {
    if (!(source.group() == target.group())) throw std::invalid_argument("gmap: groups differ");
    if (static_cast<int>(values.size()) != source.size())
        throw std::invalid_argument("gmap: wrong length");
    for (int x = 0; x < source.size(); ++x) {
        if (values[static_cast<std::size_t>(x)] < 0 ||
            values[static_cast<std::size_t>(x)] >= target.size())
            throw std::invalid_argument("gmap: value out of range");
        for (int g = 0; g < source.group().order(); ++g)
            if ((*this)(source.act(x, g)) != target.act((*this)(x), g))
                throw std::invalid_argument("gmap: not equivariant");
    }
}

bool GMap::is_injective() const {
    std::vector<char> seen(static_cast<std::size_t>(target.size()), 0);
    for (int v : values) {
        if (seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

std::vector<GMap> equivariant_maps(const FiniteGSet& source, const FiniteGSet& target) {
    std::vector<GMap> out;
    std::vector<int> v(static_cast<std::size_t>(source.size()), -1);
    const int k = source.group().order();
    // backtracking with equivariance propagation
    auto consistent = [&](int x) {
        for (int g = 0; g < k; ++g) {
            int xg = source.act(x, g);
            int vx = v[static_cast<std::size_t>(x)];
            int vxg = v[static_cast<std::size_t>(xg)];
            if (vxg != -1 && vxg != target.act(vx, g)) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int x) -> void {
        if (x == source.size()) {
            out.emplace_back(source, target, v);
            return;
        }
        if (v[static_cast<std::size_t>(x)] != -1) {  // already forced by the orbit
            self(self, x + 1);
            return;
        }
        for (int y = 0; y < target.size(); ++y) {
            // assign and propagate over the orbit of x
            std::vector<std::pair<int, int>> assigned;
            bool ok = true;
            v[static_cast<std::size_t>(x)] = y;
            assigned.emplace_back(x, y);
            for (int g = 0; g < k && ok; ++g) {
                int xg = source.act(x, g);
                int want = target.act(y, g);
                int& slot = v[static_cast<std::size_t>(xg)];
                if (slot == -1) {
                    slot = want;
                    assigned.emplace_back(xg, want);
                } else if (slot != want) {
                    ok = false;
                }
            }
            if (ok && consistent(x)) self(self, x + 1);
            for (auto& [xx, yy] : assigned) v[static_cast<std::size_t>(xx)] = -1;
        }
    };
    rec(rec, 0);
    return out;
}

bool is_free(const FiniteGSet& x) {
    for (int e = 0; e < x.size(); ++e)
        for (int g = 1; g < x.group().order(); ++g)
            if (x.act(e, g) == e) return false;
    return true;
}

bool free_on_complement(const GMap& f) {
    std::vector<char> in_image(static_cast<std::size_t>(f.target.size()), 0);
    for (int v : f.values) in_image[static_cast<std::size_t>(v)] = 1;
    for (int y = 0; y < f.target.size(); ++y) {
        if (in_image[static_cast<std::size_t>(y)]) continue;
        for (int g = 1; g < f.target.group().order(); ++g)
            if (f.target.act(y, g) == y) return false;
    }
    return true;
}

bool has_llp_generator(const GMap& f) {
    const FiniteGroup& g = f.source.group();
    FiniteGSet dom = FiniteGSet::two_power(g).disjoint_union(FiniteGSet::regular(g));
    FiniteGSet cod = FiniteGSet::trivial_points(g, 2);
    const int split = FiniteGSet::two_power(g).size();
    // p: 2^G u G -> * u * collapses each summand
    std::vector<int> pv;
    for (int x = 0; x < dom.size(); ++x) pv.push_back(x < split ? 0 : 1);
    GMap p(dom, cod, pv);

    for (const auto& top : equivariant_maps(f.source, dom)) {
        for (const auto& bottom : equivariant_maps(f.target, cod)) {
            bool commutes = true;
            for (int x = 0; x < f.source.size(); ++x)
                if (p(top(x)) != bottom(f(x))) commutes = false;
            if (!commutes) continue;
            bool lifted = false;
            for (const auto& h : equivariant_maps(f.target, dom)) {
                bool tri1 = true, tri2 = true;
                for (int x = 0; x < f.source.size(); ++x)
                    if (h(f(x)) != top(x)) tri1 = false;
                for (int y = 0; y < f.target.size(); ++y)
                    if (p(h(y)) != bottom(y)) tri2 = false;
                if (tri1 && tri2) {
                    lifted = true;
                    break;
                }
            }
            if (!lifted) return false;
        }
    }
    return true;
}

namespace {

// orbit types of G up to iso: G/H for subgroups H; for the cyclic and small
// symmetric groups used here we enumerate transitive actions directly by
// brute force over actions on {0..s-1}.
std::vector<FiniteGSet> transitive_gsets(const FiniteGroup& g, int size) {
    std::vector<FiniteGSet> out;
    const int k = g.order();
    if (size < 1 || size > k) return out;
    // enumerate candidate actions generated by where each generator sends each point
    // brute force over all action tables; dedupe by canonical orbit signature
    std::vector<std::vector<int>> table(static_cast<std::size_t>(size),
                                        std::vector<int>(static_cast<std::size_t>(k)));
    std::vector<std::string> seen;
    auto canonical = [&](const FiniteGSet& x) {
        // smallest lexicographic action table over all relabellings of points
        std::vector<int> perm(static_cast<std::size_t>(x.size()));
        std::iota(perm.begin(), perm.end(), 0);
        std::string best;
        do {
            std::vector<int> inv(static_cast<std::size_t>(x.size()));
            for (int p = 0; p < x.size(); ++p) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])] = p;
            std::string s;
            for (int p = 0; p < x.size(); ++p)
                for (int gg = 0; gg < k; ++gg)
                    s += static_cast<char>(
                        '0' + inv[static_cast<std::size_t>(x.act(perm[static_cast<std::size_t>(p)], gg))]);
            if (best.empty() || s < best) best = s;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    };
    // recursive fill with transitivity check at the end
    auto rec = [&](auto&& self, int x, int gg) -> void {
        if (x == size) {
            try {
                FiniteGSet cand(g, table);
                // transitive?
                std::vector<char> reach(static_cast<std::size_t>(size), 0);
                reach[0] = 1;
                for (int h = 0; h < k; ++h) reach[static_cast<std::size_t>(cand.act(0, h))] = 1;
                if (std::all_of(reach.begin(), reach.end(), [](char c) { return c != 0; })) {
                    std::string sig = canonical(cand);
                    if (std::find(seen.begin(), seen.end(), sig) == seen.end()) {
                        seen.push_back(sig);
                        out.push_back(std::move(cand));
                    }
                }
            } catch (const std::invalid_argument&) {
            }
            return;
        }
        int nx = x, ng = gg + 1;
        if (ng == k) {
            ng = 0;
            ++nx;
        }
        if (gg == 0) {
            table[static_cast<std::size_t>(x)][0] = x;
            self(self, nx, ng);
            return;
        }
        for (int y = 0; y < size; ++y) {
            table[static_cast<std::size_t>(x)][static_cast<std::size_t>(gg)] = y;
            self(self, nx, ng);
        }
    };
    rec(rec, 0, 0);
    return out;
}

}  // namespace

std::vector<FiniteGSet> all_gsets_upto(const FiniteGroup& g, int max_size) {
    // orbit types by size
    std::vector<std::vector<FiniteGSet>> orbits(static_cast<std::size_t>(max_size) + 1);
    for (int s = 1; s <= max_size; ++s) orbits[static_cast<std::size_t>(s)] = transitive_gsets(g, s);
    // multisets of orbits with total size <= max_size
    std::vector<FiniteGSet> out{FiniteGSet::empty(g)};
    struct Item {
        FiniteGSet set;
        int last_rank;
        int size;
    };
    std::vector<Item> frontier{{FiniteGSet::empty(g), 0, 0}};
    // flattened ranked orbit list
    std::vector<FiniteGSet> ranked;
    for (int s = 1; s <= max_size; ++s)
        for (auto& o : orbits[static_cast<std::size_t>(s)]) ranked.push_back(o);
    while (!frontier.empty()) {
        std::vector<Item> next;
        for (auto& item : frontier) {
            for (int r = item.last_rank; r < static_cast<int>(ranked.size()); ++r) {
                int ns = item.size + ranked[static_cast<std::size_t>(r)].size();
                if (ns > max_size) continue;
                Item ni{item.set.disjoint_union(ranked[static_cast<std::size_t>(r)]), r, ns};
                out.push_back(ni.set);
                next.push_back(std::move(ni));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

const char* trilean_name(Trilean t) {
    switch (t) {
        case Trilean::False: return "false";
        case Trilean::True: return "true";
        case Trilean::Inconclusive: return "inconclusive";
    }
    return "?";
}

int GSetTower::bond_down(int j, int i, int x) const {
    while (j > i) {
        x = bonds[static_cast<std::size_t>(j - 1)](x);
        --j;
    }
    return x;
}

void GSetTower::validate() const {
    if (levels.empty()) throw std::invalid_argument("tower must have at least one level");
    if (bonds.size() + 1 != levels.size()) throw std::invalid_argument("tower bond count");
    for (std::size_t i = 0; i < bonds.size(); ++i) {
        if (!(bonds[i].source == levels[i + 1]) || !(bonds[i].target == levels[i]))
            throw std::invalid_argument("tower bond endpoints");
    }
}

void GSetTowerMap::validate() const {
    source.validate();
    target.validate();
    if (static_cast<int>(levels.size()) != source.length() ||
        source.length() != target.length())
        throw std::invalid_argument("tower map level count");
    for (int i = 0; i < source.length(); ++i) {
        if (!(levels[static_cast<std::size_t>(i)].source == source.levels[static_cast<std::size_t>(i)]) ||
            !(levels[static_cast<std::size_t>(i)].target == target.levels[static_cast<std::size_t>(i)]))
            throw std::invalid_argument("tower map level endpoints");
    }
    // strictness: level squares commute
    for (int i = 0; i + 1 < source.length(); ++i)
        for (int x = 0; x < source.levels[static_cast<std::size_t>(i + 1)].size(); ++x)
            if (levels[static_cast<std::size_t>(i)](source.bonds[static_cast<std::size_t>(i)](x)) !=
                target.bonds[static_cast<std::size_t>(i)](levels[static_cast<std::size_t>(i + 1)](x)))
                throw std::invalid_argument("tower map squares do not commute");
}

Trilean tower_is_mono(const GSetTowerMap& f) {
    f.validate();
    const int m = f.source.length() - 1;
    bool witnessed_all = true;
    for (int i = 0; i <= m; ++i) {
        bool witnessed = false;
        for (int j = i; j <= m && !witnessed; ++j) {
            bool ok = true;
            const auto& Xj = f.source.levels[static_cast<std::size_t>(j)];
            for (int x = 0; x < Xj.size() && ok; ++x)
                for (int y = x + 1; y < Xj.size() && ok; ++y)
                    if (f.levels[static_cast<std::size_t>(j)](x) ==
                            f.levels[static_cast<std::size_t>(j)](y) &&
                        f.source.bond_down(j, i, x) != f.source.bond_down(j, i, y))
                        ok = false;
            if (ok) witnessed = true;
        }
        if (!witnessed) witnessed_all = false;
    }
    if (witnessed_all) return Trilean::True;
    // prefix threads are the deepest level; injectivity there decides falsity
    if (!f.levels[static_cast<std::size_t>(m)].is_injective()) return Trilean::False;
    return Trilean::Inconclusive;
}

GSetTowerMap reindex_to_injective(const GSetTowerMap& f) {
    f.validate();
    GSetTowerMap out;
    out.target = f.target;
    const int n = f.source.length();
    std::vector<std::vector<int>> image_elems(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& Yi = f.target.levels[static_cast<std::size_t>(i)];
        std::vector<char> hit(static_cast<std::size_t>(Yi.size()), 0);
        for (int v : f.levels[static_cast<std::size_t>(i)].values) hit[static_cast<std::size_t>(v)] = 1;
        for (int y = 0; y < Yi.size(); ++y)
            if (hit[static_cast<std::size_t>(y)]) image_elems[static_cast<std::size_t>(i)].push_back(y);
        // the image as a G-set
        std::vector<int> idx(static_cast<std::size_t>(Yi.size()), -1);
        for (std::size_t k = 0; k < image_elems[static_cast<std::size_t>(i)].size(); ++k)
            idx[static_cast<std::size_t>(image_elems[static_cast<std::size_t>(i)][k])] = static_cast<int>(k);
        std::vector<std::vector<int>> act;
        for (int y : image_elems[static_cast<std::size_t>(i)]) {
            std::vector<int> row;
            for (int g = 0; g < Yi.group().order(); ++g) {
                int v = idx[static_cast<std::size_t>(Yi.act(y, g))];
                if (v < 0) throw std::logic_error("image not closed under the action");
                row.push_back(v);
            }
            act.push_back(std::move(row));
        }
        out.source.levels.emplace_back(Yi.group(), std::move(act));
        std::vector<int> incl(image_elems[static_cast<std::size_t>(i)].begin(),
                              image_elems[static_cast<std::size_t>(i)].end());
        out.levels.emplace_back(out.source.levels.back(), Yi, std::move(incl));
    }
    for (int i = 0; i + 1 < n; ++i) {
        // induced bonding map on images
        std::vector<int> idx_i(static_cast<std::size_t>(f.target.levels[static_cast<std::size_t>(i)].size()), -1);
        for (std::size_t k = 0; k < image_elems[static_cast<std::size_t>(i)].size(); ++k)
            idx_i[static_cast<std::size_t>(image_elems[static_cast<std::size_t>(i)][k])] = static_cast<int>(k);
        std::vector<int> bond;
        for (int y : image_elems[static_cast<std::size_t>(i + 1)]) {
            int v = idx_i[static_cast<std::size_t>(f.target.bonds[static_cast<std::size_t>(i)](y))];
            if (v < 0) throw std::logic_error("bond does not restrict to images");
            bond.push_back(v);
        }
        out.source.bonds.emplace_back(out.source.levels[static_cast<std::size_t>(i + 1)],
                                      out.source.levels[static_cast<std::size_t>(i)], std::move(bond));
    }
    out.validate();
    return out;
}

std::optional<FreeComplementReindex> reindex_free_complement(const GSetTowerMap& f) {
    f.validate();
    const int n = f.source.length();
    const int m = n - 1;
    for (int i = 0; i < n; ++i)
        if (!f.levels[static_cast<std::size_t>(i)].is_injective())
            throw std::invalid_argument("reindex_free_complement expects a levelwise injective map");

    // theta(i) = least witness >= max(i, theta(i-1)) realizing the free-complement
    // stabilization for level i
    std::vector<int> theta(static_cast<std::size_t>(n), -1);
    int lower = 0;
    for (int i = 0; i < n; ++i) {
        lower = std::max(lower, i);
        int found = -1;
        for (int j = lower; j <= m && found < 0; ++j) {
            bool ok = true;
            const auto& Yj = f.target.levels[static_cast<std::size_t>(j)];
            std::vector<char> in_image(static_cast<std::size_t>(f.target.levels[static_cast<std::size_t>(i)].size()), 0);
            for (int v : f.levels[static_cast<std::size_t>(i)].values) in_image[static_cast<std::size_t>(v)] = 1;
            for (int y = 0; y < Yj.size() && ok; ++y)
                for (int g = 1; g < Yj.group().order() && ok; ++g)
                    if (Yj.act(y, g) == y &&
                        !in_image[static_cast<std::size_t>(f.target.bond_down(j, i, y))])
                        ok = false;
            if (ok) found = j;
        }
        if (found < 0) return std::nullopt;
        theta[static_cast<std::size_t>(i)] = found;
        lower = found;
    }

    // levels: X'_i = preimage of im(f_i) in Y_theta(i)
    FreeComplementReindex out;
    out.theta = theta;
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& Yt = f.target.levels[static_cast<std::size_t>(theta[static_cast<std::size_t>(i)])];
        std::vector<char> in_image(static_cast<std::size_t>(f.target.levels[static_cast<std::size_t>(i)].size()), 0);
        for (int v : f.levels[static_cast<std::size_t>(i)].values) in_image[static_cast<std::size_t>(v)] = 1;
        for (int y = 0; y < Yt.size(); ++y)
            if (in_image[static_cast<std::size_t>(
                    f.target.bond_down(theta[static_cast<std::size_t>(i)], i, y))])
                members[static_cast<std::size_t>(i)].push_back(y);
        std::vector<int> idx(static_cast<std::size_t>(Yt.size()), -1);
        for (std::size_t k = 0; k < members[static_cast<std::size_t>(i)].size(); ++k)
            idx[static_cast<std::size_t>(members[static_cast<std::size_t>(i)][k])] = static_cast<int>(k);
        std::vector<std::vector<int>> act;
        for (int y : members[static_cast<std::size_t>(i)]) {
            std::vector<int> row;
            for (int g = 0; g < Yt.group().order(); ++g) {
                int v = idx[static_cast<std::size_t>(Yt.act(y, g))];
                if (v < 0) throw std::logic_error("pullback not closed under the action");
                row.push_back(v);
            }
            act.push_back(std::move(row));
        }
        out.map.source.levels.emplace_back(Yt.group(), std::move(act));
        out.map.target.levels.push_back(Yt);
        std::vector<int> incl(members[static_cast<std::size_t>(i)].begin(),
                              members[static_cast<std::size_t>(i)].end());
        out.map.levels.emplace_back(out.map.source.levels.back(), Yt, std::move(incl));
    }
    // bonds: Y_theta(i+1) -> Y_theta(i) composite bonds, restricted to the pullbacks
    for (int i = 0; i + 1 < n; ++i) {
        int ti = theta[static_cast<std::size_t>(i)], ti1 = theta[static_cast<std::size_t>(i + 1)];
        std::vector<int> y_bond;
        for (int y = 0; y < f.target.levels[static_cast<std::size_t>(ti1)].size(); ++y)
            y_bond.push_back(f.target.bond_down(ti1, ti, y));
        out.map.target.bonds.emplace_back(f.target.levels[static_cast<std::size_t>(ti1)],
                                          f.target.levels[static_cast<std::size_t>(ti)],
                                          y_bond);
        std::vector<int> idx(static_cast<std::size_t>(f.target.levels[static_cast<std::size_t>(ti)].size()), -1);
        for (std::size_t k = 0; k < members[static_cast<std::size_t>(i)].size(); ++k)
            idx[static_cast<std::size_t>(members[static_cast<std::size_t>(i)][k])] = static_cast<int>(k);
        std::vector<int> bond;
        for (int y : members[static_cast<std::size_t>(i + 1)]) {
            int v = idx[static_cast<std::size_t>(y_bond[static_cast<std::size_t>(y)])];
            if (v < 0) throw std::logic_error("pullback bond escapes");
            bond.push_back(v);
        }
        out.map.source.bonds.emplace_back(out.map.source.levels[static_cast<std::size_t>(i + 1)],
                                          out.map.source.levels[static_cast<std::size_t>(i)],
                                          std::move(bond));
    }
    out.map.validate();
    return out;
}

}  // namespace dendro
