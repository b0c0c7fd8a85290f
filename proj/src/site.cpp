#include "dendro/site.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>

#include <json.hpp>

namespace dendro {

Site::Site(Flavor flavor, int max_size) : flavor_(flavor), max_size_(max_size) {
    for (auto& t : enumerate_trees(max_size, flavor))
        trees_.push_back(std::make_shared<const Tree>(std::move(t)));
    for (int i = 0; i < n_trees(); ++i) index_[trees_[static_cast<std::size_t>(i)]->key()] = i;

    const char* cache_dir = std::getenv("DENDRO_CACHE_DIR");
    std::string cache_path;
    if (cache_dir && *cache_dir) {
        cache_path = std::string(cache_dir) + "/homs_" + flavor_name(flavor) + "_" +
                     std::to_string(max_size) + ".json";
    }

    bool loaded = !cache_path.empty() && load_cache(cache_path);
    if (!loaded) {
        hom_.resize(static_cast<std::size_t>(n_trees()));
        for (int s = 0; s < n_trees(); ++s) {
            hom_[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(n_trees()));
            for (int t = 0; t < n_trees(); ++t)
                hom_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                    hom_set(tree(s), tree(t));
        }
        if (!cache_path.empty()) save_cache(cache_path);
    }

    id_index_.resize(static_cast<std::size_t>(n_trees()));
    for (int t = 0; t < n_trees(); ++t) {
        std::vector<EdgeId> id(static_cast<std::size_t>(tree(t).n_edges()));
        for (EdgeId e = 0; e < tree(t).n_edges(); ++e) id[static_cast<std::size_t>(e)] = e;
        id_index_[static_cast<std::size_t>(t)] = find_morphism(t, t, id);
    }

    faces_.resize(static_cast<std::size_t>(n_trees()));
    degen_.resize(static_cast<std::size_t>(n_trees()));
    for (int t = 0; t < n_trees(); ++t) {
        for (auto& em : elementary_maps(tree(t))) {
            if (em.kind == ElementaryKind::Degeneracy) {
                int tgt = index_of(em.map.target().key());
                if (tgt < 0) continue;
                int hi = find_morphism(t, tgt, em.map.edge_map());
                degen_[static_cast<std::size_t>(t)].push_back({tgt, hi});
            } else {
                int src = index_of(em.map.source().key());
                if (src < 0) continue;
                int hi = find_morphism(src, t, em.map.edge_map());
                faces_[static_cast<std::size_t>(t)].push_back({em.kind, src, hi});
            }
        }
    }

    slot_base_.resize(static_cast<std::size_t>(n_trees() * n_trees()));
    n_slots_ = 0;
    for (int s = 0; s < n_trees(); ++s)
        for (int t = 0; t < n_trees(); ++t) {
            slot_base_[static_cast<std::size_t>(s * n_trees() + t)] = n_slots_;
            n_slots_ += n_hom(s, t);
        }
}

int Site::index_of(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
}

int Site::find_morphism(int s, int t, const std::vector<EdgeId>& edge_map) const {
    const auto& hs = hom(s, t);
    int lo = 0, hi = static_cast<int>(hs.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (hs[static_cast<std::size_t>(mid)].edge_map() < edge_map)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < static_cast<int>(hs.size()) && hs[static_cast<std::size_t>(lo)].edge_map() == edge_map)
        return lo;
    return -1;
}

int Site::compose_index(int s, int t, int u, int f, int g) const {
    const auto& mf = hom(s, t)[static_cast<std::size_t>(f)].edge_map();
    const auto& mg = hom(t, u)[static_cast<std::size_t>(g)].edge_map();
    std::vector<EdgeId> comp(mf.size());
    for (std::size_t e = 0; e < mf.size(); ++e)
        comp[e] = mg[static_cast<std::size_t>(mf[e])];
    return find_morphism(s, u, comp);
}

const Site& Site::get(Flavor flavor, int max_size) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Site>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(flavor), max_size);
    auto it = registry.find(key);
    if (it == registry.end())
        it = registry.emplace(key, std::make_unique<Site>(flavor, max_size)).first;
    return *it->second;
}

bool Site::load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("flavor").get<std::string>() != flavor_name(flavor_)) return false;
        if (j.at("max_size").get<int>() != max_size_) return false;
        auto keys = j.at("trees").get<std::vector<std::string>>();
        if (static_cast<int>(keys.size()) != n_trees()) return false;
        for (int i = 0; i < n_trees(); ++i)
            if (keys[static_cast<std::size_t>(i)] != tree(i).key()) return false;
        hom_.assign(static_cast<std::size_t>(n_trees()), {});
        const auto& homs = j.at("homs");
        for (int s = 0; s < n_trees(); ++s) {
            hom_[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(n_trees()));
            for (int t = 0; t < n_trees(); ++t) {
                const auto& cell = homs.at(static_cast<std::size_t>(s * n_trees() + t));
                auto& vec = hom_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
                for (const auto& em : cell) {
                    vec.emplace_back(tree_ptr(s), tree_ptr(t), em.get<std::vector<EdgeId>>());
                }
            }
        }
        return true;
    } catch (...) {
        hom_.clear();
        return false;
    }
}

void Site::save_cache(const std::string& path) const {
    nlohmann::json j;
    j["flavor"] = flavor_name(flavor_);
    j["max_size"] = max_size_;
    std::vector<std::string> keys;
    for (int i = 0; i < n_trees(); ++i) keys.push_back(tree(i).key());
    j["trees"] = keys;
    nlohmann::json homs = nlohmann::json::array();
    for (int s = 0; s < n_trees(); ++s)
        for (int t = 0; t < n_trees(); ++t) {
            nlohmann::json cell = nlohmann::json::array();
            for (const auto& m : hom(s, t)) cell.push_back(m.edge_map());
            homs.push_back(std::move(cell));
        }
    j["homs"] = std::move(homs);
    std::ofstream out(path);
    if (out) out << j.dump();
}

}  // namespace dendro
