#include "dendro/json_io.hpp"

#include <sstream>

namespace dendro {

const char* kToolVersion = "0.1.0";

namespace {

ordered_json node_to_json(const Tree& t, EdgeId e) {
    if (t.is_leaf(e)) return ordered_json{{"leaf", true}};
    ordered_json inputs = ordered_json::array();
    for (EdgeId k : t.inputs(e)) inputs.push_back(node_to_json(t, k));
    return ordered_json{{"inputs", std::move(inputs)}};
}

TreeNode node_from_json(const ordered_json& j) {
    if (j.contains("leaf") && j.at("leaf").get<bool>()) return TreeNode::make_leaf();
    std::vector<TreeNode> inputs;
    for (const auto& k : j.at("inputs")) inputs.push_back(node_from_json(k));
    return TreeNode::make_vertex(std::move(inputs));
}

}  // namespace

ordered_json tree_to_json(const Tree& t) {
    return ordered_json{{"flavor", flavor_name(t.flavor())}, {"root", node_to_json(t, 0)}};
}

Tree tree_from_json(const ordered_json& j) {
    auto f = flavor_from_name(j.at("flavor").get<std::string>());
    if (!f) throw std::invalid_argument("unknown flavor");
    return Tree(node_from_json(j.at("root")), *f);
}

std::string morphism_id(const TreeMorphism& m) {
    std::ostringstream os;
    os << m.source().key() << "|" << m.target().key() << "|";
    const auto& em = m.edge_map();
    for (std::size_t i = 0; i < em.size(); ++i) os << (i ? "," : "") << em[i];
    return os.str();
}

ordered_json presheaf_to_json(const Presheaf& x) {
    const Site& site = x.site();
    ordered_json sets = ordered_json::object();
    for (int t = 0; t < site.n_trees(); ++t) sets[site.tree(t).key()] = x.card(t);
    ordered_json actions = ordered_json::object();
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m)
                actions[morphism_id(site.hom(s, t)[static_cast<std::size_t>(m)])] =
                    x.action(s, t, m);
    return ordered_json{{"flavor", flavor_name(site.flavor())},
                        {"truncation", site.max_size()},
                        {"sets", std::move(sets)},
                        {"actions", std::move(actions)}};
}

Presheaf presheaf_from_json(const ordered_json& j) {
    auto f = flavor_from_name(j.at("flavor").get<std::string>());
    if (!f) throw std::invalid_argument("unknown flavor");
    const Site& site = Site::get(*f, j.at("truncation").get<int>());
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()), 0);
    for (const auto& [key, count] : j.at("sets").items()) {
        int t = site.index_of(key);
        if (t < 0) throw std::invalid_argument("unknown tree key: " + key);
        cards[static_cast<std::size_t>(t)] = count.get<int>();
    }
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                std::string id = morphism_id(site.hom(s, t)[static_cast<std::size_t>(m)]);
                if (!j.at("actions").contains(id)) {
                    if (cards[static_cast<std::size_t>(t)] == 0) continue;
                    throw std::invalid_argument("missing action: " + id);
                }
                actions[static_cast<std::size_t>(site.flat_index(s, t, m))] =
                    j.at("actions").at(id).get<std::vector<int>>();
            }
    return Presheaf(site, std::move(cards), std::move(actions), true);
}

ordered_json group_to_json(const FiniteGroup& g) {
    std::vector<std::vector<int>> table;
    for (int a = 0; a < g.order(); ++a) {
        std::vector<int> row;
        for (int b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
        table.push_back(std::move(row));
    }
    return ordered_json{{"order", g.order()}, {"table", table}};
}

FiniteGroup group_from_json(const ordered_json& j) {
    return FiniteGroup(j.at("table").get<std::vector<std::vector<int>>>());
}

ordered_json gset_to_json(const FiniteGSet& x) {
    std::vector<std::vector<int>> action;
    for (int e = 0; e < x.size(); ++e) {
        std::vector<int> row;
        for (int g = 0; g < x.group().order(); ++g) row.push_back(x.act(e, g));
        action.push_back(std::move(row));
    }
    return ordered_json{{"size", x.size()}, {"action", action}};
}

FiniteGSet gset_from_json(const ordered_json& j, const FiniteGroup& g) {
    return FiniteGSet(g, j.at("action").get<std::vector<std::vector<int>>>());
}

ordered_json gmap_to_json(const GMap& f) {
    return ordered_json{{"source", gset_to_json(f.source)},
                        {"target", gset_to_json(f.target)},
                        {"values", f.values}};
}

ordered_json tower_map_to_json(const GSetTowerMap& f) {
    ordered_json j;
    j["group"] = group_to_json(f.source.levels.front().group());
    ordered_json levels = ordered_json::array();
    for (int i = 0; i < f.source.length(); ++i) {
        ordered_json level{{"source", gset_to_json(f.source.levels[static_cast<std::size_t>(i)])},
                           {"target", gset_to_json(f.target.levels[static_cast<std::size_t>(i)])},
                           {"map", f.levels[static_cast<std::size_t>(i)].values}};
        if (i + 1 < f.source.length()) {
            level["source_bond"] = f.source.bonds[static_cast<std::size_t>(i)].values;
            level["target_bond"] = f.target.bonds[static_cast<std::size_t>(i)].values;
        }
        levels.push_back(std::move(level));
    }
    j["levels"] = std::move(levels);
    return j;
}

GSetTowerMap tower_map_from_json(const ordered_json& j) {
    FiniteGroup g = group_from_json(j.at("group"));
    GSetTowerMap out;
    const auto& levels = j.at("levels");
    for (const auto& level : levels) {
        out.source.levels.push_back(gset_from_json(level.at("source"), g));
        out.target.levels.push_back(gset_from_json(level.at("target"), g));
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& level = levels[i];
        out.levels.emplace_back(out.source.levels[i], out.target.levels[i],
                                level.at("map").get<std::vector<int>>());
        if (i + 1 < levels.size()) {
            out.source.bonds.emplace_back(out.source.levels[i + 1], out.source.levels[i],
                                          levels[i].at("source_bond").get<std::vector<int>>());
            out.target.bonds.emplace_back(out.target.levels[i + 1], out.target.levels[i],
                                          levels[i].at("target_bond").get<std::vector<int>>());
        }
    }
    out.validate();
    return out;
}

bool VerifyReport::all_passed() const {
    for (const auto& c : checks)
        if (c.status == "fail") return false;
    return true;
}

ordered_json VerifyReport::to_json() const {
    ordered_json out;
    out["suite"] = suite;
    out["version"] = kToolVersion;
    ordered_json cs = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json jc{{"name", c.name}, {"status", c.status}};
        if (!c.counts.is_null()) jc["counts"] = c.counts;
        if (c.millis >= 0) jc["millis"] = c.millis;
        cs.push_back(std::move(jc));
    }
    out["checks"] = std::move(cs);
    out["passed"] = all_passed();
    return out;
}

}  // namespace dendro
