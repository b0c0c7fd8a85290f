#ifndef DENDRO_JSON_IO_HPP
#define DENDRO_JSON_IO_HPP

#include <json.hpp>

#include "dendro/gset.hpp"
#include "dendro/presheaf.hpp"

namespace dendro {

using ordered_json = nlohmann::ordered_json;

// Tree encoding: {"flavor": "general|open|closed", "root": <node>} with
// node = {"leaf": true} or {"inputs": [<node>...]}.
ordered_json tree_to_json(const Tree& t);
Tree tree_from_json(const ordered_json& j);

// Presheaf encoding: {"flavor", "truncation", "sets": {key: count},
// "actions": {morphism-id: index-array}} where a morphism-id is
// "sourceKey|targetKey|e0,e1,...".
ordered_json presheaf_to_json(const Presheaf& x);
Presheaf presheaf_from_json(const ordered_json& j);
std::string morphism_id(const TreeMorphism& m);

ordered_json gmap_to_json(const GMap& f);
ordered_json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const ordered_json& j);
ordered_json gset_to_json(const FiniteGSet& x);
FiniteGSet gset_from_json(const ordered_json& j, const FiniteGroup& g);
ordered_json tower_map_to_json(const GSetTowerMap& f);
GSetTowerMap tower_map_from_json(const ordered_json& j);

// Machine-readable check report. Reports are byte-identical for identical
// inputs unless timings are enabled.
struct VerifyReport {
    std::string suite;
    struct Check {
        std::string name;
        std::string status;  // pass | fail | inconclusive
        ordered_json counts;
        long long millis = -1;  // emitted only when >= 0
    };
    std::vector<Check> checks;

    bool all_passed() const;
    ordered_json to_json() const;
};

extern const char* kToolVersion;

}  // namespace dendro

#endif
