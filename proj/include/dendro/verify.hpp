#ifndef DENDRO_VERIFY_HPP
#define DENDRO_VERIFY_HPP

#include "dendro/json_io.hpp"

namespace dendro {

// The verification battery. Each check returns a VerifyReport entry; the
// full battery at the default bounds is the acceptance gate of the project.
struct VerifyOptions {
    bool quick = false;    // reduced bounds for a fast smoke run
    bool timings = false;  // include per-check wall times in reports
    long long e_budget = 100000;
};

VerifyReport::Check check_hom_saturation(const VerifyOptions& o);        // 1
VerifyReport::Check check_degeneracy_freeness(const VerifyOptions& o);   // 2
VerifyReport::Check check_boundary_skeleton(const VerifyOptions& o);     // 3
VerifyReport::Check check_sk_cosk_adjunction(const VerifyOptions& o);    // 4
VerifyReport::Check check_gset_llp(const VerifyOptions& o);              // 5
VerifyReport::Check check_tower_reindexing(const VerifyOptions& o);      // 6
VerifyReport::Check check_normality_vs_psi(const VerifyOptions& o);      // 7
VerifyReport::Check check_lean_rigidity(const VerifyOptions& o);         // 8
VerifyReport::Check check_ass_battery(const VerifyOptions& o);           // 9
VerifyReport::Check check_tensor_kernel(const VerifyOptions& o);         // 10
VerifyReport::Check check_e_construction(const VerifyOptions& o);        // 11
VerifyReport::Check check_coskeletal_reduction(const VerifyOptions& o);  // 12

VerifyReport run_verification_battery(const VerifyOptions& o);

}  // namespace dendro

#endif
