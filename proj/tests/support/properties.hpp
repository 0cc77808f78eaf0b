#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// runner. Each returns a verdict plus a one-line detail for the report.

#include <cstdint>
#include <string>
#include <vector>

namespace fjet::testing {

struct PropertyResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// One-step error slopes of Euler, RK2, RK4 on the undamped oscillator ≈ 2, 3, 5.
PropertyResult check_integrator_orders();
/// QR fits agree with a Gram/Cholesky solve to 1e-8 of the largest
/// coefficient on random datasets.
PropertyResult check_ols_vs_normal_equations(std::uint64_t seed, int cases);
/// Symbolic derivatives agree with central differences to 1e-6 on random features.
PropertyResult check_feature_derivatives(std::uint64_t seed, int cases);
/// Euler ⊂ RK2 ⊂ RK4 feature sets of the pendulum are nested supersets of {v, sin u}.
PropertyResult check_superset_nesting();
/// Same seed → identical dataset for any thread count and kernel variant.
PropertyResult check_dataset_determinism(std::uint64_t seed);
/// v·cos²u is dropped as collinear with {v, v·sin²u}.
PropertyResult check_trig_collinearity_drop();

std::vector<PropertyResult> all_properties(std::uint64_t seed);

}  // namespace fjet::testing
