#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "branchspan/branchspan.hpp"

namespace branchspan::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ModeParams random_mode(Rng& rng, double max_shift = 2.0, double max_r = 0.8) {
    return {uniform(rng, -max_shift, max_shift), uniform(rng, -max_shift, max_shift), uniform(rng, -max_r, max_r),
            uniform(rng, 0.0, 2.0 * pi)};
}

inline GaussianPure random_branch(Rng& rng, int n_modes = 1, double max_shift = 2.0, double max_r = 0.8) {
    std::vector<ModeParams> modes;
    for (int k = 0; k < n_modes; ++k) modes.push_back(random_mode(rng, max_shift, max_r));
    return make_displaced_squeezed(modes);
}

inline Complex random_complex(Rng& rng) {
    return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
}

inline ComplexVector random_coefficients(Rng& rng, Eigen::Index dim) {
    ComplexVector c(dim);
    for (Eigen::Index k = 0; k < dim; ++k) c(k) = random_complex(rng);
    return c;
}

/// Branches drawn until the Gram matrix clears the default conditioning threshold with margin.
inline BranchManifold random_manifold(Rng& rng, int dim, int n_modes = 1) {
    for (;;) {
        std::vector<GaussianPure> br;
        for (int k = 0; k < dim; ++k) br.push_back(random_branch(rng, n_modes));
        try {
            BranchManifold m = build_manifold(br);
            if (m.min_gram_eigenvalue() > 1e-3) return m;
        } catch (const near_dependence&) {
        }
    }
}

inline SupportedMixture random_mixture(Rng& rng, Eigen::Index dim, int components) {
    std::vector<ComplexVector> coeffs;
    std::vector<double> weights;
    double total = 0.0;
    for (int mu = 0; mu < components; ++mu) {
        coeffs.push_back(random_coefficients(rng, dim));
        weights.push_back(uniform(rng, 0.05, 1.0));
        total += weights.back();
    }
    for (double& w : weights) w /= total;
    weights.back() = 1.0;
    for (std::size_t mu = 0; mu + 1 < weights.size(); ++mu) weights.back() -= weights[mu];
    return SupportedMixture::create(coeffs, weights);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double out = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) out = std::max(out, std::abs(a[k] - b[k]));
    return out;
}

} // namespace branchspan::testing
