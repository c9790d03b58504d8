#pragma once

// Seeded samplers for fuzzing and randomized tests. Flat Dirichlet only.

#include <cstdint>
#include <random>
#include <vector>

#include "gkt/info.hpp"

namespace gkt {

using Rng = std::mt19937_64;

// One draw from Dirichlet(1, ..., 1) on n points.
std::vector<double> dirichlet_flat(Rng& rng, std::size_t n);

// Uniformly random joint over n_x x n_y cells (full support almost surely).
JointPMF random_joint(Rng& rng, std::size_t n_x, std::size_t n_y);

MultiJoint random_multi(Rng& rng, std::vector<std::string> names, std::vector<std::size_t> shape);

}  // namespace gkt
