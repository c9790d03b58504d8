#pragma once

// Random fixtures shared by the unit and acceptance suites.

#include <algorithm>
#include <numeric>
#include <vector>

#include "gkt/blocks.hpp"
#include "gkt/random.hpp"

namespace gkt::testing {

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Splits n items into `parts` non-empty groups, shuffled.
inline std::vector<std::size_t> random_groups(Rng& rng, std::size_t n, std::size_t parts) {
  std::vector<std::size_t> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = k < parts ? k : uniform_size(rng, 0, parts - 1);
  std::shuffle(g.begin(), g.end(), rng);
  return g;
}

// Block-structured joint with exactly `blocks` blocks on an n_x x n_y grid.
// Inside a block the support is a random connected subset of the rectangle,
// so blocks may or may not be independent rectangles.
inline JointPMF random_block_joint(Rng& rng, std::size_t blocks, std::size_t max_alphabet) {
  std::bernoulli_distribution drop(0.25);
  for (;;) {
    const std::size_t nx = uniform_size(rng, blocks, max_alphabet);
    const std::size_t ny = uniform_size(rng, blocks, max_alphabet);
    const auto rg = random_groups(rng, nx, blocks);
    const auto cg = random_groups(rng, ny, blocks);
    const auto block_mass = dirichlet_flat(rng, blocks);
    const bool sparse = drop(rng);
    std::vector<double> p(nx * ny, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
      std::vector<std::size_t> cells;
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
          if (rg[i] == b && cg[j] == b && !(sparse && drop(rng))) cells.push_back(i * ny + j);
      const auto w = dirichlet_flat(rng, std::max<std::size_t>(cells.size(), 1));
      for (std::size_t c = 0; c < cells.size(); ++c) p[cells[c]] = block_mass[b] * w[c];
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    if (validate_joint(nx, ny, p).ok()) {
      auto joint = JointPMF::from_flat(nx, ny, p);
      if (decompose(joint).size() == blocks) return joint;
    }
  }
}

// Disjoint union of independent rectangles: p = mass_b * r_b(i) * c_b(j).
inline JointPMF random_independent_blocks(Rng& rng, std::size_t blocks, std::size_t max_alphabet) {
  const std::size_t nx = uniform_size(rng, blocks, max_alphabet);
  const std::size_t ny = uniform_size(rng, blocks, max_alphabet);
  const auto rg = random_groups(rng, nx, blocks);
  const auto cg = random_groups(rng, ny, blocks);
  const auto mass = dirichlet_flat(rng, blocks);
  const auto r = dirichlet_flat(rng, nx);
  const auto c = dirichlet_flat(rng, ny);
  std::vector<double> rs(blocks, 0.0), cs(blocks, 0.0);
  for (std::size_t i = 0; i < nx; ++i) rs[rg[i]] += r[i];
  for (std::size_t j = 0; j < ny; ++j) cs[cg[j]] += c[j];
  std::vector<double> p(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (rg[i] == cg[j]) p[i * ny + j] = mass[rg[i]] * (r[i] / rs[rg[i]]) * (c[j] / cs[cg[j]]);
  return JointPMF::from_flat(nx, ny, p);
}

// One block, not independent: the support graph is connected and some quad
// witnesses dependence. A quarter of the draws have zeros in the support.
inline JointPMF random_connected_joint(Rng& rng, std::size_t max_alphabet) {
  std::bernoulli_distribution sparse(0.25), drop(0.3);
  for (;;) {
    const std::size_t nx = uniform_size(rng, 2, max_alphabet);
    const std::size_t ny = uniform_size(rng, 2, max_alphabet);
    auto p = dirichlet_flat(rng, nx * ny);
    if (sparse(rng))
      for (auto& v : p)
        if (drop(rng)) v = 0.0;
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(total > 0.0)) continue;
    for (auto& v : p) v /= total;
    if (!validate_joint(nx, ny, p).ok()) continue;
    auto joint = JointPMF::from_flat(nx, ny, p);
    if (decompose(joint).size() == 1 && find_violation_quad(joint)) return joint;
  }
}

}  // namespace gkt::testing
