#include "gkt/random.hpp"

#include <numeric>

namespace gkt {

std::vector<double> dirichlet_flat(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> unit(1.0);
  std::vector<double> g(n);
  double total = 0.0;
  // Gamma(1) is Exp(1); resample the (measure-zero) all-zero case.
  while (!(total > 0.0)) {
    for (auto& v : g) v = unit(rng);
    total = std::accumulate(g.begin(), g.end(), 0.0);
  }
  for (auto& v : g) v /= total;
  return g;
}

JointPMF random_joint(Rng& rng, std::size_t n_x, std::size_t n_y) {
  return JointPMF::from_flat(n_x, n_y, dirichlet_flat(rng, n_x * n_y));
}

MultiJoint random_multi(Rng& rng, std::vector<std::string> names, std::vector<std::size_t> shape) {
  std::size_t volume = 1;
  for (std::size_t n : shape) volume *= n;
  return MultiJoint(std::move(names), std::move(shape), dirichlet_flat(rng, volume));
}

}  // namespace gkt
