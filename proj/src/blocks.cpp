#include "gkt/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gkt {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

bool positive(double p) { return p > kSupportThreshold; }

}  // namespace

bool minor_vanishes(double a, double b, double c, double d) {
  const double ad = a * d;
  const double bc = b * c;
  return std::abs(ad - bc) <= kMinorTolerance * std::max(ad, bc);
}

const char* to_string(QuadCase c) {
  return c == QuadCase::case_i ? "case_i" : "case_ii";
}

bool BlockDecomposition::all_independent_rectangles() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const Block& b) { return b.is_rectangle && b.is_independent; });
}

BlockDecomposition decompose(const JointPMF& joint) {
  const std::size_t n_x = joint.n_x();
  const std::size_t n_y = joint.n_y();
  const std::size_t n = n_x * n_y;

  UnionFind uf(n);
  // Unite each support cell with the first support cell of its row and column.
  std::vector<std::size_t> row_anchor(n_x, n), col_anchor(n_y, n);
  for (std::size_t i = 0; i < n_x; ++i) {
    for (std::size_t j = 0; j < n_y; ++j) {
      if (!positive(joint(i, j))) continue;
      const std::size_t cell = i * n_y + j;
      if (row_anchor[i] == n) row_anchor[i] = cell; else uf.unite(row_anchor[i], cell);
      if (col_anchor[j] == n) col_anchor[j] = cell; else uf.unite(col_anchor[j], cell);
    }
  }

  BlockDecomposition out;
  out.n_x = n_x;
  out.n_y = n_y;
  out.block_of.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  for (std::size_t cell = 0; cell < n; ++cell) {
    const std::size_t i = cell / n_y;
    const std::size_t j = cell % n_y;
    if (!positive(joint(i, j))) continue;
    const std::size_t root = uf.find(cell);
    if (id_of_root[root] < 0) {
      id_of_root[root] = static_cast<int>(out.blocks.size());
      out.blocks.emplace_back();
    }
    const int id = id_of_root[root];
    out.block_of[cell] = id;
    Block& b = out.blocks[static_cast<std::size_t>(id)];
    b.cells.push_back({i, j});
    b.mass += joint(i, j);
    b.rows.push_back(i);
    b.cols.push_back(j);
  }

  for (Block& b : out.blocks) {
    std::sort(b.rows.begin(), b.rows.end());
    b.rows.erase(std::unique(b.rows.begin(), b.rows.end()), b.rows.end());
    std::sort(b.cols.begin(), b.cols.end());
    b.cols.erase(std::unique(b.cols.begin(), b.cols.end()), b.cols.end());
    b.is_rectangle = b.cells.size() == b.rows.size() * b.cols.size();

    // Zero cells inside rows x cols are kept as zeros, so a non-rectangle
    // block always fails some minor.
    auto value = [&](std::size_t i, std::size_t j) {
      const double p = joint(i, j);
      return positive(p) ? p : 0.0;
    };
    bool independent = true;
    for (std::size_t a = 0; a < b.rows.size() && independent; ++a)
      for (std::size_t c = a + 1; c < b.rows.size() && independent; ++c)
        for (std::size_t x = 0; x < b.cols.size() && independent; ++x)
          for (std::size_t y = x + 1; y < b.cols.size() && independent; ++y) {
            const std::size_t i1 = b.rows[a], i2 = b.rows[c], j1 = b.cols[x], j2 = b.cols[y];
            independent = minor_vanishes(value(i1, j1), value(i1, j2), value(i2, j1), value(i2, j2));
          }
    b.is_independent = independent;
  }
  return out;
}

InfoValue gk_exact(const JointPMF& joint) {
  const auto dec = decompose(joint);
  // one block: the label is constant, skip the rounding in -m log m
  if (dec.size() == 1) return {0.0};
  std::vector<double> masses;
  masses.reserve(dec.size());
  for (const auto& b : dec.blocks) masses.push_back(b.mass);
  return {entropy_nats(masses) / std::numbers::ln2};
}

std::optional<ViolationQuad> find_violation_quad(const JointPMF& joint) {
  const std::size_t n_x = joint.n_x();
  const std::size_t n_y = joint.n_y();
  for (std::size_t i1 = 0; i1 < n_x; ++i1)
    for (std::size_t i2 = 0; i2 < n_x; ++i2) {
      if (i1 == i2) continue;
      for (std::size_t j1 = 0; j1 < n_y; ++j1)
        for (std::size_t j2 = 0; j2 < n_y; ++j2) {
          if (j1 == j2) continue;
          const double alpha = joint(i1, j1), beta = joint(i1, j2);
          const double gamma = joint(i2, j1), delta = joint(i2, j2);
          if (!positive(alpha) || !positive(beta) || !positive(gamma)) continue;
          if (!positive(delta)) return ViolationQuad{{i1, i2, j1, j2}, QuadCase::case_i};
          if (alpha * delta < beta * gamma && !minor_vanishes(alpha, beta, gamma, delta))
            return ViolationQuad{{i1, i2, j1, j2}, QuadCase::case_ii};
        }
    }
  return std::nullopt;
}

}  // namespace gkt
