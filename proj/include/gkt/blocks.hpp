#pragma once

// Block structure of a joint probability matrix.
//
// The block graph has the support cells as vertices; two cells are adjacent
// when they share a row or a column. Its connected components are the
// blocks. The Gacs-Korner common information equals the entropy of the
// block label, since the label is the finest variable that is a function of
// X and also a function of Y.

#include <cstddef>
#include <optional>
#include <vector>

#include "gkt/info.hpp"

namespace gkt {

inline constexpr double kMinorTolerance = 1e-10;

struct Block {
  std::vector<Cell> cells;         // row-major
  std::vector<std::size_t> rows;   // sorted
  std::vector<std::size_t> cols;   // sorted
  double mass = 0.0;
  bool is_rectangle = false;       // cells == rows x cols
  bool is_independent = false;     // every 2x2 minor over rows x cols vanishes
};

struct BlockDecomposition {
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::vector<Block> blocks;
  std::vector<int> block_of;  // per cell, row-major; -1 outside the support

  std::size_t size() const { return blocks.size(); }
  int block_at(std::size_t i, std::size_t j) const { return block_of[i * n_y + j]; }
  bool all_independent_rectangles() const;
};

// Blocks are numbered by their smallest cell in row-major order.
BlockDecomposition decompose(const JointPMF& joint);

// Entropy of the block label.
InfoValue gk_exact(const JointPMF& joint);

// True when |ad - bc| <= kMinorTolerance * max(ad, bc).
bool minor_vanishes(double a, double b, double c, double d);

struct Quad {
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  std::size_t j1 = 0;
  std::size_t j2 = 0;

  friend bool operator==(const Quad&, const Quad&) = default;
};

enum class QuadCase {
  case_i,   // alpha, beta, gamma > 0 and delta = 0
  case_ii,  // all positive and alpha*delta < beta*gamma
};

const char* to_string(QuadCase c);

struct ViolationQuad {
  Quad quad;
  QuadCase kind = QuadCase::case_i;
};

// Lexicographically smallest (i1, i2, j1, j2) witnessing that the support is
// not a disjoint union of independent rectangles, with alpha = p(i1,j1),
// beta = p(i1,j2), gamma = p(i2,j1), delta = p(i2,j2). Empty iff every block
// is an independent rectangle.
std::optional<ViolationQuad> find_violation_quad(const JointPMF& joint);

}  // namespace gkt
