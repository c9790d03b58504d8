#pragma once

// Explicit auxiliary pair (U, V) with a negative Ingleton value.
//
// After moving a violation quad to rows/columns {0, 1}: with probability
// p = 1 - q take U = X, V = Y; with probability q take U = max(1, X),
// V = max(1, Y) (zero-based). Cells with X >= 1 and Y >= 1 are unaffected by
// the coin. ing(0) = 0 and ing(q) decreases at q = 0 whenever the quad is
// case (i) or an oriented case (ii).

#include <span>
#include <stdexcept>
#include <vector>

#include "gkt/blocks.hpp"
#include "gkt/info.hpp"

namespace gkt {

struct QuadParams {
  double alpha = 0.0;  // p(0,0)
  double beta = 0.0;   // p(0,1)
  double gamma = 0.0;  // p(1,0)
  double delta = 0.0;  // p(1,1)
  QuadCase kind = QuadCase::case_i;

  // Reads the four corner cells of an already relabeled joint.
  static QuadParams from_relabeled(const JointPMF& joint, QuadCase kind);
};

// Rows reordered to (i1, i2, remaining ascending); columns likewise.
JointPMF relabel_for_quad(const JointPMF& joint, const Quad& quad);

// Joint over U, V, X, Y (U shares X's alphabet, V shares Y's).
MultiJoint build_uvxy(const JointPMF& relabeled, double q);

struct IngPoint {
  double q = 0.0;
  double ing_bits = 0.0;
};

std::vector<IngPoint> ing_curve(const JointPMF& relabeled, std::span<const double> q_values);

// [[a - aq]] + [[b + aq]] + [[c + aq]] + [[d + bq]] + [[d + cq]] - [[d + aq + bq + cq]]
// with [[x]] = -x ln x, in nats. Equals the q-dependent part of ing(q) ln 2.
double eq1_reduced(const QuadParams& params, double q);

// q in {2^-20, ..., 2^-1}.
std::vector<double> geometric_q_grid();

struct NegativeQ {
  double q = 0.0;
  double ing_bits = 0.0;
};

class ScanFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relabels `joint` around the quad and returns the grid q with the most
// negative ing(q). Throws ScanFailure when no value drops below -1e-12.
NegativeQ find_negative_q(const JointPMF& joint, const ViolationQuad& violation);

}  // namespace gkt
