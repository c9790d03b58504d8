#pragma once

// Tension region of a pair (X, Y): the set of triples
//   < I(X;Z|Y), I(Y;Z|X), I(X;Y|Z) >
// over auxiliary variables Z, parameterized by the channel w(z | x, y).
//
// The optimizers here only ever report points evaluated on an actual
// channel, so every returned triple lies in the region up to rounding.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gkt/info.hpp"
#include "gkt/random.hpp"

namespace gkt {

struct TensionPoint {
  double x = 0.0;  // I(X;Z|Y), bits
  double y = 0.0;  // I(Y;Z|X), bits
  double z = 0.0;  // I(X;Y|Z), bits

  double sum() const { return x + y + z; }
};

struct Weights {
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;

  double dot(const TensionPoint& p) const { return w1 * p.x + w2 * p.y + w3 * p.z; }
};

// Conditional pmf of Z given each support cell of a JointPMF (cells in the
// order returned by JointPMF::support()).
class Channel {
 public:
  Channel(std::size_t k, std::size_t cells, std::vector<double> w);

  std::size_t k() const { return k_; }
  std::size_t cells() const { return cells_; }
  std::span<const double> row(std::size_t cell) const { return {w_.data() + cell * k_, k_}; }
  double operator()(std::size_t cell, std::size_t z) const { return w_[cell * k_ + z]; }
  std::span<const double> data() const { return w_; }

 private:
  std::size_t k_;
  std::size_t cells_;
  std::vector<double> w_;
};

struct OptimConfig {
  int restarts = 32;
  int max_iters = 500;
  double objective_tol = 1e-12;
  std::vector<double> penalties{1.0, 10.0, 100.0, 1000.0};
  double feasibility_tol = 1e-6;  // bits, on x + y
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency

  // Throws std::invalid_argument on a malformed configuration.
  void validate() const;
};

// n_x * n_y + 3, the alphabet size that suffices for Z.
std::size_t default_alphabet(const JointPMF& joint);

TensionPoint tension_point(const JointPMF& joint, const Channel& ch);

// Channel builders.
Channel constant_channel(const JointPMF& joint, std::size_t k = 1);
Channel copy_x_channel(const JointPMF& joint);
Channel copy_y_channel(const JointPMF& joint);
// Z = block label, padded with unused symbols up to k (k >= block count).
Channel block_channel(const JointPMF& joint, std::size_t k);
Channel random_channel(const JointPMF& joint, std::size_t k, Rng& rng);

// Z = (W, Z_W) with W an independent coin, P(W = 1) = lambda.
Channel time_share(const Channel& ch1, const Channel& ch2, double lambda);

struct ScalarizedResult {
  TensionPoint point;
  Channel channel;
  double objective = 0.0;  // bits, weights . point
};

// Approximately minimizes weights . point over channels with
// default_alphabet(joint) symbols; best over cfg.restarts restarts.
ScalarizedResult min_scalarized(const JointPMF& joint, const Weights& weights, const OptimConfig& cfg);

struct OriginAxisResult {
  InfoValue r;          // z of the best feasible point (or of the best point if none)
  bool feasible = false;
  TensionPoint point;
  Channel channel;
};

// min I(X;Y|Z) subject to I(X;Z|Y) = I(Y;Z|X) = 0 by penalty continuation.
OriginAxisResult min_r_origin_axis(const JointPMF& joint, const OptimConfig& cfg);

// min over Z of I(X;Z|Y) + I(Y;Z|X) + I(X;Y|Z).
InfoValue delta_min(const JointPMF& joint, const OptimConfig& cfg);

struct EnvelopePoint {
  Weights weights;
  TensionPoint point;
  double objective = 0.0;
};

std::vector<EnvelopePoint> lower_envelope_scan(const JointPMF& joint, std::span<const Weights> directions,
                                               const OptimConfig& cfg);

// `count` weight triples on the probability simplex: the finest uniform
// lattice with at most `count` points, topped up with interior points.
std::vector<Weights> simplex_directions(std::size_t count);

// Header `w1,w2,w3,x,y,z,objective`, 12 significant digits.
void write_envelope_csv(std::ostream& os, std::span<const EnvelopePoint> points);

// Independent sources: X'' = (X, X'), Y'' = (Y, Y') with row index
// x * n_x' + x' and column index y * n_y' + y'.
JointPMF product_source(const JointPMF& j1, const JointPMF& j2);
// Z'' = (Z, Z') with Z, Z' drawn independently given their own sources.
Channel product_channel(const JointPMF& j1, const Channel& ch1, const JointPMF& j2, const Channel& ch2);

// Slacks of the three Shannon inequalities bounding a point of T(XX';YY')
// from below by points of T(X;Y) and T(X';Y'). Requires variables
// X, X', Y, Y', Z (any order, any alphabets).
//   [0] I(XX';YY'|Z) - I(X;Y|Z) - I(X';Y'|XYZ)
//   [1] I(XX';Z|YY') - I(X;Z|Y) - I(X';XYZ|Y') + I(XY;X'Y')
//   [2] I(YY';Z|XX') - I(Y;Z|X) - I(Y';XYZ|X') + I(XY;X'Y')
std::array<double, 3> lower_part_slacks(const MultiJoint& joint);

namespace detail {

// Objective (nats) of weights . point at softmax logits (cells x k) and its
// analytic gradient with respect to the logits. Exposed for testing.
double scalarized_objective_nats(const JointPMF& joint, const Weights& weights, std::size_t k,
                                 const std::vector<double>& logits);
std::vector<double> scalarized_gradient_nats(const JointPMF& joint, const Weights& weights, std::size_t k,
                                             const std::vector<double>& logits);

}  // namespace detail

}  // namespace gkt
