#include "gkt/construction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "gkt/inequalities.hpp"

namespace gkt {

namespace {

double h(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

std::vector<std::size_t> order_with_front(std::size_t n, std::size_t first, std::size_t second) {
  std::vector<std::size_t> order{first, second};
  for (std::size_t k = 0; k < n; ++k)
    if (k != first && k != second) order.push_back(k);
  return order;
}

}  // namespace

QuadParams QuadParams::from_relabeled(const JointPMF& joint, QuadCase kind) {
  if (joint.n_x() < 2 || joint.n_y() < 2) throw std::invalid_argument("quad needs at least a 2x2 joint");
  QuadParams q{joint(0, 0), joint(0, 1), joint(1, 0), joint(1, 1), kind};
  assert(kind != QuadCase::case_ii || q.alpha * q.delta < q.beta * q.gamma);
  assert(kind != QuadCase::case_i || q.delta <= kSupportThreshold);
  return q;
}

JointPMF relabel_for_quad(const JointPMF& joint, const Quad& quad) {
  if (quad.i1 >= joint.n_x() || quad.i2 >= joint.n_x() || quad.j1 >= joint.n_y() || quad.j2 >= joint.n_y())
    throw std::out_of_range("quad index out of range");
  if (quad.i1 == quad.i2 || quad.j1 == quad.j2) throw std::invalid_argument("quad indices must be distinct per axis");
  const auto rows = order_with_front(joint.n_x(), quad.i1, quad.i2);
  const auto cols = order_with_front(joint.n_y(), quad.j1, quad.j2);
  std::vector<double> p;
  p.reserve(joint.data().size());
  for (std::size_t r : rows)
    for (std::size_t c : cols) p.push_back(joint(r, c));
  return JointPMF::from_flat(joint.n_x(), joint.n_y(), std::move(p));
}

MultiJoint build_uvxy(const JointPMF& joint, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in [0, 1)");
  const std::size_t nx = joint.n_x(), ny = joint.n_y();
  const double p = 1.0 - q;
  // Axis order U, V, X, Y.
  std::vector<double> t(nx * ny * nx * ny, 0.0);
  auto at = [&](std::size_t u, std::size_t v, std::size_t x, std::size_t y) -> double& {
    return t[((u * ny + v) * nx + x) * ny + y];
  };
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double m = joint(i, j);
      if (i >= 1 && j >= 1) {
        at(i, j, i, j) += m;
      } else {
        at(i, j, i, j) += m * p;
        at(std::max<std::size_t>(1, i), std::max<std::size_t>(1, j), i, j) += m * q;
      }
    }
  return MultiJoint({"U", "V", "X", "Y"}, {nx, ny, nx, ny}, std::move(t));
}

std::vector<IngPoint> ing_curve(const JointPMF& joint, std::span<const double> q_values) {
  std::vector<IngPoint> out;
  out.reserve(q_values.size());
  for (double q : q_values) out.push_back({q, ingleton(build_uvxy(joint, q)).total});
  return out;
}

double eq1_reduced(const QuadParams& k, double q) {
  const double a = k.alpha, b = k.beta, c = k.gamma, d = k.delta;
  return h(a - a * q) + h(b + a * q) + h(c + a * q) + h(d + b * q) + h(d + c * q) - h(d + a * q + b * q + c * q);
}

std::vector<double> geometric_q_grid() {
  std::vector<double> qs;
  for (int e = 20; e >= 1; --e) qs.push_back(std::ldexp(1.0, -e));
  return qs;
}

NegativeQ find_negative_q(const JointPMF& joint, const ViolationQuad& violation) {
  const JointPMF relabeled = relabel_for_quad(joint, violation.quad);
  const auto params = QuadParams::from_relabeled(relabeled, violation.kind);
  (void)params;
  const auto qs = geometric_q_grid();
  NegativeQ best{0.0, 0.0};
  for (const auto& pt : ing_curve(relabeled, qs))
    if (pt.ing_bits < best.ing_bits) best = {pt.q, pt.ing_bits};
  if (!(best.ing_bits < -1e-12))
    throw ScanFailure("no q in 2^-20..2^-1 gives a negative Ingleton value; the quad may be mis-oriented");
  return best;
}

}  // namespace gkt
