#include "gkt/info.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gkt {

namespace {

std::size_t checked_volume(std::span<const std::size_t> shape) {
  std::size_t volume = 1;
  for (std::size_t n : shape) volume *= n;
  return volume;
}

void check_mass(std::span<const double> p, ValidationReport& report) {
  double total = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k])) {
      finite = false;
      report.findings.push_back({Finding::Kind::non_finite, "entry " + std::to_string(k) + " is not finite"});
      continue;
    }
    if (p[k] < 0.0) {
      std::ostringstream os;
      os << "entry " << k << " is negative (" << p[k] << ")";
      report.findings.push_back({Finding::Kind::negative_entry, os.str()});
    }
    total += p[k];
  }
  if (finite && std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "total mass " << total << " deviates from 1 by " << (1.0 - total);
    report.findings.push_back({Finding::Kind::mass_deficit, os.str()});
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation

const char* to_string(Finding::Kind kind) {
  switch (kind) {
    case Finding::Kind::non_finite: return "non_finite";
    case Finding::Kind::negative_entry: return "negative_entry";
    case Finding::Kind::mass_deficit: return "mass_deficit";
    case Finding::Kind::zero_row: return "zero_row";
    case Finding::Kind::zero_column: return "zero_column";
    case Finding::Kind::shape_mismatch: return "shape_mismatch";
  }
  return "unknown";
}

bool ValidationReport::has(Finding::Kind kind) const {
  return std::any_of(findings.begin(), findings.end(),
                     [kind](const Finding& f) { return f.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& f : findings) {
    if (!out.empty()) out += "; ";
    out += to_string(f.kind);
    out += ": ";
    out += f.detail;
  }
  return out;
}

ValidationReport validate_joint(std::size_t n_x, std::size_t n_y, std::span<const double> p) {
  ValidationReport report;
  if (n_x == 0 || n_y == 0 || p.size() != n_x * n_y) {
    std::ostringstream os;
    os << "expected " << n_x << "x" << n_y << " entries, got " << p.size();
    report.findings.push_back({Finding::Kind::shape_mismatch, os.str()});
    return report;
  }
  check_mass(p, report);
  for (std::size_t i = 0; i < n_x; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_y; ++j) s += std::max(p[i * n_y + j], 0.0);
    if (!(s > 0.0)) report.findings.push_back({Finding::Kind::zero_row, "row " + std::to_string(i) + " has no mass"});
  }
  for (std::size_t j = 0; j < n_y; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_x; ++i) s += std::max(p[i * n_y + j], 0.0);
    if (!(s > 0.0)) report.findings.push_back({Finding::Kind::zero_column, "column " + std::to_string(j) + " has no mass"});
  }
  return report;
}

ValidationReport validate_multi(std::span<const std::size_t> shape, std::span<const double> p) {
  ValidationReport report;
  const bool bad_axis = std::any_of(shape.begin(), shape.end(), [](std::size_t n) { return n == 0; });
  if (shape.empty() || bad_axis || checked_volume(shape) != p.size()) {
    report.findings.push_back({Finding::Kind::shape_mismatch,
                               "tensor of " + std::to_string(p.size()) + " entries does not match shape"});
    return report;
  }
  check_mass(p, report);
  return report;
}

ValidationReport validate(const JointPMF& joint) {
  return validate_joint(joint.n_x(), joint.n_y(), joint.data());
}

ValidationReport validate(const MultiJoint& joint) {
  return validate_multi(joint.shape(), joint.data());
}

// ---------------------------------------------------------------------------
// JointPMF

JointPMF JointPMF::from_flat(std::size_t n_x, std::size_t n_y, std::vector<double> p) {
  auto report = validate_joint(n_x, n_y, p);
  if (!report.ok()) throw std::invalid_argument("invalid joint pmf: " + report.summary());
  return JointPMF(n_x, n_y, std::move(p));
}

JointPMF JointPMF::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("invalid joint pmf: empty matrix");
  const std::size_t n_y = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * n_y);
  for (const auto& r : rows) {
    if (r.size() != n_y) throw std::invalid_argument("invalid joint pmf: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return from_flat(rows.size(), n_y, std::move(flat));
}

std::vector<double> JointPMF::row_marginal() const {
  std::vector<double> m(n_x_, 0.0);
  for (std::size_t i = 0; i < n_x_; ++i)
    for (std::size_t j = 0; j < n_y_; ++j) m[i] += (*this)(i, j);
  return m;
}

std::vector<double> JointPMF::col_marginal() const {
  std::vector<double> m(n_y_, 0.0);
  for (std::size_t i = 0; i < n_x_; ++i)
    for (std::size_t j = 0; j < n_y_; ++j) m[j] += (*this)(i, j);
  return m;
}

std::vector<Cell> JointPMF::support() const {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n_x_; ++i)
    for (std::size_t j = 0; j < n_y_; ++j)
      if ((*this)(i, j) > 0.0) cells.push_back({i, j});
  return cells;
}

MultiJoint JointPMF::to_multi(const std::string& x_name, const std::string& y_name) const {
  return MultiJoint({x_name, y_name}, {n_x_, n_y_}, p_);
}

// ---------------------------------------------------------------------------
// MultiJoint

MultiJoint::MultiJoint(std::vector<std::string> names, std::vector<std::size_t> shape,
                       std::vector<double> p)
    : names_(std::move(names)), shape_(std::move(shape)), p_(std::move(p)) {
  if (names_.empty() || names_.size() > kMaxVars)
    throw std::invalid_argument("multi joint needs 1.." + std::to_string(kMaxVars) + " variables");
  if (names_.size() != shape_.size()) throw std::invalid_argument("multi joint: names and shape differ in length");
  for (std::size_t a = 0; a < names_.size(); ++a) {
    if (names_[a].empty()) throw std::invalid_argument("multi joint: empty variable name");
    for (std::size_t b = a + 1; b < names_.size(); ++b)
      if (names_[a] == names_[b]) throw std::invalid_argument("multi joint: duplicate variable " + names_[a]);
  }
  auto report = validate_multi(shape_, p_);
  if (!report.ok()) throw std::invalid_argument("invalid multi joint: " + report.summary());
}

bool MultiJoint::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t MultiJoint::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::invalid_argument("unknown variable: " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

double MultiJoint::at(std::span<const std::size_t> index) const {
  if (index.size() != rank()) throw std::invalid_argument("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t v = 0; v < rank(); ++v) {
    if (index[v] >= shape_[v]) throw std::out_of_range("index out of range");
    flat = flat * shape_[v] + index[v];
  }
  return p_[flat];
}

std::uint32_t MultiJoint::mask_of(const VarSet& vars) const {
  std::uint32_t mask = 0;
  for (const auto& v : vars) mask |= 1u << index_of(v);
  return mask;
}

namespace {

// Sums `p` into the marginal over the axes listed in `keep` (in that order).
std::vector<double> marginalize(std::span<const std::size_t> shape, std::span<const double> p,
                                std::span<const std::size_t> keep) {
  const std::size_t rank = shape.size();
  std::array<std::size_t, kMaxVars> out_stride{};
  std::size_t out_size = 1;
  for (std::size_t k = keep.size(); k-- > 0;) {
    out_stride[keep[k]] = out_size;
    out_size *= shape[keep[k]];
  }
  std::vector<double> out(out_size, 0.0);
  std::array<std::size_t, kMaxVars> idx{};
  std::size_t off = 0;
  for (double value : p) {
    out[off] += value;
    for (std::size_t v = rank; v-- > 0;) {
      off += out_stride[v];
      if (++idx[v] < shape[v]) break;
      off -= out_stride[v] * shape[v];
      idx[v] = 0;
    }
  }
  return out;
}

}  // namespace

MultiJoint MultiJoint::marginal(const VarSet& vars) const {
  if (vars.empty()) throw std::invalid_argument("marginal over an empty variable set");
  std::vector<std::size_t> keep;
  std::vector<std::size_t> shape;
  for (const auto& v : vars) {
    std::size_t a = index_of(v);
    if (std::find(keep.begin(), keep.end(), a) != keep.end())
      throw std::invalid_argument("variable listed twice: " + v);
    keep.push_back(a);
    shape.push_back(shape_[a]);
  }
  return MultiJoint(vars, std::move(shape), marginalize(shape_, p_, keep));
}

double MultiJoint::entropy_nats(std::uint32_t mask) const {
  if (mask == 0) return 0.0;
  if (mask >> rank()) throw std::invalid_argument("variable mask out of range");
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < rank(); ++v)
    if (mask & (1u << v)) keep.push_back(v);
  return gkt::entropy_nats(marginalize(shape_, p_, keep));
}

// ---------------------------------------------------------------------------
// Measures

double entropy_nats(std::span<const double> probs) {
  double h = 0.0;
  for (double q : probs)
    if (q > 0.0) h -= q * std::log(q);
  return h;
}

InfoValue entropy(const MultiJoint& joint, const VarSet& vars) {
  if (vars.empty()) throw std::invalid_argument("entropy of an empty variable set");
  return {joint.entropy_nats(joint.mask_of(vars)) / std::numbers::ln2};
}

InfoValue cond_mutual_info(const MultiJoint& joint, const VarSet& a, const VarSet& b, const VarSet& c) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mutual information needs non-empty arguments");
  const std::uint32_t ma = joint.mask_of(a);
  const std::uint32_t mb = joint.mask_of(b);
  const std::uint32_t mc = joint.mask_of(c);
  if ((ma & mb) || (ma & mc) || (mb & mc))
    throw std::invalid_argument("mutual information arguments must be disjoint");
  const double nats = joint.entropy_nats(ma | mc) + joint.entropy_nats(mb | mc) -
                      joint.entropy_nats(ma | mb | mc) - joint.entropy_nats(mc);
  return {nats / std::numbers::ln2};
}

MultiJoint product(const JointPMF& j1, const JointPMF& j2) {
  std::vector<double> p;
  p.reserve(j1.data().size() * j2.data().size());
  // Axis order X, Y, X', Y': iterate x, y, x', y'.
  for (std::size_t x = 0; x < j1.n_x(); ++x)
    for (std::size_t y = 0; y < j1.n_y(); ++y)
      for (std::size_t xp = 0; xp < j2.n_x(); ++xp)
        for (std::size_t yp = 0; yp < j2.n_y(); ++yp) p.push_back(j1(x, y) * j2(xp, yp));
  return MultiJoint({"X", "Y", "X'", "Y'"}, {j1.n_x(), j1.n_y(), j2.n_x(), j2.n_y()}, std::move(p));
}

}  // namespace gkt
