#pragma once

// Finite joint distributions and Shannon information measures.
//
// Every public quantity is reported in bits. Internally entropies are
// accumulated in nats and converted once at the end.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace gkt {

inline constexpr double kMassTolerance = 1e-12;
// Cells with less mass than this are outside the support for combinatorial
// decisions (block graph, violation quads).
inline constexpr double kSupportThreshold = 1e-15;
inline constexpr std::size_t kMaxVars = 5;

struct InfoValue {
  double bits = 0.0;

  double nats() const { return bits * std::numbers::ln2; }
};

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class MultiJoint;

// Probability matrix p_ij over X x Y. Always valid once constructed:
// nonnegative, unit mass, no empty row or column.
class JointPMF {
 public:
  static JointPMF from_rows(const std::vector<std::vector<double>>& rows);
  static JointPMF from_flat(std::size_t n_x, std::size_t n_y, std::vector<double> p);

  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  double operator()(std::size_t i, std::size_t j) const { return p_[i * n_y_ + j]; }
  std::span<const double> data() const { return p_; }

  std::vector<double> row_marginal() const;
  std::vector<double> col_marginal() const;

  // Cells with p_ij > 0, row-major. Channels are indexed by this list.
  std::vector<Cell> support() const;

  MultiJoint to_multi(const std::string& x_name = "X", const std::string& y_name = "Y") const;

 private:
  JointPMF(std::size_t n_x, std::size_t n_y, std::vector<double> p)
      : n_x_(n_x), n_y_(n_y), p_(std::move(p)) {}

  std::size_t n_x_;
  std::size_t n_y_;
  std::vector<double> p_;
};

using VarSet = std::vector<std::string>;

// Dense probability tensor over up to kMaxVars named variables, row-major
// (last variable varies fastest).
class MultiJoint {
 public:
  MultiJoint(std::vector<std::string> names, std::vector<std::size_t> shape,
             std::vector<double> p);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::span<const double> data() const { return p_; }
  std::size_t rank() const { return names_.size(); }

  bool has(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  double at(std::span<const std::size_t> index) const;

  // Marginal on `vars`, with axes in the order given.
  MultiJoint marginal(const VarSet& vars) const;

  // Entropy in nats of the marginal on the variables whose bit is set.
  double entropy_nats(std::uint32_t mask) const;
  std::uint32_t mask_of(const VarSet& vars) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> shape_;
  std::vector<double> p_;
};

InfoValue entropy(const MultiJoint& joint, const VarSet& vars);

// I(a;b|c) = H(a,c) + H(b,c) - H(a,b,c) - H(c). Empty c gives I(a;b).
InfoValue cond_mutual_info(const MultiJoint& joint, const VarSet& a, const VarSet& b,
                           const VarSet& c = {});

// Independent pair: variables X, Y, X', Y' with p = j1(x,y) * j2(x',y').
MultiJoint product(const JointPMF& j1, const JointPMF& j2);

// -sum q ln q over a probability vector, with 0 ln 0 = 0.
double entropy_nats(std::span<const double> probs);

struct Finding {
  enum class Kind { non_finite, negative_entry, mass_deficit, zero_row, zero_column, shape_mismatch };
  Kind kind;
  std::string detail;
};

const char* to_string(Finding::Kind kind);

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool has(Finding::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate_joint(std::size_t n_x, std::size_t n_y, std::span<const double> p);
ValidationReport validate_multi(std::span<const std::size_t> shape, std::span<const double> p);
ValidationReport validate(const JointPMF& joint);
ValidationReport validate(const MultiJoint& joint);

}  // namespace gkt
