#pragma once

// Distribution file formats.
//
//   {"kind":"joint_pmf","n_x":N,"n_y":M,"p":[[row], [row], ...]}
//   {"kind":"multi_joint","vars":["U","V"],"shape":[2,3],"p":[flat row-major]}
//
// A plain numeric grid (comma or whitespace separated, one row per line) is
// also accepted as a joint pmf.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "gkt/blocks.hpp"
#include "gkt/info.hpp"

namespace gkt {

// Malformed input: bad syntax, wrong schema, or an invalid distribution.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Distribution = std::variant<JointPMF, MultiJoint>;

Distribution parse_distribution(const nlohmann::json& doc);
Distribution parse_distribution_text(const std::string& text);
JointPMF parse_csv_matrix(std::istream& in);

// `csv` selects the grid reader; otherwise the file is JSON.
Distribution load_distribution(const std::string& path, bool csv = false);
JointPMF load_joint(const std::string& path, bool csv = false);

nlohmann::json to_json(const JointPMF& joint);
nlohmann::json to_json(const MultiJoint& joint);
// Cells and rows/columns are zero-based.
nlohmann::json to_json(const BlockDecomposition& dec);

// printf("%.*g") without locale surprises.
std::string format_g(double v, int digits = 12);

}  // namespace gkt
