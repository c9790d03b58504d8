#include "gkt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gkt {

namespace {

std::vector<double> numbers(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw InputError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t positive_size(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1)
    throw InputError(std::string("\"") + key + "\" must be a positive integer");
  return doc[key].get<std::size_t>();
}

}  // namespace

Distribution parse_distribution(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
    throw InputError("distribution must be an object with a \"kind\" field");
  const std::string kind = doc["kind"].get<std::string>();
  if (!doc.contains("p")) throw InputError("distribution has no \"p\" field");
  try {
    if (kind == "joint_pmf") {
      const std::size_t n_x = positive_size(doc, "n_x");
      const std::size_t n_y = positive_size(doc, "n_y");
      const auto& rows = doc["p"];
      if (!rows.is_array() || rows.size() != n_x) throw InputError("\"p\" must have n_x rows");
      std::vector<double> flat;
      for (const auto& row : rows) {
        auto r = numbers(row, "each row of \"p\"");
        if (r.size() != n_y) throw InputError("each row of \"p\" must have n_y entries");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      return JointPMF::from_flat(n_x, n_y, std::move(flat));
    }
    if (kind == "multi_joint") {
      if (!doc.contains("vars") || !doc["vars"].is_array()) throw InputError("\"vars\" must be an array of names");
      std::vector<std::string> vars;
      for (const auto& v : doc["vars"]) {
        if (!v.is_string()) throw InputError("\"vars\" must be an array of names");
        vars.push_back(v.get<std::string>());
      }
      if (!doc.contains("shape") || !doc["shape"].is_array()) throw InputError("\"shape\" must be an array");
      std::vector<std::size_t> shape;
      for (const auto& s : doc["shape"]) {
        if (!s.is_number_integer() || s.get<long long>() < 1) throw InputError("\"shape\" entries must be positive");
        shape.push_back(s.get<std::size_t>());
      }
      return MultiJoint(std::move(vars), std::move(shape), numbers(doc["p"], "\"p\""));
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown distribution kind \"" + kind + "\"");
}

Distribution parse_distribution_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_distribution(doc);
}

JointPMF parse_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw InputError("not a number in CSV matrix: " + tok);
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  try {
    return JointPMF::from_rows(rows);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Distribution load_distribution(const std::string& path, bool csv) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  if (csv) return parse_csv_matrix(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_distribution_text(ss.str());
}

JointPMF load_joint(const std::string& path, bool csv) {
  auto d = load_distribution(path, csv);
  if (auto* j = std::get_if<JointPMF>(&d)) return *j;
  const auto& m = std::get<MultiJoint>(d);
  if (m.rank() != 2) throw InputError(path + ": expected a joint pmf of two variables");
  try {
    return JointPMF::from_flat(m.shape()[0], m.shape()[1], {m.data().begin(), m.data().end()});
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

nlohmann::json to_json(const JointPMF& joint) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < joint.n_x(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < joint.n_y(); ++j) row.push_back(joint(i, j));
    rows.push_back(std::move(row));
  }
  return {{"kind", "joint_pmf"}, {"n_x", joint.n_x()}, {"n_y", joint.n_y()}, {"p", std::move(rows)}};
}

nlohmann::json to_json(const MultiJoint& joint) {
  return {{"kind", "multi_joint"},
          {"vars", joint.names()},
          {"shape", joint.shape()},
          {"p", std::vector<double>(joint.data().begin(), joint.data().end())}};
}

nlohmann::json to_json(const BlockDecomposition& dec) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
    const Block& blk = dec.blocks[b];
    nlohmann::json cells = nlohmann::json::array();
    for (const Cell& c : blk.cells) cells.push_back({c.row, c.col});
    blocks.push_back({{"id", b},
                      {"mass", blk.mass},
                      {"rows", blk.rows},
                      {"cols", blk.cols},
                      {"cells", std::move(cells)},
                      {"is_rectangle", blk.is_rectangle},
                      {"is_independent", blk.is_independent}});
  }
  return {{"n_x", dec.n_x}, {"n_y", dec.n_y}, {"block_count", dec.size()}, {"blocks", std::move(blocks)}};
}

std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace gkt
