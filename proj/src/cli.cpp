#include "gkt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gkt/blocks.hpp"
#include "gkt/construction.hpp"
#include "gkt/inequalities.hpp"
#include "gkt/info.hpp"
#include "gkt/io.hpp"
#include "gkt/tension.hpp"

namespace gkt {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kCrossCheckTolerance = 5e-3;

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string out_path;
  unsigned threads = 0;
};

struct InputFlags {
  std::string path;
  bool csv = false;
};

struct OptimFlags {
  int restarts = 32;
  int max_iters = 500;
};

void add_input(CLI::App* cmd, InputFlags& in) {
  cmd->add_option("input", in.path, "Distribution file (JSON, or a numeric grid with --csv)")->required();
  cmd->add_flag("--csv", in.csv, "Read the input as a plain numeric grid");
}

void add_optim(CLI::App* cmd, OptimFlags& f) {
  cmd->add_option("--restarts", f.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", f.max_iters, "Iterations per descent")->check(CLI::NonNegativeNumber);
}

OptimConfig make_config(const Globals& g, const OptimFlags& f) {
  OptimConfig cfg;
  cfg.restarts = f.restarts;
  cfg.max_iters = f.max_iters;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  return cfg;
}

std::string fmt(double v) { return format_g(v, 12); }

double bits_h(const std::vector<double>& p) { return entropy_nats(p) / std::numbers::ln2; }

double mutual_info(const JointPMF& j) {
  return bits_h(j.row_marginal()) + bits_h(j.col_marginal()) - entropy_nats(j.data()) / std::numbers::ln2;
}

ojson point_json(const TensionPoint& p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

std::string point_text(const TensionPoint& p) { return "(" + fmt(p.x) + ", " + fmt(p.y) + ", " + fmt(p.z) + ")"; }

void emit(std::ostream& os, const Globals& g, const ojson& report) {
  if (g.format == "json") {
    os << report.dump(2) << "\n";
    return;
  }
  for (const auto& [key, value] : report.items()) {
    if (value.is_number_float()) {
      os << key << " = " << fmt(value.get<double>()) << "\n";
    } else if (value.is_string()) {
      os << key << " = " << value.get<std::string>() << "\n";
    } else if (value.is_object() && value.contains("x") && value.size() == 3) {
      os << key << " = " << point_text({value["x"], value["y"], value["z"]}) << "\n";
    } else {
      os << key << " = " << value.dump() << "\n";
    }
  }
}

// ---------------------------------------------------------------------------

int cmd_info(std::ostream& os, const Globals& g, const InputFlags& in) {
  const JointPMF joint = load_joint(in.path, in.csv);
  const auto dec = decompose(joint);
  ojson r;
  r["H(X)"] = bits_h(joint.row_marginal());
  r["H(Y)"] = bits_h(joint.col_marginal());
  r["I(X;Y)"] = mutual_info(joint);
  r["blocks"] = dec.size();
  if (g.format == "json") {
    r["decomposition"] = to_json(dec);
    emit(os, g, r);
    return kExitOk;
  }
  emit(os, g, r);
  for (std::size_t b = 0; b < dec.size(); ++b) {
    const Block& blk = dec.blocks[b];
    os << "block " << b << ": mass = " << fmt(blk.mass) << ", cells = " << blk.cells.size()
       << ", rectangle = " << (blk.is_rectangle ? "yes" : "no")
       << ", independent = " << (blk.is_independent ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int cmd_gk(std::ostream& os, std::ostream& err, const Globals& g, const InputFlags& in, bool explain,
           bool cross_check, const OptimFlags& of) {
  const JointPMF joint = load_joint(in.path, in.csv);
  const double gk = gk_exact(joint).bits;
  const double i_xy = mutual_info(joint);
  ojson r;
  r["GK(X;Y)"] = gk;
  r["I(X;Y)"] = i_xy;
  int code = kExitOk;
  if (cross_check) {
    const auto res = min_r_origin_axis(joint, make_config(g, of));
    const double discrepancy = std::abs(gk - (i_xy - res.r.bits));
    r["min_r"] = res.r.bits;
    r["feasible"] = res.feasible ? "yes" : "no";
    r["I(X;Y) - min_r"] = i_xy - res.r.bits;
    r["discrepancy"] = discrepancy;
    if (!res.feasible) {
      err << "gk: optimizer found no point with I(X;Z|Y) + I(Y;Z|X) <= 1e-6; best point "
          << point_text(res.point) << "\n";
      code = kExitInfeasible;
    } else if (discrepancy > kCrossCheckTolerance) {
      err << "gk: cross-check discrepancy " << fmt(discrepancy) << " exceeds " << fmt(kCrossCheckTolerance) << "\n";
      code = kExitCrossCheck;
    }
  }
  if (explain) {
    if (g.format == "json") {
      r["decomposition"] = to_json(decompose(joint));
    } else {
      emit(os, g, r);
      os << to_json(decompose(joint)).dump(2) << "\n";
      return code;
    }
  }
  emit(os, g, r);
  return code;
}

int cmd_tension_scan(std::ostream& os, const Globals& g, const InputFlags& in, std::size_t directions,
                     const OptimFlags& of) {
  const JointPMF joint = load_joint(in.path, in.csv);
  const auto dirs = simplex_directions(directions);
  const auto points = lower_envelope_scan(joint, dirs, make_config(g, of));
  if (g.format == "json") {
    ojson arr = ojson::array();
    for (const auto& p : points)
      arr.push_back({{"w1", p.weights.w1}, {"w2", p.weights.w2}, {"w3", p.weights.w3}, {"x", p.point.x},
                     {"y", p.point.y}, {"z", p.point.z}, {"objective", p.objective}});
    os << arr.dump(2) << "\n";
  } else {
    write_envelope_csv(os, points);
  }
  return kExitOk;
}

int cmd_tension_min_r(std::ostream& os, std::ostream& err, const Globals& g, const InputFlags& in,
                      const OptimFlags& of) {
  const JointPMF joint = load_joint(in.path, in.csv);
  const auto res = min_r_origin_axis(joint, make_config(g, of));
  ojson r;
  r["min_r"] = res.r.bits;
  r["feasible"] = res.feasible ? "yes" : "no";
  r["point"] = point_json(res.point);
  r["I(X;Y)"] = mutual_info(joint);
  r["I(X;Y) - min_r"] = mutual_info(joint) - res.r.bits;
  emit(os, g, r);
  if (!res.feasible) {
    err << "tension min-r: no point with x + y <= 1e-6 bits; best point " << point_text(res.point) << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_tension_delta_min(std::ostream& os, const Globals& g, const InputFlags& in, const OptimFlags& of) {
  const JointPMF joint = load_joint(in.path, in.csv);
  const auto res = min_scalarized(joint, {1.0, 1.0, 1.0}, make_config(g, of));
  ojson r;
  r["delta_min"] = res.objective;
  r["point"] = point_json(res.point);
  emit(os, g, r);
  return kExitOk;
}

int cmd_ineq_fuzz(std::ostream& os, std::ostream& err, const Globals& g, std::size_t samples,
                  const std::string& records_path) {
  const auto records = run_mmrv_fuzz(samples, g.seed, g.threads);
  if (!records_path.empty()) {
    std::ofstream rec(records_path);
    if (!rec) throw InputError("cannot write " + records_path);
    write_fuzz_jsonl(rec, records);
  }
  const auto s = summarize(records);
  ojson r;
  r["samples"] = s.samples;
  if (s.samples > 0) {
    r["min_sum"] = s.min_sum;
    r["mean_sum"] = s.mean_sum;
    r["min_precursor"] = s.min_precursor;
    r["mean_precursor"] = s.mean_precursor;
  }
  r["violations"] = s.violations.size();
  emit(os, g, r);
  if (!s.violations.empty()) {
    for (auto seed : s.violations) err << "ineq fuzz: contract violated at seed " << seed << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_ineq_check(std::ostream& os, std::ostream& err, const Globals& g, const InputFlags& in) {
  auto dist = load_distribution(in.path, false);
  const auto* joint = std::get_if<MultiJoint>(&dist);
  if (!joint) throw InputError("ineq check expects a multi_joint over U, V, X, Y, Z");
  MmrvValues m;
  double precursor = 0.0;
  try {
    m = mmrv_check(*joint);
    precursor = shannon_precursor_check(*joint);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const auto ing = ingleton(joint->marginal({"U", "V", "X", "Y"}));
  const auto del = delta(joint->marginal({"X", "Y", "Z"}));
  ojson r;
  r["I(X;Y)"] = ing.i_xy;
  r["I(X;Y|U)"] = ing.i_xy_u;
  r["I(X;Y|V)"] = ing.i_xy_v;
  r["I(U;V)"] = ing.i_uv;
  r["ing"] = m.ing_total;
  r["I(X;Z|Y)"] = del.xz_y;
  r["I(Y;Z|X)"] = del.yz_x;
  r["I(X;Y|Z)"] = del.xy_z;
  r["delta"] = m.delta_total;
  r["sum"] = m.sum;
  r["precursor"] = precursor;
  emit(os, g, r);
  if (m.sum < -kInequalityTolerance || precursor < -kInequalityTolerance) {
    err << "ineq check: inequality violated beyond " << fmt(kInequalityTolerance) << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

// "i1,i2,j1,j2" with one-based indices.
Quad parse_quad(const std::string& text) {
  std::vector<std::size_t> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long long n = 0;
    try {
      n = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || n < 1) throw InputError("--quad expects auto or i1,i2,j1,j2 (one-based)");
    v.push_back(static_cast<std::size_t>(n - 1));
  }
  if (v.size() != 4) throw InputError("--quad expects auto or i1,i2,j1,j2 (one-based)");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_construct(std::ostream& os, std::ostream& err, const Globals& g, const InputFlags& in,
                  const std::string& quad_text, bool q_scan) {
  const JointPMF joint = load_joint(in.path, in.csv);
  ViolationQuad violation;
  if (quad_text == "auto") {
    auto found = find_violation_quad(joint);
    if (!found) {
      err << "construct: no violation quad; every block is an independent rectangle, so GK(X;Y) = I(X;Y) and "
             "the origin lies in the tension region\n";
      return kExitNoWitness;
    }
    violation = *found;
  } else {
    const Quad quad = parse_quad(quad_text);
    if (quad.i1 >= joint.n_x() || quad.i2 >= joint.n_x() || quad.j1 >= joint.n_y() || quad.j2 >= joint.n_y() ||
        quad.i1 == quad.i2 || quad.j1 == quad.j2)
      throw InputError("--quad indices out of range or repeated");
    const double a = joint(quad.i1, quad.j1), b = joint(quad.i1, quad.j2);
    const double c = joint(quad.i2, quad.j1), d = joint(quad.i2, quad.j2);
    const bool abc = a > kSupportThreshold && b > kSupportThreshold && c > kSupportThreshold;
    if (abc && d <= kSupportThreshold) {
      violation = {quad, QuadCase::case_i};
    } else if (abc && a * d < b * c && !minor_vanishes(a, b, c, d)) {
      violation = {quad, QuadCase::case_ii};
    } else {
      throw InputError("--quad does not witness case (i) or case (ii) with alpha*delta < beta*gamma");
    }
  }

  const JointPMF relabeled = relabel_for_quad(joint, violation.quad);
  const auto params = QuadParams::from_relabeled(relabeled, violation.kind);
  NegativeQ best;
  try {
    best = find_negative_q(joint, violation);
  } catch (const ScanFailure& e) {
    err << "construct: " << e.what() << "\n";
    return kExitNoWitness;
  }

  const auto& qd = violation.quad;
  const std::string quad_str = std::to_string(qd.i1 + 1) + "," + std::to_string(qd.i2 + 1) + "," +
                               std::to_string(qd.j1 + 1) + "," + std::to_string(qd.j2 + 1);
  ojson r;
  r["quad"] = quad_str;
  r["case"] = to_string(violation.kind);
  r["alpha"] = params.alpha;
  r["beta"] = params.beta;
  r["gamma"] = params.gamma;
  r["delta"] = params.delta;
  r["q_star"] = best.q;
  r["ing_star_bits"] = best.ing_bits;
  r["delta_min_lower_bound_bits"] = -best.ing_bits;

  const auto qs = geometric_q_grid();
  const auto curve = ing_curve(relabeled, qs);
  if (g.format == "json") {
    if (q_scan) {
      ojson arr = ojson::array();
      for (const auto& pt : curve)
        arr.push_back({{"q", pt.q}, {"ing_bits", pt.ing_bits}, {"eq1_nats", eq1_reduced(params, pt.q)}});
      r["curve"] = std::move(arr);
    }
    emit(os, g, r);
    return kExitOk;
  }
  if (q_scan) {
    os << "q,ing_bits,eq1_nats\n";
    for (const auto& pt : curve)
      os << fmt(pt.q) << "," << fmt(pt.ing_bits) << "," << fmt(eq1_reduced(params, pt.q)) << "\n";
    std::ostringstream summary;
    emit(summary, g, r);
    std::string line;
    std::istringstream lines(summary.str());
    while (std::getline(lines, line)) os << "# " << line << "\n";
    return kExitOk;
  }
  emit(os, g, r);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gacs-Korner common information, tension region and MMRV tools", "gkt"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (default 0)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", g.out_path, "Write the report to this file instead of stdout");
  app.add_option("--threads", g.threads, "Worker threads (0: all cores); results do not depend on it");
  app.fallthrough();

  InputFlags in;
  OptimFlags of;

  auto* info = app.add_subcommand("info", "Entropies, mutual information and block structure");
  add_input(info, in);

  bool explain = false, cross_check = false;
  auto* gk = app.add_subcommand("gk", "Exact Gacs-Korner common information");
  add_input(gk, in);
  gk->add_flag("--explain", explain, "Print the block decomposition as JSON");
  gk->add_flag("--cross-check", cross_check, "Compare against I(X;Y) - min r from the tension optimizer");
  add_optim(gk, of);

  auto* tension = app.add_subcommand("tension", "Explore the tension region");
  tension->require_subcommand(1);
  std::size_t directions = 200;
  auto* scan = tension->add_subcommand("scan", "Lower envelope over a grid of weight directions (CSV)");
  add_input(scan, in);
  scan->add_option("--directions", directions, "Number of weight directions");
  add_optim(scan, of);
  auto* min_r = tension->add_subcommand("min-r", "min I(X;Y|Z) subject to I(X;Z|Y) = I(Y;Z|X) = 0");
  add_input(min_r, in);
  add_optim(min_r, of);
  auto* dmin = tension->add_subcommand("delta-min", "min over Z of I(X;Z|Y) + I(Y;Z|X) + I(X;Y|Z)");
  add_input(dmin, in);
  add_optim(dmin, of);

  auto* ineq = app.add_subcommand("ineq", "MMRV inequality checks");
  ineq->require_subcommand(1);
  std::size_t samples = 10000;
  std::string records_path;
  auto* fuzz = ineq->add_subcommand("fuzz", "Random Dirichlet(1) five-variable joints");
  fuzz->add_option("--samples", samples, "Number of random joints");
  fuzz->add_option("--records", records_path, "Write one JSON line per sample to this file");
  auto* check = ineq->add_subcommand("check", "Evaluate a multi_joint over U, V, X, Y, Z");
  add_input(check, in);

  std::string quad_text = "auto";
  bool q_scan = false;
  auto* construct = app.add_subcommand("construct", "Negative Ingleton witness U, V for a violation quad");
  add_input(construct, in);
  construct->add_option("--quad", quad_text, "auto, or i1,i2,j1,j2 (one-based)");
  construct->add_flag("--q-scan", q_scan, "Emit the ing(q) curve as CSV q,ing_bits,eq1_nats");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  std::unique_ptr<std::ofstream> file;
  if (!g.out_path.empty()) {
    file = std::make_unique<std::ofstream>(g.out_path);
    if (!*file) {
      err << "gkt: cannot write " << g.out_path << "\n";
      return kExitInput;
    }
  }
  std::ostream& os = file ? *file : out;

  try {
    if (info->parsed()) return cmd_info(os, g, in);
    if (gk->parsed()) return cmd_gk(os, err, g, in, explain, cross_check, of);
    if (scan->parsed()) return cmd_tension_scan(os, g, in, directions, of);
    if (min_r->parsed()) return cmd_tension_min_r(os, err, g, in, of);
    if (dmin->parsed()) return cmd_tension_delta_min(os, g, in, of);
    if (fuzz->parsed()) return cmd_ineq_fuzz(os, err, g, samples, records_path);
    if (check->parsed()) return cmd_ineq_check(os, err, g, in);
    if (construct->parsed()) return cmd_construct(os, err, g, in, quad_text, q_scan);
  } catch (const InputError& e) {
    err << "gkt: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "gkt: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace gkt
