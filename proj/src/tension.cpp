#include "gkt/tension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "gkt/blocks.hpp"

namespace gkt {

namespace {

constexpr double kRowTolerance = 1e-12;
// Logit gap used to encode a deterministic channel in softmax form.
constexpr double kDeterministicLogit = 60.0;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double safe_log(double m) { return m > 0.0 ? std::log(m) : -745.0; }

// Runs fn(0) .. fn(count - 1) over a fixed pool. Each index owns its output
// slot, so the result does not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Objective and preconditioned gradient of weights . point as a function of
// softmax logits theta (cells x k). Values in nats.
class Evaluator {
 public:
  Evaluator(const JointPMF& joint, std::size_t k) : nx_(joint.n_x()), ny_(joint.n_y()), k_(k) {
    for (const Cell& c : joint.support()) {
      p_.push_back(joint(c.row, c.col));
      row_.push_back(c.row);
      col_.push_back(c.col);
    }
    hx_ = entropy_nats(joint.row_marginal());
    hy_ = entropy_nats(joint.col_marginal());
    hxy_ = entropy_nats(joint.data());
    w_.resize(p_.size() * k_);
    logw_.resize(w_.size());
    rxz_.resize(nx_ * k_);
    ryz_.resize(ny_ * k_);
    rz_.resize(k_);
  }

  std::size_t size() const { return w_.size(); }
  std::size_t cells() const { return p_.size(); }
  std::size_t k() const { return k_; }
  const std::vector<double>& w() const { return w_; }

  // Loads theta and returns the point in nats.
  TensionPoint load(const std::vector<double>& theta) {
    for (std::size_t c = 0; c < p_.size(); ++c) {
      const double* t = theta.data() + c * k_;
      const double top = *std::max_element(t, t + k_);
      double s = 0.0;
      for (std::size_t z = 0; z < k_; ++z) s += std::exp(t[z] - top);
      const double lse = top + std::log(s);
      for (std::size_t z = 0; z < k_; ++z) {
        logw_[c * k_ + z] = t[z] - lse;
        w_[c * k_ + z] = std::exp(t[z] - lse);
      }
    }
    std::fill(rxz_.begin(), rxz_.end(), 0.0);
    std::fill(ryz_.begin(), ryz_.end(), 0.0);
    std::fill(rz_.begin(), rz_.end(), 0.0);
    double hxyz = hxy_;
    for (std::size_t c = 0; c < p_.size(); ++c) {
      for (std::size_t z = 0; z < k_; ++z) {
        const double w = w_[c * k_ + z];
        const double r = p_[c] * w;
        rxz_[row_[c] * k_ + z] += r;
        ryz_[col_[c] * k_ + z] += r;
        rz_[z] += r;
        if (w > 0.0) hxyz -= r * logw_[c * k_ + z];
      }
    }
    const double hxz = entropy_nats(rxz_);
    const double hyz = entropy_nats(ryz_);
    const double hz = entropy_nats(rz_);
    point_ = {hxy_ + hyz - hxyz - hy_, hxy_ + hxz - hxyz - hx_, hxz + hyz - hxyz - hz};
    return point_;
  }

  // Descent direction for the loaded state: per cell, the centered
  // conditional gradient -(G - E_w[G]). Returns the directional derivative
  // of the objective along it (nats, <= 0).
  double direction(const Weights& wt, std::vector<double>& d) const {
    const double c_xz = wt.w2 + wt.w3;
    const double c_yz = wt.w1 + wt.w3;
    const double c_xyz = -(wt.w1 + wt.w2 + wt.w3);
    const double c_z = -wt.w3;
    std::vector<double> log_rz(k_);
    for (std::size_t z = 0; z < k_; ++z) log_rz[z] = safe_log(rz_[z]);
    d.resize(w_.size());
    double slope = 0.0;
    for (std::size_t c = 0; c < p_.size(); ++c) {
      const double* lxz = rxz_.data() + row_[c] * k_;
      const double* lyz = ryz_.data() + col_[c] * k_;
      double* g = d.data() + c * k_;
      double mean = 0.0;
      for (std::size_t z = 0; z < k_; ++z) {
        // d/dw(z|c) of the objective, divided by p(c). The +1 terms of
        // d(-m ln m) cancel because the coefficients sum to zero.
        g[z] = -(c_xz * safe_log(lxz[z]) + c_yz * safe_log(lyz[z]) + c_xyz * logw_[c * k_ + z] +
                 c_z * log_rz[z]);
        mean += w_[c * k_ + z] * g[z];
      }
      double sq = 0.0;
      for (std::size_t z = 0; z < k_; ++z) {
        g[z] -= mean;
        sq += w_[c * k_ + z] * g[z] * g[z];
        g[z] = -g[z];
      }
      slope -= p_[c] * sq;
    }
    return slope;
  }

 private:
  std::size_t nx_, ny_, k_;
  std::vector<double> p_;
  std::vector<std::size_t> row_, col_;
  double hx_ = 0.0, hy_ = 0.0, hxy_ = 0.0;
  std::vector<double> w_, logw_, rxz_, ryz_, rz_;
  TensionPoint point_;
};

double objective_of(const Weights& wt, const TensionPoint& p) { return wt.dot(p); }

// Gradient descent on the logits with backtracking line search. Leaves the
// evaluator loaded with the final theta and returns the objective (nats).
double descend(Evaluator& ev, const Weights& wt, std::vector<double>& theta, const OptimConfig& cfg) {
  double f = objective_of(wt, ev.load(theta));
  std::vector<double> d, trial(theta.size());
  double eta = 1.0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double slope = ev.direction(wt, d);
    if (!(slope < -1e-18)) break;
    bool accepted = false;
    double f_trial = f;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t n = 0; n < theta.size(); ++n) trial[n] = theta[n] + eta * d[n];
      f_trial = objective_of(wt, ev.load(trial));
      if (f_trial <= f + kArmijo * eta * slope) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    // Re-center the logits of each row so they stay bounded.
    const std::size_t k = ev.k();
    for (std::size_t c = 0; c < ev.cells(); ++c) {
      const double top = *std::max_element(trial.begin() + c * k, trial.begin() + (c + 1) * k);
      for (std::size_t z = 0; z < k; ++z) trial[c * k + z] -= top;
    }
    theta.swap(trial);
    const double gain = f - f_trial;
    f = f_trial;
    eta = std::min(eta * 2.0, 1e6);
    if (gain <= cfg.objective_tol * std::max(1.0, std::abs(f))) break;
  }
  return objective_of(wt, ev.load(theta));
}

std::vector<double> logits_of(const Channel& ch) {
  std::vector<double> theta(ch.data().size());
  for (std::size_t n = 0; n < theta.size(); ++n) {
    const double w = ch.data()[n];
    theta[n] = w > 0.0 ? std::log(w) : -kDeterministicLogit;
  }
  return theta;
}

Channel channel_of(const Evaluator& ev) {
  return Channel(ev.k(), ev.cells(), ev.w());
}

// Restart 0 starts from the block-label channel; restart r > 0 from flat
// Dirichlet rows drawn with seed cfg.seed + r.
std::vector<double> initial_logits(const JointPMF& joint, std::size_t k, const OptimConfig& cfg, int restart) {
  if (restart == 0) {
    const Channel blocks = block_channel(joint, k);
    std::vector<double> theta(blocks.data().size());
    for (std::size_t n = 0; n < theta.size(); ++n) theta[n] = blocks.data()[n] > 0.5 ? 0.0 : -kDeterministicLogit;
    return theta;
  }
  Rng rng(cfg.seed + static_cast<std::uint64_t>(restart));
  return logits_of(random_channel(joint, k, rng));
}

void check_weights(const Weights& w) {
  const bool finite = std::isfinite(w.w1) && std::isfinite(w.w2) && std::isfinite(w.w3);
  if (!finite || w.w1 < 0.0 || w.w2 < 0.0 || w.w3 < 0.0 || (w.w1 + w.w2 + w.w3) <= 0.0)
    throw std::invalid_argument("weights must be nonnegative and not all zero");
}

}  // namespace

// ---------------------------------------------------------------------------

namespace detail {

double scalarized_objective_nats(const JointPMF& joint, const Weights& weights, std::size_t k,
                                 const std::vector<double>& logits) {
  Evaluator ev(joint, k);
  if (logits.size() != ev.size()) throw std::invalid_argument("logits size does not match cells x k");
  return objective_of(weights, ev.load(logits));
}

std::vector<double> scalarized_gradient_nats(const JointPMF& joint, const Weights& weights, std::size_t k,
                                             const std::vector<double>& logits) {
  Evaluator ev(joint, k);
  if (logits.size() != ev.size()) throw std::invalid_argument("logits size does not match cells x k");
  ev.load(logits);
  std::vector<double> d;
  ev.direction(weights, d);
  // d = -(G - E_w[G]) per cell; the logit gradient is p(c) w (G - E_w[G]).
  const auto support = joint.support();
  for (std::size_t c = 0; c < support.size(); ++c)
    for (std::size_t z = 0; z < k; ++z)
      d[c * k + z] *= -joint(support[c].row, support[c].col) * ev.w()[c * k + z];
  return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------

Channel::Channel(std::size_t k, std::size_t cells, std::vector<double> w)
    : k_(k), cells_(cells), w_(std::move(w)) {
  if (k_ == 0) throw std::invalid_argument("channel alphabet must be non-empty");
  if (w_.size() != k_ * cells_) throw std::invalid_argument("channel size does not match cells x k");
  for (std::size_t c = 0; c < cells_; ++c) {
    double s = 0.0;
    for (std::size_t z = 0; z < k_; ++z) {
      const double v = w_[c * k_ + z];
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("channel entries must be finite and nonnegative");
      s += v;
    }
    if (std::abs(s - 1.0) > kRowTolerance)
      throw std::invalid_argument("channel row " + std::to_string(c) + " does not sum to 1");
  }
}

void OptimConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(objective_tol > 0.0) || !(feasibility_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (penalties.empty()) throw std::invalid_argument("penalty schedule is empty");
  for (double l : penalties)
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("penalties must be positive");
}

std::size_t default_alphabet(const JointPMF& joint) { return joint.n_x() * joint.n_y() + 3; }

TensionPoint tension_point(const JointPMF& joint, const Channel& ch) {
  const auto support = joint.support();
  if (ch.cells() != support.size())
    throw std::invalid_argument("channel has " + std::to_string(ch.cells()) + " rows, joint support has " +
                                std::to_string(support.size()) + " cells");
  const std::size_t k = ch.k();
  std::vector<double> p(joint.n_x() * joint.n_y() * k, 0.0);
  for (std::size_t c = 0; c < support.size(); ++c) {
    const double base = joint(support[c].row, support[c].col);
    for (std::size_t z = 0; z < k; ++z)
      p[(support[c].row * joint.n_y() + support[c].col) * k + z] = base * ch(c, z);
  }
  const MultiJoint xyz({"X", "Y", "Z"}, {joint.n_x(), joint.n_y(), k}, std::move(p));
  return {cond_mutual_info(xyz, {"X"}, {"Z"}, {"Y"}).bits, cond_mutual_info(xyz, {"Y"}, {"Z"}, {"X"}).bits,
          cond_mutual_info(xyz, {"X"}, {"Y"}, {"Z"}).bits};
}

Channel constant_channel(const JointPMF& joint, std::size_t k) {
  if (k == 0) throw std::invalid_argument("channel alphabet must be non-empty");
  const std::size_t cells = joint.support().size();
  std::vector<double> w(cells * k, 0.0);
  for (std::size_t c = 0; c < cells; ++c) w[c * k] = 1.0;
  return Channel(k, cells, std::move(w));
}

Channel copy_x_channel(const JointPMF& joint) {
  const auto support = joint.support();
  const std::size_t k = joint.n_x();
  std::vector<double> w(support.size() * k, 0.0);
  for (std::size_t c = 0; c < support.size(); ++c) w[c * k + support[c].row] = 1.0;
  return Channel(k, support.size(), std::move(w));
}

Channel copy_y_channel(const JointPMF& joint) {
  const auto support = joint.support();
  const std::size_t k = joint.n_y();
  std::vector<double> w(support.size() * k, 0.0);
  for (std::size_t c = 0; c < support.size(); ++c) w[c * k + support[c].col] = 1.0;
  return Channel(k, support.size(), std::move(w));
}

Channel block_channel(const JointPMF& joint, std::size_t k) {
  const auto dec = decompose(joint);
  if (k < std::max<std::size_t>(dec.size(), 1)) throw std::invalid_argument("alphabet smaller than block count");
  const auto support = joint.support();
  std::vector<double> w(support.size() * k, 0.0);
  for (std::size_t c = 0; c < support.size(); ++c) {
    // Cells below the support threshold belong to no block; park them on 0.
    const int b = dec.block_at(support[c].row, support[c].col);
    w[c * k + static_cast<std::size_t>(std::max(b, 0))] = 1.0;
  }
  return Channel(k, support.size(), std::move(w));
}

Channel random_channel(const JointPMF& joint, std::size_t k, Rng& rng) {
  const std::size_t cells = joint.support().size();
  std::vector<double> w;
  w.reserve(cells * k);
  for (std::size_t c = 0; c < cells; ++c) {
    auto row = dirichlet_flat(rng, k);
    w.insert(w.end(), row.begin(), row.end());
  }
  return Channel(k, cells, std::move(w));
}

Channel time_share(const Channel& ch1, const Channel& ch2, double lambda) {
  if (ch1.cells() != ch2.cells()) throw std::invalid_argument("time sharing needs channels over the same joint");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const std::size_t k = ch1.k() + ch2.k();
  std::vector<double> w;
  w.reserve(ch1.cells() * k);
  for (std::size_t c = 0; c < ch1.cells(); ++c) {
    for (double v : ch1.row(c)) w.push_back(lambda * v);
    for (double v : ch2.row(c)) w.push_back((1.0 - lambda) * v);
  }
  return Channel(k, ch1.cells(), std::move(w));
}

// ---------------------------------------------------------------------------
// Optimization

ScalarizedResult min_scalarized(const JointPMF& joint, const Weights& weights, const OptimConfig& cfg) {
  cfg.validate();
  check_weights(weights);
  const std::size_t k = default_alphabet(joint);

  struct Outcome {
    std::vector<double> w;
    TensionPoint point;
    double objective;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t r) {
    Evaluator ev(joint, k);
    auto theta = initial_logits(joint, k, cfg, static_cast<int>(r));
    descend(ev, weights, theta, cfg);
    Channel ch = channel_of(ev);
    const TensionPoint pt = tension_point(joint, ch);
    outcomes[r] = {ev.w(), pt, weights.dot(pt)};
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].objective < outcomes[best].objective) best = r;
  return {outcomes[best].point, Channel(k, joint.support().size(), outcomes[best].w), outcomes[best].objective};
}

OriginAxisResult min_r_origin_axis(const JointPMF& joint, const OptimConfig& cfg) {
  cfg.validate();
  const std::size_t k = default_alphabet(joint);

  struct Outcome {
    std::vector<double> w;
    TensionPoint point;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t r) {
    Evaluator ev(joint, k);
    auto theta = initial_logits(joint, k, cfg, static_cast<int>(r));
    for (double lambda : cfg.penalties) descend(ev, {lambda, lambda, 1.0}, theta, cfg);
    const TensionPoint pt = tension_point(joint, channel_of(ev));
    outcomes[r] = {ev.w(), pt};
  });

  std::optional<std::size_t> best_feasible;
  std::size_t least_violation = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const TensionPoint& p = outcomes[r].point;
    if (p.x + p.y <= cfg.feasibility_tol && (!best_feasible || p.z < outcomes[*best_feasible].point.z))
      best_feasible = r;
    const TensionPoint& q = outcomes[least_violation].point;
    if (p.x + p.y < q.x + q.y) least_violation = r;
  }
  const std::size_t pick = best_feasible.value_or(least_violation);
  const Outcome& o = outcomes[pick];
  return {{o.point.z}, best_feasible.has_value(), o.point, Channel(k, joint.support().size(), o.w)};
}

InfoValue delta_min(const JointPMF& joint, const OptimConfig& cfg) {
  return {min_scalarized(joint, {1.0, 1.0, 1.0}, cfg).objective};
}

std::vector<EnvelopePoint> lower_envelope_scan(const JointPMF& joint, std::span<const Weights> directions,
                                               const OptimConfig& cfg) {
  std::vector<EnvelopePoint> out;
  out.reserve(directions.size());
  for (const Weights& w : directions) {
    auto res = min_scalarized(joint, w, cfg);
    out.push_back({w, res.point, res.objective});
  }
  return out;
}

std::vector<Weights> simplex_directions(std::size_t count) {
  std::vector<Weights> out;
  if (count == 0) return out;
  std::size_t n = 0;
  while ((n + 2) * (n + 3) / 2 <= count) ++n;
  if (n == 0) {
    out.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  } else {
    const double step = 1.0 / static_cast<double>(n);
    for (std::size_t a = n + 1; a-- > 0;)
      for (std::size_t b = n - a + 1; b-- > 0;) {
        const std::size_t c = n - a - b;
        out.push_back({static_cast<double>(a) * step, static_cast<double>(b) * step, static_cast<double>(c) * step});
      }
  }
  // Top up with an R2 low-discrepancy sequence folded onto the simplex.
  for (std::size_t t = 1; out.size() < count; ++t) {
    const double u = std::fmod(0.5 + 0.7548776662466927 * static_cast<double>(t), 1.0);
    const double v = std::fmod(0.5 + 0.5698402909980532 * static_cast<double>(t), 1.0);
    const double s = std::sqrt(u);
    out.push_back({1.0 - s, s * (1.0 - v), s * v});
  }
  return out;
}

void write_envelope_csv(std::ostream& os, std::span<const EnvelopePoint> points) {
  os << "w1,w2,w3,x,y,z,objective\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", p.weights.w1, p.weights.w2,
                  p.weights.w3, p.point.x, p.point.y, p.point.z, p.objective);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// Independent sources

JointPMF product_source(const JointPMF& j1, const JointPMF& j2) {
  const std::size_t nx = j1.n_x() * j2.n_x();
  const std::size_t ny = j1.n_y() * j2.n_y();
  std::vector<double> p(nx * ny, 0.0);
  for (std::size_t x = 0; x < j1.n_x(); ++x)
    for (std::size_t xp = 0; xp < j2.n_x(); ++xp)
      for (std::size_t y = 0; y < j1.n_y(); ++y)
        for (std::size_t yp = 0; yp < j2.n_y(); ++yp)
          p[(x * j2.n_x() + xp) * ny + (y * j2.n_y() + yp)] = j1(x, y) * j2(xp, yp);
  return JointPMF::from_flat(nx, ny, std::move(p));
}

Channel product_channel(const JointPMF& j1, const Channel& ch1, const JointPMF& j2, const Channel& ch2) {
  auto index_map = [](const JointPMF& j) {
    std::vector<std::size_t> idx(j.n_x() * j.n_y(), 0);
    std::size_t c = 0;
    for (const Cell& cell : j.support()) idx[cell.row * j.n_y() + cell.col] = c++;
    return idx;
  };
  const auto idx1 = index_map(j1);
  const auto idx2 = index_map(j2);
  if (ch1.cells() != j1.support().size() || ch2.cells() != j2.support().size())
    throw std::invalid_argument("channel does not match its source");
  const JointPMF joint = product_source(j1, j2);
  const std::size_t k = ch1.k() * ch2.k();
  std::vector<double> w;
  const auto support = joint.support();
  w.reserve(support.size() * k);
  for (const Cell& cell : support) {
    const std::size_t x = cell.row / j2.n_x(), xp = cell.row % j2.n_x();
    const std::size_t y = cell.col / j2.n_y(), yp = cell.col % j2.n_y();
    const std::size_t c1 = idx1[x * j1.n_y() + y];
    const std::size_t c2 = idx2[xp * j2.n_y() + yp];
    for (std::size_t z1 = 0; z1 < ch1.k(); ++z1)
      for (std::size_t z2 = 0; z2 < ch2.k(); ++z2) w.push_back(ch1(c1, z1) * ch2(c2, z2));
  }
  return Channel(k, support.size(), std::move(w));
}

std::array<double, 3> lower_part_slacks(const MultiJoint& j) {
  const VarSet all = {"X", "X'", "Y", "Y'", "Z"};
  for (const auto& v : all)
    if (!j.has(v)) throw std::invalid_argument("lower_part_slacks needs variable " + v);
  if (j.rank() != all.size()) throw std::invalid_argument("lower_part_slacks needs exactly X, X', Y, Y', Z");
  auto I = [&](const VarSet& a, const VarSet& b, const VarSet& c) { return cond_mutual_info(j, a, b, c).bits; };
  const double cross = I({"X", "Y"}, {"X'", "Y'"}, {});
  return {
      I({"X", "X'"}, {"Y", "Y'"}, {"Z"}) - I({"X"}, {"Y"}, {"Z"}) - I({"X'"}, {"Y'"}, {"X", "Y", "Z"}),
      I({"X", "X'"}, {"Z"}, {"Y", "Y'"}) - I({"X"}, {"Z"}, {"Y"}) - I({"X'"}, {"X", "Y", "Z"}, {"Y'"}) + cross,
      I({"Y", "Y'"}, {"Z"}, {"X", "X'"}) - I({"Y"}, {"Z"}, {"X"}) - I({"Y'"}, {"X", "Y", "Z"}, {"X'"}) + cross,
  };
}

}  // namespace gkt
