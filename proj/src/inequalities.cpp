#include "gkt/inequalities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "gkt/random.hpp"

namespace gkt {

namespace {

void require_exactly(const MultiJoint& j, const VarSet& vars, const char* what) {
  bool ok = j.rank() == vars.size();
  for (const auto& v : vars) ok = ok && j.has(v);
  if (!ok) {
    std::string want;
    for (const auto& v : vars) want += (want.empty() ? "" : ",") + v;
    throw std::invalid_argument(std::string(what) + " requires exactly the variables {" + want + "}");
  }
}

double mi(const MultiJoint& j, const VarSet& a, const VarSet& b, const VarSet& c = {}) {
  return cond_mutual_info(j, a, b, c).bits;
}

IngletonBreakdown ingleton_of(const MultiJoint& j) {
  IngletonBreakdown out;
  out.i_xy = mi(j, {"X"}, {"Y"});
  out.i_xy_u = mi(j, {"X"}, {"Y"}, {"U"});
  out.i_xy_v = mi(j, {"X"}, {"Y"}, {"V"});
  out.i_uv = mi(j, {"U"}, {"V"});
  out.total = -out.i_xy + out.i_xy_u + out.i_xy_v + out.i_uv;
  return out;
}

DeltaBreakdown delta_of(const MultiJoint& j) {
  DeltaBreakdown out;
  out.xz_y = mi(j, {"X"}, {"Z"}, {"Y"});
  out.yz_x = mi(j, {"Y"}, {"Z"}, {"X"});
  out.xy_z = mi(j, {"X"}, {"Y"}, {"Z"});
  out.total = out.xz_y + out.yz_x + out.xy_z;
  return out;
}

const VarSet kUVXYZ = {"U", "V", "X", "Y", "Z"};

}  // namespace

IngletonBreakdown ingleton(const MultiJoint& uvxy) {
  require_exactly(uvxy, {"U", "V", "X", "Y"}, "ingleton");
  return ingleton_of(uvxy);
}

DeltaBreakdown delta(const MultiJoint& xyz) {
  require_exactly(xyz, {"X", "Y", "Z"}, "delta");
  return delta_of(xyz);
}

MmrvValues mmrv_check(const MultiJoint& uvxyz) {
  require_exactly(uvxyz, kUVXYZ, "mmrv_check");
  MmrvValues out;
  out.ing_total = ingleton_of(uvxyz).total;
  out.delta_total = delta_of(uvxyz).total;
  out.sum = out.ing_total + out.delta_total;
  return out;
}

double shannon_precursor_check(const MultiJoint& uvxyz) {
  require_exactly(uvxyz, kUVXYZ, "shannon_precursor_check");
  return ingleton_of(uvxyz).total + delta_of(uvxyz).total + 3.0 * mi(uvxyz, {"U", "V"}, {"Z"}, {"X", "Y"});
}

MultiJoint copy_glue(const MultiJoint& ab, const MultiJoint& bc) {
  VarSet shared, tail;
  for (const auto& v : ab.names())
    if (bc.has(v)) shared.push_back(v);
  for (const auto& v : bc.names())
    if (!ab.has(v)) tail.push_back(v);

  std::vector<double> pb(1, 1.0);
  if (!shared.empty()) {
    const auto m_ab = ab.marginal(shared);
    const auto m_bc = bc.marginal(shared);
    for (std::size_t n = 0; n < m_ab.data().size(); ++n)
      if (std::abs(m_ab.data()[n] - m_bc.data()[n]) > kMassTolerance)
        throw std::invalid_argument("copy_glue: marginals on the shared variables differ");
    pb.assign(m_bc.data().begin(), m_bc.data().end());
  }

  std::vector<std::string> names = ab.names();
  std::vector<std::size_t> shape = ab.shape();
  for (const auto& v : tail) {
    names.push_back(v);
    shape.push_back(bc.shape()[bc.index_of(v)]);
  }
  if (names.size() > kMaxVars) throw std::invalid_argument("copy_glue: result has too many variables");

  // For every output axis, its stride inside bc and inside the shared marginal.
  const std::size_t rank = names.size();
  std::array<std::size_t, kMaxVars> bc_stride{}, b_stride{};
  {
    std::vector<std::size_t> bc_strides(bc.rank());
    std::size_t s = 1;
    for (std::size_t v = bc.rank(); v-- > 0;) {
      bc_strides[v] = s;
      s *= bc.shape()[v];
    }
    for (std::size_t a = 0; a < rank; ++a)
      if (bc.has(names[a])) bc_stride[a] = bc_strides[bc.index_of(names[a])];
    s = 1;
    for (std::size_t k = shared.size(); k-- > 0;) {
      b_stride[ab.index_of(shared[k])] = s;
      s *= ab.shape()[ab.index_of(shared[k])];
    }
  }

  std::size_t tail_volume = 1;
  for (std::size_t a = ab.rank(); a < rank; ++a) tail_volume *= shape[a];

  std::vector<double> p(ab.data().size() * tail_volume, 0.0);
  std::array<std::size_t, kMaxVars> idx{};
  std::size_t off_bc = 0, off_b = 0;
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    const double mass_b = pb[off_b];
    if (mass_b > 0.0) p[flat] = ab.data()[flat / tail_volume] * bc.data()[off_bc] / mass_b;
    for (std::size_t v = rank; v-- > 0;) {
      off_bc += bc_stride[v];
      off_b += b_stride[v];
      if (++idx[v] < shape[v]) break;
      off_bc -= bc_stride[v] * shape[v];
      off_b -= b_stride[v] * shape[v];
      idx[v] = 0;
    }
  }
  return MultiJoint(std::move(names), std::move(shape), std::move(p));
}

// ---------------------------------------------------------------------------
// Fuzzing

MultiJoint random_uvxyz(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, 3);
  std::vector<std::size_t> shape(kUVXYZ.size());
  for (auto& n : shape) n = size(rng);
  return random_multi(rng, kUVXYZ, std::move(shape));
}

std::vector<FuzzRecord> run_mmrv_fuzz(std::size_t samples, std::uint64_t seed, unsigned threads) {
  std::vector<FuzzRecord> records(samples);
  auto run = [&](std::size_t n) {
    const std::uint64_t s = seed + n;
    const auto joint = random_uvxyz(s);
    const auto m = mmrv_check(joint);
    records[n] = {s, m.ing_total, m.delta_total, m.sum, shannon_precursor_check(joint)};
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(samples, 1)));
  if (workers <= 1) {
    for (std::size_t n = 0; n < samples; ++n) run(n);
    return records;
  }
  // Contiguous shards; every record lands in its own slot.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (samples + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t n = t * chunk; n < std::min(samples, (t + 1) * chunk); ++n) run(n);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return records;
}

FuzzSummary summarize(std::span<const FuzzRecord> records, double tolerance) {
  FuzzSummary s;
  s.samples = records.size();
  if (records.empty()) return s;
  s.min_sum = std::numeric_limits<double>::infinity();
  s.min_precursor = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    s.min_sum = std::min(s.min_sum, r.sum);
    s.min_precursor = std::min(s.min_precursor, r.precursor);
    s.mean_sum += r.sum;
    s.mean_precursor += r.precursor;
    if (r.sum < -tolerance || r.precursor < -tolerance) s.violations.push_back(r.seed);
  }
  s.mean_sum /= static_cast<double>(records.size());
  s.mean_precursor /= static_cast<double>(records.size());
  return s;
}

void write_fuzz_jsonl(std::ostream& os, std::span<const FuzzRecord> records) {
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "{\"seed\":%llu,\"ing\":%.17g,\"delta\":%.17g,\"sum\":%.17g,\"precursor\":%.17g}\n",
                  static_cast<unsigned long long>(r.seed), r.ing, r.delta, r.sum, r.precursor);
    os << buf;
  }
}

}  // namespace gkt
