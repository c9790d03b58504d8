#pragma once

// Ingleton expression, Delta_XYZ, the MMRV inequality
//   ing_UVXY + Delta_XYZ >= 0
// together with its Shannon-provable precursor
//   ing_UVXY + Delta_XYZ + 3 I(UV;Z|XY) >= 0
// and the conditional-product ("copy glue") construction that turns the
// latter into the former.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gkt/info.hpp"

namespace gkt {

inline constexpr double kInequalityTolerance = 1e-9;

struct IngletonBreakdown {
  double i_xy = 0.0;    // I(X;Y)
  double i_xy_u = 0.0;  // I(X;Y|U)
  double i_xy_v = 0.0;  // I(X;Y|V)
  double i_uv = 0.0;    // I(U;V)
  double total = 0.0;   // -i_xy + i_xy_u + i_xy_v + i_uv
};

struct DeltaBreakdown {
  double xz_y = 0.0;  // I(X;Z|Y)
  double yz_x = 0.0;  // I(Y;Z|X)
  double xy_z = 0.0;  // I(X;Y|Z)
  double total = 0.0;
};

struct MmrvValues {
  double ing_total = 0.0;
  double delta_total = 0.0;
  double sum = 0.0;
};

// Each check requires exactly the named variables, in any order.
IngletonBreakdown ingleton(const MultiJoint& uvxy);
DeltaBreakdown delta(const MultiJoint& xyz);
MmrvValues mmrv_check(const MultiJoint& uvxyz);
// ing + Delta + 3 I(UV;Z|XY).
double shannon_precursor_check(const MultiJoint& uvxyz);

// p'(a,b,c) = p(a,b) p(b,c) / p(b), where B is the set of variables the two
// inputs share. Output variables: those of `ab` followed by the rest of
// `bc`. Throws if the shared marginals differ by more than 1e-12 per entry.
MultiJoint copy_glue(const MultiJoint& ab, const MultiJoint& bc);

struct FuzzRecord {
  std::uint64_t seed = 0;
  double ing = 0.0;
  double delta = 0.0;
  double sum = 0.0;
  double precursor = 0.0;
};

struct FuzzSummary {
  std::size_t samples = 0;
  double min_sum = 0.0;
  double mean_sum = 0.0;
  double min_precursor = 0.0;
  double mean_precursor = 0.0;
  std::vector<std::uint64_t> violations;  // seeds of offending samples
};

// Random U, V, X, Y, Z joint with alphabets in {2, 3}, Dirichlet(1) masses.
MultiJoint random_uvxyz(std::uint64_t seed);

// Sample n uses seed + n. Deterministic for any thread count.
std::vector<FuzzRecord> run_mmrv_fuzz(std::size_t samples, std::uint64_t seed, unsigned threads = 0);
FuzzSummary summarize(std::span<const FuzzRecord> records, double tolerance = kInequalityTolerance);

// One JSON object per line: {"seed":..,"ing":..,"delta":..,"sum":..,"precursor":..}
void write_fuzz_jsonl(std::ostream& os, std::span<const FuzzRecord> records);

}  // namespace gkt
