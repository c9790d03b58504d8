#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gkt/inequalities.hpp"
#include "gkt/random.hpp"

using namespace gkt;

namespace {

// Joint over the given names where every variable is a copy of X from `j`
// or of Y, as listed in `from` ('x' or 'y'); 'c' is a constant of size 1.
MultiJoint copies(const JointPMF& j, const VarSet& names, const std::string& from) {
  std::vector<std::size_t> shape;
  for (char f : from) shape.push_back(f == 'x' ? j.n_x() : f == 'y' ? j.n_y() : 1);
  std::size_t vol = 1;
  for (auto s : shape) vol *= s;
  std::vector<double> p(vol, 0.0);
  for (std::size_t i = 0; i < j.n_x(); ++i)
    for (std::size_t k = 0; k < j.n_y(); ++k) {
      std::size_t flat = 0;
      for (std::size_t a = 0; a < from.size(); ++a)
        flat = flat * shape[a] + (from[a] == 'x' ? i : from[a] == 'y' ? k : 0);
      p[flat] += j(i, k);
    }
  return MultiJoint(names, shape, p);
}

MultiJoint rename(const MultiJoint& m, const VarSet& names) {
  return MultiJoint(names, m.shape(), std::vector<double>(m.data().begin(), m.data().end()));
}

}  // namespace

TEST_CASE("ingleton values") {
  const auto j = JointPMF::from_rows({{0.3, 0.2}, {0.1, 0.4}});
  SUBCASE("U = X, V = Y") {
    const auto b = ingleton(copies(j, {"U", "V", "X", "Y"}, "xyxy"));
    CHECK(std::abs(b.total) <= 1e-12);
    CHECK(b.i_xy == doctest::Approx(0.12451124978).epsilon(1e-9));
    CHECK(std::abs(b.i_xy_u) <= 1e-12);
  }
  SUBCASE("everything independent") {
    Rng rng(1);
    std::vector<double> p(16);
    const auto a = dirichlet_flat(rng, 2), b = dirichlet_flat(rng, 2), c = dirichlet_flat(rng, 2),
               d = dirichlet_flat(rng, 2);
    for (int n = 0; n < 16; ++n) p[n] = a[n >> 3] * b[(n >> 2) & 1] * c[(n >> 1) & 1] * d[n & 1];
    CHECK(std::abs(ingleton(MultiJoint({"U", "V", "X", "Y"}, {2, 2, 2, 2}, p)).total) <= 1e-12);
  }
  SUBCASE("wrong variables") {
    Rng rng(2);
    CHECK_THROWS(ingleton(random_multi(rng, {"U", "V", "X"}, {2, 2, 2})));
    CHECK_THROWS(ingleton(random_multi(rng, {"U", "V", "X", "Z"}, {2, 2, 2, 2})));
    CHECK_THROWS(delta(random_multi(rng, {"X", "Y", "Z", "U"}, {2, 2, 2, 2})));
    CHECK_THROWS(mmrv_check(random_multi(rng, {"X", "Y", "Z", "U"}, {2, 2, 2, 2})));
  }
}

TEST_CASE("ingleton symmetry") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto m = random_multi(rng, {"U", "V", "X", "Y"}, {2, 3, 2, 2 + std::size_t(t % 2)});
    const double base = ingleton(m).total;
    CHECK(std::abs(ingleton(rename(m, {"V", "U", "X", "Y"})).total - base) <= 1e-12);
    CHECK(std::abs(ingleton(rename(m, {"U", "V", "Y", "X"})).total - base) <= 1e-12);
  }
}

TEST_CASE("delta values") {
  const auto j = JointPMF::from_rows({{0.3, 0.2}, {0.1, 0.4}});
  const double i = 0.12451124978;
  CHECK(delta(copies(j, {"X", "Y", "Z"}, "xyc")).total == doctest::Approx(i).epsilon(1e-9));
  // Z = X: I(Y;Z|X) = I(X;Y|Z) = 0, I(X;Z|Y) = H(X|Y)
  const auto zx = delta(copies(j, {"X", "Y", "Z"}, "xyx"));
  CHECK(std::abs(zx.yz_x) <= 1e-12);
  CHECK(std::abs(zx.xy_z) <= 1e-12);

  // Z = (X, Y) costs H(X|Y) + H(Y|X); python gives 1.7219280948873623
  std::vector<double> p(2 * 2 * 4, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) p[(x * 2 + y) * 4 + (x * 2 + y)] = j(x, y);
  CHECK(delta(MultiJoint({"X", "Y", "Z"}, {2, 2, 4}, p)).total ==
        doctest::Approx(1.7219280948873623).epsilon(1e-12));

  const auto indep = JointPMF::from_rows({{0.1, 0.3}, {0.15, 0.45}});
  CHECK(std::abs(delta(copies(indep, {"X", "Y", "Z"}, "xyc")).total) <= 1e-12);
}

TEST_CASE("mmrv and its precursor") {
  const auto j = JointPMF::from_rows({{0.4, 0.1}, {0.15, 0.35}});
  const auto m = copies(j, {"U", "V", "X", "Y", "Z"}, "xyxyc");
  const auto v = mmrv_check(m);
  const double i = cond_mutual_info(j.to_multi(), {"X"}, {"Y"}).bits;
  CHECK(v.sum == doctest::Approx(i).epsilon(1e-12));
  CHECK(std::abs(v.ing_total) <= 1e-12);

  // all copies of one bit: every term vanishes
  const auto one = JointPMF::from_rows({{0.5, 0.0}, {0.0, 0.5}});
  CHECK(std::abs(shannon_precursor_check(copies(one, {"U", "V", "X", "Y", "Z"}, "xxxxx"))) <= 1e-12);

  Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    const auto r = random_uvxyz(1000 + t);
    const auto s = mmrv_check(r);
    CHECK(s.sum >= -1e-9);
    CHECK(shannon_precursor_check(r) >= -1e-9);
    CHECK(s.sum == doctest::Approx(s.ing_total + s.delta_total));
  }
}

TEST_CASE("copy glue") {
  SUBCASE("conditional independence and marginals") {
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
      const auto abx = random_multi(rng, {"A", "B"}, {2 + std::size_t(t % 2), 3});
      // bc with the same B marginal: p(b) * random p(c|b)
      const auto pb = abx.marginal({"B"});
      std::vector<double> q;
      for (std::size_t b = 0; b < 3; ++b)
        for (double w : dirichlet_flat(rng, 2)) q.push_back(pb.data()[b] * w);
      const MultiJoint bc({"B", "C"}, {3, 2}, q);
      const auto g = copy_glue(abx, bc);
      CHECK(g.names() == VarSet{"A", "B", "C"});
      CHECK(cond_mutual_info(g, {"A"}, {"C"}, {"B"}).bits <= 1e-12);
      const auto ab2 = g.marginal({"A", "B"});
      for (std::size_t n = 0; n < ab2.data().size(); ++n) CHECK(std::abs(ab2.data()[n] - abx.data()[n]) <= 1e-15);
      const auto bc2 = g.marginal({"B", "C"});
      for (std::size_t n = 0; n < bc2.data().size(); ++n) CHECK(std::abs(bc2.data()[n] - bc.data()[n]) <= 1e-15);
    }
  }
  SUBCASE("A = B = C") {
    const MultiJoint ab({"A", "B"}, {2, 2}, {0.5, 0, 0, 0.5});
    const MultiJoint bc({"B", "C"}, {2, 2}, {0.5, 0, 0, 0.5});
    const auto g = copy_glue(ab, bc);
    CHECK(cond_mutual_info(g, {"A"}, {"C"}).bits == doctest::Approx(1.0));
  }
  SUBCASE("shared variable in a different axis position") {
    const MultiJoint ab({"A", "B"}, {2, 2}, {0.1, 0.2, 0.3, 0.4});
    const MultiJoint cb({"C", "B"}, {3, 2}, {0.1, 0.2, 0.1, 0.2, 0.2, 0.2});
    const auto g = copy_glue(ab, cb);
    CHECK(g.shape() == std::vector<std::size_t>{2, 2, 3});
    CHECK(cond_mutual_info(g, {"A"}, {"C"}, {"B"}).bits <= 1e-12);
  }
  SUBCASE("nothing shared is a product") {
    const MultiJoint a({"A"}, {2}, {0.3, 0.7});
    const MultiJoint c({"C"}, {2}, {0.6, 0.4});
    CHECK(cond_mutual_info(copy_glue(a, c), {"A"}, {"C"}).bits <= 1e-12);
  }
  SUBCASE("incompatible marginals") {
    const MultiJoint ab({"A", "B"}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
    const MultiJoint bc({"B", "C"}, {2, 2}, {0.1, 0.1, 0.4, 0.4});
    CHECK_THROWS_AS(copy_glue(ab, bc), std::invalid_argument);
  }
}

TEST_CASE("fuzz runner") {
  const auto a = run_mmrv_fuzz(64, 9, 1);
  const auto b = run_mmrv_fuzz(64, 9, 4);
  REQUIRE(a.size() == 64);
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(a[n].seed == 9 + n);
    CHECK(a[n].sum == b[n].sum);
    CHECK(a[n].precursor == b[n].precursor);
  }
  const auto s = summarize(a);
  CHECK(s.samples == 64);
  CHECK(s.violations.empty());
  CHECK(s.min_sum <= s.mean_sum);

  std::ostringstream os;
  write_fuzz_jsonl(os, std::span(a).first(2));
  const auto text = os.str();
  CHECK(text.rfind("{\"seed\":9,\"ing\":", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);

  CHECK(summarize({}).samples == 0);
  CHECK(run_mmrv_fuzz(0, 1, 2).empty());
}
