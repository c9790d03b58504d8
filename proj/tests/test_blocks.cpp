#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "gkt/blocks.hpp"

using namespace gkt;
using gkt::testing::random_block_joint;
using gkt::testing::random_independent_blocks;

namespace {

double mi_bits(const JointPMF& j) { return cond_mutual_info(j.to_multi(), {"X"}, {"Y"}).bits; }

// Each block summarized as its sorted cell values; the multiset of these
// does not depend on how rows and columns are labelled.
std::vector<std::vector<double>> block_signature(const JointPMF& j) {
  std::vector<std::vector<double>> sig;
  for (const auto& b : decompose(j).blocks) {
    std::vector<double> v;
    for (const auto& c : b.cells) v.push_back(j(c.row, c.col));
    std::sort(v.begin(), v.end());
    sig.push_back(v);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

JointPMF permute(const JointPMF& j, Rng& rng) {
  std::vector<std::size_t> r(j.n_x()), c(j.n_y());
  std::iota(r.begin(), r.end(), 0);
  std::iota(c.begin(), c.end(), 0);
  std::shuffle(r.begin(), r.end(), rng);
  std::shuffle(c.begin(), c.end(), rng);
  std::vector<double> p;
  for (auto i : r)
    for (auto k : c) p.push_back(j(i, k));
  return JointPMF::from_flat(j.n_x(), j.n_y(), p);
}

}  // namespace

TEST_CASE("decompose: small examples") {
  SUBCASE("diagonal") {
    const auto d = decompose(JointPMF::from_rows({{0.5, 0.0}, {0.0, 0.5}}));
    REQUIRE(d.size() == 2);
    for (const auto& b : d.blocks) {
      CHECK(b.cells.size() == 1);
      CHECK(b.is_rectangle);
      CHECK(b.is_independent);
      CHECK(b.mass == doctest::Approx(0.5));
    }
    CHECK(d.all_independent_rectangles());
    CHECK(d.block_at(0, 1) == -1);
  }
  SUBCASE("full support is one block") {
    const auto d = decompose(JointPMF::from_rows({{0.1, 0.2, 0.1}, {0.3, 0.2, 0.1}}));
    CHECK(d.size() == 1);
    CHECK(d.blocks[0].is_rectangle);
    CHECK_FALSE(d.blocks[0].is_independent);
  }
  SUBCASE("L shape") {
    const auto d = decompose(JointPMF::from_rows({{1.0 / 3, 1.0 / 3}, {1.0 / 3, 0.0}}));
    REQUIRE(d.size() == 1);
    CHECK_FALSE(d.blocks[0].is_rectangle);
    CHECK_FALSE(d.all_independent_rectangles());
  }
  SUBCASE("labels follow the first cell") {
    // block containing (0,2) must be block 0
    const auto d = decompose(JointPMF::from_rows({{0.0, 0.0, 0.2}, {0.4, 0.4, 0.0}}));
    REQUIRE(d.size() == 2);
    CHECK(d.block_at(0, 2) == 0);
    CHECK(d.block_at(1, 0) == 1);
    CHECK(d.blocks[1].rows == std::vector<std::size_t>{1});
    CHECK(d.blocks[1].cols == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("tiny entries are outside the support") {
    const auto d = decompose(JointPMF::from_rows({{0.5, 1e-17}, {0.0, 0.5 - 1e-17}}));
    CHECK(d.size() == 2);
  }
}

TEST_CASE("minor test") {
  CHECK(minor_vanishes(0.1, 0.2, 0.3, 0.6));
  CHECK_FALSE(minor_vanishes(0.1, 0.2, 0.3, 0.5));
  CHECK(minor_vanishes(0.0, 0.0, 0.0, 0.0));
}

TEST_CASE("gk_exact") {
  CHECK(gk_exact(JointPMF::from_rows({{0.5, 0.0}, {0.0, 0.5}})).bits == doctest::Approx(1.0));
  CHECK(gk_exact(JointPMF::from_rows({{0.1, 0.4}, {0.4, 0.1}})).bits == 0.0);
  // .5 and two .125s on a 2x2 block: one bit
  CHECK(gk_exact(JointPMF::from_rows({{0.5, 0, 0}, {0, 0.125, 0.125}, {0, 0.125, 0.125}})).bits ==
        doctest::Approx(1.0));
  // independent blocks: GK equals I
  const auto j = JointPMF::from_rows({{0.05, 0.05, 0, 0}, {0.15, 0.15, 0, 0}, {0, 0, 0.06, 0.24}, {0, 0, 0.06, 0.24}});
  CHECK(gk_exact(j).bits == doctest::Approx(mi_bits(j)).epsilon(1e-12));
  CHECK(gk_exact(j).bits == doctest::Approx(-0.4 * std::log2(0.4) - 0.6 * std::log2(0.6)).epsilon(1e-12));
}

TEST_CASE("find_violation_quad") {
  SUBCASE("independent") {
    CHECK_FALSE(find_violation_quad(JointPMF::from_rows({{0.1, 0.3}, {0.15, 0.45}})));
    CHECK_FALSE(find_violation_quad(JointPMF::from_rows({{0.5, 0.0}, {0.0, 0.5}})));
  }
  SUBCASE("case i") {
    const auto v = find_violation_quad(JointPMF::from_rows({{1.0 / 3, 1.0 / 3}, {1.0 / 3, 0.0}}));
    REQUIRE(v);
    CHECK(v->kind == QuadCase::case_i);
    CHECK(v->quad == Quad{0, 1, 0, 1});
  }
  SUBCASE("case i needs the zero in the last corner") {
    // zero at (0,0): first oriented quad puts row 1 and column 1 first
    const auto v = find_violation_quad(JointPMF::from_rows({{0.0, 1.0 / 3}, {1.0 / 3, 1.0 / 3}}));
    REQUIRE(v);
    CHECK(v->kind == QuadCase::case_i);
    CHECK(v->quad == Quad{1, 0, 1, 0});
  }
  SUBCASE("case ii, already oriented") {
    const auto v = find_violation_quad(JointPMF::from_rows({{0.1, 0.4}, {0.4, 0.1}}));
    REQUIRE(v);
    CHECK(v->kind == QuadCase::case_ii);
    CHECK(v->quad == Quad{0, 1, 0, 1});
  }
  SUBCASE("case ii, columns swapped") {
    const auto v = find_violation_quad(JointPMF::from_rows({{0.4, 0.1}, {0.1, 0.4}}));
    REQUIRE(v);
    CHECK(v->kind == QuadCase::case_ii);
    CHECK(v->quad == Quad{0, 1, 1, 0});
  }
  CHECK(std::string(to_string(QuadCase::case_ii)) != to_string(QuadCase::case_i));
}

TEST_CASE("block structure properties on random joints") {
  Rng rng(99);
  for (int t = 0; t < 300; ++t) {
    const std::size_t blocks = 1 + t % 4;
    const auto j = t % 3 == 0 ? random_independent_blocks(rng, blocks, 6) : random_block_joint(rng, blocks, 6);
    const auto d = decompose(j);
    CAPTURE(t);

    // a partition of the support that respects rows and columns
    std::size_t covered = 0;
    double mass = 0.0;
    for (const auto& b : d.blocks) {
      covered += b.cells.size();
      mass += b.mass;
    }
    CHECK(covered == j.support().size());
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& a : j.support())
      for (const auto& b : j.support())
        if (a.row == b.row || a.col == b.col) CHECK(d.block_at(a.row, a.col) == d.block_at(b.row, b.col));

    const double gk = gk_exact(j).bits;
    const double i = mi_bits(j);
    CHECK(gk <= i + 1e-12);
    CHECK((d.size() == 1) == (gk == 0.0));

    const bool indep = d.all_independent_rectangles();
    CHECK(indep == !find_violation_quad(j).has_value());
    if (indep) CHECK(std::abs(gk - i) <= 1e-9);
    else CHECK(i - gk > 1e-12);
    if (t % 3 == 0) CHECK(indep);

    const auto jp = permute(j, rng);
    CHECK(decompose(jp).size() == d.size());
    CHECK(block_signature(jp) == block_signature(j));
    CHECK(std::abs(gk_exact(jp).bits - gk) <= 1e-12);
  }
}

TEST_CASE("violation quad witnesses its case") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto j = gkt::testing::random_connected_joint(rng, 5);
    const auto v = find_violation_quad(j);
    REQUIRE(v);
    const auto& q = v->quad;
    const double a = j(q.i1, q.j1), b = j(q.i1, q.j2), c = j(q.i2, q.j1), d = j(q.i2, q.j2);
    CHECK(a > 0);
    CHECK(b > 0);
    CHECK(c > 0);
    if (v->kind == QuadCase::case_i) CHECK(d == 0.0);
    else CHECK(a * d < b * c);
  }
}
