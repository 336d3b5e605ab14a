#include <doctest.h>

#include <cmath>
#include <set>

#include "relgrowth/treelab.hpp"

using namespace relgrowth;

namespace {

struct TreeFixture {
  std::shared_ptr<const Presentation> pres;
  std::shared_ptr<Ball> ball;

  explicit TreeFixture(int radius) {
    pres = Presentation::free_group(GeneratorSet::pairs({"a", "b"}));
    ball = Ball::build(pres, radius);
  }
  uint32_t at(const std::string& w) const { return ball->require(parse_word(pres->gens(), w)); }
};

}  // namespace

TEST_CASE("lexi_cone_annulus") {
  TreeFixture fx(10);
  PeripheralContext empty(*fx.ball, PeripheralStructure{});
  PeripheralContext ctx(*fx.ball, PeripheralStructure::parse("a;b", fx.pres->gens()));

  SUBCASE("free structure at the root: the whole sphere S^2") {
    auto members = lexi_cone_annulus(0, 2, 0, 0, 1, empty);
    CHECK(members.size() == 12);
  }
  SUBCASE("peripheral structure excludes deep directions at the root") {
    auto members = lexi_cone_annulus(0, 4, 0, 0, 1, ctx);
    std::set<uint32_t> set(members.begin(), members.end());
    CHECK(!set.count(fx.at("aaaa")));  // every candidate vertex deep in <a>
    CHECK(!set.count(fx.at("AAAA")));
    CHECK(!set.count(fx.at("bbbb")));
    CHECK(set.count(fx.at("aabb")));
    // census: exhaustive scan of S^4 against the strict transition oracle
    size_t oracle = 0;
    for (uint32_t h = fx.ball->sphere_begin(4); h < fx.ball->sphere_end(4); ++h) {
      bool qualifies = fx.ball->depth(h) <= 0 + 2 * 1;
      auto path = fx.ball->canonical_path(h);
      const long len = (long)path.size();
      for (long i = 0; i < len && !qualifies; ++i) {
        if (fx.ball->pair_distance(path[(size_t)i], 0) > 2 * 1) continue;
        if (i <= 1 || (len - 1 - i) <= 1) continue;  // endpoint precondition
        if (!ctx.classify_vertex(path, (size_t)i, 0, 1).deep) qualifies = true;
      }
      if (qualifies) ++oracle;
    }
    CHECK(members.size() == oracle);
    // the only candidate position is i = 2, deep exactly when the second
    // and third letters share a peripheral type: 108 - 4*3*1*3 = 72
    CHECK(members.size() == 72);
  }
  SUBCASE("members lie on lexi-geodesics through x") {
    uint32_t x = fx.at("ab");
    auto members = lexi_cone_annulus(x, 3, 0, 0, 1, ctx);
    CHECK(!members.empty());
    for (uint32_t h : members) {
      auto wx = fx.ball->word_of(x);
      auto wh = fx.ball->word_of(h);
      CHECK(std::equal(wx.begin(), wx.end(), wh.begin()));
      CHECK(fx.ball->depth(h) == fx.ball->depth(x) + 3);
    }
  }
}

TEST_CASE("build_tree: free demo is the full ternary tree") {
  TreeFixture fx(8);
  PeripheralContext empty(*fx.ball, PeripheralStructure{});
  TreeConfig cfg{1, 0, 0, 1, 3};
  auto tree = build_tree(cfg, 5, empty);
  REQUIRE(tree.level_counts.size() == 6);
  size_t expect = 1;
  for (size_t i = 0; i < tree.level_counts.size(); ++i) {
    CHECK(tree.level_counts[i] == expect);
    expect *= 3;
  }
  auto rep = verify_tree(tree, empty);
  CHECK(rep.geodesy_violations == 0);
  CHECK(rep.min_branching == 3);
  REQUIRE(rep.rate_bound.has_value());
  CHECK(*rep.rate_bound == std::log(3.0));
  CHECK(rep.spacing <= 1);
  CHECK(rep.spacing_violations == 0);
  CHECK(rep.empirical_slope >= *rep.rate_bound - 0.01);
}

TEST_CASE("build_tree: depth 0 is a single vertex") {
  TreeFixture fx(4);
  PeripheralContext empty(*fx.ball, PeripheralStructure{});
  auto tree = build_tree(TreeConfig{1, 0, 0, 1, 3}, 0, empty);
  CHECK(tree.vertices.size() == 1);
  auto rep = verify_tree(tree, empty);
  CHECK(rep.spacing == 0);
  CHECK(!rep.rate_bound.has_value());
}

TEST_CASE("build_tree: peripheral demo r = 4") {
  TreeFixture fx(12);
  PeripheralContext ctx(*fx.ball, PeripheralStructure::parse("a;b", fx.pres->gens()));
  TreeConfig cfg{4, 0, 0, 1, 8};
  auto tree = build_tree(cfg, 3, ctx);
  REQUIRE(tree.level_counts.size() == 4);
  CHECK(tree.level_counts[3] > 0);

  auto rep = verify_tree(tree, ctx);
  CHECK(rep.geodesy_violations == 0);
  CHECK(rep.spacing_violations == 0);
  CHECK(rep.spacing < cfg.r + 2 * cfg.R + cfg.delta);
  CHECK(rep.min_branching >= 1);

  // prefix closure: parents lie on their children's lexi-geodesics
  for (const auto& v : tree.vertices) {
    if (v.parent == UINT32_MAX) continue;
    auto wp = fx.ball->word_of(tree.vertices[v.parent].element);
    auto wc = fx.ball->word_of(v.element);
    CHECK(std::equal(wp.begin(), wp.end(), wc.begin()));
  }
}

TEST_CASE("rate bound is non-decreasing in r for the free demo") {
  TreeFixture fx(12);
  PeripheralContext empty(*fx.ball, PeripheralStructure{});
  double prev = 0.0;
  for (int r : {2, 4, 6}) {
    // full branching: every annulus member is a valid child
    TreeConfig cfg{r, 0, 0, 1, SIZE_MAX};
    auto tree = build_tree(cfg, 12 / r, empty);
    auto rep = verify_tree(tree, empty);
    REQUIRE(rep.rate_bound.has_value());
    CHECK(*rep.rate_bound >= prev - 1e-12);
    prev = *rep.rate_bound;
  }
}

TEST_CASE("tree JSON export") {
  TreeFixture fx(6);
  PeripheralContext empty(*fx.ball, PeripheralStructure{});
  auto tree = build_tree(TreeConfig{1, 0, 0, 1, 2}, 2, empty);
  std::string json = tree_to_json(tree, empty);
  CHECK(json.find("\"vertices\"") != std::string::npos);
  CHECK(json.find("\"parent\": -1") != std::string::npos);
  CHECK(json.find("\"transition\"") != std::string::npos);
}
