#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crashdet/core/random.hpp"
#include "crashdet/learn/tree.hpp"

using namespace crashdet;
using namespace crashdet::learn;

namespace {

// two gaussian blobs, separable at x0 = 0
void blobs(int n, std::uint64_t seed, MatX& x, VecX& y) {
  Rng rng(seed);
  x.resize(n, 2);
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    x(i, 0) = (pos ? 2.0 : -2.0) + 0.5 * rng.normal();
    x(i, 1) = rng.normal();
    y[i] = pos ? 1.0 : 0.0;
  }
}

}  // namespace

TEST_CASE("tree separates blobs perfectly") {
  MatX x;
  VecX y;
  blobs(200, 1, x, y);
  DecisionTree t;
  DecisionTree::Options opt;
  opt.max_depth = 3;
  t.fit(x, y, VecX::Ones(200), opt);
  for (int i = 0; i < 200; ++i) {
    CHECK((t.predict(x.row(i).transpose()) >= 0.5 ? 1.0 : 0.0) == y[i]);
  }
  CHECK(t.depth() <= 3);
}

TEST_CASE("depth cap and finite thresholds") {
  Rng rng(7);
  MatX x(300, 4);
  VecX y(300);
  for (int i = 0; i < 300; ++i) {
    for (int c = 0; c < 4; ++c) x(i, c) = rng.normal();
    y[i] = rng.uniform01() < 0.5 ? 0.0 : 1.0;  // pure noise forces deep growth
  }
  DecisionTree t;
  DecisionTree::Options opt;
  opt.max_depth = 5;
  t.fit(x, y, VecX::Ones(300), opt);
  CHECK(t.depth() <= 5);
  for (const auto& n : t.nodes()) {
    if (n.feature >= 0) CHECK(std::isfinite(n.threshold));
  }
}

TEST_CASE("zero-weight samples are ignored") {
  MatX x(4, 1);
  x << 0.0, 1.0, 2.0, 3.0;
  VecX y(4);
  y << 0, 0, 1, 0;  // the weight-0 outlier at x=3 would break the split
  VecX w(4);
  w << 1, 1, 1, 0;
  DecisionTree t;
  DecisionTree::Options opt;
  opt.max_depth = 2;
  t.fit(x, y, w, opt);
  CHECK(t.predict(x.row(3).transpose()) >= 0.5);  // follows x=2, not the outlier
}

TEST_CASE("mse regression leaves carry means") {
  MatX x(6, 1);
  x << 0, 1, 2, 10, 11, 12;
  VecX y(6);
  y << 1, 1, 1, 5, 5, 5;
  DecisionTree t;
  DecisionTree::Options opt;
  opt.criterion = DecisionTree::Criterion::Mse;
  opt.max_depth = 1;
  t.fit(x, y, VecX::Ones(6), opt);
  CHECK(t.predict(x.row(0).transpose()) == doctest::Approx(1.0));
  CHECK(t.predict(x.row(5).transpose()) == doctest::Approx(5.0));
}

TEST_CASE("entropy and gini agree on the obvious split") {
  MatX x;
  VecX y;
  blobs(100, 3, x, y);
  for (auto crit : {DecisionTree::Criterion::Gini, DecisionTree::Criterion::Entropy}) {
    DecisionTree t;
    DecisionTree::Options opt;
    opt.criterion = crit;
    opt.max_depth = 1;
    t.fit(x, y, VecX::Ones(100), opt);
    REQUIRE(t.nodes()[0].feature == 0);
    CHECK(std::abs(t.nodes()[0].threshold) < 1.5);
  }
}

TEST_CASE("uses_feature reports split structure") {
  MatX x;
  VecX y;
  blobs(100, 5, x, y);
  DecisionTree t;
  DecisionTree::Options opt;
  opt.max_depth = 1;
  t.fit(x, y, VecX::Ones(100), opt);
  CHECK(t.uses_feature(0));
  CHECK(!t.uses_feature(1));
}
