#include <doctest.h>

#include <cmath>
#include <vector>

#include "occstream/clustering.hpp"
#include "occstream/common.hpp"

using namespace occstream;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

MacroCluster ball(int id, const Eigen::VectorXd& center, double radius, double mass) {
  MacroCluster c;
  c.id = id;
  c.center = center;
  c.radius = radius;
  c.mass = mass;
  return c;
}

Clustering make_clustering(std::vector<MacroCluster> clusters) {
  Clustering out;
  out.clusters = std::move(clusters);
  for (const auto& c : out.clusters) out.total_mass += c.mass;
  for (auto& c : out.clusters) c.weight = c.mass / out.total_mass;
  return out;
}

}  // namespace

TEST_CASE("micro-cluster statistics match direct moment computation") {
  // No decay: the sums are plain moments of the absorbed points.
  MicroClusterPool pool(1, 200, 0.0);
  pool.insert(vec1(0.0), 0);
  pool.insert(vec1(10.0), 0);  // second singleton: nothing nearby absorbs it
  REQUIRE(pool.size() == 2);

  // 0.5 absorbs into the {0.0} singleton: its boundary is the distance to the
  // other cluster (10), far beyond 0.5.
  pool.insert(vec1(0.5), 0);
  REQUIRE(pool.size() == 2);
  const MicroCluster& mc = pool.clusters()[0];
  CHECK(mc.count == doctest::Approx(2.0));
  CHECK(mc.linear_sum[0] == doctest::Approx(0.5));
  CHECK(mc.squared_sum[0] == doctest::Approx(0.25));
  CHECK(mc.center()[0] == doctest::Approx(0.25));
  // var = E[x^2] - mean^2 = 0.125 - 0.0625
  CHECK(mc.rms_deviation() == doctest::Approx(std::sqrt(0.0625)));

  // Now the cluster has spread: boundary is 3 x rms = 0.75 around 0.25.
  pool.insert(vec1(0.6), 0);
  CHECK(pool.size() == 2);
  CHECK(pool.clusters()[0].count == doctest::Approx(3.0));
  CHECK(pool.clusters()[0].linear_sum[0] == doctest::Approx(1.1));

  // 2.0 is outside that boundary: a new cluster opens.
  pool.insert(vec1(2.0), 0);
  CHECK(pool.size() == 3);
}

TEST_CASE("micro-cluster decay halves jointly, leaving center and spread invariant") {
  MicroCluster mc;
  mc.count = 4.0;
  mc.linear_sum = vec2(4.0, 8.0);
  mc.squared_sum = vec2(8.0, 20.0);
  mc.last_update = 0;

  CHECK(mc.decayed_count(0, 0.01) == doctest::Approx(4.0));
  CHECK(mc.decayed_count(1000, 0.01) == doctest::Approx(4.0 * std::exp(-0.01)));
  CHECK(mc.decayed_count(2500, 0.02) == doctest::Approx(4.0 * std::exp(-0.05)));

  const Eigen::VectorXd center_before = mc.center();
  const double rms_before = mc.rms_deviation();
  const double f = std::exp(-0.01 * 3.0);  // any joint scale factor
  mc.count *= f;
  mc.linear_sum *= f;
  mc.squared_sum *= f;
  CHECK((mc.center() - center_before).norm() < 1e-12);
  CHECK(mc.rms_deviation() == doctest::Approx(rms_before));
}

TEST_CASE("micro-cluster absorption applies pending decay before adding the point") {
  MicroClusterPool pool(1, 200, 0.01);
  pool.insert(vec1(1.0), 0);
  // Duplicate of the only cluster: singleton boundary is 0, distance is 0.
  pool.insert(vec1(1.0), 500);
  REQUIRE(pool.size() == 1);
  const MicroCluster& mc = pool.clusters()[0];
  const double f = std::exp(-0.01 * 500.0 / 1000.0);
  CHECK(mc.count == doctest::Approx(f + 1.0));
  CHECK(mc.linear_sum[0] == doctest::Approx(f + 1.0));
  CHECK(mc.center()[0] == doctest::Approx(1.0));
  CHECK(mc.last_update == 500);
}

TEST_CASE("micro-cluster pool evicts the lightest decayed cluster at capacity") {
  MicroClusterPool pool(1, 2, 0.01);
  pool.insert(vec1(0.0), 0);
  pool.insert(vec1(100.0), 1000);
  pool.insert(vec1(300.0), 2000);  // overflow: decayed counts e^-0.02, e^-0.01, 1
  REQUIRE(pool.size() == 2);
  CHECK(pool.clusters()[0].center()[0] == doctest::Approx(100.0));
  CHECK(pool.clusters()[1].center()[0] == doctest::Approx(300.0));
}

TEST_CASE("micro-cluster pool rejects bad inputs") {
  CHECK_THROWS_AS(MicroClusterPool(0, 10, 0.01), ContractError);
  CHECK_THROWS_AS(MicroClusterPool(1, 0, 0.01), ContractError);
  CHECK_THROWS_AS(MicroClusterPool(1, 10, -1.0), ContractError);
  MicroClusterPool pool(2, 10, 0.01);
  CHECK_THROWS_AS(pool.insert(vec1(0.0), 0), ContractError);  // wrong dimension
  Eigen::VectorXd bad = vec2(0.0, std::nan(""));
  CHECK_THROWS_AS(pool.insert(bad, 0), ContractError);
}

TEST_CASE("macro clustering recovers two separated blobs and picks k by silhouette") {
  MicroClusterPool pool(2, 200, 0.0);
  Rng rng(17);
  for (int i = 0; i < 120; ++i) {
    const double ox = rng.uniform(-0.5, 0.5);
    const double oy = rng.uniform(-0.5, 0.5);
    if (i % 2 == 0) {
      pool.insert(vec2(ox, oy), i);
    } else {
      pool.insert(vec2(10.0 + ox, 10.0 + oy), i);
    }
  }
  const Clustering clustering = macro_cluster(pool, 2, 8, 99, 120);
  REQUIRE(clustering.size() == 2);
  CHECK_FALSE(clustering.degenerate);

  // One center near each blob.
  std::vector<bool> found(2, false);
  for (const auto& c : clustering.clusters) {
    if ((c.center - vec2(0, 0)).norm() < 1.0) found[0] = true;
    if ((c.center - vec2(10, 10)).norm() < 1.0) found[1] = true;
    CHECK(c.radius >= 1e-9);
    CHECK(c.weight == doctest::Approx(0.5).epsilon(0.2));
  }
  CHECK(found[0]);
  CHECK(found[1]);

  double weight_sum = 0.0;
  for (const auto& c : clustering.clusters) {
    weight_sum += c.weight;
    CHECK(cluster_weight(c, clustering) == doctest::Approx(c.weight));
  }
  CHECK(weight_sum == doctest::Approx(1.0));

  // Every micro-cluster sits inside its macro ball (radius covers center
  // offset plus the micro's own spread).
  for (const auto& mc : pool.clusters()) {
    double best = std::numeric_limits<double>::infinity();
    const MacroCluster* owner = nullptr;
    for (const auto& c : clustering.clusters) {
      const double d = (mc.center() - c.center).norm();
      if (d < best) {
        best = d;
        owner = &c;
      }
    }
    REQUIRE(owner != nullptr);
    CHECK(best + mc.rms_deviation() <= owner->radius + 1e-9);
  }

  // Determinism under the same seed.
  const Clustering again = macro_cluster(pool, 2, 8, 99, 120);
  REQUIRE(again.size() == clustering.size());
  for (std::size_t i = 0; i < clustering.size(); ++i) {
    CHECK(clustering.clusters[i].center == again.clusters[i].center);
    CHECK(clustering.clusters[i].radius == again.clusters[i].radius);
  }
}

TEST_CASE("macro clustering finds three blobs among k candidates") {
  MicroClusterPool pool(2, 200, 0.0);
  Rng rng(5);
  const std::vector<Eigen::VectorXd> centers = {vec2(0, 0), vec2(12, 0), vec2(0, 12)};
  for (int i = 0; i < 150; ++i) {
    const Eigen::VectorXd& c = centers[static_cast<std::size_t>(i % 3)];
    pool.insert(c + vec2(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)), i);
  }
  const Clustering clustering = macro_cluster(pool, 2, 8, 7, 150);
  CHECK(clustering.size() == 3);
}

TEST_CASE("macro clustering guards its inputs") {
  MicroClusterPool pool(1, 200, 0.0);
  pool.insert(vec1(0.0), 0);
  CHECK_THROWS_AS(macro_cluster(pool, 2, 8, 1, 0), StateError);   // 1 micro < k_min
  CHECK_THROWS_AS(macro_cluster(pool, 0, 8, 1, 0), ContractError);
  CHECK_THROWS_AS(macro_cluster(pool, 3, 2, 1, 0), ContractError);
}

TEST_CASE("weight threshold is 1/k^2 of the incoming cluster count") {
  const Clustering one = make_clustering({ball(0, vec1(0), 1, 10)});
  const Clustering two = make_clustering({ball(0, vec1(0), 1, 10), ball(1, vec1(5), 1, 10)});
  const Clustering three = make_clustering(
      {ball(0, vec1(0), 1, 10), ball(1, vec1(5), 1, 10), ball(2, vec1(9), 1, 10)});
  CHECK(weight_threshold(one) == doctest::Approx(1.0));
  CHECK(weight_threshold(two) == doctest::Approx(0.25));
  CHECK(weight_threshold(three) == doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_AS(weight_threshold(Clustering{}), StateError);
}

TEST_CASE("pruning removes weights at or below the threshold, keeping ids") {
  // k = 3 -> threshold 1/9; the 0.1-weight cluster sits below it.
  Clustering c = make_clustering({ball(0, vec1(0), 1, 70), ball(1, vec1(5), 1, 20),
                                  ball(2, vec1(9), 1, 10)});
  const Clustering pruned = prune_by_weight(c);
  REQUIRE(pruned.size() == 2);
  CHECK(pruned.clusters[0].id == 0);
  CHECK(pruned.clusters[1].id == 1);
  // Weights stay relative to the original total.
  CHECK(pruned.clusters[0].weight == doctest::Approx(0.7));
  CHECK(pruned.clusters[1].weight == doctest::Approx(0.2));
  CHECK(pruned.total_mass == doctest::Approx(90.0));

  // Boundary: a lone cluster has weight 1 and threshold 1; "exceeds" is
  // strict, so it is removed.
  const Clustering lone = make_clustering({ball(0, vec1(0), 1, 10)});
  CHECK(prune_by_weight(lone).empty());

  // Exactly at 1/4 with k = 2 is also removed.
  const Clustering quarter =
      make_clustering({ball(0, vec1(0), 1, 75), ball(1, vec1(5), 1, 25)});
  const Clustering kept = prune_by_weight(quarter);
  REQUIRE(kept.size() == 1);
  CHECK(kept.clusters[0].id == 0);
}

TEST_CASE("nearest cluster measures gap outside the ball and ties toward lower id") {
  const Clustering c = make_clustering(
      {ball(0, vec2(0, 0), 1.0, 10), ball(1, vec2(10, 0), 2.0, 10)});
  auto [id_a, d_a] = nearest_cluster(c, vec2(3, 0));
  CHECK(id_a == 0);
  CHECK(d_a == doctest::Approx(2.0));

  auto [id_b, d_b] = nearest_cluster(c, vec2(0.5, 0));  // inside ball 0
  CHECK(id_b == 0);
  CHECK(d_b == doctest::Approx(0.0));

  auto [id_c, d_c] = nearest_cluster(c, vec2(7.0, 0));  // 6 - 1 == 3 - 2 + 2? no:
  // d0 = 7 - 1 = 6, d1 = 3 - 2 = 1 -> cluster 1
  CHECK(id_c == 1);
  CHECK(d_c == doctest::Approx(1.0));

  // Symmetric gaps: equal radius, x at the midpoint -> lowest id wins.
  const Clustering sym = make_clustering(
      {ball(0, vec2(0, 0), 1.0, 10), ball(1, vec2(10, 0), 1.0, 10)});
  auto [id_t, d_t] = nearest_cluster(sym, vec2(5, 0));
  CHECK(id_t == 0);
  CHECK(d_t == doctest::Approx(4.0));

  CHECK_THROWS_AS(nearest_cluster(Clustering{}, vec2(0, 0)), StateError);
}
