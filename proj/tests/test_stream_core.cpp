#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "occstream/common.hpp"
#include "occstream/csv_stream.hpp"
#include "occstream/generators.hpp"
#include "occstream/instance.hpp"

using namespace occstream;

namespace {

// Exact binomial CDF P(X <= k) for X ~ Binomial(n, p), via log-space terms.
double binomial_cdf(int n, double p, int k) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  double total = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                            std::lgamma(n - i + 1.0) + i * std::log(p) +
                            (n - i) * std::log1p(-p);
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

// Exact central binomial interval [lo, hi] with tail mass <= alpha/2 each side.
std::pair<int, int> binomial_interval(int n, double p, double alpha) {
  int lo = 0;
  while (lo < n && binomial_cdf(n, p, lo) <= alpha / 2) ++lo;
  int hi = n;
  while (hi > 0 && 1.0 - binomial_cdf(n, p, hi - 1) <= alpha / 2) --hi;
  return {lo, hi};
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Instance majority_at(double a, double b, int context) {
  Instance inst;
  inst.features = vec2(a, b);
  inst.label = Label::kMajority;
  inst.context = context;
  return inst;
}

StreamDescriptor two_context_descriptor(std::uint64_t seed, double minority_fraction) {
  StreamDescriptor d;
  d.dimension = 2;
  d.context_probabilities = {0.3, 0.7};
  d.minority_fraction = minority_fraction;
  d.seed = seed;
  return d;
}

std::vector<std::vector<MvndComponent>> separated_majorities() {
  MvndComponent near_origin{vec2(0, 0), vec2(0.1, 0.1)};
  MvndComponent far{vec2(10, 10), vec2(0.1, 0.1)};
  return {{near_origin}, {far}};
}

std::vector<MvndComponent> midpoint_minority() {
  return {MvndComponent{vec2(5, 5), vec2(0.1, 0.1)}};
}

std::string write_temp_csv(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("stream descriptor validation") {
  StreamDescriptor d = two_context_descriptor(1, 0.0);
  CHECK_NOTHROW(d.validate());
  CHECK(d.context_count() == 2);

  StreamDescriptor bad_dim = d;
  bad_dim.dimension = 0;
  CHECK_THROWS_AS(bad_dim.validate(), ConfigError);

  StreamDescriptor bad_probs = d;
  bad_probs.context_probabilities = {0.3, 0.6};
  CHECK_THROWS_AS(bad_probs.validate(), ConfigError);

  StreamDescriptor bad_fraction = d;
  bad_fraction.minority_fraction = 1.5;
  CHECK_THROWS_AS(bad_fraction.validate(), ConfigError);
}

TEST_CASE("instance validation enforces finiteness, dimension, context range") {
  Instance inst = majority_at(1, 2, 0);
  CHECK_NOTHROW(validate_instance(inst, 2, 2));
  CHECK_THROWS_AS(validate_instance(inst, 3, 2), ContractError);

  Instance wrong_context = majority_at(1, 2, 5);
  CHECK_THROWS_AS(validate_instance(wrong_context, 2, 2), ContractError);

  Instance non_finite = majority_at(1, 2, 0);
  non_finite.features[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_instance(non_finite, 2, 2), ContractError);
}

TEST_CASE("nearest-majority context assignment") {
  // Unique nearest.
  std::vector<Instance> reference = {majority_at(0, 1, 2), majority_at(5, 5, 0)};
  CHECK(assign_minority_context(vec2(0, 0), reference) == 2);

  // Zero distance.
  std::vector<Instance> coincident = {majority_at(3, 3, 1), majority_at(9, 9, 0)};
  CHECK(assign_minority_context(vec2(3, 3), coincident) == 1);

  // Equidistant: lowest context id wins.
  std::vector<Instance> tied = {majority_at(0, 1, 3), majority_at(0, -1, 1)};
  CHECK(assign_minority_context(vec2(0, 0), tied) == 1);

  CHECK_THROWS_AS(assign_minority_context(vec2(0, 0), {}), StateError);

  Instance no_context;
  no_context.features = vec2(0, 0);
  CHECK_THROWS_AS(assign_minority_context(vec2(0, 0), {no_context}), ContractError);
}

TEST_CASE("mixture stream is deterministic under the seed") {
  auto make = [] {
    return MixtureModelStream(two_context_descriptor(99, 0.1), separated_majorities(),
                              midpoint_minority());
  };
  MixtureModelStream a = make();
  MixtureModelStream b = make();
  for (int i = 0; i < 200; ++i) {
    const Instance x = a.next();
    const Instance y = b.next();
    CHECK(x.features == y.features);
    CHECK(x.label == y.label);
    CHECK(x.context == y.context);
  }
}

TEST_CASE("mixture stream with zero minority fraction emits no minority") {
  MixtureModelStream stream(two_context_descriptor(7, 0.0), separated_majorities(),
                            midpoint_minority());
  for (int i = 0; i < 2000; ++i) {
    const Instance inst = stream.next();
    REQUIRE(inst.label.has_value());
    CHECK(*inst.label == Label::kMajority);
  }
}

TEST_CASE("mixture stream context frequencies lie in the exact binomial interval") {
  const int n = 10000;
  MixtureModelStream stream(two_context_descriptor(1234, 0.0), separated_majorities(),
                            midpoint_minority());
  int context_zero = 0;
  for (int i = 0; i < n; ++i) {
    const Instance inst = stream.next();
    REQUIRE(inst.context.has_value());
    REQUIRE(inst.features.size() == 2);
    CHECK(inst.features.allFinite());
    if (*inst.context == 0) ++context_zero;
  }
  const auto [lo, hi] = binomial_interval(n, 0.3, 0.001);
  CHECK(context_zero >= lo);
  CHECK(context_zero <= hi);
}

TEST_CASE("mixture stream minority instances take the nearest majority context") {
  // Contexts far apart; minority sits on top of context 1's component, so the
  // nearest recent majority instance is (with overwhelming margin) context 1.
  StreamDescriptor d = two_context_descriptor(55, 0.2);
  MixtureModelStream stream(d, separated_majorities(),
                            {MvndComponent{vec2(10, 10), vec2(0.1, 0.1)}});
  int minority_seen = 0;
  for (int i = 0; i < 3000 && minority_seen < 200; ++i) {
    const Instance inst = stream.next();
    if (inst.label == Label::kMinority) {
      ++minority_seen;
      if (i > 10) CHECK(*inst.context == 1);  // allow the empty-buffer prefix
    }
  }
  CHECK(minority_seen >= 200);
}

TEST_CASE("rbf stream containment and determinism") {
  StreamDescriptor d = two_context_descriptor(31, 0.0);
  std::vector<std::vector<RbfCentroid>> majors = {
      {RbfCentroid{vec2(0, 0), 1.0, 1.0}},
      {RbfCentroid{vec2(10, 10), 2.0, 1.0}},
  };
  std::vector<RbfCentroid> minors = {RbfCentroid{vec2(5, 5), 0.1, 1.0}};
  RbfStream stream(d, majors, minors, 0.0);
  RbfStream again(d, majors, minors, 0.0);
  for (int i = 0; i < 1000; ++i) {
    const Instance inst = stream.next();
    CHECK(inst.features == again.next().features);
    REQUIRE(inst.context.has_value());
    const RbfCentroid& home = majors[*inst.context][0];
    CHECK((inst.features - home.center).norm() <= home.radius + 1e-12);
  }
}

TEST_CASE("rbf stream noise-free minority stays within minority balls") {
  StreamDescriptor d = two_context_descriptor(77, 0.3);
  std::vector<std::vector<RbfCentroid>> majors = {
      {RbfCentroid{vec2(0, 0), 1.0, 1.0}},
      {RbfCentroid{vec2(10, 10), 1.0, 1.0}},
  };
  std::vector<RbfCentroid> minors = {RbfCentroid{vec2(5, 5), 0.2, 1.0}};
  RbfStream stream(d, majors, minors, 0.0);
  int minority_seen = 0;
  for (int i = 0; i < 2000; ++i) {
    const Instance inst = stream.next();
    if (inst.label == Label::kMinority) {
      ++minority_seen;
      CHECK((inst.features - minors[0].center).norm() <= minors[0].radius + 1e-12);
    }
  }
  CHECK(minority_seen > 300);
}

TEST_CASE("rbf stream noise draws land outside the minority balls at the noise rate") {
  StreamDescriptor d = two_context_descriptor(2024, 1.0);  // minority-only stream
  std::vector<std::vector<RbfCentroid>> majors = {
      {RbfCentroid{vec2(0, 0), 1.0, 1.0}},
      {RbfCentroid{vec2(40, 40), 1.0, 1.0}},
  };
  // Tiny minority ball inside a huge noise box: a noise draw essentially never
  // lands inside the ball, so "outside the ball" counts noise draws exactly.
  std::vector<RbfCentroid> minors = {RbfCentroid{vec2(20, 20), 0.1, 1.0}};
  RbfStream stream(d, majors, minors, 0.5);
  const int n = 10000;
  int outside = 0;
  for (int i = 0; i < n; ++i) {
    const Instance inst = stream.next();
    REQUIRE(inst.label == Label::kMinority);
    if ((inst.features - minors[0].center).norm() > minors[0].radius + 1e-12) ++outside;
    for (Eigen::Index k = 0; k < 2; ++k) {
      CHECK(inst.features[k] >= stream.noise_box()[k].first - 1e-12);
      CHECK(inst.features[k] <= stream.noise_box()[k].second + 1e-12);
    }
  }
  const auto [lo, hi] = binomial_interval(n, 0.5, 0.001);
  CHECK(outside >= lo);
  CHECK(outside <= hi);
}

TEST_CASE("csv stream parses rows, contexts, and labels") {
  const std::string path = write_temp_csv("occstream_ok.csv",
                                          "f1,f2,klass,ctx\n"
                                          "0.5,1.5,good,0\n"
                                          "1.0,2.0,bad,1\n"
                                          "2.5,0.25,good,1\n");
  CsvSchema schema;
  schema.feature_columns = {"f1", "f2"};
  schema.class_column = "klass";
  schema.context_column = "ctx";
  schema.majority_labels = {"good"};
  schema.minority_labels = {"bad"};
  CsvStream stream(path, schema);
  CHECK(stream.dimension() == 2);

  std::vector<Instance> rows;
  while (stream.has_next()) rows.push_back(stream.next());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].features == vec2(0.5, 1.5));
  CHECK(rows[0].label == Label::kMajority);
  CHECK(rows[0].context == 0);
  CHECK(rows[1].label == Label::kMinority);
  CHECK(rows[1].context == 1);
  CHECK(rows[2].features == vec2(2.5, 0.25));
  std::filesystem::remove(path);
}

TEST_CASE("csv stream normalization applies the min-max formula") {
  const std::string path = write_temp_csv("occstream_norm.csv",
                                          "a,b,y\n"
                                          "5,1,good\n");
  CsvSchema schema;
  schema.feature_columns = {"a", "b"};
  schema.class_column = "y";
  schema.majority_labels = {"good"};
  schema.minority_labels = {"bad"};
  CsvNormalization norm;
  norm.minimum = vec2(0, 0);
  norm.maximum = vec2(10, 2);
  CsvStream stream(path, schema, norm);
  const Instance inst = stream.next();
  CHECK(inst.features[0] == doctest::Approx(0.5));
  CHECK(inst.features[1] == doctest::Approx(0.5));
  std::filesystem::remove(path);
}

TEST_CASE("csv stream rejects malformed rows and unknown class tokens") {
  const std::string nan_path = write_temp_csv("occstream_nan.csv",
                                              "a,y\n"
                                              "1.0,good\n"
                                              "NaN,good\n");
  CsvSchema schema;
  schema.feature_columns = {"a"};
  schema.class_column = "y";
  schema.majority_labels = {"good"};
  schema.minority_labels = {"bad"};
  {
    CsvStream stream(nan_path, schema);
    CHECK_NOTHROW(stream.next());
    try {
      while (stream.has_next()) stream.next();
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":3") != std::string::npos);  // line number
    }
  }
  std::filesystem::remove(nan_path);

  const std::string unknown_path = write_temp_csv("occstream_unknown.csv",
                                                  "a,y\n"
                                                  "1.0,mystery\n");
  CsvStream stream(unknown_path, schema);
  CHECK_THROWS_AS([&] { while (stream.has_next()) stream.next(); }(), SchemaError);
  std::filesystem::remove(unknown_path);

  CsvSchema missing_column = schema;
  missing_column.class_column = "zzz";
  const std::string ok_path = write_temp_csv("occstream_cols.csv", "a,y\n1.0,good\n");
  CHECK_THROWS_AS(CsvStream(ok_path, missing_column), SchemaError);
  std::filesystem::remove(ok_path);
}
