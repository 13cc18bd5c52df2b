#include <cmath>
#include <string>
#include <vector>

#include "bsp/error.hpp"
#include "bsp/multi.hpp"
#include "doctest.h"

using bsp::AttributeSpec;
using bsp::CategoricalAttribute;
using bsp::EntropyReport;
using bsp::Error;
using bsp::EventKind;
using bsp::LambdaMode;
using bsp::MultiStream;
using bsp::NumericAttribute;
using bsp::NumericStream;
using bsp::Policy;
using bsp::Rng;
using bsp::TransformsMode;
using bsp::TransitionMatrix;
using bsp::Value;

namespace {

const std::vector<double> kSeed2x2 = {0.8, 0.2, 0.2, 0.8};
const double kSeedBeta = 0.7219280948873623;

Policy uniform_policy() {
  Policy p;
  p.lambda_mode = LambdaMode::RandomUniform;
  p.transforms_mode = TransformsMode::Fixed;
  p.transforms_lo = p.transforms_hi = 1;
  return p;
}

AttributeSpec numeric_spec(const std::string& name) {
  return {name, NumericAttribute{uniform_policy(),
                                 TransitionMatrix::from_dense(kSeed2x2, 2)}};
}

}  // namespace

TEST_CASE("aggregate beta") {
  CHECK(bsp::aggregate_beta({{0.5, 1.0, 0.5}}) == 0.5);
  CHECK(bsp::aggregate_beta({{1, 1, 1}, {0, 1, 0}}) == 0.5);
  CHECK(bsp::aggregate_beta({{kSeedBeta, 1.0, kSeedBeta}, {1.0, 1.0, 1.0}}) ==
        doctest::Approx(0.86096).epsilon(1e-4));
  CHECK(bsp::aggregate_beta({{0, 0, 0}, {0, 0, 0}}) == 0.0);  // all r = 1
  CHECK_THROWS_AS(bsp::aggregate_beta({}), Error);
}

TEST_CASE("aggregate beta lies between the per-attribute extremes") {
  std::vector<EntropyReport> reps = {{0.3, 1.0, 0.3},
                                     {1.2, 2.0, 0.6},
                                     {2.0, 2.0, 1.0}};
  const double agg = bsp::aggregate_beta(reps);
  CHECK(agg >= 0.3);
  CHECK(agg <= 1.0);
  // adding an attribute whose beta equals the aggregate is a fixed point
  const double h_max = 1.5;
  reps.push_back({agg * h_max, h_max, agg});
  CHECK(bsp::aggregate_beta(reps) == doctest::Approx(agg).epsilon(1e-12));
}

TEST_CASE("single attribute behaves like the bare engine") {
  MultiStream multi({numeric_spec("income")}, 42);
  NumericStream single(TransitionMatrix::from_dense(kSeed2x2, 2),
                       {{"a", 10}, {"b", 20}}, uniform_policy(),
                       bsp::derive(42, "income"));

  auto e1 = multi.ingest("a", {Value{10.0}});
  CHECK(e1.empty());  // still gathering the seed
  auto e2 = multi.ingest("b", {Value{20.0}});
  REQUIRE(e2.size() == 2);
  CHECK(std::get<double>(e2[0].value) ==
        std::get<double>(single.seed_events()[0].value));
  CHECK(e2[0].t == 1);
  CHECK(e2[1].t == 2);
  CHECK(multi.beta() == doctest::Approx(kSeedBeta));

  for (int i = 0; i < 30; ++i) {
    auto em = multi.ingest("x" + std::to_string(i), {Value{i * 2.0}});
    auto es = single.ingest({"x" + std::to_string(i), i * 2.0});
    REQUIRE(em.size() == es.size());
    for (std::size_t j = 0; j < em.size(); ++j) {
      CHECK(em[j].id == es[j].id);
      CHECK(std::get<double>(em[j].value) == std::get<double>(es[j].value));
      CHECK(em[j].attr == "income");
      CHECK(em[j].beta == es[j].beta);
    }
  }
}

TEST_CASE("numeric beside categorical with aggregate stamping") {
  CategoricalAttribute cat{{"x", "y"},
                           TransitionMatrix::perfect(2),
                           {}};
  MultiStream multi({numeric_spec("income"), {"region", cat}}, 7);

  CHECK(multi.ingest("a", {Value{10.0}, Value{std::string("x")}}).empty());
  auto flush = multi.ingest("b", {Value{5.0}, Value{std::string("y")}});
  // two records, two attributes each: 4 release events, grouped per record
  REQUIRE(flush.size() == 4);
  CHECK(flush[0].attr == "income");
  CHECK(flush[1].attr == "region");
  CHECK(flush[0].t == 1);
  CHECK(flush[2].t == 2);
  const double agg = bsp::aggregate_beta(
      {multi.attribute_entropy("income"), multi.attribute_entropy("region")});
  for (const auto& e : flush) CHECK(e.beta == doctest::Approx(agg));
  CHECK(agg == doctest::Approx((kSeedBeta + 1.0) / 2.0).epsilon(1e-6));

  auto ev = multi.ingest("c", {Value{1.0}, Value{std::string("x")}});
  for (const auto& e : ev) CHECK(e.t == 3);
  CHECK(multi.arrivals() == 3);
}

TEST_CASE("same name and seed reproduce, different names diverge") {
  auto drive = [](const std::string& name) {
    MultiStream m({numeric_spec(name)}, 99);
    std::vector<double> out;
    m.ingest("a", {Value{10.0}});
    m.ingest("b", {Value{20.0}});
    for (int i = 0; i < 20; ++i)
      for (const auto& e : m.ingest("x" + std::to_string(i), {Value{1.0 * i}}))
        out.push_back(std::get<double>(e.value));
    return out;
  };
  CHECK(drive("age") == drive("age"));
  CHECK(drive("age") != drive("income"));
}

TEST_CASE("schema and id errors") {
  MultiStream m({numeric_spec("income")}, 1);
  CHECK_THROWS_AS(m.ingest("a", {}), Error);
  CHECK_THROWS_AS(m.ingest("a", {Value{std::string("oops")}}), Error);
  CHECK_THROWS_AS(
      m.ingest("a", {Value{1.0}, Value{2.0}}), Error);
  m.ingest("a", {Value{1.0}});
  CHECK_THROWS_AS(m.ingest("a", {Value{2.0}}), Error);

  CHECK_THROWS_AS(MultiStream({}, 1), Error);
  CHECK_THROWS_AS(MultiStream({numeric_spec("a"), numeric_spec("a")}, 1),
                  Error);
  // numeric seed matrices must share a dimension
  AttributeSpec big{"b", NumericAttribute{uniform_policy(),
                                          TransitionMatrix::perfect(3)}};
  CHECK_THROWS_AS(MultiStream({numeric_spec("a"), big}, 1), Error);
}

TEST_CASE("attribute lookups") {
  MultiStream m({numeric_spec("income")}, 3);
  CHECK(m.attribute_entropy("income").beta == doctest::Approx(kSeedBeta));
  CHECK(m.attribute_matrix("income").dim() == 2);
  CHECK_THROWS_AS(m.attribute_entropy("nope"), Error);
}
