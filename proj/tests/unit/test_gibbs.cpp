#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "irid/error.hpp"
#include "irid/gibbs.hpp"
#include "irid/oracle.hpp"
#include "support/wildcatter.hpp"

using namespace irid;
using namespace irid::testing;

namespace {

StageContext stage2() { return build_last_stage_context(wildcatter()); }

/// Chain over three binary variables with pairwise factors, nothing fixed.
StageContext three_binary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  StageContext ctx;
  ctx.cards = {2, 2, 2, 1};
  ctx.free_vars = {0, 1, 2};
  ctx.free_topological = {0, 1, 2};
  auto table = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = unit(rng);
    return v;
  };
  ctx.factors.push_back({StageFactorKind::cpt, 0, {}, Factor({0}, {2}, table(2))});
  ctx.factors.push_back({StageFactorKind::cpt, 1, {0}, Factor({0, 1}, {2, 2}, table(4))});
  ctx.factors.push_back({StageFactorKind::cpt, 2, {0, 1}, Factor({0, 1, 2}, {2, 2, 2}, table(8))});
  ctx.value = Factor({0, 1, 2}, {2, 2, 2}, {0, 1, 2, 3, 4, 5, 6, 7});
  return ctx;
}

}  // namespace

TEST_CASE("sampler settings are validated") {
  CHECK_NOTHROW(SamplerConfig{}.validate());
  CHECK(SamplerConfig{}.kept() == 20000);
  CHECK_THROWS_AS((SamplerConfig{1, 0, 0, 1}.validate()), Error);
  CHECK_THROWS_AS((SamplerConfig{1, 0, 10, 0}.validate()), Error);
  CHECK_THROWS_AS((SamplerConfig{1, 0, 3, 5}.validate()), Error);
  CHECK(SamplerConfig{1, 0, 10, 3}.kept() == 3);
}

TEST_CASE("derived seeds depend on every path element") {
  CHECK(derive_seed(1, {2, 0}) != derive_seed(1, {2, 1}));
  CHECK(derive_seed(1, {2, 0}) != derive_seed(2, {2, 0}));
  CHECK(derive_seed(1, {0, 2}) != derive_seed(1, {2, 0}));
  CHECK(derive_seed(5, {1, 2, 3}) == derive_seed(5, {1, 2, 3}));
}

TEST_CASE("initial state with one free variable") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  Rng rng(1);
  const Assignment fixed = config_of(m, {{"T", "nt"}, {"R", "nr"}, {"B", "$1M"}, {"D", "nd"}});
  for (int i = 0; i < 20; ++i) {
    const ChainState s = init_state(ctx, fixed, rng);
    CHECK(s.assignment.assigned(m.id("O")));
    CHECK(s.assignment[m.id("T")] == fixed[m.id("T")]);
  }
}

TEST_CASE("impossible evidence has no positive state") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  Rng rng(1);
  try {
    init_state(ctx, config_of(m, {{"T", "nt"}, {"R", "c"}, {"B", "$2M"}, {"D", "d"}}), rng);
    FAIL("expected NoPositiveState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPositiveState);
  }
}

TEST_CASE("an inadmissible alternative is refused") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  Rng rng(1);
  try {
    init_state(ctx, config_of(m, {{"T", "t2"}, {"R", "c"}, {"B", "$1M"}, {"D", "d"}}), rng);
    FAIL("expected ConstraintViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstraintViolated);
  }
}

TEST_CASE("missing dependency values are refused") {
  const IridModel m = wildcatter();
  Rng rng(1);
  try {
    init_state(stage2(), config_of(m, {{"T", "t1"}, {"D", "d"}}), rng);
    FAIL("expected IncompleteConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteConfig);
  }
}

TEST_CASE("deterministic chains find the unique completion") {
  StageContext ctx;
  ctx.cards = {3, 3};
  ctx.free_vars = {0, 1};
  ctx.free_topological = {0, 1};
  ctx.factors.push_back({StageFactorKind::cpt, 0, {}, Factor({0}, {3}, {0, 0, 1})});
  ctx.factors.push_back({StageFactorKind::cpt, 1, {0}, Factor({0, 1}, {3, 3}, {1, 0, 0, 0, 1, 0, 0, 1, 0})});
  ctx.value = Factor({1}, {3}, {0, 1, 2});
  Rng rng(9);
  const ChainState s = init_state(ctx, Assignment(2), rng);
  CHECK(s.assignment[0] == 2);
  CHECK(s.assignment[1] == 1);
}

TEST_CASE("initialization backtracks out of dead ends") {
  // X0 uniform, X1 | X0 forced equal, evidence factor on X1 allows only 1.
  StageContext ctx;
  ctx.cards = {2, 2};
  ctx.free_vars = {0, 1};
  ctx.free_topological = {0, 1};
  ctx.factors.push_back({StageFactorKind::cpt, 0, {}, Factor({0}, {2}, {0.5, 0.5})});
  ctx.factors.push_back({StageFactorKind::cpt, 1, {0}, Factor({0, 1}, {2, 2}, {1, 0, 0, 1})});
  ctx.factors.push_back({StageFactorKind::cpt, 1, {}, Factor({1}, {2}, {0, 1})});
  ctx.value = Factor({1}, {2}, {0, 1});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const ChainState s = init_state(ctx, Assignment(2), rng);
    CHECK(s.assignment[0] == 1);
    CHECK(s.assignment[1] == 1);
  }
}

TEST_CASE("a single free variable is resampled from its full conditional") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  const Assignment fixed = config_of(m, {{"T", "t1"}, {"R", "c"}, {"B", "$2M"}, {"D", "d"}});
  Rng rng(2024);
  ChainState s = init_state(ctx, fixed, rng);
  std::size_t wet = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    s = sweep(std::move(s), ctx, rng);
    wet += s.assignment[m.id("O")] == 0;
  }
  CHECK(static_cast<double>(wet) / n == doctest::Approx(0.923077).epsilon(0.01));
}

TEST_CASE("flat factors leave the state uniform over its support") {
  StageContext ctx;
  ctx.cards = {3};
  ctx.free_vars = {0};
  ctx.free_topological = {0};
  ctx.factors.push_back({StageFactorKind::cpt, 0, {}, Factor({0}, {3}, {0.5, 0.0, 0.5})});
  ctx.value = Factor({0}, {3}, {0, 1, 2});
  Rng rng(3);
  ChainState s = init_state(ctx, Assignment(1), rng);
  std::size_t counts[3] = {0, 0, 0};
  for (int i = 0; i < 20000; ++i) {
    s = sweep(std::move(s), ctx, rng);
    ++counts[s.assignment[0]];
  }
  CHECK(counts[1] == 0);
  CHECK(counts[0] / 20000.0 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("stage 2 expectations of the wildcatter") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  SUBCASE("drill without a test") {
    const Assignment fixed = config_of(m, {{"B", "$2M"}, {"T", "nt"}, {"R", "nr"}, {"D", "d"}});
    const Estimate e = estimate_expectation(ctx, fixed, ctx.value, SamplerConfig{});
    CHECK(e.n == 20000);
    CHECK(std::abs(e.mean - 250000.0) <= 3 * e.std_error);
  }
  SUBCASE("do not drill without a test") {
    const Assignment fixed = config_of(m, {{"B", "$1M"}, {"T", "nt"}, {"R", "nr"}, {"D", "nd"}});
    const Estimate e = estimate_expectation(ctx, fixed, ctx.value, SamplerConfig{});
    CHECK(std::abs(e.mean - -1200000.0) <= 3 * e.std_error);
  }
}

TEST_CASE("a constant value gives its constant with zero error") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  const Assignment fixed = config_of(m, {{"B", "$2M"}, {"T", "t1"}, {"R", "o"}, {"D", "d"}});
  const Factor constant({m.id("O")}, {2}, {1234.5, 1234.5});
  const Estimate e = estimate_expectation(ctx, fixed, constant, SamplerConfig{7, 10, 500, 1});
  CHECK(e.mean == 1234.5);
  CHECK(e.std_error == 0.0);
  CHECK(e.n == 500);
}

TEST_CASE("estimates are reproducible bit for bit") {
  const IridModel m = wildcatter();
  const StageContext ctx = stage2();
  const Assignment fixed = config_of(m, {{"B", "$2M"}, {"T", "t2"}, {"R", "o"}, {"D", "nd"}});
  const SamplerConfig cfg{99, 100, 3000, 2};
  const Estimate a = estimate_expectation(ctx, fixed, ctx.value, cfg);
  const Estimate b = estimate_expectation(ctx, fixed, ctx.value, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.n == 1500);
  const Estimate c = estimate_expectation(ctx, fixed, ctx.value, SamplerConfig{100, 100, 3000, 2});
  CHECK(c.mean != a.mean);
}

TEST_CASE("batch means") {
  const Estimate flat = summarize(std::vector<double>(40, 3.0));
  CHECK(flat.mean == 3.0);
  CHECK(flat.std_error == 0.0);

  std::vector<double> alternating;
  for (int i = 0; i < 40; ++i) alternating.push_back(i < 20 ? 0.0 : 2.0);
  const Estimate e = summarize(alternating, 2);
  CHECK(e.mean == 1.0);
  CHECK(e.std_error == doctest::Approx(1.0));

  const Estimate few = summarize({1.0, 3.0});
  CHECK(few.mean == 2.0);
  CHECK(few.std_error == doctest::Approx(1.0));
}

TEST_CASE("visited states keep positive probability") {
  const IridModel m = wildcatter();
  IridModel absorbed = absorb_decision(m, m.id("D"), first_admissible_policy(m, m.id("D")));
  const StageContext ctx = build_last_stage_context(absorbed);
  Assignment fixed = absorbed.empty_assignment();
  fixed.set(absorbed.id("B"), 1);
  fixed.set(absorbed.id("T"), 0);
  Rng rng(5);
  ChainState s = init_state(ctx, fixed, rng);
  for (int i = 0; i < 5000; ++i) {
    s = sweep(std::move(s), ctx, rng);
    double p = 1.0;
    for (const auto& f : ctx.factors) p *= evaluate(f.table, s.assignment);
    REQUIRE(p > 0.0);
  }
}

TEST_CASE("the chain leaves the target distribution invariant") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 5; ++trial) {
    const StageContext ctx = three_binary(gen);
    std::map<std::size_t, double> target;
    double z = 0.0;
    for (std::size_t c = 0; c < 8; ++c) {
      Assignment a(4);
      a.set(0, c >> 2);
      a.set(1, (c >> 1) & 1);
      a.set(2, c & 1);
      double p = 1.0;
      for (const auto& f : ctx.factors) p *= evaluate(f.table, a);
      target[c] = p;
      z += p;
    }
    Rng rng(1000 + trial);
    ChainState s = init_state(ctx, Assignment(4), rng);
    std::map<std::size_t, double> freq;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      s = sweep(std::move(s), ctx, rng);
      freq[(s.assignment[0] << 2) | (s.assignment[1] << 1) | s.assignment[2]] += 1.0 / n;
    }
    double tv = 0.0;
    for (std::size_t c = 0; c < 8; ++c) tv += std::abs(freq[c] - target[c] / z) / 2;
    CHECK(tv < 0.02);

    const Estimate e = estimate_expectation(ctx, Assignment(4), ctx.value, SamplerConfig{static_cast<std::uint64_t>(trial)});
    CHECK(std::abs(e.mean - exact_stage_expectation(ctx, Assignment(4))) <= 4 * e.std_error);
  }
}

TEST_CASE("forward sampling of a context with nothing fixed") {
  const IridModel m = wildcatter();
  IridModel a = absorb_decision(m, m.id("D"), constant_policy(m, "D", "nd"));
  a = absorb_decision(a, a.id("T"), constant_policy(a, "T", "nt"));
  const StageContext ctx = build_last_stage_context(a);
  const Estimate e = estimate_by_forward_sampling(ctx, ctx.value, SamplerConfig{});
  CHECK(std::abs(e.mean - -1200000.0) <= 3 * e.std_error);
  CHECK_THROWS_AS(estimate_by_forward_sampling(stage2(), stage2().value, SamplerConfig{}), Error);
}
