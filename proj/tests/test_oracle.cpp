#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "sre/errors.hpp"
#include "sre/oracle.hpp"

using namespace sre;

namespace {
SetPartition P(const char* text) { return SetPartition::parse(text); }
CycleSpec C(std::vector<std::vector<int>> cycles) { return CycleSpec(std::move(cycles)); }

std::optional<int> brute(const EdgeGraph& g, const SetPartition& p) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : g.edges) edges.emplace_back(e.row, e.col);
  std::vector<bool> black;
  for (const auto& s : g.slots) black.push_back(s.black);
  return oracle::exponent_brute_force(edges, black, p.labels(), g.compensation);
}
}  // namespace

TEST_CASE("cycle spec parsing and counts") {
  auto cs = CycleSpec::parse("2,2");
  CHECK(cs.cycle_count() == 2);
  CHECK(cs.edge_count() == 4);
  CHECK(cs.insertion_count() == 0);
  CHECK(cs.target_exponent() == -4);
  auto ins = CycleSpec::parse("[[1,0],[2]]");
  CHECK(ins.edge_count() == 3);
  CHECK(ins.insertion_count() == 3);
  CHECK(ins.to_string() == "[[1,0],[2]]");
  CHECK_THROWS_AS(CycleSpec::parse("2,x"), PreconditionError);
  CHECK_THROWS_AS(CycleSpec::from_lengths({0}), PreconditionError);
  CHECK_THROWS_AS(C({}), PreconditionError);
}

TEST_CASE("power insertion graph layout") {
  auto g = power_insertion_graph(C({{2, 0}}));
  REQUIRE(g.edge_count() == 4);
  CHECK(g.gamma_lengths == std::vector<int>{3, 1});
  // i1 -> w1 -> w2 -> i2 -> i1
  CHECK(g.slots[g.edges[0].row].black);
  CHECK_FALSE(g.slots[g.edges[0].col].black);
  CHECK(g.edges[2].col == g.edges[3].row);
  CHECK(g.edges[3].col == g.edges[0].row);
}

TEST_CASE("exponent of single partitions") {
  auto two = CycleSpec::from_lengths({2});
  CHECK(exponent_of_partition(two, P("{1,2}")) == -1);

  auto pair = CycleSpec::from_lengths({2, 2});
  CHECK(exponent_of_partition(pair, SetPartition::coarsest(4)) == -4);
  CHECK_FALSE(exponent_of_partition(pair, P("{1,3}{2,4}")).has_value());
  CHECK(exponent_of_partition(pair, P("{1,2}{3,4}")) == -2);

  auto la = best_loop_assignment(power_insertion_graph(pair), SetPartition::coarsest(4));
  REQUIRE(la.has_value());
  CHECK(la->exponent == -4);
  REQUIRE(la->loops.size() == 1);
  CHECK(la->loops[0].size() == 2);
  CHECK(la->free_classes == 0);

  // Trace of M^2 on one black dot: the white slot is a free sum.
  auto square = C({{1}});
  la = best_loop_assignment(power_insertion_graph(square), SetPartition::coarsest(2));
  REQUIRE(la.has_value());
  CHECK(la->free_classes == 1);
  CHECK(la->exponent == 0);
}

TEST_CASE("branch and bound agrees with exhaustive slot identification") {
  std::vector<CycleSpec> specs = {C({{0, 0}}),    C({{1}}),         C({{1, 0}}),
                                  C({{0}, {0}}),  C({{1}, {0}}),    C({{0, 0}, {0}}),
                                  C({{2, 0}}),    C({{1}, {1}}),    C({{0, 0}, {0, 0}}),
                                  C({{0}, {0}, {0}}), C({{1, 0}, {0}}), C({{1, 1}})};
  for (const auto& cs : specs) {
    CAPTURE(cs.to_string());
    auto g = power_insertion_graph(cs);
    for (const auto& p : enumerate_partitions(g.edge_count())) {
      CAPTURE(p.to_string());
      REQUIRE(exponent_of_partition(g, p) == brute(g, p));
    }
  }
  auto e = entrywise_graph(C({{1, 0}}));
  for (const auto& p : enumerate_partitions(e.edge_count())) REQUIRE(exponent_of_partition(e, p) == brute(e, p));
}

TEST_CASE("leading exponent examples") {
  CHECK(leading_exponent(CycleSpec::from_lengths({2})).exponent == -1);
  CHECK(leading_exponent(CycleSpec::from_lengths({2, 2})).exponent == -4);
  CHECK(leading_exponent(C({{1}, {1}})).exponent == -2);
  CHECK(leading_exponent(CycleSpec::from_lengths({1, 1, 1})).exponent == -4);
  for (int n = 1; n <= 5; ++n) CHECK(leading_exponent(CycleSpec::from_lengths({n})).exponent == 1 - n);

  auto lead = leading_exponent(CycleSpec::from_lengths({2, 2}));
  // No insertions: every argument is a single element, so only 1_k connects.
  CHECK(lead.connecting_count == 1);
  CHECK(std::find(lead.argmax.begin(), lead.argmax.end(), SetPartition::coarsest(4)) != lead.argmax.end());

  try {
    leading_exponent(CycleSpec::from_lengths({11}));
    FAIL("expected SizeLimitError");
  } catch (const SizeLimitError& e) {
    CHECK(std::string(e.what()).find("678570") != std::string::npos);
  }
}

TEST_CASE("leading exponent matches the exhaustive maximum") {
  for (const auto& cs : enumerate_cycle_specs(2, 5)) {
    CAPTURE(cs.to_string());
    auto g = power_insertion_graph(cs);
    std::optional<int> best;
    for (const auto& p : connecting_partitions(g.gamma())) {
      auto v = brute(g, p);
      if (v && (!best || *v > *best)) best = v;
    }
    CHECK(leading_exponent(g).exponent == best);
  }
}

TEST_CASE("factorized starts") {
  auto three = factorized_start(CycleSpec::from_lengths({3}));
  REQUIRE(three.size() == 1);
  CHECK(three[0] == SetPartition::coarsest(3));
  auto inserted = factorized_start(C({{1, 0}}));
  CHECK(inserted.size() == 3);
  for (const auto& p : three) CHECK(exponent_of_partition(CycleSpec::from_lengths({3}), p) == -2);

  auto ones = factorized_start(CycleSpec::from_lengths({1, 1}));
  REQUIRE(ones.size() == 1);
  CHECK(ones[0] == P("{1}{2}"));
  CHECK(exponent_of_partition(CycleSpec::from_lengths({1, 1}), ones[0]) == 0);

  auto pair = CycleSpec::from_lengths({2, 2});
  auto starts = factorized_start(pair);
  REQUIRE(starts.size() == 1);
  CHECK(starts[0] == P("{1,2}{3,4}"));
  CHECK(exponent_of_partition(pair, starts[0]) == -2);
}

TEST_CASE("moves") {
  auto pair = CycleSpec::from_lengths({2, 2});
  auto start = P("{1,2}{3,4}");

  auto joined = apply_move(start, {MoveKind::JoinParts, {0, 1}, {}}, pair);
  CHECK(joined.result == SetPartition::coarsest(4));
  CHECK(joined.before == -2);
  CHECK(joined.after == -4);
  CHECK(joined.predicted_cost == -2);
  CHECK(joined.within_cost);

  auto whole = apply_move(start, {MoveKind::ExchangeSegments, {0, 1}, {{1, 2}, {3, 4}}}, pair);
  CHECK(whole.result == SetPartition::coarsest(4));
  CHECK(*whole.after - *whole.before == -2);

  auto singles = CycleSpec::from_lengths({1, 1, 1});
  auto triple = apply_move(P("{1}{2}{3}"), {MoveKind::TripleInsert, {0, 1, 2}, {{1}, {2}, {3}}}, singles);
  CHECK(triple.result == SetPartition::coarsest(3));
  CHECK(*triple.after - *triple.before == -4);
  CHECK(triple.predicted_cost == -4);

  CHECK_THROWS_AS(apply_move(P("{1,2,3,4}"), {MoveKind::JoinParts, {0, 0}, {}}, pair), PreconditionError);
  CHECK_THROWS_AS(apply_move(start, {MoveKind::ExchangeSegments, {0, 1}, {{1, 3}, {3}}}, pair), PreconditionError);
  // Proper segments cut only at black dots here, so the deltas are forbidden.
  CHECK_THROWS_AS(apply_move(start, {MoveKind::ExchangeSegments, {0, 1}, {{1}, {3}}}, pair), PreconditionError);
  // {1} and {2} are one cumulant argument, hence the same component.
  CHECK_THROWS_AS(apply_move(P("{1}{2}{3}"), {MoveKind::JoinParts, {0, 1}, {}}, C({{1}, {0}})), PreconditionError);
}

TEST_CASE("move costs are monotone from every factorized start") {
  for (const auto& cs : enumerate_cycle_specs(3, 6)) {
    if (cs.cycle_count() < 2) continue;
    CAPTURE(cs.to_string());
    for (const auto& p : factorized_start(cs))
      for (const auto& m : candidate_moves(p, cs)) {
        auto out = apply_move(p, m, cs);
        CAPTURE(m.describe());
        CHECK(out.within_cost);
      }
  }
}

TEST_CASE("reachable sets") {
  auto single = CycleSpec::from_lengths({3});
  CHECK(reachable_set(single) == factorized_start(single));

  auto ones = reachable_set(CycleSpec::from_lengths({1, 1}));
  CHECK(std::find(ones.begin(), ones.end(), P("{1,2}")) != ones.end());

  auto v = claim_check(CycleSpec::from_lengths({2, 2}));
  CHECK(v.leading_matches);
  CHECK(v.leading == -4);
  CHECK(v.argmax_reachable);
  CHECK(v.reachable_leading);

  auto three = claim_check(CycleSpec::from_lengths({1, 1, 1}));
  CHECK(three.leading == -4);
  CHECK(three.leading_matches);
}

TEST_CASE("entry-wise oracle") {
  auto one = entrywise_oracle(C({{1, 0}}));
  CHECK(one.exponent == -1);
  CHECK(one.matches);
  CHECK(one.long_small_loop_leading);

  auto two = entrywise_oracle(C({{1, 1}}));
  CHECK(two.exponent == -1);

  CHECK_THROWS_AS(entrywise_oracle(C({{1}})), PreconditionError);
  CHECK_THROWS_AS(entrywise_graph(C({{1}, {1}})), PreconditionError);

  auto pair = entrywise_oracle(C({{1, 0}, {0, 0}}));
  CHECK(pair.exponent == -4);
  CHECK(pair.long_small_loop_leading);
}

TEST_CASE("cycle spec enumeration is canonical") {
  auto specs = enumerate_cycle_specs(2, 3);
  // One cycle: [0] [1] [2] [0,0] [0,1] [0,0,0]; two cycles add [0]+[0], [0]+[1], [0]+[0,0].
  CHECK(specs.size() == 9);
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = i + 1; j < specs.size(); ++j) CHECK_FALSE(specs[i] == specs[j]);
}
