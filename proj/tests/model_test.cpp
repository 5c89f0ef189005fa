#include <gtest/gtest.h>

#include <random>

#include "patrol/patrol.hpp"
#include "support.hpp"

namespace patrol {
namespace {

using testing::triangle_instance;

Instance two_vertex(Time ru, Time rv) {
  return Instance({{0, 1}, {1, 0}}, {ru, rv});
}

TEST(Rational, ReducesAndCompares) {
  EXPECT_EQ(Rational(6, 4), Rational(3, 2));
  EXPECT_EQ(Rational(-2, -4), Rational(1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(7, 2).ceil(), 4);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3/2"), Rational(3, 2));
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("-1.5e-1"), Rational(-3, 20));
  EXPECT_EQ(Rational::parse("42"), Rational(42));
  EXPECT_EQ(Rational::from_double(0.1), Rational(1, 10));
  EXPECT_THROW(Rational::parse("1/x"), std::invalid_argument);
}

TEST(Rational, FormatsExactly) {
  EXPECT_EQ(Rational(3, 2).str(), "3/2");
  EXPECT_EQ(Rational(3, 8).decimal_str(), "0.375");
  EXPECT_EQ(Rational(1, 3).decimal_str(), "1/3");
  EXPECT_EQ(Rational(-5).str(), "-5");
}

TEST(Rational, LcmAndModOfFractions) {
  EXPECT_EQ(lcm(Rational(3, 2), Rational(5, 4)), Rational(15, 2));
  EXPECT_EQ(gcd(Rational(3, 2), Rational(5, 4)), Rational(1, 4));
  EXPECT_EQ(mod(Rational(7, 2), Rational(2)), Rational(3, 2));
  EXPECT_EQ(mod(Rational(-1, 2), Rational(2)), Rational(3, 2));
}

TEST(Rational, OverflowThrows) {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2);
  EXPECT_THROW(big * Rational(4), std::overflow_error);
  EXPECT_THROW(Rational(1, 4000000007) * Rational(1, 4000000009), std::overflow_error);
}

TEST(ValidateInstance, EquilateralIsOk) {
  Instance inst({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {1, 1, 1});
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(ValidateInstance, TriangleWitness) {
  Instance inst({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, {1, 1, 1});
  const auto res = validate_instance(inst);
  ASSERT_EQ(res.violations.size(), 1u);
  EXPECT_EQ(res.violations[0].kind, ViolationKind::kTriangle);
  EXPECT_EQ(res.violations[0].witness, (std::vector<Vertex>{0, 1, 2}));
}

TEST(ValidateInstance, NonpositiveLatencyAndAsymmetry) {
  Instance zero({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {0, 1, 1});
  const auto res = validate_instance(zero);
  ASSERT_EQ(res.violations.size(), 1u);
  EXPECT_EQ(res.violations[0].kind, ViolationKind::kNonpositiveLatency);
  EXPECT_EQ(res.violations[0].witness, std::vector<Vertex>{0});

  Instance asym({{0, 1}, {2, 0}}, {1, 1});
  bool found = false;
  for (const auto& v : validate_instance(asym).violations) found = found || v.kind == ViolationKind::kAsymmetric;
  EXPECT_TRUE(found);
}

TEST(Instance, DerivedQuantities) {
  const Instance inst = triangle_instance();
  EXPECT_EQ(inst.r_min(), Time(2));
  EXPECT_EQ(inst.r_max(), Time(4));
  EXPECT_EQ(inst.rho(), Rational(3));  // 4/2 is a power of two
  Instance other({{0, 1}, {1, 0}}, {2, 5});
  EXPECT_EQ(other.rho(), Rational(5, 2));
  EXPECT_EQ(Instance({{0, Rational(1, 2)}, {Rational(1, 2), 0}}, {Rational(3, 4), 2}).time_grid(), Rational(1, 4));
}

TEST(TimedWalk, PeriodIncludesHoldsAndClosingLeg) {
  const Instance inst = triangle_instance();
  TimedWalk w({{0, 0}, {1, Rational(1, 2)}, {2, 0}});
  EXPECT_EQ(w.period(inst), Time(1) + Rational(1, 2) + Time(2) + Time(1));
  EXPECT_EQ(TimedWalk::parked(1).period(inst), Time(0));
  EXPECT_EQ(TimedWalk({{1, 3}}).period(inst), Time(3));
}

TEST(Solution, PartitionedFlag) {
  Solution s{{TimedWalk::simple(std::vector<Vertex>{0, 1}), TimedWalk::parked(2)}};
  EXPECT_TRUE(s.partitioned());
  s.walks.push_back(TimedWalk::simple(std::vector<Vertex>{1, 0}));
  EXPECT_TRUE(s.partitioned());
  s.walks.push_back(TimedWalk::parked(1));
  EXPECT_FALSE(s.partitioned());
}

TEST(Latency, TriangleSingleWalk) {
  const Instance inst = triangle_instance();
  const Solution sol{{TimedWalk::simple(std::vector<Vertex>{0, 1, 0, 2})}};
  const auto rep = evaluate_latencies(sol, inst);
  EXPECT_EQ(*rep.latency[0], Time(2));
  EXPECT_EQ(*rep.latency[1], Time(4));
  EXPECT_EQ(*rep.latency[2], Time(4));
  EXPECT_TRUE(rep.feasible);
}

TEST(Latency, TriangleSecondRobotOffsets) {
  const Instance inst = triangle_instance();
  const std::vector<Vertex> seq{0, 1, 0, 2};
  const Solution two{{TimedWalk::simple(seq), TimedWalk::simple(seq, Time(2))}};
  EXPECT_EQ(*evaluate_latencies(two, inst).latency[0], Time(2));

  const Solution one{{TimedWalk::simple(seq), TimedWalk::simple(seq, Time(1))}};
  const auto rep = evaluate_latencies(one, inst);
  EXPECT_EQ(*rep.latency[0], Time(1));
  EXPECT_EQ(*rep.latency[1], Time(3));
  EXPECT_EQ(*rep.latency[2], Time(3));
}

TEST(Latency, ParkedRobot) {
  const Instance inst = triangle_instance();
  const auto rep = evaluate_latencies(Solution{{TimedWalk::parked(1)}}, inst);
  EXPECT_EQ(*rep.latency[1], Time(0));
  EXPECT_FALSE(rep.latency[0].has_value());
  EXPECT_FALSE(rep.latency[2].has_value());
  EXPECT_FALSE(rep.feasible);
  EXPECT_EQ(rep.violations(), (std::vector<Vertex>{0, 2}));
}

TEST(Latency, Errors) {
  const Instance inst = triangle_instance();
  EXPECT_THROW(evaluate_latencies(Solution{}, inst), EmptySolution);
  EXPECT_THROW(evaluate_latencies(Solution{{TimedWalk::parked(7)}}, inst), VertexOutOfRange);
  EXPECT_THROW(evaluate_latencies(Solution{{TimedWalk::simple(std::vector<Vertex>{0, 1}, Time(5))}}, inst),
               InvalidWalk);
}

TEST(Verify, TwoVertexExamples) {
  const Solution sol{{TimedWalk::simple(std::vector<Vertex>{0, 1})}};
  const auto ok = verify(sol, two_vertex(2, 2));
  EXPECT_TRUE(ok.feasible);
  EXPECT_EQ(*ok.latency[0], Time(2));
  EXPECT_EQ(*ok.latency[1], Time(2));
  const auto bad = verify(sol, two_vertex(2, 1));
  EXPECT_FALSE(bad.feasible);
  EXPECT_EQ(bad.violations(), std::vector<Vertex>{1});
}

TEST(Latency, HoldsShortenGapsAtTheHeldVertex) {
  const Instance inst = two_vertex(10, 10);
  const Solution sol{{TimedWalk({{0, 3}, {1, 0}})}};
  const auto rep = evaluate_latencies(sol, inst);
  EXPECT_EQ(*rep.latency[0], Time(2));
  EXPECT_EQ(*rep.latency[1], Time(5));
}

TEST(Latency, ZeroOffsetDuplicateChangesNothing) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const Instance inst = testing::random_integer_instance(rng, 5, 4, 1, 20);
    const TimedWalk w = testing::random_walk(rng, inst, 2 + static_cast<int>(rng() % 6), 2);
    TimedWalk copy = w;
    const auto a = evaluate_latencies(Solution{{w}}, inst);
    const auto b = evaluate_latencies(Solution{{w, copy}}, inst);
    EXPECT_EQ(a.latency, b.latency);
  }
}

TEST(Latency, CycleHalving) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    const Instance inst = testing::random_integer_instance(rng, 6, 9, 1, 5);
    std::vector<Vertex> verts = testing::all_vertices(inst);
    std::shuffle(verts.begin(), verts.end(), rng);
    verts.resize(2 + rng() % 5);
    const Cycle c{verts, cycle_length(inst, verts)};
    for (int k = 1; k <= 5; ++k) {
      const auto walks = equally_place(c, k);
      const auto rep = evaluate_latencies(Solution{walks}, inst);
      for (Vertex v : verts) EXPECT_EQ(*rep.latency[static_cast<std::size_t>(v)], c.length / Rational(k));
    }
  }
}

TEST(Latency, ScalesLinearly) {
  std::mt19937_64 rng(21);
  const std::vector<Rational> factors{Rational(3), Rational(1, 7), Rational(22, 9)};
  for (int it = 0; it < 60; ++it) {
    const Instance inst = testing::random_integer_instance(rng, 4, 5, 1, 30);
    Solution sol;
    const int robots = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < robots; ++k) sol.walks.push_back(testing::random_walk(rng, inst, 2 + static_cast<int>(rng() % 4), 3));
    const auto base = evaluate_latencies(sol, inst);
    for (const auto& c : factors) {
      const auto scaled = evaluate_latencies(sol.scaled(c), inst.scaled(c));
      for (std::size_t v = 0; v < base.size(); ++v) {
        ASSERT_EQ(base.latency[v].has_value(), scaled.latency[v].has_value());
        if (base.latency[v]) {
          EXPECT_EQ(*scaled.latency[v], *base.latency[v] * c);
        }
      }
    }
  }
}

TEST(Latency, RationalPeriodsAcrossRobots) {
  // periods 3/2 and 5/2 share a hyper-period of 15/2
  Instance inst({{0, Rational(3, 4), 1}, {Rational(3, 4), 0, Rational(5, 4)}, {1, Rational(5, 4), 0}}, {2, 2, 3});
  const Solution sol{{TimedWalk::simple(std::vector<Vertex>{0, 1}), TimedWalk::simple(std::vector<Vertex>{1, 2}, Rational(1, 2))}};
  const auto rep = evaluate_latencies(sol, inst);
  EXPECT_EQ(*rep.latency[0], Rational(3, 2));
  EXPECT_EQ(*rep.latency[2], Rational(5, 2));
  // b is visited at 3/4 + 3/2 k and at 2 + 5/2 k; over 15/2 the second
  // robot never lands between 9/4 and 15/4
  EXPECT_EQ(*rep.latency[1], Rational(3, 2));
}

TEST(PeriodicFeasibility, TwoVertexExamples) {
  const TimedWalk w = TimedWalk::simple(std::vector<Vertex>{0, 1});
  EXPECT_TRUE(periodic_feasibility(w, two_vertex(2, 2)));
  EXPECT_FALSE(periodic_feasibility(w, two_vertex(2, 1)));
}

TEST(PeriodicFeasibility, AgreesWithVerifyOnFuzzedWalks) {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int it = 0; it < 1000; ++it) {
    const Instance inst = testing::random_integer_instance(rng, 5, 4, 2, 16);
    const TimedWalk w = testing::random_walk(rng, inst, 1 + static_cast<int>(rng() % 7), 2);
    const auto rep = verify(Solution{{w}}, inst);
    bool on_walk = true;
    for (Vertex v : w.vertices()) on_walk = on_walk && rep.vertex_feasible[static_cast<std::size_t>(v)];
    EXPECT_EQ(periodic_feasibility(w, inst), on_walk) << "case " << it;
    feasible += on_walk ? 1 : 0;
  }
  EXPECT_GT(feasible, 100);
  EXPECT_LT(feasible, 900);
}

TEST(ExpiryState, FollowsTheUpdateRule) {
  const Instance inst = triangle_instance();
  ExpiryState s(inst, 0);
  s.move_to(1);
  EXPECT_EQ(s.slacks(), (std::vector<Time>{1, 4, 3}));
  s.hold(Time(1));
  EXPECT_EQ(s.slacks(), (std::vector<Time>{0, 4, 2}));
  s.move_to(0);
  EXPECT_EQ(s.slacks(), (std::vector<Time>{2, 3, 1}));
}

TEST(Io, InstanceRoundTripIsByteStable) {
  Instance inst("odd", {"p", "q"}, {{0, Rational(1, 3)}, {Rational(1, 3), 0}}, {Rational(5, 2), 7});
  const std::string text = io::dump(io::to_json(inst));
  const Instance back = io::instance_from_json(io::parse_json(text, "mem"));
  EXPECT_EQ(back.dist_matrix(), inst.dist_matrix());
  EXPECT_EQ(back.latency_constraints(), inst.latency_constraints());
  EXPECT_EQ(back.names(), inst.names());
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Io, GeneratedInstanceRoundTrip) {
  const Instance inst = generate({12, 4, 8, 3});
  const std::string text = io::dump(io::to_json(inst));
  const Instance back = io::instance_from_json(io::parse_json(text, "mem"));
  EXPECT_EQ(back.dist_matrix(), inst.dist_matrix());
  EXPECT_EQ(back.latency_constraints(), inst.latency_constraints());
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Io, SolutionRoundTrip) {
  Solution sol{{TimedWalk({{0, Rational(1, 3)}, {2, 0}}, Rational(5, 6)), TimedWalk::parked(1)}};
  const std::string text = io::dump(io::to_json(sol));
  const Solution back = io::solution_from_json(io::parse_json(text, "mem"));
  ASSERT_EQ(back.walks.size(), 2u);
  EXPECT_EQ(back.walks[0].steps(), sol.walks[0].steps());
  EXPECT_EQ(back.walks[0].offset(), sol.walks[0].offset());
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Io, MalformedJsonReportsPosition) {
  try {
    io::parse_json("{\n  \"n\": 2,\n  \"dist\": [[0, 1] [1, 0]]\n}", "x.json");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("x.json:3:", 0), 0u) << e.what();
  }
}

TEST(Io, RejectsBadShapes) {
  EXPECT_THROW(io::instance_from_json(io::parse_json(R"({"n":2,"dist":[[0,1]],"r":[1,1]})", "m")), DataError);
  EXPECT_THROW(io::instance_from_json(io::parse_json(R"({"n":1,"dist":[[0]],"r":["x"]})", "m")), DataError);
  EXPECT_THROW(io::solution_from_json(io::parse_json(R"({"walks":[{"steps":[[0]]}]})", "m")), DataError);
}

}  // namespace
}  // namespace patrol
