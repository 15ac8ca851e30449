#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kslab/jpd.hpp"
#include "kslab/prng.hpp"

using namespace kslab;

namespace {

MeasurementSystem anticorrelated_triple() {
  MeasurementSystem sys;
  for (const char* name : {"X", "Y", "Z"})
    sys.observables.push_back({name, {"1", "-1"}});
  sys.contexts = {{"X", "Y"}, {"X", "Z"}, {"Y", "Z"}};
  for (int i = 0; i < 3; ++i)
    sys.context_distributions.push_back(
        {{{"1", "-1"}, Rational(1, 2)}, {{"-1", "1"}, Rational(1, 2)}});
  return sys;
}

Rational dot(const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace

TEST_CASE("lp_feasible basic cases") {
  LinearProblem p1{{{Rational(1), Rational(1)}}, {Rational(1)}};
  const LpResult r1 = lp_feasible(p1);
  CHECK(r1.feasible);
  CHECK(r1.witness[0] + r1.witness[1] == 1);

  LinearProblem p2{{{Rational(1)}}, {Rational(-1)}};
  const LpResult r2 = lp_feasible(p2);
  CHECK_FALSE(r2.feasible);
  REQUIRE(r2.certificate.size() == 1);
  CHECK(r2.certificate[0] * Rational(-1) < 0);
  CHECK(r2.certificate[0] * Rational(1) >= 0);
}

TEST_CASE("lp certificates verify on random infeasible systems") {
  SplitMix64 rng(5);
  int seen_infeasible = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t m = 2 + rng.next() % 3, n = 1 + rng.next() % 4;
    LinearProblem p;
    p.a.assign(m, std::vector<Rational>(n));
    p.b.assign(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        p.a[i][j] = Rational(static_cast<long long>(rng.next() % 7) - 3);
      p.b[i] = Rational(static_cast<long long>(rng.next() % 9) - 4);
    }
    const LpResult r = lp_feasible(p);
    if (r.feasible) {
      for (std::size_t i = 0; i < m; ++i) CHECK(dot(p.a[i], r.witness) == p.b[i]);
      for (const Rational& x : r.witness) CHECK(x >= 0);
    } else {
      ++seen_infeasible;
      for (std::size_t j = 0; j < n; ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < m; ++i) col += r.certificate[i] * p.a[i][j];
        CHECK(col >= 0);
      }
      CHECK(dot(r.certificate, p.b) < 0);
    }
  }
  CHECK(seen_infeasible > 0);
}

TEST_CASE("make_space") {
  CHECK_NOTHROW(make_space({"h", "t"}, {Rational(1, 2), Rational(1, 2)}));
  CHECK_THROWS_AS(make_space({"a", "b"}, {Rational(3, 4), Rational(1, 2)}), MassNotOne);
  CHECK_THROWS_AS(make_space({"a", "b"}, {Rational(-1, 4), Rational(5, 4)}), NegativeWeight);
}

TEST_CASE("expectation") {
  const auto coin = make_space({"h", "t"}, {Rational(1, 2), Rational(1, 2)});
  CHECK(expectation(coin, RandomVariable{{Rational(1), Rational(-1)}}) == 0);

  const auto biased = make_space({"h", "t"}, {Rational(1, 4), Rational(3, 4)});
  CHECK(expectation(biased, RandomVariable{{Rational(1), Rational(-1)}}) == Rational(-1, 2));
  CHECK(expectation(biased, RandomVariable{{Rational(5), Rational(5)}}) == 5);
  CHECK(expectation(biased, RandomVariable{{Rational(1), Rational(1)}}) == 1);
  CHECK_THROWS_AS(expectation(coin, RandomVariable{{Rational(1)}}), DomainMismatch);
}

TEST_CASE("moment") {
  const auto pair_space =
      make_space({"+-", "-+"}, {Rational(1, 2), Rational(1, 2)});
  const RandomVariable x{{Rational(1), Rational(-1)}};
  const RandomVariable y{{Rational(-1), Rational(1)}};
  CHECK(moment(pair_space, {x, y}) == -1);

  const auto indep = make_space({"++", "+-", "-+", "--"},
                                std::vector<Rational>(4, Rational(1, 4)));
  const RandomVariable a{{Rational(1), Rational(1), Rational(-1), Rational(-1)}};
  const RandomVariable b{{Rational(1), Rational(-1), Rational(1), Rational(-1)}};
  CHECK(moment(indep, {a, b}) == 0);

  // X = Y = Z, fair: third moment E(XYZ) = 0.
  const auto sync = make_space({"+", "-"}, {Rational(1, 2), Rational(1, 2)});
  const RandomVariable s{{Rational(1), Rational(-1)}};
  CHECK(moment(sync, {s, s, s}) == 0);
}

TEST_CASE("suppes_zanotti_holds") {
  CHECK_FALSE(suppes_zanotti_holds({Rational(-1), Rational(-1), Rational(-1)}));
  CHECK(suppes_zanotti_holds({Rational(0), Rational(0), Rational(0)}));
  CHECK_FALSE(suppes_zanotti_holds({Rational(1), Rational(1), Rational(-1)}));
  CHECK(suppes_zanotti_holds({Rational(1), Rational(1), Rational(1)}));
}

TEST_CASE("feasibility_three") {
  const FeasibilityResult bad =
      feasibility_three({Rational(-1), Rational(-1), Rational(-1)});
  CHECK(bad.verdict == Verdict::Infeasible);
  CHECK(bad.certificate.has_value());

  const FeasibilityResult good =
      feasibility_three({Rational(1), Rational(1), Rational(1)});
  REQUIRE(good.verdict == Verdict::Feasible);
  REQUIRE(good.witness.has_value());

  const FeasibilityResult anti =
      feasibility_three({Rational(-1), Rational(-1), Rational(1)});
  REQUIRE(anti.verdict == Verdict::Feasible);

  // Witness soundness: moments reproduce exactly.
  const auto atoms = sign_triples();
  for (const auto* res : {&good, &anti}) {
    const ProbabilitySpace& sp = *res->witness;
    RandomVariable x, y, z;
    for (const auto& t : atoms) {
      x.values.push_back(Rational(t[0]));
      y.values.push_back(Rational(t[1]));
      z.values.push_back(Rational(t[2]));
    }
    if (res == &good) {
      CHECK(moment(sp, {x, y}) == 1);
      CHECK(moment(sp, {x, z}) == 1);
      CHECK(moment(sp, {y, z}) == 1);
    } else {
      CHECK(moment(sp, {x, y}) == -1);
      CHECK(moment(sp, {x, z}) == -1);
      CHECK(moment(sp, {y, z}) == 1);
    }
  }
}

TEST_CASE("feasibility_general rejects the anticorrelated triple") {
  const MeasurementSystem sys = anticorrelated_triple();
  const FeasibilityResult res = feasibility_general(sys);
  CHECK(res.verdict == Verdict::Infeasible);
  REQUIRE(res.certificate.has_value());
}

TEST_CASE("feasibility_general accepts any single-context system") {
  MeasurementSystem sys;
  sys.observables = {{"A", {"0", "1"}}, {"B", {"0", "1"}}};
  sys.contexts = {{"A", "B"}};
  sys.context_distributions = {{{{"0", "0"}, Rational(1, 3)},
                                {{"0", "1"}, Rational(1, 6)},
                                {{"1", "0"}, Rational(1, 6)},
                                {{"1", "1"}, Rational(1, 3)}}};
  const FeasibilityResult res = feasibility_general(sys);
  REQUIRE(res.verdict == Verdict::Feasible);
  for (const auto& [joint, p] : sys.context_distributions[0])
    CHECK(witness_marginal(sys, *res.witness, 0, joint) == p);
}

TEST_CASE("feasibility_general agrees with feasibility_three on consistent marginals") {
  // Perfect pairwise correlation, uniform singles.
  MeasurementSystem sys;
  for (const char* name : {"X", "Y", "Z"})
    sys.observables.push_back({name, {"1", "-1"}});
  sys.contexts = {{"X", "Y"}, {"X", "Z"}, {"Y", "Z"}};
  for (int i = 0; i < 3; ++i)
    sys.context_distributions.push_back(
        {{{"1", "1"}, Rational(1, 2)}, {{"-1", "-1"}, Rational(1, 2)}});
  const FeasibilityResult res = feasibility_general(sys);
  CHECK(res.verdict == Verdict::Feasible);
  CHECK(feasibility_three({Rational(1), Rational(1), Rational(1)}).verdict ==
        Verdict::Feasible);
}

TEST_CASE("feasibility_general validation and budget errors") {
  MeasurementSystem sys = anticorrelated_triple();
  sys.observables.push_back({"W", {"0", "1"}});
  CHECK_THROWS_AS(feasibility_general(sys), InvalidSystem);

  CHECK_THROWS_AS(feasibility_general(anticorrelated_triple(), 4), BudgetExceeded);

  MeasurementSystem bad = anticorrelated_triple();
  bad.context_distributions[0][{"1", "1"}] = Rational(1, 2);
  CHECK_THROWS_AS(feasibility_general(bad), MassNotOne);
}

TEST_CASE("zero-probability joint outcomes are legal") {
  MeasurementSystem sys;
  sys.observables = {{"A", {"0", "1"}}};
  sys.contexts = {{"A"}};
  sys.context_distributions = {{{{"0"}, Rational(1)}, {{"1"}, Rational(0)}}};
  CHECK(feasibility_general(sys).verdict == Verdict::Feasible);
}
