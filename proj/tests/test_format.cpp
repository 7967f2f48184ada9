#include <doctest.h>

#include <string>
#include <vector>

#include "tvg/format.hpp"
#include "tvg/graph.hpp"

using namespace tvg;

static const std::string kFixtures = FIXTURES_DIR;

TEST_CASE("parseRational accepts integers, fractions and finite decimals") {
  CHECK(parseRational("3") == Rat(3));
  CHECK(parseRational("-3") == Rat(-3));
  CHECK(parseRational("3/6") == Rat(1, 2));
  CHECK(parseRational("0.25") == Rat(1, 4));
  CHECK(parseRational("-1.5") == Rat(-3, 2));
  CHECK(parseRational("10.125") == Rat(81, 8));
  CHECK_THROWS_AS(parseRational("x"), Error);
  CHECK_THROWS_AS(parseRational(""), Error);
  CHECK_THROWS_AS(parseRational("1/0"), Error);
  CHECK_THROWS_AS(parseRational("1/"), Error);
  CHECK_THROWS_AS(parseRational("1.2.3"), Error);
}

TEST_CASE("fixture g0 equals the built family graph") {
  Tvg parsed = loadFile(kFixtures + "/g0.tvg");
  Tvg built = buildFamilyGraph(0);
  CHECK(serialize(parsed) == serialize(built));
  CHECK(contentHash(parsed) == contentHash(built));
}

TEST_CASE("fixture g1 equals the built family graph") {
  Tvg parsed = loadFile(kFixtures + "/g1.tvg");
  Tvg built = buildFamilyGraph(1);
  CHECK(serialize(parsed) == serialize(built));
}

TEST_CASE("round trip identity and idempotence") {
  for (const std::string name : {"/g0.tvg", "/g1.tvg"}) {
    Tvg g = loadFile(kFixtures + name);
    std::string once = serialize(g);
    std::string twice = serialize(parse(once));
    CHECK(once == twice);
    CHECK(serialize(parse(twice)) == twice);
  }
}

TEST_CASE("serialization is canonical regardless of input order") {
  std::string shuffled =
      "tvg 1\n"
      "zeta 1\n"
      "period 4\n"
      "node y\n"
      "node v\n"
      "node x\n"
      "node u\n"
      "edge e4 y v [3,4]\n"
      "edge e2 u y [0,1]\n"
      "edge e3 x v [2,3]\n"
      "edge e1 u x [0,1]\n";
  CHECK(serialize(parse(shuffled)) == serialize(buildFamilyGraph(0)));
}

TEST_CASE("rationals survive the round trip exactly") {
  std::string doc =
      "tvg 1\n"
      "zeta 1/4\n"
      "period 7/2\n"
      "node a\n"
      "node b\n"
      "edge e a b [1/8,0.5] [2,9/4]\n";
  Tvg g = parse(doc);
  CHECK(g.zeta() == Rat(1, 4));
  CHECK(g.schedule(0).period == Rat(7, 2));
  CHECK(g.schedule(0).intervals[0].start == Rat(1, 8));
  CHECK(g.schedule(0).intervals[0].end == Rat(1, 2));
  CHECK(serialize(parse(serialize(g))) == serialize(g));
}

TEST_CASE("explicit horizon header round trips") {
  std::string doc =
      "tvg 1\n"
      "zeta 1\n"
      "horizon 10 recurrent\n"
      "node a\n"
      "node b\n"
      "edge e a b [0,1] [4,5]\n";
  Tvg g = parse(doc);
  CHECK(g.schedule(0).kind == Schedule::Kind::Explicit);
  CHECK(g.schedule(0).horizon == Rat(10));
  CHECK(g.schedule(0).recurrent);
  CHECK(serialize(parse(serialize(g))) == serialize(g));
}

TEST_CASE("every invalid fixture is rejected") {
  for (const std::string name :
       {"bad_header", "bad_rational", "disconnected", "duplicate_edge",
        "missing_period", "no_intervals", "overlapping", "short_interval",
        "unknown_directive", "unknown_endpoint"}) {
    CAPTURE(name);
    CHECK_THROWS_AS((void)loadFile(kFixtures + "/invalid/" + name + ".tvg"),
                    Error);
  }
}

TEST_CASE("parse errors carry positions and name the offender") {
  try {
    (void)parse("tvg 1\nzeta 1\nperiod 4\nnode a\nnode b\nedge e a b [0,1/2]\n");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("interval shorter than zeta") !=
          std::string::npos);
    CHECK(std::string(e.what()).find("edge e") != std::string::npos);
  }
  try {
    (void)parse("tvg 1\nzeta q\n");
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col > 0);
  }
  // empty edge section on two or more nodes
  CHECK_THROWS_WITH(
      (void)parse("tvg 1\nzeta 1\nperiod 4\nnode a\nnode b\n"),
      "footprint not connected");
}

TEST_CASE("content hash distinguishes graphs and is stable") {
  std::string h0 = contentHash(buildFamilyGraph(0));
  CHECK(h0 == contentHash(buildFamilyGraph(0)));
  CHECK(h0.size() == 16);
  CHECK(h0 != contentHash(buildFamilyGraph(1)));
}
