#include <doctest.h>

#include "tvg/graph.hpp"

using namespace tvg;

namespace {

Schedule periodic(std::vector<Interval> ivs, TimeValue p) {
  Schedule s;
  s.kind = Schedule::Kind::Periodic;
  s.intervals = std::move(ivs);
  s.period = p;
  return s;
}

Tvg twoNodes(Schedule s, TimeValue zeta = Rat(1)) {
  return Tvg::create({"a", "b"}, {{"e1", "a", "b"}}, {std::move(s)}, zeta);
}

}  // namespace

TEST_CASE("create validates schedules") {
  CHECK_THROWS_WITH(twoNodes(periodic({{Rat(0), Rat(1, 2)}}, Rat(4))),
                    "edge e1: interval shorter than zeta");
  CHECK_THROWS_WITH(twoNodes(periodic({{Rat(0), Rat(2)}, {Rat(1), Rat(3)}},
                                      Rat(8))),
                    "edge e1: overlapping intervals");
  CHECK_THROWS_WITH(twoNodes(periodic({}, Rat(4))),
                    "edge e1: no presence intervals");
  CHECK_THROWS_WITH(twoNodes(periodic({{Rat(5), Rat(6)}}, Rat(4))),
                    "edge e1: interval start beyond period");
  CHECK_THROWS_WITH(twoNodes(periodic({{Rat(0), Rat(4)}}, Rat(4))),
                    "edge e1: interval length not below period");
  // wrap overlap: [3,5] mod 4 collides with [0,1]
  CHECK_THROWS_WITH(twoNodes(periodic({{Rat(0), Rat(1)}, {Rat(3), Rat(5)}},
                                      Rat(4))),
                    "edge e1: period-wrapped interval overlaps");
  CHECK_THROWS_WITH(twoNodes(periodic({{Rat(0), Rat(1)}}, Rat(4)), Rat(0)),
                    "zeta must be positive");
}

TEST_CASE("create validates footprint structure") {
  Schedule s = periodic({{Rat(0), Rat(1)}}, Rat(4));
  CHECK_THROWS_WITH(
      Tvg::create({"a"}, {{"e1", "a", "a"}}, {s}, Rat(1)),
      "edge e1: self-loop");
  CHECK_THROWS_WITH(
      Tvg::create({"a", "b"}, {{"e1", "a", "b"}, {"e2", "b", "a"}}, {s, s},
                  Rat(1)),
      "edge e2: duplicate endpoint pair");
  CHECK_THROWS_WITH(
      Tvg::create({"a", "b"}, {{"e1", "a", "c"}}, {s}, Rat(1)),
      "edge e1: unknown endpoint");
  CHECK_THROWS_WITH(
      Tvg::create({"a", "a"}, {{"e1", "a", "a"}}, {s}, Rat(1)),
      "duplicate node a");
}

TEST_CASE("presence on the family graph") {
  Tvg g0 = buildFamilyGraph(0);
  CHECK(g0.presence("e1", Rat(4)));
  CHECK(!g0.presence("e1", Rat(2)));
  // closed-interval boundaries are inclusive
  CHECK(g0.presence("e1", Rat(0)));
  CHECK(g0.presence("e1", Rat(1)));
  CHECK(!g0.presence("e1", Rat(3, 2)));
  CHECK(g0.presence("e4", Rat(3)));
  CHECK(!g0.presence("e4", Rat(5)));
  CHECK_THROWS_WITH((void)g0.presence("e9", Rat(0)), "no such edge: e9");

  Tvg g1 = buildFamilyGraph(1);
  CHECK(g1.presence("e4", Rat(5)));  // 5 mod 8 = 4*1+1
  CHECK(g1.presence("e4", Rat(3)));
  CHECK(!g1.presence("e4", Rat(9, 2)));
}

TEST_CASE("periodic presence repeats exactly") {
  Tvg g1 = buildFamilyGraph(1);
  TimeValue p = Rat(8);
  for (const Edge& e : g1.edges()) {
    for (long long eighth = 0; eighth < 64; ++eighth) {
      TimeValue t(eighth, 8);
      for (int k = 1; k <= 3; ++k)
        CHECK(g1.presence(e.id, t) == g1.presence(e.id, t + Rat(k) * p));
    }
  }
}

TEST_CASE("nextCrossingStart") {
  Tvg g0 = buildFamilyGraph(0);
  CHECK(g0.nextCrossingStart("e3", Rat(0)) == Rat(2));
  CHECK(g0.nextCrossingStart("e1", Rat(0)) == Rat(0));
  CHECK(g0.nextCrossingStart("e1", Rat(1, 2)) == Rat(4));
  CHECK(g0.nextCrossingStart("e4", Rat(4)) == Rat(7));

  // returned s fits a full crossing and no earlier start in [t, s) does
  for (const Edge& e : g0.edges()) {
    for (long long eighth = 0; eighth < 64; ++eighth) {
      TimeValue t(eighth, 8);
      auto s = g0.nextCrossingStart(e.id, t);
      REQUIRE(s.has_value());
      CHECK(*s >= t);
      std::size_t ei = g0.edgeIndex(e.id);
      auto iv = g0.presenceInterval(ei, *s);
      REQUIRE(iv.has_value());
      CHECK(iv->contains(*s + g0.zeta()));
      if (*s > t) {
        // any earlier candidate either misses presence or truncates the window
        auto ivt = g0.presenceInterval(ei, t);
        CHECK((!ivt.has_value() || ivt->end - t < g0.zeta()));
      }
    }
  }
}

TEST_CASE("explicit schedules respect the horizon") {
  Schedule s;
  s.kind = Schedule::Kind::Explicit;
  s.intervals = {{Rat(0), Rat(1)}, {Rat(3), Rat(4)}};
  s.horizon = Rat(10);
  Tvg g = twoNodes(s);
  CHECK(g.nextCrossingStart("e1", Rat(2)) == Rat(3));
  CHECK(!g.nextCrossingStart("e1", Rat(5)).has_value());
  CHECK(!g.presence("e1", Rat(7)));
}

TEST_CASE("footprint") {
  Tvg g0 = buildFamilyGraph(0);
  StaticGraph fp = g0.footprint();
  CHECK(fp.nodes == std::vector<std::string>{"u", "v", "x", "y"});
  CHECK(fp.edges.size() == 4);
  CHECK(fp.connected);

  Tvg line = buildLineGraph(3, Rat(10));
  StaticGraph lfp = line.footprint();
  CHECK(lfp.nodes.size() == 3);
  CHECK(lfp.edges.size() == 2);
  CHECK(lfp.connected);
}

TEST_CASE("classify on the family graphs") {
  ClassReport r0 = buildFamilyGraph(0).classify();
  CHECK(r0.in_R);
  CHECK(r0.min_delta == Rat(4));
  CHECK(r0.min_period == Rat(4));
  for (int i = 1; i <= 5; ++i) {
    ClassReport ri = buildFamilyGraph(i).classify();
    CHECK(ri.in_R);
    CHECK(ri.min_period == Rat(4 * (i + 1)));
    REQUIRE(ri.min_delta.has_value());
    CHECK(*ri.min_delta <= *ri.min_period);
  }
}

TEST_CASE("classify reduces an inflated period") {
  // same schedule stored with period 8 instead of its true period 4
  Schedule s = periodic({{Rat(0), Rat(1)}, {Rat(4), Rat(5)}}, Rat(8));
  Tvg g = twoNodes(s);
  ClassReport r = g.classify();
  CHECK(r.min_period == Rat(4));
  CHECK(r.min_delta == Rat(4));
}

TEST_CASE("classify on always-present edge") {
  // single interval spanning (almost) the whole period: no gap to wait out
  Schedule s;
  s.kind = Schedule::Kind::Explicit;
  s.intervals = {{Rat(0), Rat(10)}};
  s.horizon = Rat(10);
  s.recurrent = true;
  Tvg g = twoNodes(s);
  ClassReport r = g.classify();
  CHECK(r.in_R);
  CHECK(r.min_delta == Rat(0));
}

TEST_CASE("classify rejects disconnected footprints") {
  Schedule s = periodic({{Rat(0), Rat(1)}}, Rat(4));
  Tvg g = Tvg::create({"a", "b", "c", "d"},
                      {{"e1", "a", "b"}, {"e2", "c", "d"}}, {s, s}, Rat(1));
  CHECK_THROWS_WITH((void)g.classify(), "footprint not connected");
  CHECK(!g.footprint().connected);
}

TEST_CASE("line graph builder") {
  Tvg line = buildLineGraph(5, Rat(100));
  CHECK(line.nodeCount() == 5);
  CHECK(line.edgeCount() == 4);
  CHECK(line.footprint().connected);
  ClassReport r = line.classify();
  CHECK(r.in_R);
  CHECK_THROWS_WITH((void)buildLineGraph(1, Rat(10)),
                    "line graph needs at least two nodes");
}
