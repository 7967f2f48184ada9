#include <doctest.h>

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tvg/graph.hpp"
#include "tvg/sim.hpp"

using namespace tvg;
using namespace tvg::sim;

namespace {

// Scriptable process: forwards every handler to a log and runs an optional
// init action.
struct Script : Process {
  std::function<void(Api&)> init;
  std::vector<std::string>* log = nullptr;

  void note(Api& api, const std::string& what) {
    if (log) log->push_back(api.now().str() + " " + what);
  }
  void onInit(Api& api) override {
    note(api, "init");
    if (init) init(api);
  }
  void onAppearance(Api& api, const std::string& e) override {
    note(api, "appear " + e);
  }
  void onDisappearance(Api& api, const std::string& e) override {
    note(api, "disappear " + e);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    note(api, "deliver " + m.type);
  }
  void onLoss(Api& api, const std::string& e, const Message& m) override {
    note(api, "loss " + m.type);
  }
  void onTimer(Api& api, const std::string& tag) override {
    note(api, "timer " + tag);
  }
};

Tvg pairGraph() {
  Schedule s;
  s.kind = Schedule::Kind::Explicit;
  s.intervals = {{Rat(0), Rat(2)}, {Rat(4), Rat(5)}};
  s.horizon = Rat(20);
  return Tvg::create({"a", "b"}, {{"e1", "a", "b"}}, {s}, Rat(1));
}

struct Setup {
  Tvg g = pairGraph();
  Engine eng{g, Rat(0), Rat(20)};
  std::vector<std::string> logA, logB;

  explicit Setup(std::function<void(Api&)> initA) {
    auto a = std::make_unique<Script>();
    a->init = std::move(initA);
    a->log = &logA;
    auto b = std::make_unique<Script>();
    b->log = &logB;
    eng.setProcess("a", std::move(a));
    eng.setProcess("b", std::move(b));
  }
};

bool contains(const std::vector<std::string>& log, const std::string& s) {
  for (const std::string& l : log)
    if (l == s) return true;
  return false;
}

}  // namespace

TEST_CASE("send at interval_end - zeta is delivered at interval_end") {
  Setup s(nullptr);
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      Script::onTimer(api, tag);
      api.send("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  auto snd = std::make_unique<Sender>();
  snd->log = &s.logA;
  snd->init = [](Api& api) { api.scheduleAt(Rat(1), "go"); };
  s.eng.setProcess("a", std::move(snd));
  RunStats st = s.eng.run();
  CHECK(contains(s.logB, "2 deliver m"));
  REQUIRE(s.eng.messages().size() == 1);
  CHECK(s.eng.messages()[0].status == MessageRecord::Status::Delivered);
  CHECK(s.eng.messages()[0].resolvedAt == Rat(2));
  CHECK(st.delivered == 1);
}

TEST_CASE("send one eighth later is lost at the disappearance") {
  Setup s([](Api& api) { api.scheduleAt(Rat(9, 8), "go"); });
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      api.send("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  auto snd = std::make_unique<Sender>();
  snd->log = &s.logA;
  snd->init = [](Api& api) { api.scheduleAt(Rat(9, 8), "go"); };
  s.eng.setProcess("a", std::move(snd));
  RunStats st = s.eng.run();
  CHECK(contains(s.logA, "2 loss m"));
  CHECK(!contains(s.logB, "2 deliver m"));
  REQUIRE(s.eng.messages().size() == 1);
  CHECK(s.eng.messages()[0].status == MessageRecord::Status::Lost);
  CHECK(s.eng.messages()[0].resolvedAt == Rat(2));
  CHECK(st.lost == 1);
}

TEST_CASE("send while the edge is absent is lost immediately") {
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      CHECK(!api.isPresent("e1"));
      api.send("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  Setup s(nullptr);
  auto snd = std::make_unique<Sender>();
  snd->log = &s.logA;
  snd->init = [](Api& api) { api.scheduleAt(Rat(3), "go"); };
  s.eng.setProcess("a", std::move(snd));
  s.eng.run();
  CHECK(contains(s.logA, "3 loss m"));
  CHECK(s.eng.messages()[0].resolvedAt == Rat(3));
}

TEST_CASE("send_retry during absence delivers at next appearance + zeta") {
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      api.sendRetry("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  Setup s(nullptr);
  auto snd = std::make_unique<Sender>();
  snd->log = &s.logA;
  snd->init = [](Api& api) { api.scheduleAt(Rat(3), "go"); };
  s.eng.setProcess("a", std::move(snd));
  RunStats st = s.eng.run();
  CHECK(contains(s.logB, "5 deliver m"));
  REQUIRE(s.eng.messages().size() == 1);  // one record despite the retry
  CHECK(s.eng.messages()[0].retry);
  CHECK(s.eng.messages()[0].status == MessageRecord::Status::Delivered);
  CHECK(st.delivered == 1);
  CHECK(st.lost == 0);
}

TEST_CASE("send_retry too close to a disappearance waits for the next window") {
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      CHECK(api.isPresent("e1"));
      api.sendRetry("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  Setup s(nullptr);
  auto snd = std::make_unique<Sender>();
  snd->log = &s.logA;
  snd->init = [](Api& api) { api.scheduleAt(Rat(3, 2), "go"); };
  s.eng.setProcess("a", std::move(snd));
  s.eng.run();
  CHECK(contains(s.logB, "5 deliver m"));
}

TEST_CASE("send_retry with no remaining window stays pending") {
  Schedule sch;
  sch.kind = Schedule::Kind::Explicit;
  sch.intervals = {{Rat(0), Rat(1)}};
  sch.horizon = Rat(10);
  Tvg g = Tvg::create({"a", "b"}, {{"e1", "a", "b"}}, {sch}, Rat(1));
  Engine eng(g, Rat(0), Rat(10));
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      api.sendRetry("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  auto snd = std::make_unique<Sender>();
  snd->init = [](Api& api) { api.scheduleAt(Rat(2), "go"); };
  eng.setProcess("a", std::move(snd));
  eng.setProcess("b", std::make_unique<Script>());
  RunStats st = eng.run();
  CHECK(eng.messages()[0].status == MessageRecord::Status::PendingRetry);
  CHECK(st.pending == 1);
  CHECK(st.delivered + st.lost + st.pending == st.totalSent());
}

TEST_CASE("same-instant ordering is Delivery < Disappearance < Appearance < Timer") {
  // b receives at 2 (sent at 1), e1 disappears at 2; at 4 e1 appears and a
  // timer fires: order of b's log lines decides.
  struct Sender : Script {
    void onTimer(Api& api, const std::string& tag) override {
      api.send("e1", Message{"m", {}, MsgClass::Information});
    }
  };
  Setup s(nullptr);
  auto snd = std::make_unique<Sender>();
  snd->init = [](Api& api) { api.scheduleAt(Rat(1), "go"); };
  s.eng.setProcess("a", std::move(snd));
  auto b = std::make_unique<Script>();
  b->log = &s.logB;
  b->init = [](Api& api) { api.scheduleAt(Rat(2), "t2"); api.scheduleAt(Rat(4), "t4"); };
  s.eng.setProcess("b", std::move(b));
  s.eng.run();
  std::vector<std::string> want = {"0 init",      "2 deliver m", "2 disappear e1",
                                   "2 timer t2",  "4 appear e1", "4 timer t4",
                                   "5 disappear e1"};
  CHECK(s.logB == want);
}

TEST_CASE("edges present at start emit no synthetic appearance") {
  Setup s(nullptr);
  s.eng.run();
  CHECK(s.logA.size() >= 1);
  CHECK(s.logA[0] == "0 init");
  CHECK(!contains(s.logA, "0 appear e1"));
  CHECK(contains(s.logA, "4 appear e1"));
}

TEST_CASE("I_now and presence queries") {
  Setup s([](Api& api) {
    CHECK(api.I_now() == std::vector<std::string>{"e1"});
    CHECK(api.isPresent("e1"));
    CHECK(api.peer("e1") == "b");
    CHECK(api.zeta() == Rat(1));
    CHECK(api.self() == "a");
  });
  s.eng.run();
}

TEST_CASE("sending on a non-incident edge aborts the run") {
  Schedule sch;
  sch.kind = Schedule::Kind::Periodic;
  sch.intervals = {{Rat(0), Rat(1)}};
  sch.period = Rat(4);
  Tvg g = Tvg::create({"a", "b", "c"},
                      {{"e1", "a", "b"}, {"e2", "b", "c"}}, {sch, sch}, Rat(1));
  Engine eng(g, Rat(0), Rat(10));
  struct Bad : Script {
    void onInit(Api& api) override {
      api.send("e2", Message{"m", {}, MsgClass::Information});
    }
  };
  eng.setProcess("a", std::make_unique<Bad>());
  eng.setProcess("b", std::make_unique<Script>());
  eng.setProcess("c", std::make_unique<Script>());
  CHECK_THROWS_WITH(eng.run(), "send on non-incident edge e2");
}

TEST_CASE("identical runs produce byte-identical traces") {
  auto runOnce = [](std::string& out) {
    Tvg g = buildFamilyGraph(1);
    Engine eng(g, Rat(0), Rat(32));
    struct Chatty : Script {
      void onAppearance(Api& api, const std::string& e) override {
        api.send(e, Message{"hello", {{"from", api.self()}},
                            MsgClass::Information});
      }
    };
    for (const std::string& node : g.nodes())
      eng.setProcess(node, std::make_unique<Chatty>());
    std::ostringstream os;
    eng.setTrace(&os);
    RunStats st = eng.run();
    CHECK(st.delivered + st.lost + st.pending == st.totalSent());
    out = os.str();
  };
  std::string first, second;
  runOnce(first);
  runOnce(second);
  CHECK(!first.empty());
  CHECK(first == second);
}

TEST_CASE("message class counters") {
  Setup s([](Api& api) {
    api.send("e1", Message{"i", {}, MsgClass::Information});
    api.send("e1", Message{"c", {}, MsgClass::Control});
    api.send("e1", Message{"p", {}, MsgClass::Probe});
    Message d{"d", {}, MsgClass::Information};
    d.durationSub = true;
    api.send("e1", d);
  });
  RunStats st = s.eng.run();
  CHECK(st.infoSent == 2);
  CHECK(st.controlSent == 1);
  CHECK(st.probeSent == 1);
  CHECK(st.durationSub == 1);
  CHECK(st.maxInfoPerDirection() == 2);
}
