#include "tvg/protocols.hpp"

#include <algorithm>
#include <set>

#include "tvg/journey.hpp"

namespace tvg::proto {

const std::vector<std::string> kProtocolNames = {
    "foremost-n",     "foremost-delta",  "foremost-n-delta",
    "foremost-n-reuse", "shortest-delta", "shortest-n-delta",
    "shortest-reuse", "fastest-p",       "count-nodes"};

namespace {

using sim::Api;
using sim::Message;
using sim::MsgClass;
using sim::Process;

nlohmann::json ratJson(const TimeValue& t) {
  return nlohmann::json{{"num", t.num()}, {"den", t.den()}};
}

TimeValue jsonRat(const nlohmann::json& j) {
  return TimeValue(j.at("num").get<long long>(), j.at("den").get<long long>());
}

Message controlMsg(const std::string& type) {
  Message m;
  m.type = type;
  m.cls = MsgClass::Control;
  return m;
}

void record(BroadcastOutcome* out, Api& api, const std::string& parentEdge,
            long long depth) {
  NodeResult r;
  r.delivery = api.now();
  r.parentEdge = parentEdge;
  r.depth = depth;
  out->nodes[api.self()] = r;
}

// Flooding dissemination used by the foremost protocols and the probe phase
// of fastest-p: send on every present or newly appearing edge not known to
// lead to an informed node; a detected loss unmarks the edge so the next
// appearance triggers a resend.
struct Flood {
  std::string type = "information";
  MsgClass cls = MsgClass::Information;
  std::set<std::string> marked;
  bool informed = false;
  long long depth = 0;

  Message make() const {
    Message m;
    m.type = type;
    m.cls = cls;
    m.payload["depth"] = depth;
    return m;
  }
  void sendOn(Api& api, const std::string& e) {
    api.send(e, make());
    marked.insert(e);
  }
  void sendAll(Api& api) {
    for (const std::string& e : api.I_now())
      if (!marked.count(e)) sendOn(api, e);
  }
  void appearance(Api& api, const std::string& e) {
    if (informed && !marked.count(e)) sendOn(api, e);
  }
  void loss(const std::string& e, const Message& m) {
    if (m.type == type) marked.erase(e);
  }
  bool deliver(Api& api, const std::string& e, const Message& m) {
    marked.insert(e);
    if (informed) return false;
    informed = true;
    depth = m.payload.at("depth").get<long long>() + 1;
    sendAll(api);
    return true;
  }
};

class ForemostN : public Process {
 public:
  ForemostN(BroadcastOutcome* out, bool emitter, long long n)
      : out_(out), emitter_(emitter), n_(n) {}

  void onInit(Api& api) override {
    if (!emitter_) return;
    flood_.informed = true;
    record(out_, api, "", 0);
    flood_.sendAll(api);
  }
  void onAppearance(Api& api, const std::string& e) override {
    flood_.appearance(api, e);
  }
  void onLoss(Api&, const std::string& e, const Message& m) override {
    flood_.loss(e, m);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type == "information") {
      if (flood_.deliver(api, e, m)) {
        parent_ = e;
        record(out_, api, e, flood_.depth);
        api.sendRetry(e, controlMsg("notification"));
      }
    } else if (m.type == "notification") {
      if (emitter_) {
        if (++nbNotifications_ == n_ - 1) {
          out_->terminated = true;
          out_->terminationDate = api.now();
          api.terminate();
        }
      } else {
        api.sendRetry(parent_, controlMsg("notification"));
      }
    }
  }

 private:
  BroadcastOutcome* out_;
  bool emitter_;
  long long n_;
  long long nbNotifications_ = 0;
  std::string parent_;
  Flood flood_;
};

class ForemostDelta : public Process {
 public:
  ForemostDelta(BroadcastOutcome* out, bool emitter, TimeValue delta)
      : out_(out), emitter_(emitter), delta_(std::move(delta)) {}

  void onInit(Api& api) override {
    if (!emitter_) return;
    flood_.informed = true;
    record(out_, api, "", 0);
    flood_.sendAll(api);
  }
  void onAppearance(Api& api, const std::string& e) override {
    flood_.appearance(api, e);
  }
  void onLoss(Api&, const std::string& e, const Message& m) override {
    flood_.loss(e, m);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type == "information") {
      if (flood_.deliver(api, e, m)) {
        parent_ = e;
        record(out_, api, e, flood_.depth);
        api.sendRetry(e, controlMsg("affiliation"));
        api.scheduleAt(api.now() + delta_ + delta_, "leaf");
      }
    } else if (m.type == "affiliation") {
      ++nbChildren_;
      flood_.marked.insert(e);
    } else if (m.type == "notification") {
      ++nbNotifications_;
      if (nbNotifications_ == nbChildren_) finish(api);
    }
  }
  void onTimer(Api& api, const std::string& tag) override {
    if (tag == "leaf" && nbChildren_ == 0) finish(api);
  }

 private:
  void finish(Api& api) {
    if (done_) return;
    done_ = true;
    if (emitter_) {
      out_->terminated = true;
      out_->terminationDate = api.now();
      api.terminate();
    } else {
      api.sendRetry(parent_, controlMsg("notification"));
    }
  }

  BroadcastOutcome* out_;
  bool emitter_;
  TimeValue delta_;
  std::string parent_;
  long long nbChildren_ = 0;
  long long nbNotifications_ = 0;
  bool done_ = false;
  Flood flood_;
};

class ForemostNDelta : public Process {
 public:
  ForemostNDelta(BroadcastOutcome* out, bool emitter, long long n,
                 TimeValue delta)
      : out_(out), emitter_(emitter), n_(n), delta_(std::move(delta)) {}

  void onInit(Api& api) override {
    if (!emitter_) return;
    flood_.informed = true;
    record(out_, api, "", 0);
    flood_.sendAll(api);
    api.scheduleAt(api.now() + delta_ * Rat(n_ - 1), "done");
  }
  void onAppearance(Api& api, const std::string& e) override {
    flood_.appearance(api, e);
  }
  void onLoss(Api&, const std::string& e, const Message& m) override {
    flood_.loss(e, m);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type == "information" && flood_.deliver(api, e, m))
      record(out_, api, e, flood_.depth);
  }
  void onTimer(Api& api, const std::string& tag) override {
    if (tag != "done") return;
    out_->terminated = true;
    out_->terminationDate = api.now();
    api.terminate();
  }

 private:
  BroadcastOutcome* out_;
  bool emitter_;
  long long n_;
  TimeValue delta_;
  Flood flood_;
};

class ForemostNReuse : public Process {
 public:
  ForemostNReuse(BroadcastOutcome* out, bool emitter, std::string treeParent,
                 long long childCount)
      : out_(out),
        emitter_(emitter),
        treeParent_(std::move(treeParent)),
        childCount_(childCount) {}

  void onInit(Api& api) override {
    if (!emitter_) return;
    flood_.informed = true;
    record(out_, api, "", 0);
    flood_.sendAll(api);
    maybeNotify(api);
  }
  void onAppearance(Api& api, const std::string& e) override {
    flood_.appearance(api, e);
  }
  void onLoss(Api&, const std::string& e, const Message& m) override {
    flood_.loss(e, m);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type == "information") {
      if (flood_.deliver(api, e, m)) {
        record(out_, api, e, flood_.depth);
        maybeNotify(api);
      }
    } else if (m.type == "notification") {
      ++nbNotifications_;
      maybeNotify(api);
    }
  }

 private:
  void maybeNotify(Api& api) {
    if (done_ || !flood_.informed || nbNotifications_ < childCount_) return;
    done_ = true;
    if (emitter_) {
      out_->terminated = true;
      out_->terminationDate = api.now();
      api.terminate();
    } else {
      api.sendRetry(treeParent_, controlMsg("notification"));
    }
  }

  BroadcastOutcome* out_;
  bool emitter_;
  std::string treeParent_;
  long long childCount_;
  long long nbNotifications_ = 0;
  bool done_ = false;
  Flood flood_;
};

// Round-confined dissemination shared by shortest-delta (explicit
// termination) and shortest-n-delta (implicit deadline at t0 + n*delta).
class Shortest : public Process {
 public:
  Shortest(BroadcastOutcome* out, bool emitter, TimeValue delta, bool control,
           std::optional<long long> nDeadline)
      : out_(out),
        emitter_(emitter),
        delta_(std::move(delta)),
        control_(control),
        nDeadline_(nDeadline) {}

  void onInit(Api& api) override {
    if (!emitter_) return;
    adopted_ = true;
    roundStart_ = api.now();
    record(out_, api, "", 0);
    startRound(api);
    // The emitter has no leaf check; it terminates on its children's
    // notifications (explicit) or at the deadline (implicit).
    if (!control_) api.scheduleAt(roundStart_ + delta_ * Rat(*nDeadline_), "done");
  }
  void onAppearance(Api& api, const std::string& e) override {
    if (informed_ && !marked_.count(e)) sendDuration(api, e);
  }
  void onLoss(Api&, const std::string& e, const Message& m) override {
    if (m.type == "duration") marked_.erase(e);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type == "duration") {
      marked_.insert(e);
      if (!adopted_) {
        candidates_.push_back(
            {api.now() + jsonRat(m.payload.at("value")), e,
             m.payload.at("depth").get<long long>()});
        if (!adoptPending_) {
          adoptPending_ = true;
          api.scheduleAt(api.now(), "adopt");
        }
      }
    } else if (m.type == "affiliation") {
      children_.insert(e);
    } else if (m.type == "notification") {
      ++nbNotifications_;
      if (nbNotifications_ == (long long)children_.size()) finish(api);
    }
  }
  void onTimer(Api& api, const std::string& tag) override {
    if (tag == "adopt") {
      adoptPending_ = false;
      if (adopted_) return;
      const Candidate* best = &candidates_.front();
      for (const Candidate& c : candidates_)
        if (c.roundStart < best->roundStart ||
            (c.roundStart == best->roundStart && c.edge < best->edge))
          best = &c;
      adopted_ = true;
      parent_ = best->edge;
      roundStart_ = std::max(best->roundStart, api.now());
      depth_ = best->depth + 1;
      record(out_, api, parent_, depth_);
      if (control_) api.sendRetry(parent_, controlMsg("affiliation"));
      api.scheduleAt(roundStart_, "round");
      if (control_) api.scheduleAt(roundStart_ + delta_ + delta_, "leaf");
      candidates_.clear();
    } else if (tag == "round") {
      startRound(api);
    } else if (tag == "leaf") {
      if (children_.empty() && !emitter_) finish(api);
    } else if (tag == "done") {
      out_->terminated = true;
      out_->terminationDate = api.now();
      api.terminate();
    }
  }

 private:
  struct Candidate {
    TimeValue roundStart;
    std::string edge;
    long long depth;
  };

  void startRound(Api& api) {
    informed_ = true;
    for (const std::string& e : api.I_now())
      if (!marked_.count(e)) sendDuration(api, e);
  }
  void sendDuration(Api& api, const std::string& e) {
    Message m;
    m.type = "duration";
    m.cls = MsgClass::Information;
    m.durationSub = true;
    m.payload["value"] = ratJson(roundStart_ - api.now() + delta_ - api.zeta());
    m.payload["depth"] = depth_;
    api.send(e, std::move(m));
    marked_.insert(e);
  }
  void finish(Api& api) {
    if (done_) return;
    done_ = true;
    if (emitter_) {
      out_->terminated = true;
      out_->terminationDate = api.now();
      api.terminate();
    } else {
      api.sendRetry(parent_, controlMsg("notification"));
    }
  }

  BroadcastOutcome* out_;
  bool emitter_;
  TimeValue delta_;
  bool control_;
  std::optional<long long> nDeadline_;
  bool adopted_ = false;
  bool adoptPending_ = false;
  bool informed_ = false;
  bool done_ = false;
  std::string parent_;
  TimeValue roundStart_;
  long long depth_ = 0;
  std::set<std::string> marked_;
  std::set<std::string> children_;
  long long nbNotifications_ = 0;
  std::vector<Candidate> candidates_;
};

// Forwards the information along a memorized tree with send_retry; implicit
// termination at the emitter after deadlineOffset.
class TreeForward : public Process {
 public:
  TreeForward(BroadcastOutcome* out, bool emitter,
              std::vector<std::string> childEdges, std::string parentEdge,
              long long depth, TimeValue deadlineOffset)
      : out_(out),
        emitter_(emitter),
        childEdges_(std::move(childEdges)),
        parentEdge_(std::move(parentEdge)),
        depth_(depth),
        deadline_(std::move(deadlineOffset)) {}

  void onInit(Api& api) override {
    if (!emitter_) return;
    record(out_, api, "", 0);
    forward(api);
    api.scheduleAt(api.now() + deadline_, "done");
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type != "information" || informed_) return;
    informed_ = true;
    record(out_, api, e, depth_);
    forward(api);
  }
  void onTimer(Api& api, const std::string& tag) override {
    if (tag != "done") return;
    out_->terminated = true;
    out_->terminationDate = api.now();
    api.terminate();
  }

 private:
  void forward(Api& api) {
    for (const std::string& e : childEdges_) {
      Message m;
      m.type = "information";
      m.cls = MsgClass::Information;
      m.payload["depth"] = depth_ + 1;
      api.sendRetry(e, std::move(m));
    }
  }

  BroadcastOutcome* out_;
  bool emitter_;
  bool informed_ = false;
  std::vector<std::string> childEdges_;
  std::string parentEdge_;
  long long depth_;
  TimeValue deadline_;
};

// fastest-p: probe flood with schedule-collection convergecast (phase A/B),
// then a foremost information flood from the computed optimal date with
// implicit termination at start + eccentricity (phase C).
class FastestP : public Process {
 public:
  FastestP(BroadcastOutcome* out, bool emitter, TimeValue pKnown, TimeValue t0)
      : out_(out), emitter_(emitter), p_(std::move(pKnown)), t0_(std::move(t0)) {
    probe_.type = "probe-info";
    probe_.cls = MsgClass::Probe;
  }

  void onInit(Api& api) override {
    if (!emitter_) return;
    probe_.informed = true;
    probe_.sendAll(api);
  }
  void onAppearance(Api& api, const std::string& e) override {
    probe_.appearance(api, e);
    info_.appearance(api, e);
  }
  void onLoss(Api&, const std::string& e, const Message& m) override {
    probe_.loss(e, m);
    info_.loss(e, m);
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type == "probe-info") {
      if (probe_.deliver(api, e, m)) {
        parent_ = e;
        Message aff;
        aff.type = "probe-affiliation";
        aff.cls = MsgClass::Probe;
        api.sendRetry(e, std::move(aff));
        api.scheduleAt(api.now() + p_ + p_, "pleaf");
      }
    } else if (m.type == "probe-affiliation") {
      ++nbChildren_;
      probe_.marked.insert(e);
    } else if (m.type == "report") {
      for (auto it = m.payload.at("edges").begin();
           it != m.payload.at("edges").end(); ++it)
        edges_[it.key()] = it.value();
      ++nbReports_;
      if (nbReports_ == nbChildren_) {
        if (emitter_)
          computePlan(api);
        else
          sendReport(api);
      }
    } else if (m.type == "information") {
      if (info_.deliver(api, e, m)) record(out_, api, e, info_.depth);
    }
  }
  void onTimer(Api& api, const std::string& tag) override {
    if (tag == "pleaf") {
      if (nbChildren_ == 0) sendReport(api);
    } else if (tag == "bcast") {
      info_.informed = true;
      record(out_, api, "", 0);
      info_.sendAll(api);
    } else if (tag == "done") {
      out_->terminated = true;
      out_->terminationDate = api.now();
      api.terminate();
    }
  }

 private:
  void addOwnSchedules(Api& api) {
    for (const std::string& e : api.incidentEdges()) {
      if (edges_.count(e)) continue;
      Schedule s = api.observedSchedule(e);
      nlohmann::json j;
      j["u"] = api.self();
      j["v"] = api.peer(e);
      j["period"] = ratJson(s.period);
      nlohmann::json ivs = nlohmann::json::array();
      for (const Interval& iv : s.intervals)
        ivs.push_back(nlohmann::json::array({ratJson(iv.start), ratJson(iv.end)}));
      j["intervals"] = ivs;
      edges_[e] = std::move(j);
    }
  }
  void sendReport(Api& api) {
    if (reported_) return;
    reported_ = true;
    addOwnSchedules(api);
    Message m;
    m.type = "report";
    m.cls = MsgClass::Probe;
    nlohmann::json ed = nlohmann::json::object();
    for (const auto& [id, j] : edges_) ed[id] = j;
    m.payload["edges"] = std::move(ed);
    api.sendRetry(parent_, std::move(m));
  }
  void computePlan(Api& api) {
    if (planned_) return;
    planned_ = true;
    addOwnSchedules(api);
    std::set<std::string> names;
    std::vector<Edge> edgeList;
    std::vector<Schedule> schedules;
    for (const auto& [id, j] : edges_) {
      Edge e{id, j.at("u").get<std::string>(), j.at("v").get<std::string>()};
      names.insert(e.u);
      names.insert(e.v);
      Schedule s;
      s.kind = Schedule::Kind::Periodic;
      s.period = jsonRat(j.at("period"));
      for (const auto& iv : j.at("intervals"))
        s.intervals.push_back({jsonRat(iv.at(0)), jsonRat(iv.at(1))});
      edgeList.push_back(std::move(e));
      schedules.push_back(std::move(s));
    }
    Tvg learned = Tvg::create({names.begin(), names.end()},
                              std::move(edgeList), std::move(schedules),
                              api.zeta());
    EccentricityDate best =
        minEccentricityDate(learned, api.self(), api.now(), p_);
    out_->broadcastStart = best.date;
    out_->eccentricity = best.ecc;
    api.scheduleAt(best.date, "bcast");
    api.scheduleAt(best.date + best.ecc, "done");
  }

  BroadcastOutcome* out_;
  bool emitter_;
  TimeValue p_;
  TimeValue t0_;
  Flood probe_;
  Flood info_;
  std::string parent_;
  long long nbChildren_ = 0;
  long long nbReports_ = 0;
  bool reported_ = false;
  bool planned_ = false;
  std::map<std::string, nlohmann::json> edges_;
};

// Depth-first token circulation counting nodes; the token waits delta at each
// newly visited node so the node can observe all its incident edges.
class CountProc : public Process {
 public:
  CountProc(CountResult* result, bool initiator, TimeValue delta)
      : result_(result), initiator_(initiator), delta_(std::move(delta)) {}

  void onInit(Api& api) override {
    if (!initiator_) return;
    visited_.insert(api.self());
    startDiscovery(api);
  }
  void onAppearance(Api& api, const std::string& e) override {
    if (discovering_) neighbors_[api.peer(e)] = e;
  }
  void onDeliver(Api& api, const std::string& e, const Message& m) override {
    if (m.type != "token") return;
    std::set<std::string> incoming;
    for (const auto& v : m.payload.at("visited"))
      incoming.insert(v.get<std::string>());
    visited_ = std::move(incoming);
    if (!started_) {
      parent_ = e;
      visited_.insert(api.self());
      startDiscovery(api);
    } else {
      act(api);
    }
  }
  void onTimer(Api& api, const std::string& tag) override {
    if (tag != "discovered") return;
    discovering_ = false;
    act(api);
  }

 private:
  void startDiscovery(Api& api) {
    started_ = true;
    discovering_ = true;
    for (const std::string& e : api.I_now()) neighbors_[api.peer(e)] = e;
    api.scheduleAt(api.now() + delta_, "discovered");
  }
  void act(Api& api) {
    for (const auto& [peer, edge] : neighbors_) {
      if (visited_.count(peer)) continue;
      visited_.insert(peer);  // the token marks the target on arrival; pre-
                              // marking keeps the carried set consistent
      sendToken(api, edge);
      return;
    }
    if (initiator_) {
      result_->n = (long long)visited_.size();
      result_->finish = api.now();
      result_->terminated = true;
      api.terminate();
    } else {
      sendToken(api, parent_);
    }
  }
  void sendToken(Api& api, const std::string& edge) {
    Message m;
    m.type = "token";
    m.cls = MsgClass::Probe;
    nlohmann::json arr = nlohmann::json::array();
    for (const std::string& v : visited_) arr.push_back(v);
    m.payload["visited"] = std::move(arr);
    api.sendRetry(edge, std::move(m));
  }

  CountResult* result_;
  bool initiator_;
  TimeValue delta_;
  bool started_ = false;
  bool discovering_ = false;
  std::string parent_;
  std::map<std::string, std::string> neighbors_;  // peer node -> edge
  std::set<std::string> visited_;
};

struct GuardEntry {
  const char* protocol;
  const char* message;
};

const GuardEntry kGuards[] = {
    {"shortest-n", "shortest broadcast knowing only n is infeasible, Theorem 6"},
    {"fastest-n", "fastest broadcast knowing only n is infeasible, Theorem 8"},
    {"fastest-delta",
     "fastest broadcast knowing only delta is infeasible, Theorem 8"},
    {"fastest-n-delta",
     "fastest broadcast knowing only n and delta is infeasible, Theorem 8"},
};

// Children edges per node under a prior outcome's tree.
std::map<std::string, std::vector<std::string>> childEdges(
    const Tvg& g, const BroadcastOutcome& prior) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [node, res] : prior.nodes) {
    if (res.parentEdge.empty()) continue;
    std::size_t e = g.edgeIndex(res.parentEdge);
    std::size_t parent = g.otherEndpoint(e, g.nodeIndex(node));
    out[g.nodes()[parent]].push_back(res.parentEdge);
  }
  for (auto& [node, edges] : out) std::sort(edges.begin(), edges.end());
  return out;
}

void requirePriorTree(const Tvg& g, const BroadcastOutcome& prior,
                      const std::string& emitter) {
  if (prior.emitter != emitter)
    throw Error("prior tree rooted at a different emitter");
  if (prior.nodes.size() != g.nodeCount())
    throw Error("prior tree not spanning");
  for (const std::string& n : g.nodes())
    if (!prior.nodes.count(n)) throw Error("prior tree not spanning");
}

void finishOutcome(const sim::Engine& eng, sim::RunStats stats,
                   BroadcastOutcome& out) {
  out.stats = std::move(stats);
  out.durationSent = out.stats.durationSub;
  for (const sim::MessageRecord& r : eng.messages()) {
    if (r.msg.type == "affiliation") ++out.affiliationSent;
    if (r.msg.type == "notification") ++out.notificationSent;
  }
  out.treeDepth = 0;
  for (const auto& [node, res] : out.nodes)
    out.treeDepth = std::max(out.treeDepth, res.depth);
}

}  // namespace

void validateConfig(const Tvg& g, const std::string& protocol,
                    const std::string& emitter, const KnowledgeSpec& k) {
  for (const GuardEntry& entry : kGuards)
    if (protocol == entry.protocol) throw InfeasibleError(entry.message);
  if (std::find(kProtocolNames.begin(), kProtocolNames.end(), protocol) ==
      kProtocolNames.end())
    throw Error("unknown protocol: " + protocol);
  if (!g.hasNode(emitter)) throw Error("no such node: " + emitter);

  ClassReport report = g.classify();
  if (!report.in_R) throw Error("graph is not recurrent");

  bool needsN = protocol == "foremost-n" || protocol == "foremost-n-delta" ||
                protocol == "foremost-n-reuse" || protocol == "shortest-n-delta";
  bool needsDelta = protocol == "foremost-delta" ||
                    protocol == "foremost-n-delta" ||
                    protocol == "shortest-delta" ||
                    protocol == "shortest-n-delta" ||
                    protocol == "shortest-reuse" || protocol == "count-nodes";
  if (needsN) {
    if (!k.n) throw Error(protocol + " requires knowledge n");
    if (*k.n != (long long)g.nodeCount())
      throw Error("knowledge n does not match the node count");
  }
  if (needsDelta) {
    if (!k.delta) throw Error(protocol + " requires knowledge delta");
    if (!report.min_delta || *k.delta < *report.min_delta)
      throw Error("delta is not a valid recurrence bound for this graph");
  }
  if (protocol == "fastest-p") {
    if (!report.min_period) throw Error("fastest-p requires a periodic graph");
    if (!k.p && !k.p_upper)
      throw Error("fastest-p requires knowledge p or p_upper");
    if (k.p && !(k.p->mod(*report.min_period) == Rat(0)))
      throw Error("p is not a multiple of the graph period");
    if (k.p_upper && *k.p_upper < *report.min_period)
      throw Error("p_upper is below the graph period");
  }
}

BroadcastOutcome run(const Tvg& g, const RunConfig& cfg) {
  validateConfig(g, cfg.protocol, cfg.emitter, cfg.knowledge);
  if (!(cfg.t0 < cfg.horizon)) throw Error("horizon must exceed t0");

  BroadcastOutcome out;
  out.protocol = cfg.protocol;
  out.emitter = cfg.emitter;
  out.t0 = cfg.t0;
  out.horizon = cfg.horizon;
  out.broadcastStart = cfg.t0;

  sim::Engine eng(g, cfg.t0, cfg.horizon);
  eng.setTrace(cfg.trace);
  const KnowledgeSpec& k = cfg.knowledge;

  std::map<std::string, std::vector<std::string>> children;
  if (cfg.protocol == "foremost-n-reuse" || cfg.protocol == "shortest-reuse") {
    if (!cfg.prior) throw Error(cfg.protocol + " requires a prior outcome");
    requirePriorTree(g, *cfg.prior, cfg.emitter);
    children = childEdges(g, *cfg.prior);
  }

  for (const std::string& node : g.nodes()) {
    bool emitter = node == cfg.emitter;
    std::unique_ptr<sim::Process> p;
    if (cfg.protocol == "foremost-n") {
      p = std::make_unique<ForemostN>(&out, emitter, *k.n);
    } else if (cfg.protocol == "foremost-delta") {
      p = std::make_unique<ForemostDelta>(&out, emitter, *k.delta);
    } else if (cfg.protocol == "foremost-n-delta") {
      p = std::make_unique<ForemostNDelta>(&out, emitter, *k.n, *k.delta);
    } else if (cfg.protocol == "foremost-n-reuse") {
      const NodeResult& prior = cfg.prior->nodes.at(node);
      auto it = children.find(node);
      long long nkids = it == children.end() ? 0 : (long long)it->second.size();
      p = std::make_unique<ForemostNReuse>(&out, emitter, prior.parentEdge,
                                           nkids);
    } else if (cfg.protocol == "shortest-delta") {
      p = std::make_unique<Shortest>(&out, emitter, *k.delta, true,
                                     std::nullopt);
    } else if (cfg.protocol == "shortest-n-delta") {
      p = std::make_unique<Shortest>(&out, emitter, *k.delta, false, *k.n);
    } else if (cfg.protocol == "shortest-reuse") {
      const NodeResult& prior = cfg.prior->nodes.at(node);
      auto it = children.find(node);
      std::vector<std::string> kids =
          it == children.end() ? std::vector<std::string>{} : it->second;
      p = std::make_unique<TreeForward>(
          &out, emitter, std::move(kids), prior.parentEdge, prior.depth,
          *k.delta * Rat(cfg.prior->treeDepth));
    } else if (cfg.protocol == "fastest-p") {
      TimeValue pk = k.p ? *k.p : *k.p_upper;
      p = std::make_unique<FastestP>(&out, emitter, pk, cfg.t0);
    } else {
      throw Error("unknown protocol: " + cfg.protocol);
    }
    eng.setProcess(node, std::move(p));
  }

  sim::RunStats stats = eng.run();
  finishOutcome(eng, std::move(stats), out);
  return out;
}

BroadcastOutcome fastestReuse(const Tvg& g, const BroadcastOutcome& prior,
                              const KnowledgeSpec& k, std::ostream* trace) {
  if (prior.protocol != "fastest-p") throw Error("prior run is not fastest-p");
  requirePriorTree(g, prior, prior.emitter);
  TimeValue shift = k.p ? *k.p : (k.p_upper ? *k.p_upper : TimeValue(0));
  if (shift == Rat(0)) throw Error("fastest reuse requires knowledge p");

  BroadcastOutcome out;
  out.protocol = "fastest-reuse";
  out.emitter = prior.emitter;
  out.t0 = prior.broadcastStart + shift;
  out.broadcastStart = out.t0;
  out.eccentricity = prior.eccentricity;
  out.horizon = out.t0 + prior.eccentricity;

  sim::Engine eng(g, out.t0, out.horizon);
  eng.setTrace(trace);
  std::map<std::string, std::vector<std::string>> children =
      childEdges(g, prior);
  for (const std::string& node : g.nodes()) {
    bool emitter = node == prior.emitter;
    auto it = children.find(node);
    std::vector<std::string> kids =
        it == children.end() ? std::vector<std::string>{} : it->second;
    eng.setProcess(node, std::make_unique<TreeForward>(
                             &out, emitter, std::move(kids),
                             prior.nodes.at(node).parentEdge,
                             prior.nodes.at(node).depth, prior.eccentricity));
  }
  sim::RunStats stats = eng.run();
  finishOutcome(eng, std::move(stats), out);
  return out;
}

CountResult countNodes(const Tvg& g, const RunConfig& cfg) {
  validateConfig(g, "count-nodes", cfg.emitter, cfg.knowledge);
  if (!(cfg.t0 < cfg.horizon)) throw Error("horizon must exceed t0");
  CountResult result;
  sim::Engine eng(g, cfg.t0, cfg.horizon);
  eng.setTrace(cfg.trace);
  for (const std::string& node : g.nodes())
    eng.setProcess(node, std::make_unique<CountProc>(
                             &result, node == cfg.emitter, *cfg.knowledge.delta));
  sim::RunStats stats = eng.run();
  result.tokenSends = stats.probeSent;
  if (!result.terminated) result.finish = stats.endTime;
  return result;
}

}  // namespace tvg::proto
