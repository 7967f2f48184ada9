#include "tvg/verify.hpp"

#include <algorithm>
#include <deque>

#include "tvg/format.hpp"
#include "tvg/journey.hpp"

namespace tvg::verify {

namespace {

std::string ratStr(const TimeValue& t) { return t.str(); }

TimeValue ratOf(const nlohmann::json& j) {
  return parseRational(j.get<std::string>());
}

}  // namespace

std::map<std::string, long long> bfsDistances(const Tvg& g,
                                              const std::string& source) {
  std::map<std::string, long long> dist;
  dist[source] = 0;
  std::deque<std::size_t> queue{g.nodeIndex(source)};
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    long long d = dist.at(g.nodes()[u]);
    for (std::size_t e : g.incidentEdges(u)) {
      std::size_t v = g.otherEndpoint(e, u);
      if (dist.count(g.nodes()[v])) continue;
      dist[g.nodes()[v]] = d + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

nlohmann::json buildMetrics(const Tvg& g, const proto::BroadcastOutcome& out,
                            const proto::KnowledgeSpec& k) {
  nlohmann::json j;
  j["protocol"] = out.protocol;
  j["tvg_hash"] = contentHash(g);
  j["emitter"] = out.emitter;
  j["n"] = (long long)g.nodeCount();
  j["m"] = (long long)g.edgeCount();
  j["zeta"] = ratStr(g.zeta());
  j["t0"] = ratStr(out.t0);
  j["horizon"] = ratStr(out.horizon);
  j["broadcast_start"] = ratStr(out.broadcastStart);

  nlohmann::json kn = nlohmann::json::object();
  if (k.n) kn["n"] = *k.n;
  if (k.delta) kn["delta"] = ratStr(*k.delta);
  if (k.p) kn["p"] = ratStr(*k.p);
  if (k.p_upper) kn["p_upper"] = ratStr(*k.p_upper);
  j["knowledge"] = kn;

  j["terminated"] = out.terminated;
  if (out.terminated)
    j["termination_offset"] = ratStr(out.terminationDate - out.t0);
  j["info_sent"] = out.stats.infoSent;
  j["control_sent"] = out.stats.controlSent;
  j["probe_sent"] = out.stats.probeSent;
  j["delivered"] = out.stats.delivered;
  j["lost"] = out.stats.lost;
  j["pending"] = out.stats.pending;
  j["max_info_per_direction"] = out.stats.maxInfoPerDirection();
  j["sub"] = {{"affiliation", out.affiliationSent},
              {"notification", out.notificationSent},
              {"duration", out.durationSent},
              {"probe", out.stats.probeSent}};

  nlohmann::json deliveries = nlohmann::json::object();
  nlohmann::json depths = nlohmann::json::object();
  nlohmann::json parents = nlohmann::json::object();
  for (const auto& [node, res] : out.nodes) {
    deliveries[node] = ratStr(res.delivery - out.broadcastStart);
    depths[node] = res.depth;
    if (!res.parentEdge.empty()) parents[node] = res.parentEdge;
  }
  j["deliveries"] = deliveries;
  j["depths"] = depths;
  j["parents"] = parents;
  j["tree_depth"] = out.treeDepth;
  if (out.protocol == "fastest-p" || out.protocol == "fastest-reuse")
    j["eccentricity"] = ratStr(out.eccentricity);
  return j;
}

namespace {

struct Ctx {
  const Tvg& g;
  const nlohmann::json& m;
  VerificationReport& report;

  void check(const std::string& name, const std::string& expected,
             const std::string& actual) {
    report.checks.push_back({name, expected, actual, expected == actual});
  }
  void checkHolds(const std::string& name, const std::string& expected,
                  const std::string& actual, bool ok) {
    report.checks.push_back({name, expected, actual, ok});
  }
};

void checkConservation(Ctx& c) {
  std::uint64_t sent = c.m.at("info_sent").get<std::uint64_t>() +
                       c.m.at("control_sent").get<std::uint64_t>() +
                       c.m.at("probe_sent").get<std::uint64_t>();
  std::uint64_t accounted = c.m.at("delivered").get<std::uint64_t>() +
                            c.m.at("lost").get<std::uint64_t>() +
                            c.m.at("pending").get<std::uint64_t>();
  c.check("message conservation", std::to_string(sent),
          std::to_string(accounted));
}

void checkCoverage(Ctx& c) {
  const auto& deliveries = c.m.at("deliveries");
  bool all = true;
  for (const std::string& n : c.g.nodes())
    if (!deliveries.contains(n)) all = false;
  c.checkHolds("all nodes informed", "every node delivered",
               all ? "every node delivered" : "some node never delivered",
               all);
  if (!all || !c.m.at("terminated").get<bool>()) return;
  // No false termination: every delivery happens at or before termination.
  TimeValue start = ratOf(c.m.at("broadcast_start"));
  TimeValue t0 = ratOf(c.m.at("t0"));
  TimeValue end = t0 + ratOf(c.m.at("termination_offset"));
  bool ok = true;
  for (const auto& [node, off] : deliveries.items())
    if (end < start + ratOf(off)) ok = false;
  c.checkHolds("no false termination", "deliveries precede termination",
               ok ? "deliveries precede termination" : "late delivery", ok);
}

void checkTree(Ctx& c) {
  const auto& parents = c.m.at("parents");
  const auto& deliveries = c.m.at("deliveries");
  std::string emitter = c.m.at("emitter").get<std::string>();
  bool ok = true;
  std::string why = "spanning tree rooted at emitter";
  for (const std::string& n : c.g.nodes()) {
    if (n == emitter) continue;
    if (!parents.contains(n)) {
      ok = false;
      why = "missing parent for " + n;
      break;
    }
    // Walk to the emitter; bounded by n steps implies acyclic.
    std::string cur = n;
    std::size_t steps = 0;
    while (cur != emitter && steps <= c.g.nodeCount()) {
      std::size_t e = c.g.edgeIndex(parents.at(cur).get<std::string>());
      cur = c.g.nodes()[c.g.otherEndpoint(e, c.g.nodeIndex(cur))];
      ++steps;
    }
    if (cur != emitter) {
      ok = false;
      why = "parent chain of " + n + " does not reach the emitter";
      break;
    }
    // Child delivered at least zeta after its parent.
    std::size_t e = c.g.edgeIndex(parents.at(n).get<std::string>());
    std::string par = c.g.nodes()[c.g.otherEndpoint(e, c.g.nodeIndex(n))];
    if (deliveries.contains(n) && deliveries.contains(par)) {
      TimeValue dn = ratOf(deliveries.at(n));
      TimeValue dp = ratOf(deliveries.at(par));
      if (dn < dp + c.g.zeta()) {
        ok = false;
        why = "child " + n + " delivered within zeta of its parent";
        break;
      }
    }
  }
  c.checkHolds("tree validity", "spanning tree rooted at emitter", why, ok);
}

void checkForemostOptimal(Ctx& c) {
  std::string emitter = c.m.at("emitter").get<std::string>();
  TimeValue t0 = ratOf(c.m.at("t0"));
  DistanceVector oracle = foremost(c.g, emitter, t0);
  const auto& deliveries = c.m.at("deliveries");
  bool ok = true;
  std::string detail = "deliveries equal oracle temporal distances";
  for (const auto& [node, off] : deliveries.items()) {
    const DistanceEntry* entry = oracle.find(node);
    if (!entry || !(entry->value == ratOf(off))) {
      ok = false;
      detail = "node " + node + ": got " + off.get<std::string>() +
               ", oracle " + (entry ? entry->value.str() : "unreachable");
      break;
    }
  }
  c.checkHolds("foremost optimality", "deliveries equal oracle temporal distances",
               detail, ok);
}

void checkShortestOptimal(Ctx& c) {
  std::string emitter = c.m.at("emitter").get<std::string>();
  auto bfs = bfsDistances(c.g, emitter);
  const auto& depths = c.m.at("depths");
  bool ok = true;
  std::string detail = "depths equal footprint BFS distances";
  for (const auto& [node, d] : depths.items()) {
    if (bfs.at(node) != d.get<long long>()) {
      ok = false;
      detail = "node " + node + ": depth " + std::to_string(d.get<long long>()) +
               ", BFS " + std::to_string(bfs.at(node));
      break;
    }
  }
  c.checkHolds("shortest optimality", "depths equal footprint BFS distances",
               detail, ok);
}

void checkInfoBound(Ctx& c) {
  std::uint64_t info = c.m.at("info_sent").get<std::uint64_t>();
  std::uint64_t bound = 2 * c.m.at("m").get<std::uint64_t>();
  c.checkHolds("information bound", "info_sent <= 2m",
               std::to_string(info) + " vs " + std::to_string(bound),
               info <= bound);
  std::uint64_t perDir = c.m.at("max_info_per_direction").get<std::uint64_t>();
  c.checkHolds("per-direction information bound", "<= 1",
               std::to_string(perDir), perDir <= 1);
}

void checkControlEquals(Ctx& c, std::uint64_t expected) {
  c.check("control count", std::to_string(expected),
          std::to_string(c.m.at("control_sent").get<std::uint64_t>()));
}

void checkTerminationLe(Ctx& c, const TimeValue& bound) {
  if (!c.m.at("terminated").get<bool>()) {
    c.checkHolds("termination bound", "terminated within " + bound.str(),
                 "did not terminate", false);
    return;
  }
  TimeValue off = ratOf(c.m.at("termination_offset"));
  c.checkHolds("termination bound", "offset <= " + bound.str(), off.str(),
               !(bound < off));
}

void checkTerminationEq(Ctx& c, const TimeValue& exact) {
  if (!c.m.at("terminated").get<bool>()) {
    c.checkHolds("termination offset", exact.str(), "did not terminate", false);
    return;
  }
  c.check("termination offset", exact.str(),
          ratOf(c.m.at("termination_offset")).str());
}

}  // namespace

VerificationReport verifyMetrics(const Tvg& g, const nlohmann::json& metrics) {
  if (metrics.at("tvg_hash").get<std::string>() != contentHash(g))
    throw Error("metrics do not match this graph (tvg_hash mismatch)");

  VerificationReport report;
  Ctx c{g, metrics, report};
  std::string protocol = metrics.at("protocol").get<std::string>();
  long long n = metrics.at("n").get<long long>();
  const auto& kn = metrics.at("knowledge");

  checkConservation(c);
  checkCoverage(c);
  checkTree(c);

  if (protocol == "foremost-n" || protocol == "foremost-delta" ||
      protocol == "foremost-n-delta" || protocol == "foremost-n-reuse") {
    checkForemostOptimal(c);
    checkInfoBound(c);
    if (protocol == "foremost-n") {
      // At most one notification per tree level per node: sum of depths.
      std::uint64_t sumDepth = 0;
      for (const auto& [node, d] : metrics.at("depths").items())
        sumDepth += (std::uint64_t)d.get<long long>();
      std::uint64_t control = metrics.at("control_sent").get<std::uint64_t>();
      c.checkHolds("control bound", "<= sum of tree depths",
                   std::to_string(control) + " vs " + std::to_string(sumDepth),
                   control <= sumDepth);
    } else if (protocol == "foremost-delta") {
      checkControlEquals(c, 2 * (std::uint64_t)(n - 1));
      checkTerminationLe(c, ratOf(kn.at("delta")) * Rat(2 * n));
    } else if (protocol == "foremost-n-delta") {
      checkControlEquals(c, 0);
      checkTerminationEq(c, ratOf(kn.at("delta")) * Rat(n - 1));
    } else {
      checkControlEquals(c, (std::uint64_t)(n - 1));
    }
  } else if (protocol == "shortest-delta" || protocol == "shortest-n-delta" ||
             protocol == "shortest-reuse") {
    checkShortestOptimal(c);
    if (protocol == "shortest-delta") {
      checkInfoBound(c);
      checkControlEquals(c, 2 * (std::uint64_t)(n - 1));
      checkTerminationLe(c, ratOf(kn.at("delta")) * Rat(2 * n));
    } else if (protocol == "shortest-n-delta") {
      checkInfoBound(c);
      checkControlEquals(c, 0);
      checkTerminationEq(c, ratOf(kn.at("delta")) * Rat(n));
    } else {
      c.check("information count", std::to_string(n - 1),
              std::to_string(metrics.at("info_sent").get<std::uint64_t>()));
      checkControlEquals(c, 0);
      checkTerminationEq(c,
                         ratOf(kn.at("delta")) *
                             Rat(metrics.at("tree_depth").get<long long>()));
    }
  } else if (protocol == "fastest-p" || protocol == "fastest-reuse") {
    TimeValue window = kn.contains("p") ? ratOf(kn.at("p"))
                                        : ratOf(kn.at("p_upper"));
    EccentricityDate best = minEccentricityDate(
        g, metrics.at("emitter").get<std::string>(), Rat(0), window);
    TimeValue ecc = ratOf(metrics.at("eccentricity"));
    c.check("fastest optimality (oracle min eccentricity)", best.ecc.str(),
            ecc.str());
    // Broadcast duration: latest delivery offset equals the eccentricity.
    TimeValue latest(0);
    for (const auto& [node, off] : metrics.at("deliveries").items())
      latest = std::max(latest, ratOf(off));
    c.check("fastest duration", ecc.str(), latest.str());
    if (protocol == "fastest-p") checkInfoBound(c);
  } else {
    throw Error("unknown protocol in metrics: " + protocol);
  }
  return report;
}

}  // namespace tvg::verify
