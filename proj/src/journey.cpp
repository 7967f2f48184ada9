#include "tvg/journey.hpp"

#include <algorithm>
#include <set>

namespace tvg {

std::string Journey::str() const {
  if (hops.empty()) return "(empty)";
  std::string out;
  for (const Hop& h : hops) {
    if (!out.empty()) out += ",";
    out += "(" + h.edge + "," + h.start.str() + ")";
  }
  return out;
}

bool validateJourney(const Tvg& g, const std::string& source, const Journey& j,
                     JourneyFault* fault) {
  auto fail = [&](JourneyFault f) {
    if (fault) *fault = f;
    return false;
  };
  if (fault) *fault = JourneyFault::None;
  std::size_t at = g.nodeIndex(source);
  if (j.hops.empty()) {
    if (!(j.departure == j.arrival)) return fail(JourneyFault::TimingMismatch);
    return true;
  }
  TimeValue zeta = g.zeta();
  for (std::size_t i = 0; i < j.hops.size(); ++i) {
    const Hop& h = j.hops[i];
    std::size_t e = g.edgeIndex(h.edge);
    const Edge& edge = g.edges()[e];
    if (g.nodes()[at] != edge.u && g.nodes()[at] != edge.v)
      return fail(JourneyFault::NotAWalk);
    if (i > 0 && h.start < j.hops[i - 1].start + zeta)
      return fail(JourneyFault::HopSpacing);
    auto iv = g.presenceInterval(e, h.start);
    if (!iv || h.start + zeta > iv->end)
      return fail(JourneyFault::PresenceViolated);
    at = g.otherEndpoint(e, at);
  }
  if (!(j.departure == j.hops.front().start) ||
      !(j.arrival == j.hops.back().start + zeta))
    return fail(JourneyFault::TimingMismatch);
  return true;
}

namespace {

struct Label {
  TimeValue arrival;
  bool reached = false;
  bool settled = false;
  std::size_t predNode = 0;
  std::size_t predEdge = 0;
  TimeValue predStart;
};

Journey traceJourney(const Tvg& g, const std::vector<Label>& labels,
                     std::size_t src, std::size_t dst, const TimeValue& t) {
  Journey j;
  std::size_t at = dst;
  while (at != src) {
    const Label& l = labels[at];
    j.hops.push_back({g.edges()[l.predEdge].id, l.predStart});
    at = l.predNode;
  }
  std::reverse(j.hops.begin(), j.hops.end());
  if (j.hops.empty()) {
    j.departure = j.arrival = t;
  } else {
    j.departure = j.hops.front().start;
    j.arrival = j.hops.back().start + g.zeta();
  }
  return j;
}

}  // namespace

DistanceVector foremost(const Tvg& g, const std::string& u,
                        const TimeValue& t) {
  std::size_t src = g.nodeIndex(u);
  std::vector<Label> labels(g.nodeCount());
  labels[src].arrival = t;
  labels[src].reached = true;

  for (;;) {
    // Settle the unsettled node with minimal tentative arrival.
    std::size_t best = g.nodeCount();
    for (std::size_t v = 0; v < g.nodeCount(); ++v)
      if (labels[v].reached && !labels[v].settled &&
          (best == g.nodeCount() || labels[v].arrival < labels[best].arrival))
        best = v;
    if (best == g.nodeCount()) break;
    labels[best].settled = true;
    for (std::size_t e : g.incidentEdges(best)) {
      auto start = g.nextCrossingStartIdx(e, labels[best].arrival);
      if (!start) continue;
      TimeValue arr = *start + g.zeta();
      std::size_t w = g.otherEndpoint(e, best);
      if (!labels[w].reached || arr < labels[w].arrival) {
        labels[w].reached = true;
        labels[w].arrival = arr;
        labels[w].predNode = best;
        labels[w].predEdge = e;
        labels[w].predStart = *start;
      }
    }
  }

  DistanceVector dv;
  dv.source = u;
  dv.start = t;
  for (std::size_t v = 0; v < g.nodeCount(); ++v) {
    if (!labels[v].reached) continue;
    DistanceEntry entry;
    entry.value = labels[v].arrival - t;
    entry.witness = traceJourney(g, labels, src, v, t);
    dv.reached.emplace(g.nodes()[v], std::move(entry));
  }
  return dv;
}

DistanceVector shortest(const Tvg& g, const std::string& u,
                        const TimeValue& t) {
  std::size_t src = g.nodeIndex(u);
  std::size_t n = g.nodeCount();
  // Layered relaxation: earliest arrival using exactly k hops. Starting each
  // hop as early as possible is optimal for a fixed edge sequence, so the
  // smallest k with a finite entry is the topological distance.
  struct Cell {
    bool reached = false;
    TimeValue arrival;
    std::size_t predNode = 0, predEdge = 0;
    TimeValue predStart;
  };
  std::vector<std::vector<Cell>> layer(n, std::vector<Cell>(n));
  layer[0][src].reached = true;
  layer[0][src].arrival = t;
  std::vector<std::optional<std::size_t>> hopCount(n);
  hopCount[src] = 0;

  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t w = 0; w < n; ++w) {
      if (!layer[k - 1][w].reached) continue;
      for (std::size_t e : g.incidentEdges(w)) {
        auto start = g.nextCrossingStartIdx(e, layer[k - 1][w].arrival);
        if (!start) continue;
        TimeValue arr = *start + g.zeta();
        std::size_t v = g.otherEndpoint(e, w);
        Cell& cell = layer[k][v];
        if (!cell.reached || arr < cell.arrival) {
          cell.reached = true;
          cell.arrival = arr;
          cell.predNode = w;
          cell.predEdge = e;
          cell.predStart = *start;
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (layer[k][v].reached && !hopCount[v]) hopCount[v] = k;
  }

  DistanceVector dv;
  dv.source = u;
  dv.start = t;
  for (std::size_t v = 0; v < n; ++v) {
    if (!hopCount[v]) continue;
    DistanceEntry entry;
    entry.value = Rat((long long)*hopCount[v]);
    Journey j;
    std::size_t at = v;
    for (std::size_t k = *hopCount[v]; k > 0; --k) {
      const Cell& cell = layer[k][at];
      j.hops.push_back({g.edges()[cell.predEdge].id, cell.predStart});
      at = cell.predNode;
    }
    std::reverse(j.hops.begin(), j.hops.end());
    if (j.hops.empty()) {
      j.departure = j.arrival = t;
    } else {
      j.departure = j.hops.front().start;
      j.arrival = j.hops.back().start + g.zeta();
    }
    entry.witness = std::move(j);
    dv.reached.emplace(g.nodes()[v], std::move(entry));
  }
  return dv;
}

std::vector<TimeValue> departureCandidates(const Tvg& g, const TimeValue& t,
                                           const TimeValue& window) {
  TimeValue hi = t + window + g.zeta() * Rat((long long)g.nodeCount());
  std::set<TimeValue> endpoints;
  for (std::size_t e = 0; e < g.edgeCount(); ++e) {
    const Schedule& s = g.schedule(e);
    if (s.kind == Schedule::Kind::Explicit) {
      for (const Interval& iv : s.intervals) {
        if (iv.start <= hi) endpoints.insert(iv.start);
        if (iv.end <= hi) endpoints.insert(iv.end);
      }
    } else {
      long long k0 = std::max(0ll, t.floorDiv(s.period) - 1);
      for (long long k = k0;; ++k) {
        TimeValue off = s.period * Rat(k);
        bool any = false;
        for (const Interval& iv : s.intervals) {
          if (iv.start + off <= hi) {
            endpoints.insert(iv.start + off);
            any = true;
          }
          if (iv.end + off <= hi) endpoints.insert(iv.end + off);
        }
        if (!any) break;
      }
    }
  }
  std::set<TimeValue> out;
  out.insert(t);
  for (const TimeValue& c : endpoints)
    for (long long k = 0; k <= (long long)g.nodeCount(); ++k) {
      TimeValue d = c - g.zeta() * Rat(k);
      if (t <= d && d < t + window) out.insert(d);
    }
  return {out.begin(), out.end()};
}

namespace {

// Shift every hop but the last as far right as its interval and the next
// hop's start allow; arrival stays fixed, departure moves right.
Journey refineDeparture(const Tvg& g, Journey j) {
  if (j.hops.empty()) return j;
  TimeValue zeta = g.zeta();
  for (std::size_t i = j.hops.size(); i-- > 1;) {
    Hop& prev = j.hops[i - 1];
    auto iv = g.presenceInterval(g.edgeIndex(prev.edge), prev.start);
    TimeValue latest = std::min(iv->end - zeta, j.hops[i].start - zeta);
    if (latest > prev.start) prev.start = latest;
  }
  j.departure = j.hops.front().start;
  return j;
}

}  // namespace

DistanceVector fastest(const Tvg& g, const std::string& u, const TimeValue& t,
                       const TimeValue& window) {
  if (window <= Rat(0)) throw Error("window must be positive");
  g.nodeIndex(u);
  DistanceVector dv;
  dv.source = u;
  dv.start = t;
  for (const TimeValue& tau : departureCandidates(g, t, window)) {
    DistanceVector fm = foremost(g, u, tau);
    for (auto& [node, entry] : fm.reached) {
      Journey refined = refineDeparture(g, entry.witness);
      TimeValue duration = refined.arrival - refined.departure;
      auto it = dv.reached.find(node);
      if (it == dv.reached.end() || duration < it->second.value)
        dv.reached[node] = {duration, std::move(refined)};
    }
  }
  return dv;
}

TimeValue eccentricity(const Tvg& g, const std::string& u, const TimeValue& t) {
  DistanceVector fm = foremost(g, u, t);
  TimeValue ecc(0);
  for (const std::string& v : g.nodes()) {
    auto it = fm.reached.find(v);
    if (it == fm.reached.end())
      throw Error("unreachable node: " + v);
    ecc = std::max(ecc, it->second.value);
  }
  return ecc;
}

EccentricityDate minEccentricityDate(const Tvg& g, const std::string& u,
                                     const TimeValue& t,
                                     const TimeValue& window) {
  std::optional<EccentricityDate> best;
  for (const TimeValue& tau : departureCandidates(g, t, window)) {
    TimeValue ecc = eccentricity(g, u, tau);
    if (!best || ecc < best->ecc) best = {tau, ecc};
  }
  if (!best) throw Error("no departure candidates in window");
  return *best;
}

}  // namespace tvg
