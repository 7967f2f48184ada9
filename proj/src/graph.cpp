#include "tvg/graph.hpp"

#include <algorithm>
#include <set>

namespace tvg {

namespace {

void validateSchedule(const Edge& e, const Schedule& s, const TimeValue& zeta) {
  if (s.kind == Schedule::Kind::Periodic && s.period <= Rat(0))
    throw Error("edge " + e.id + ": non-positive period");
  if (s.intervals.empty())
    throw Error("edge " + e.id + ": no presence intervals");
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    const Interval& iv = s.intervals[i];
    if (iv.end < iv.start)
      throw Error("edge " + e.id + ": interval end before start");
    if (iv.length() < zeta)
      throw Error("edge " + e.id + ": interval shorter than zeta");
    if (iv.start < Rat(0))
      throw Error("edge " + e.id + ": negative interval start");
    if (i > 0 && s.intervals[i - 1].end >= iv.start)
      throw Error("edge " + e.id + ": overlapping intervals");
    if (s.kind == Schedule::Kind::Periodic) {
      if (iv.start >= s.period)
        throw Error("edge " + e.id + ": interval start beyond period");
      if (iv.length() >= s.period)
        throw Error("edge " + e.id + ": interval length not below period");
    } else {
      if (iv.end > s.horizon)
        throw Error("edge " + e.id + ": interval beyond horizon");
    }
  }
  if (s.kind == Schedule::Kind::Periodic && !s.intervals.empty()) {
    // A trailing interval may spill past the period boundary; its wrapped
    // part must stay clear of the next copy's head.
    const Interval& last = s.intervals.back();
    if (last.end > s.period) {
      TimeValue wrapEnd = last.end - s.period;
      if (wrapEnd >= s.intervals.front().start)
        throw Error("edge " + e.id + ": period-wrapped interval overlaps");
    }
  }
}

}  // namespace

Tvg Tvg::create(std::vector<std::string> nodes, std::vector<Edge> edges,
                std::vector<Schedule> schedules, TimeValue zeta) {
  if (zeta <= Rat(0)) throw Error("zeta must be positive");
  if (edges.size() != schedules.size())
    throw Error("edge/schedule count mismatch");

  Tvg g;
  g.zeta_ = zeta;
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i] == nodes[i - 1])
      throw Error("duplicate node " + nodes[i]);
  }
  g.nodes_ = std::move(nodes);
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.nodeIdx_[g.nodes_[i]] = i;

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a].id < edges[b].id;
  });

  std::set<std::pair<std::string, std::string>> seenPairs;
  for (std::size_t k : order) {
    Edge e = edges[k];
    if (!g.nodeIdx_.count(e.u) || !g.nodeIdx_.count(e.v))
      throw Error("edge " + e.id + ": unknown endpoint");
    if (e.u == e.v) throw Error("edge " + e.id + ": self-loop");
    auto pair = std::minmax(e.u, e.v);
    if (!seenPairs.insert({pair.first, pair.second}).second)
      throw Error("edge " + e.id + ": duplicate endpoint pair");
    if (!g.edgeIdx_.emplace(e.id, g.edges_.size()).second)
      throw Error("duplicate edge id " + e.id);
    validateSchedule(e, schedules[k], zeta);
    g.edges_.push_back(std::move(e));
    g.schedules_.push_back(std::move(schedules[k]));
  }

  // Uniform schedule kind (and period) across edges.
  for (std::size_t i = 1; i < g.schedules_.size(); ++i) {
    if (g.schedules_[i].kind != g.schedules_[0].kind)
      throw Error("mixed schedule kinds");
    if (g.schedules_[i].kind == Schedule::Kind::Periodic &&
        !(g.schedules_[i].period == g.schedules_[0].period))
      throw Error("mixed periods");
  }

  g.incident_.resize(g.nodes_.size());
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    g.incident_[g.nodeIdx_[g.edges_[i].u]].push_back(i);
    g.incident_[g.nodeIdx_[g.edges_[i].v]].push_back(i);
  }

  // Footprint connectivity (union-find).
  std::vector<std::size_t> parent(g.nodes_.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges_)
    parent[find(g.nodeIdx_[e.u])] = find(g.nodeIdx_[e.v]);
  g.connected_ = true;
  for (std::size_t i = 1; i < parent.size(); ++i)
    if (find(i) != find(0)) g.connected_ = false;
  return g;
}

std::size_t Tvg::nodeIndex(const std::string& id) const {
  auto it = nodeIdx_.find(id);
  if (it == nodeIdx_.end()) throw Error("no such node: " + id);
  return it->second;
}

std::size_t Tvg::edgeIndex(const std::string& id) const {
  auto it = edgeIdx_.find(id);
  if (it == edgeIdx_.end()) throw Error("no such edge: " + id);
  return it->second;
}

bool Tvg::hasNode(const std::string& id) const { return nodeIdx_.count(id); }

std::size_t Tvg::otherEndpoint(std::size_t edgeIdx, std::size_t nodeIdx) const {
  const Edge& e = edges_[edgeIdx];
  std::size_t u = nodeIdx_.at(e.u), v = nodeIdx_.at(e.v);
  if (nodeIdx == u) return v;
  if (nodeIdx == v) return u;
  throw Error("edge " + e.id + " not incident to node " + nodes_[nodeIdx]);
}

bool Tvg::presenceIdx(std::size_t edgeIdx, const TimeValue& t) const {
  return presenceInterval(edgeIdx, t).has_value();
}

std::optional<Interval> Tvg::presenceInterval(std::size_t edgeIdx,
                                              const TimeValue& t) const {
  if (t < Rat(0)) return std::nullopt;
  const Schedule& s = schedules_[edgeIdx];
  if (s.kind == Schedule::Kind::Explicit) {
    for (const Interval& iv : s.intervals)
      if (iv.contains(t)) return iv;
    return std::nullopt;
  }
  // Periodic: t may fall inside a copy shifted by k*period; also handle the
  // copy one period earlier spilling over the boundary.
  // kk = -1 keeps presence exactly periodic at t = 0 when an interval
  // spills over the period boundary.
  long long k = t.floorDiv(s.period);
  for (long long kk = k - 1; kk <= k; ++kk) {
    TimeValue off = s.period * Rat(kk);
    for (const Interval& iv : s.intervals) {
      Interval shifted{iv.start + off, iv.end + off};
      if (shifted.contains(t)) return shifted;
    }
  }
  return std::nullopt;
}

std::optional<TimeValue> Tvg::nextCrossingStartIdx(std::size_t edgeIdx,
                                                   const TimeValue& t) const {
  TimeValue from = std::max(t, TimeValue(0));
  const Schedule& s = schedules_[edgeIdx];
  auto fit = [&](const Interval& iv) -> std::optional<TimeValue> {
    TimeValue st = std::max(iv.start, from);
    if (st + zeta_ <= iv.end) return st;
    return std::nullopt;
  };
  if (s.kind == Schedule::Kind::Explicit) {
    for (const Interval& iv : s.intervals)
      if (auto st = fit(iv)) return st;
    return std::nullopt;
  }
  if (s.intervals.empty()) return std::nullopt;
  long long k0 = from.floorDiv(s.period) - 1;
  if (k0 < -1) k0 = -1;
  // Any interval of length >= zeta admits a crossing once unrolled past
  // `from`, so scanning two extra periods always finds the minimum.
  for (long long k = k0;; ++k) {
    TimeValue off = s.period * Rat(k);
    std::optional<TimeValue> best;
    for (const Interval& iv : s.intervals) {
      Interval shifted{iv.start + off, iv.end + off};
      if (auto st = fit(shifted))
        if (!best || *st < *best) best = st;
    }
    if (best) return best;
  }
}

std::optional<TimeValue> Tvg::nextAppearance(std::size_t edgeIdx,
                                             const TimeValue& t) const {
  const Schedule& s = schedules_[edgeIdx];
  if (s.kind == Schedule::Kind::Explicit) {
    for (const Interval& iv : s.intervals)
      if (iv.start > t) return iv.start;
    return std::nullopt;
  }
  if (s.intervals.empty()) return std::nullopt;
  long long k = t.floorDiv(s.period);
  if (k < 0) k = 0;
  for (;; ++k) {
    TimeValue off = s.period * Rat(k);
    for (const Interval& iv : s.intervals)
      if (iv.start + off > t) return iv.start + off;
  }
}

StaticGraph Tvg::footprint() const {
  StaticGraph g;
  g.nodes = nodes_;
  for (const Edge& e : edges_) g.edges.emplace_back(e.u, e.v);
  g.connected = connected_;
  return g;
}

namespace {

// Presence set of one periodic schedule normalized to [0, period): wrapped
// tails are split and merged back in.
std::vector<Interval> normalizedBase(const Schedule& s) {
  std::vector<Interval> out;
  for (const Interval& iv : s.intervals) {
    if (iv.end > s.period) {
      out.push_back({iv.start, s.period});
      out.push_back({Rat(0), iv.end - s.period});
    } else {
      out.push_back(iv);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  // Merge intervals touching across the split point.
  std::vector<Interval> merged;
  for (const Interval& iv : out) {
    if (!merged.empty() && merged.back().end >= iv.start)
      merged.back().end = std::max(merged.back().end, iv.end);
    else
      merged.push_back(iv);
  }
  return merged;
}

bool repeatsWith(const Schedule& s, const TimeValue& candidate) {
  // The schedule repeats with `candidate` iff its presence set over one
  // stored period is invariant under a shift by `candidate` (mod period).
  std::vector<Interval> base = normalizedBase(s);
  std::vector<Interval> shifted;
  for (const Interval& iv : base) {
    TimeValue st = (iv.start + candidate).mod(s.period);
    TimeValue en = st + iv.length();
    if (en > s.period) {
      shifted.push_back({st, s.period});
      shifted.push_back({Rat(0), en - s.period});
    } else {
      shifted.push_back({st, en});
    }
  }
  std::sort(shifted.begin(), shifted.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  std::vector<Interval> merged;
  for (const Interval& iv : shifted) {
    if (!merged.empty() && merged.back().end >= iv.start)
      merged.back().end = std::max(merged.back().end, iv.end);
    else
      merged.push_back(iv);
  }
  if (merged.size() != base.size()) return false;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (!(merged[i].start == base[i].start && merged[i].end == base[i].end))
      return false;
  return true;
}

}  // namespace

ClassReport Tvg::classify() const {
  if (!connected_) throw Error("footprint not connected");
  ClassReport report;
  bool periodic = !schedules_.empty() &&
                  schedules_[0].kind == Schedule::Kind::Periodic;
  bool recurrent = periodic;
  if (!periodic) {
    recurrent = !schedules_.empty();
    for (const Schedule& s : schedules_)
      if (!s.recurrent) recurrent = false;
  }
  if (nodes_.size() == 1 && edges_.empty()) {
    report.in_R = true;
    report.min_delta = Rat(0);
    return report;
  }
  report.in_R = recurrent;
  if (!recurrent) return report;

  // Bounded recurrence witness: worst gap between consecutive appearance
  // starts, wrapping across the period for periodic schedules.
  TimeValue worst(0);
  for (const Schedule& s : schedules_) {
    TimeValue gap(0);
    const auto& ivs = s.intervals;
    if (s.kind == Schedule::Kind::Periodic) {
      if (ivs.size() == 1) {
        gap = s.period;
      } else {
        for (std::size_t i = 1; i < ivs.size(); ++i)
          gap = std::max(gap, ivs[i].start - ivs[i - 1].start);
        gap = std::max(gap, ivs.front().start + s.period - ivs.back().start);
      }
    } else {
      for (std::size_t i = 1; i < ivs.size(); ++i)
        gap = std::max(gap, ivs[i].start - ivs[i - 1].start);
    }
    worst = std::max(worst, gap);
  }
  report.min_delta = worst;

  if (periodic && !schedules_.empty()) {
    TimeValue p = schedules_[0].period;
    // The true period divides the stored one; try p/k from the smallest up.
    long long maxK = 1;
    {
      TimeValue shortest = p;
      for (const Schedule& s : schedules_)
        for (const Interval& iv : s.intervals)
          if (iv.length() > Rat(0)) shortest = std::min(shortest, iv.length());
      // p/k must still exceed every interval length.
      maxK = std::max(1ll, p.floorDiv(std::max(shortest, zeta_)));
    }
    TimeValue best = p;
    for (long long k = maxK; k >= 2; --k) {
      TimeValue candidate = p / Rat(k);
      bool ok = true;
      for (const Schedule& s : schedules_)
        if (!repeatsWith(s, candidate)) {
          ok = false;
          break;
        }
      if (ok) {
        best = candidate;
        break;
      }
    }
    report.min_period = best;
  }
  return report;
}

Tvg buildFamilyGraph(int i) {
  if (i < 0) throw Error("family index must be non-negative");
  TimeValue period = Rat(4) * Rat(i + 1);
  auto mkSchedule = [&](std::vector<TimeValue> starts) {
    Schedule s;
    s.kind = Schedule::Kind::Periodic;
    s.period = period;
    std::sort(starts.begin(), starts.end());
    for (const TimeValue& t : starts) s.intervals.push_back({t, t + Rat(1)});
    return s;
  };
  std::vector<TimeValue> mod4[4];
  for (long long t = 0; Rat(t) < period; ++t) mod4[t % 4].push_back(Rat(t));

  std::vector<TimeValue> e4starts = mod4[3];
  if (i > 0) e4starts.push_back(Rat(4ll * i + 1));

  std::vector<Edge> edges = {{"e1", "u", "x"},
                             {"e2", "u", "y"},
                             {"e3", "x", "v"},
                             {"e4", "y", "v"}};
  std::vector<Schedule> schedules = {mkSchedule(mod4[0]), mkSchedule(mod4[0]),
                                     mkSchedule(mod4[2]), mkSchedule(e4starts)};
  return Tvg::create({"u", "v", "x", "y"}, std::move(edges),
                     std::move(schedules), Rat(1));
}

Tvg buildLineGraph(int n, TimeValue horizon) {
  if (n < 2) throw Error("line graph needs at least two nodes");
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<Schedule> schedules;
  auto name = [](int k) {
    std::string s = std::to_string(k);
    while (s.size() < 2) s = "0" + s;
    return s;
  };
  for (int k = 1; k <= n; ++k) nodes.push_back("v" + name(k));
  for (int k = 1; k < n; ++k) {
    edges.push_back({"l" + name(k), "v" + name(k), "v" + name(k + 1)});
    Schedule s;
    s.kind = Schedule::Kind::Explicit;
    s.horizon = horizon;
    s.recurrent = true;
    s.intervals.push_back({Rat(0), horizon});
    schedules.push_back(s);
  }
  return Tvg::create(std::move(nodes), std::move(edges), std::move(schedules),
                     Rat(1));
}

}  // namespace tvg
