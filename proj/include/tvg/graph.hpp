// Time-varying graph model: presence schedules, class validation (R/B/P),
// and the four-node fixture family used throughout the tests.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tvg/time.hpp"

namespace tvg {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Interval {
  TimeValue start;
  TimeValue end;  // closed interval [start, end]

  TimeValue length() const { return end - start; }
  bool contains(const TimeValue& t) const { return start <= t && t <= end; }
};

struct Schedule {
  enum class Kind { Explicit, Periodic };

  Kind kind = Kind::Explicit;
  std::vector<Interval> intervals;  // sorted by start, pairwise disjoint
  TimeValue period;                 // Periodic only
  TimeValue horizon;                // Explicit only
  bool recurrent = false;           // Explicit: horizon-truncated recurrent

  bool operator==(const Schedule&) const = default;
};

struct Edge {
  std::string id;
  std::string u;
  std::string v;
};

struct StaticGraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  bool connected = false;
};

struct ClassReport {
  bool in_R = false;
  std::optional<TimeValue> min_delta;
  std::optional<TimeValue> min_period;
};

class Tvg {
 public:
  // Validates everything except footprint connectivity (reported via
  // footprint(); enforced by the parser and by classify()).
  static Tvg create(std::vector<std::string> nodes, std::vector<Edge> edges,
                    std::vector<Schedule> schedules, TimeValue zeta);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Schedule& schedule(std::size_t edgeIdx) const {
    return schedules_[edgeIdx];
  }
  const TimeValue& zeta() const { return zeta_; }
  std::size_t nodeCount() const { return nodes_.size(); }
  std::size_t edgeCount() const { return edges_.size(); }

  std::size_t nodeIndex(const std::string& id) const;
  std::size_t edgeIndex(const std::string& id) const;
  bool hasNode(const std::string& id) const;
  const std::vector<std::size_t>& incidentEdges(std::size_t nodeIdx) const {
    return incident_[nodeIdx];
  }
  std::size_t otherEndpoint(std::size_t edgeIdx, std::size_t nodeIdx) const;

  bool presence(const std::string& edgeId, const TimeValue& t) const {
    return presenceIdx(edgeIndex(edgeId), t);
  }
  bool presenceIdx(std::size_t edgeIdx, const TimeValue& t) const;

  // Interval containing t, unrolled for periodic schedules.
  std::optional<Interval> presenceInterval(std::size_t edgeIdx,
                                           const TimeValue& t) const;

  std::optional<TimeValue> nextCrossingStart(const std::string& edgeId,
                                             const TimeValue& t) const {
    return nextCrossingStartIdx(edgeIndex(edgeId), t);
  }
  std::optional<TimeValue> nextCrossingStartIdx(std::size_t edgeIdx,
                                                const TimeValue& t) const;

  // Next interval start strictly greater than t (unrolled). Used by the
  // send_retry semantics and the event unroller.
  std::optional<TimeValue> nextAppearance(std::size_t edgeIdx,
                                          const TimeValue& t) const;

  StaticGraph footprint() const;
  ClassReport classify() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<Schedule> schedules_;
  std::vector<std::vector<std::size_t>> incident_;
  std::map<std::string, std::size_t> nodeIdx_;
  std::map<std::string, std::size_t> edgeIdx_;
  TimeValue zeta_;
  bool connected_ = false;
};

// Periodic fixture family: four nodes u,v,x,y on a cycle, zeta = 1,
// period 4(i+1). Larger i stretches the schedule of edge e4.
Tvg buildFamilyGraph(int i);

// Line graph v1-v2-...-vn with every edge present over the whole horizon
// (explicit schedules flagged recurrent), zeta = 1.
Tvg buildLineGraph(int n, TimeValue horizon);

}  // namespace tvg
