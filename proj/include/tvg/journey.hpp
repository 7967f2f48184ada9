// Offline journey oracle: foremost / shortest / fastest journeys, temporal
// distances and eccentricities, computed centrally from the full schedule.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvg/graph.hpp"

namespace tvg {

struct Hop {
  std::string edge;
  TimeValue start;
};

struct Journey {
  std::vector<Hop> hops;
  TimeValue departure;
  TimeValue arrival;

  std::size_t topologicalLength() const { return hops.size(); }
  TimeValue temporalLength() const { return arrival - departure; }
  std::string str() const;
};

enum class JourneyFault {
  None,
  NotAWalk,
  HopSpacing,
  PresenceViolated,
  TimingMismatch,
};

// True iff j is a valid journey from `source` in g; `fault`, when given,
// receives the first violated condition.
bool validateJourney(const Tvg& g, const std::string& source, const Journey& j,
                     JourneyFault* fault = nullptr);

struct DistanceEntry {
  TimeValue value;  // temporal distance, hop count, or duration
  Journey witness;
};

struct DistanceVector {
  std::string source;
  TimeValue start;
  std::map<std::string, DistanceEntry> reached;  // per destination node

  const DistanceEntry* find(const std::string& node) const {
    auto it = reached.find(node);
    return it == reached.end() ? nullptr : &it->second;
  }
};

// Earliest arrival per node over journeys departing at or after t; values are
// temporal distances (arrival - t). Unreachable nodes (explicit horizon) are
// absent.
DistanceVector foremost(const Tvg& g, const std::string& u, const TimeValue& t);

// Minimal hop count per node over journeys departing at or after t.
DistanceVector shortest(const Tvg& g, const std::string& u, const TimeValue& t);

// Minimal duration per node over journeys departing within [t, t+window).
DistanceVector fastest(const Tvg& g, const std::string& u, const TimeValue& t,
                       const TimeValue& window);

// Max over nodes of the temporal distance from u at t; throws listing the
// first unreachable node.
TimeValue eccentricity(const Tvg& g, const std::string& u, const TimeValue& t);

struct EccentricityDate {
  TimeValue date;
  TimeValue ecc;
};

// Date in [t, t+window) minimizing the temporal eccentricity of u; ties break
// toward the smallest date.
EccentricityDate minEccentricityDate(const Tvg& g, const std::string& u,
                                     const TimeValue& t,
                                     const TimeValue& window);

// Candidate departure dates shared by fastest() and minEccentricityDate():
// interval endpoints unrolled into [t, t+window+n*zeta], shifted left by
// multiples of zeta up to n, clipped to [t, t+window), plus t itself.
std::vector<TimeValue> departureCandidates(const Tvg& g, const TimeValue& t,
                                           const TimeValue& window);

}  // namespace tvg
