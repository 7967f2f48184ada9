// Broadcast protocols as node-local state machines over the simulator API.
// Each protocol declares a (class, knowledge) requirement validated against
// classify() before running; impossible combinations raise InfeasibleError.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tvg/graph.hpp"
#include "tvg/sim.hpp"

namespace tvg::proto {

struct KnowledgeSpec {
  std::optional<long long> n;
  std::optional<TimeValue> delta;
  std::optional<TimeValue> p;
  std::optional<TimeValue> p_upper;
};

struct NodeResult {
  TimeValue delivery;      // absolute date of first information reception
  std::string parentEdge;  // empty for the emitter
  long long depth = 0;     // hops from the emitter in the broadcast tree
};

struct BroadcastOutcome {
  std::string protocol;
  std::string emitter;
  TimeValue t0;
  TimeValue horizon;
  TimeValue broadcastStart;  // equals t0 except for fastest-p
  bool terminated = false;
  TimeValue terminationDate;
  std::map<std::string, NodeResult> nodes;
  long long treeDepth = 0;
  TimeValue eccentricity;  // fastest-p: oracle minimum eccentricity
  sim::RunStats stats;
  std::uint64_t affiliationSent = 0;
  std::uint64_t notificationSent = 0;
  std::uint64_t durationSent = 0;
};

// Impossible (protocol, knowledge) pair; carries the citation message.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

extern const std::vector<std::string> kProtocolNames;

struct RunConfig {
  std::string protocol;
  std::string emitter;
  TimeValue t0;
  TimeValue horizon;
  KnowledgeSpec knowledge;
  const BroadcastOutcome* prior = nullptr;  // reuse protocols
  std::ostream* trace = nullptr;
};

// Checks the infeasibility guard table, then the knowledge witnesses against
// classify(): n = |V|, delta >= min_delta, p a multiple of min_period,
// p_upper >= min_period.
void validateConfig(const Tvg& g, const std::string& protocol,
                    const std::string& emitter, const KnowledgeSpec& k);

BroadcastOutcome run(const Tvg& g, const RunConfig& cfg);

// Replays a fastest-p broadcast along its memorized tree one period after
// prior.broadcastStart.
BroadcastOutcome fastestReuse(const Tvg& g, const BroadcastOutcome& prior,
                              const KnowledgeSpec& k,
                              std::ostream* trace = nullptr);

struct CountResult {
  long long n = 0;
  std::uint64_t tokenSends = 0;
  TimeValue finish;
  bool terminated = false;
};

// DFS token circulation returning |V|; cfg.emitter is the initiator.
CountResult countNodes(const Tvg& g, const RunConfig& cfg);

}  // namespace tvg::proto
