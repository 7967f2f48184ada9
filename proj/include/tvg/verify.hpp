// Metrics extraction from a broadcast outcome and verification of the
// outcome against the journey oracle and the per-protocol message/time
// bounds.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tvg/graph.hpp"
#include "tvg/protocols.hpp"

namespace tvg::verify {

// Flat JSON document describing one run; field values are exact (rationals
// serialized as "a/b" strings). Serialization is byte-stable.
nlohmann::json buildMetrics(const Tvg& g, const proto::BroadcastOutcome& out,
                            const proto::KnowledgeSpec& k);

struct Check {
  std::string name;
  std::string expected;  // value with provenance (oracle or bound)
  std::string actual;
  bool pass = false;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool allPass() const {
    for (const Check& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Recomputes oracle values and bounds for the protocol named in the metrics;
// throws Error if the metrics do not match the graph (tvg_hash).
VerificationReport verifyMetrics(const Tvg& g, const nlohmann::json& metrics);

// Footprint BFS distances from a source node.
std::map<std::string, long long> bfsDistances(const Tvg& g,
                                              const std::string& source);

}  // namespace tvg::verify
