// Seeded random TVG generator. Produces connected graphs (random spanning
// tree plus optional extra edges) with grid-aligned schedules: every interval
// has length exactly zeta and starts on a multiple of zeta. When the slot
// budget allows, all interval starts are globally distinct, which keeps
// simulated runs loss free.
#pragma once

#include <cstdint>

#include "tvg/graph.hpp"

namespace tvg {

struct GeneratorSpec {
  enum class Class { Periodic, BoundedRecurrent, ExplicitRecurrent };

  Class cls = Class::Periodic;
  int nodes = 4;
  int extraEdges = 0;      // edges beyond the spanning tree
  TimeValue zeta = Rat(1);
  TimeValue period;        // Periodic: schedule period
  TimeValue delta;         // BoundedRecurrent: max gap between appearances
  TimeValue horizon;       // ExplicitRecurrent: truncation horizon
  std::uint64_t seed = 0;
};

Tvg generate(const GeneratorSpec& spec);

}  // namespace tvg
