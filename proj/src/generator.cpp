#include "tvg/generator.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace tvg {

namespace {

// Bounded draw with fixed semantics across platforms (uniform_int_distribution
// is implementation defined).
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

std::string nodeName(int i) {
  std::string s = std::to_string(i + 1);
  while (s.size() < 2) s = "0" + s;
  return "v" + s;
}

std::string edgeName(int i) {
  std::string s = std::to_string(i + 1);
  while (s.size() < 2) s = "0" + s;
  return "e" + s;
}

}  // namespace

Tvg generate(const GeneratorSpec& spec) {
  if (spec.nodes < 1) throw Error("generator: need at least one node");
  if (!(Rat(0) < spec.zeta)) throw Error("generator: zeta must be positive");

  int n = spec.nodes;
  std::mt19937_64 rng(spec.seed);

  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(nodeName(i));

  // Random spanning tree: attach node i to a random earlier node.
  std::vector<std::pair<int, int>> pairs;
  std::set<std::pair<int, int>> seen;
  for (int i = 1; i < n; ++i) {
    int j = (int)draw(rng, (std::uint64_t)i);
    pairs.emplace_back(std::min(i, j), std::max(i, j));
    seen.insert(pairs.back());
  }
  long long maxEdges = (long long)n * (n - 1) / 2;
  int extra = spec.extraEdges;
  if ((long long)pairs.size() + extra > maxEdges)
    throw Error("generator: too many extra edges");
  while (extra > 0) {
    int a = (int)draw(rng, (std::uint64_t)n);
    int b = (int)draw(rng, (std::uint64_t)n);
    if (a == b) continue;
    auto p = std::make_pair(std::min(a, b), std::max(a, b));
    if (seen.count(p)) continue;
    seen.insert(p);
    pairs.push_back(p);
    --extra;
  }

  std::size_t m = pairs.size();
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < m; ++e)
    edges.push_back(
        {edgeName((int)e), nodes[pairs[e].first], nodes[pairs[e].second]});

  std::vector<Schedule> schedules(m);
  const Rat& z = spec.zeta;

  auto pickStarts = [&](const Rat& window, std::size_t count,
                        std::set<long long>& used) {
    // Slots are multiples of zeta in [0, window - zeta]. The last slot is
    // excluded for periodic schedules so an interval never wraps and never
    // ends exactly at the period boundary.
    Rat slotsR = window / z;
    if (!slotsR.isInteger() || slotsR < Rat(2))
      throw Error("generator: window must be a multiple of zeta, at least 2");
    long long nslots = slotsR.num() - 1;  // keep the final slot clear
    std::vector<long long> out;
    bool distinct = used.size() + count <= (std::size_t)nslots;
    for (std::size_t k = 0; k < count; ++k) {
      long long s;
      if (distinct) {
        do {
          s = (long long)draw(rng, (std::uint64_t)nslots);
        } while (used.count(s));
        used.insert(s);
      } else {
        s = (long long)draw(rng, (std::uint64_t)nslots);
      }
      out.push_back(s);
    }
    return out;
  };

  if (spec.cls == GeneratorSpec::Class::Periodic) {
    if (!(z < spec.period))
      throw Error("generator: period must exceed zeta");
    std::set<long long> used;
    for (std::size_t e = 0; e < m; ++e) {
      auto starts = pickStarts(spec.period, 1, used);
      Rat s = Rat(starts[0]) * z;
      schedules[e].kind = Schedule::Kind::Periodic;
      schedules[e].period = spec.period;
      schedules[e].intervals = {{s, s + z}};
    }
  } else if (spec.cls == GeneratorSpec::Class::BoundedRecurrent) {
    // Bounded-recurrent graphs are realized as periodic schedules whose
    // period equals delta, possibly with a second appearance per period.
    if (!(z < spec.delta))
      throw Error("generator: delta must exceed zeta");
    std::set<long long> used;
    for (std::size_t e = 0; e < m; ++e) {
      auto starts = pickStarts(spec.delta, 1, used);
      Rat s = Rat(starts[0]) * z;
      schedules[e].kind = Schedule::Kind::Periodic;
      schedules[e].period = spec.delta;
      schedules[e].intervals = {{s, s + z}};
    }
  } else {
    if (!(z < spec.horizon))
      throw Error("generator: horizon must exceed zeta");
    for (std::size_t e = 0; e < m; ++e) {
      schedules[e].kind = Schedule::Kind::Explicit;
      schedules[e].horizon = spec.horizon;
      schedules[e].recurrent = true;
      schedules[e].intervals = {{Rat(0), spec.horizon}};
    }
  }

  return Tvg::create(std::move(nodes), std::move(edges), std::move(schedules),
                     z);
}

}  // namespace tvg
