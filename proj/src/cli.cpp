#include "tvg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvg/format.hpp"
#include "tvg/generator.hpp"
#include "tvg/journey.hpp"
#include "tvg/protocols.hpp"
#include "tvg/verify.hpp"

namespace tvg::cli {

namespace {

struct KnowledgeFlags {
  std::optional<long long> n;
  std::string delta, p, pUpper;

  proto::KnowledgeSpec spec() const {
    proto::KnowledgeSpec k;
    k.n = n;
    if (!delta.empty()) k.delta = parseRational(delta);
    if (!p.empty()) k.p = parseRational(p);
    if (!pUpper.empty()) k.p_upper = parseRational(pUpper);
    return k;
  }
};

void addKnowledgeFlags(CLI::App* cmd, KnowledgeFlags& k) {
  cmd->add_option("--n", k.n, "knowledge: number of nodes");
  cmd->add_option("--delta", k.delta, "knowledge: recurrence bound");
  cmd->add_option("--p", k.p, "knowledge: schedule period");
  cmd->add_option("--p-upper", k.pUpper, "knowledge: period upper bound");
}

std::string witnessStr(const Journey& j) {
  std::string out;
  for (const Hop& h : j.hops) {
    if (!out.empty()) out += ",";
    out += "(" + h.edge + "," + h.start.str() + ")";
  }
  return out.empty() ? "(empty)" : out;
}

int cmdJourney(const std::string& file, const std::string& query,
               const std::vector<std::string>& args) {
  Tvg g = loadFile(file);
  auto need = [&](std::size_t count) {
    if (args.size() != count)
      throw Error("wrong number of arguments for query " + query);
  };
  if (query == "ecc") {
    need(2);
    TimeValue t = parseRational(args[1]);
    std::cout << eccentricity(g, args[0], t).str() << "\n";
    return 0;
  }
  if (query == "foremost" || query == "shortest") {
    need(3);
    const std::string& u = args[0];
    const std::string& v = args[1];
    TimeValue t = parseRational(args[2]);
    DistanceVector dv = query == "foremost" ? foremost(g, u, t)
                                            : shortest(g, u, t);
    const DistanceEntry* entry = dv.find(v);
    if (!entry) throw Error("unreachable node: " + v);
    std::cout << entry->value.str() << " witness " << witnessStr(entry->witness)
              << "\n";
    return 0;
  }
  if (query == "fastest") {
    need(4);
    const std::string& u = args[0];
    const std::string& v = args[1];
    TimeValue t = parseRational(args[2]);
    TimeValue window = parseRational(args[3]);
    DistanceVector dv = fastest(g, u, t, window);
    const DistanceEntry* entry = dv.find(v);
    if (!entry) throw Error("unreachable node: " + v);
    std::cout << entry->value.str() << " witness " << witnessStr(entry->witness)
              << "\n";
    return 0;
  }
  throw Error("unknown query: " + query);
}

int cmdSimulate(const std::string& file, const std::string& protocol,
                const std::string& emitter, const std::string& t0s,
                const std::string& horizons, const KnowledgeFlags& kf,
                const std::string& traceFile, const std::string& priorT0s) {
  Tvg g = loadFile(file);
  proto::RunConfig cfg;
  cfg.protocol = protocol;
  cfg.emitter = emitter;
  cfg.t0 = parseRational(t0s);
  cfg.horizon = parseRational(horizons);
  cfg.knowledge = kf.spec();

  std::ofstream traceOut;
  if (!traceFile.empty()) {
    traceOut.open(traceFile);
    if (!traceOut) throw Error("cannot write trace file: " + traceFile);
    cfg.trace = &traceOut;
  }

  if (protocol == "count-nodes") {
    proto::CountResult r = proto::countNodes(g, cfg);
    nlohmann::json j;
    j["protocol"] = protocol;
    j["tvg_hash"] = contentHash(g);
    j["count"] = r.n;
    j["token_sends"] = r.tokenSends;
    j["terminated"] = r.terminated;
    if (r.terminated) j["finish_offset"] = (r.finish - cfg.t0).str();
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  proto::BroadcastOutcome prior;
  if (protocol == "foremost-n-reuse" || protocol == "shortest-reuse") {
    if (priorT0s.empty())
      throw Error(protocol + " requires --prior-t0 for the tree-building run");
    proto::RunConfig first = cfg;
    first.protocol =
        protocol == "foremost-n-reuse" ? "foremost-n" : "shortest-delta";
    first.t0 = parseRational(priorT0s);
    first.trace = nullptr;
    prior = proto::run(g, first);
    if (!prior.terminated)
      throw Error("tree-building run did not terminate before the horizon");
    cfg.prior = &prior;
  }

  proto::BroadcastOutcome out = proto::run(g, cfg);
  std::cout << verify::buildMetrics(g, out, cfg.knowledge).dump(2) << "\n";
  return 0;
}

int cmdVerify(const std::string& metricsFile, const std::string& file) {
  Tvg g = loadFile(file);
  std::ifstream in(metricsFile);
  if (!in) throw Error("cannot open metrics file: " + metricsFile);
  nlohmann::json metrics;
  in >> metrics;
  verify::VerificationReport report = verify::verifyMetrics(g, metrics);
  for (const verify::Check& c : report.checks)
    std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << ": expected "
              << c.expected << ", actual " << c.actual << "\n";
  return report.allPass() ? 0 : 1;
}

int cmdClassify(const std::string& file) {
  Tvg g = loadFile(file);
  ClassReport r = g.classify();
  nlohmann::json j;
  j["in_R"] = r.in_R;
  if (r.min_delta) j["min_delta"] = r.min_delta->str();
  if (r.min_period) j["min_period"] = r.min_period->str();
  j["tvg_hash"] = contentHash(g);
  j["n"] = (long long)g.nodeCount();
  j["m"] = (long long)g.edgeCount();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmdGenerate(const std::string& out, const std::string& cls, int nodes,
                int extra, const std::string& zeta, const std::string& period,
                const std::string& delta, const std::string& horizon,
                std::uint64_t seed) {
  GeneratorSpec spec;
  if (cls == "P")
    spec.cls = GeneratorSpec::Class::Periodic;
  else if (cls == "B")
    spec.cls = GeneratorSpec::Class::BoundedRecurrent;
  else if (cls == "R")
    spec.cls = GeneratorSpec::Class::ExplicitRecurrent;
  else
    throw Error("class must be P, B, or R");
  spec.nodes = nodes;
  spec.extraEdges = extra;
  spec.zeta = parseRational(zeta);
  if (!period.empty()) spec.period = parseRational(period);
  if (!delta.empty()) spec.delta = parseRational(delta);
  if (!horizon.empty()) spec.horizon = parseRational(horizon);
  spec.seed = seed;
  Tvg g = generate(spec);
  if (out == "-")
    std::cout << serialize(g);
  else
    saveFile(g, out);
  return 0;
}

struct BenchRow {
  std::string instance;
  std::string protocol;
  std::uint64_t seed = 0;
  std::string infoFirst, controlFirst, infoNext, controlNext, termination;
  bool ok = true;
};

int cmdBench(const std::string& dir, const std::string& emitterOpt) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".tvg") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no .tvg files in " + dir);

  std::vector<BenchRow> rows;
  bool anyFail = false;
  for (const std::string& file : files) {
    Tvg g = loadFile(file);
    ClassReport cls = g.classify();
    std::string emitter = emitterOpt.empty() ? g.nodes().front() : emitterOpt;
    long long n = (long long)g.nodeCount();
    TimeValue horizonSpan =
        (cls.min_delta ? *cls.min_delta : Rat(1)) * Rat(8 * n + 16);

    auto runOne = [&](const std::string& protocol,
                      const proto::BroadcastOutcome* prior)
        -> proto::BroadcastOutcome {
      proto::RunConfig cfg;
      cfg.protocol = protocol;
      cfg.emitter = emitter;
      cfg.t0 = Rat(0);
      cfg.horizon = horizonSpan;
      cfg.knowledge.n = n;
      cfg.knowledge.delta = cls.min_delta;
      if (cls.min_period) cfg.knowledge.p = cls.min_period;
      cfg.prior = prior;
      if (prior) cfg.t0 = prior->terminationDate;
      return proto::run(g, cfg);
    };

    struct Pair {
      const char* first;
      const char* next;  // may be null
    };
    const Pair pairs[] = {{"foremost-n", "foremost-n-reuse"},
                          {"foremost-delta", nullptr},
                          {"foremost-n-delta", nullptr},
                          {"shortest-delta", "shortest-reuse"},
                          {"shortest-n-delta", nullptr}};
    for (const Pair& pair : pairs) {
      BenchRow row;
      row.instance = fs::path(file).filename().string();
      row.protocol = pair.first;
      proto::BroadcastOutcome first = runOne(pair.first, nullptr);
      proto::KnowledgeSpec usedK;
      usedK.n = n;
      usedK.delta = cls.min_delta;
      if (cls.min_period) usedK.p = cls.min_period;
      row.infoFirst = std::to_string(first.stats.infoSent);
      row.controlFirst = std::to_string(first.stats.controlSent);
      row.termination = first.terminated
                            ? (first.terminationDate - first.t0).str()
                            : "none";
      row.ok = verify::verifyMetrics(g, verify::buildMetrics(g, first, usedK))
                   .allPass();
      if (pair.next && first.terminated) {
        proto::RunConfig cfg;
        proto::BroadcastOutcome next = runOne(pair.next, &first);
        row.infoNext = std::to_string(next.stats.infoSent);
        row.controlNext = std::to_string(next.stats.controlSent);
        row.ok = row.ok &&
                 verify::verifyMetrics(g, verify::buildMetrics(g, next, usedK))
                     .allPass();
      }
      if (!row.ok) anyFail = true;
      rows.push_back(std::move(row));
    }
  }

  std::cout << "instance,protocol,seed,info_first,control_first,info_next,"
               "control_next,termination_offset,verified\n";
  for (const BenchRow& r : rows)
    std::cout << r.instance << "," << r.protocol << "," << r.seed << ","
              << r.infoFirst << "," << r.controlFirst << "," << r.infoNext
              << "," << r.controlNext << "," << r.termination << ","
              << (r.ok ? "pass" : "FAIL") << "\n";
  return anyFail ? 1 : 0;
}

}  // namespace

int runCli(const std::vector<std::string>& args) {
  CLI::App app{"time-varying graph broadcast simulator and verifier"};
  app.require_subcommand(1);

  // journey
  std::string jFile, jQuery;
  std::vector<std::string> jArgs;
  CLI::App* journeyCmd =
      app.add_subcommand("journey", "query the offline journey oracle");
  journeyCmd->add_option("file", jFile)->required();
  journeyCmd->add_option("query", jQuery)->required();
  journeyCmd->add_option("args", jArgs, "u [v] t [window]");

  // simulate
  std::string sFile, sProtocol, sEmitter, sT0, sHorizon, sTrace, sPriorT0;
  KnowledgeFlags sK;
  CLI::App* simulateCmd =
      app.add_subcommand("simulate", "run a protocol and print metrics JSON");
  simulateCmd->add_option("file", sFile)->required();
  simulateCmd->add_option("protocol", sProtocol)->required();
  simulateCmd->add_option("emitter", sEmitter)->required();
  simulateCmd->add_option("t0", sT0)->required();
  simulateCmd->add_option("horizon", sHorizon)->required();
  addKnowledgeFlags(simulateCmd, sK);
  simulateCmd->add_option("--trace", sTrace, "write JSON-lines trace");
  simulateCmd->add_option("--prior-t0", sPriorT0,
                          "start date of the tree-building run (reuse)");

  // verify
  std::string vMetrics, vFile;
  CLI::App* verifyCmd =
      app.add_subcommand("verify", "check metrics against the oracle");
  verifyCmd->add_option("metrics", vMetrics)->required();
  verifyCmd->add_option("file", vFile)->required();

  // classify
  std::string cFile;
  CLI::App* classifyCmd =
      app.add_subcommand("classify", "print the class report");
  classifyCmd->add_option("file", cFile)->required();

  // generate
  std::string gOut, gCls = "P", gZeta = "1", gPeriod, gDelta, gHorizon;
  int gNodes = 4, gExtra = 0;
  std::uint64_t gSeed = 0;
  CLI::App* generateCmd =
      app.add_subcommand("generate", "generate a random TVG");
  generateCmd->add_option("out", gOut, "output path or -")->required();
  generateCmd->add_option("--class", gCls, "P, B, or R");
  generateCmd->add_option("--nodes", gNodes);
  generateCmd->add_option("--extra-edges", gExtra);
  generateCmd->add_option("--zeta", gZeta);
  generateCmd->add_option("--period", gPeriod);
  generateCmd->add_option("--delta", gDelta);
  generateCmd->add_option("--horizon", gHorizon);
  generateCmd->add_option("--seed", gSeed);

  // bench
  std::string bDir, bEmitter;
  CLI::App* benchCmd =
      app.add_subcommand("bench", "run the protocol matrix over a corpus");
  benchCmd->add_option("dir", bDir)->required();
  benchCmd->add_option("--emitter", bEmitter);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (journeyCmd->parsed()) return cmdJourney(jFile, jQuery, jArgs);
    if (simulateCmd->parsed())
      return cmdSimulate(sFile, sProtocol, sEmitter, sT0, sHorizon, sK, sTrace,
                         sPriorT0);
    if (verifyCmd->parsed()) return cmdVerify(vMetrics, vFile);
    if (classifyCmd->parsed()) return cmdClassify(cFile);
    if (generateCmd->parsed())
      return cmdGenerate(gOut, gCls, gNodes, gExtra, gZeta, gPeriod, gDelta,
                         gHorizon, gSeed);
    if (benchCmd->parsed()) return cmdBench(bDir, bEmitter);
  } catch (const proto::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace tvg::cli
