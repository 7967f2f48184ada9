// Deterministic discrete event simulator. Nodes run Process instances that
// react to deliveries, edge appearances/disappearances and timers. Same
// instant events are ordered Delivery < Disappearance < Appearance < Timer,
// then by subject node, edge, and insertion sequence, so runs are fully
// reproducible.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvg/graph.hpp"

namespace tvg::sim {

enum class MsgClass { Information, Control, Probe };

std::string msgClassName(MsgClass c);

struct Message {
  std::string type;
  nlohmann::json payload;
  MsgClass cls = MsgClass::Information;
  bool durationSub = false;  // counted in the duration sub-tally
};

struct MessageRecord {
  enum class Status { InFlight, Delivered, Lost, PendingRetry, Pending };

  std::uint64_t seq = 0;
  std::string edge;
  std::string from;
  std::string to;
  Message msg;
  TimeValue sentAt;
  bool retry = false;
  Status status = Status::InFlight;
  std::optional<TimeValue> resolvedAt;  // delivery or loss instant
};

class Engine;

// Per-node view handed to processes. Only local information is exposed:
// incident edges, current presence, the crossing delay, and (for periodic
// graphs, once a full period has elapsed) the observed incident schedules.
class Api {
 public:
  Api(Engine& eng, std::size_t node) : eng_(eng), node_(node) {}

  const std::string& self() const;
  TimeValue now() const;
  const TimeValue& zeta() const;
  std::vector<std::string> incidentEdges() const;
  std::vector<std::string> I_now() const;  // present incident edges
  bool isPresent(const std::string& edge) const;
  std::string peer(const std::string& edge) const;

  void send(const std::string& edge, Message msg);
  void sendRetry(const std::string& edge, Message msg);
  void scheduleAt(const TimeValue& at, const std::string& tag);
  void terminate();

  // Incident schedule as a node has observed it after one full period.
  Schedule observedSchedule(const std::string& edge) const;
  TimeValue schedulePeriod() const;

 private:
  Engine& eng_;
  std::size_t node_;
};

class Process {
 public:
  virtual ~Process() = default;
  virtual void onInit(Api&) {}
  virtual void onAppearance(Api&, const std::string& /*edge*/) {}
  virtual void onDisappearance(Api&, const std::string& /*edge*/) {}
  virtual void onDeliver(Api&, const std::string& /*edge*/, const Message&) {}
  virtual void onLoss(Api&, const std::string& /*edge*/, const Message&) {}
  virtual void onTimer(Api&, const std::string& /*tag*/) {}
};

struct RunStats {
  bool terminated = false;    // a process called terminate()
  TimeValue endTime;
  std::uint64_t infoSent = 0;
  std::uint64_t controlSent = 0;
  std::uint64_t probeSent = 0;
  std::uint64_t durationSub = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  std::uint64_t pending = 0;
  // Information sends per (edge, sender) direction.
  std::map<std::pair<std::string, std::string>, std::uint64_t> infoPerDirection;

  std::uint64_t totalSent() const { return infoSent + controlSent + probeSent; }
  std::uint64_t maxInfoPerDirection() const;
};

class Engine {
 public:
  Engine(const Tvg& g, TimeValue t0, TimeValue horizon);

  void setProcess(const std::string& node, std::unique_ptr<Process> p);
  void setTrace(std::ostream* out) { trace_ = out; }

  RunStats run();

  const Tvg& graph() const { return g_; }
  const TimeValue& startTime() const { return t0_; }
  const std::vector<MessageRecord>& messages() const { return records_; }

 private:
  friend class Api;

  enum class Kind { Delivery = 0, Disappearance = 1, Appearance = 2, Timer = 3 };

  struct Event {
    TimeValue time;
    Kind kind;
    std::size_t node;   // subject node (receiver / timer owner)
    std::size_t edge;   // subject edge, or npos
    std::uint64_t seq;
    std::size_t record = SIZE_MAX;  // delivery / loss record index
    std::string tag;                // timer tag
    bool loss = false;              // loss notice (Disappearance rank)
  };

  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const;
  };

  void push(Event e);
  void doSend(std::size_t node, const std::string& edge, Message msg,
              bool retry);
  void dispatch(const Event& e);
  void traceEvent(const Event& e);
  void countSend(const MessageRecord& r);

  const Tvg& g_;
  TimeValue t0_;
  TimeValue horizon_;
  TimeValue now_;
  bool terminated_ = false;
  std::uint64_t seq_ = 0;
  std::vector<std::unique_ptr<Process>> procs_;
  std::vector<Event> queue_;  // heap ordered by EventOrder
  std::vector<bool> present_;
  std::vector<MessageRecord> records_;
  RunStats stats_;
  std::ostream* trace_ = nullptr;
};

}  // namespace tvg::sim
