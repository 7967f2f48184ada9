#include "tvg/sim.hpp"

#include <algorithm>

namespace tvg::sim {

std::string msgClassName(MsgClass c) {
  switch (c) {
    case MsgClass::Information: return "information";
    case MsgClass::Control: return "control";
    case MsgClass::Probe: return "probe";
  }
  return "?";
}

std::uint64_t RunStats::maxInfoPerDirection() const {
  std::uint64_t best = 0;
  for (const auto& [dir, count] : infoPerDirection) best = std::max(best, count);
  return best;
}

const std::string& Api::self() const { return eng_.g_.nodes()[node_]; }
TimeValue Api::now() const { return eng_.now_; }
const TimeValue& Api::zeta() const { return eng_.g_.zeta(); }

std::vector<std::string> Api::incidentEdges() const {
  std::vector<std::string> out;
  for (std::size_t e : eng_.g_.incidentEdges(node_))
    out.push_back(eng_.g_.edges()[e].id);
  return out;
}

std::vector<std::string> Api::I_now() const {
  std::vector<std::string> out;
  for (std::size_t e : eng_.g_.incidentEdges(node_))
    if (eng_.present_[e]) out.push_back(eng_.g_.edges()[e].id);
  return out;
}

bool Api::isPresent(const std::string& edge) const {
  return eng_.present_[eng_.g_.edgeIndex(edge)];
}

std::string Api::peer(const std::string& edge) const {
  std::size_t e = eng_.g_.edgeIndex(edge);
  return eng_.g_.nodes()[eng_.g_.otherEndpoint(e, node_)];
}

void Api::send(const std::string& edge, Message msg) {
  eng_.doSend(node_, edge, std::move(msg), false);
}

void Api::sendRetry(const std::string& edge, Message msg) {
  eng_.doSend(node_, edge, std::move(msg), true);
}

void Api::scheduleAt(const TimeValue& at, const std::string& tag) {
  if (at < eng_.now_) throw Error("timer set in the past");
  Engine::Event ev{at, Engine::Kind::Timer, node_, SIZE_MAX, eng_.seq_++};
  ev.tag = tag;
  eng_.push(std::move(ev));
}

void Api::terminate() { eng_.terminated_ = true; }

Schedule Api::observedSchedule(const std::string& edge) const {
  std::size_t e = eng_.g_.edgeIndex(edge);
  const Schedule& s = eng_.g_.schedule(e);
  if (s.kind != Schedule::Kind::Periodic)
    throw Error("observedSchedule requires a periodic graph");
  if (eng_.now_ < eng_.t0_ + s.period)
    throw Error("observedSchedule before a full period elapsed");
  return s;
}

TimeValue Api::schedulePeriod() const {
  if (eng_.g_.edgeCount() == 0) return Rat(0);
  const Schedule& s = eng_.g_.schedule(0);
  if (s.kind != Schedule::Kind::Periodic)
    throw Error("schedulePeriod requires a periodic graph");
  return s.period;
}

bool Engine::EventOrder::operator()(const Event& a, const Event& b) const {
  // std::push_heap max-heap comparator; we want the smallest key on top.
  auto key = [](const Event& e) {
    return std::make_tuple(e.time, (int)e.kind, e.node, e.edge, e.seq);
  };
  return key(b) < key(a);
}

Engine::Engine(const Tvg& g, TimeValue t0, TimeValue horizon)
    : g_(g), t0_(std::move(t0)), horizon_(std::move(horizon)), now_(t0_) {
  procs_.resize(g.nodeCount());
  present_.assign(g.edgeCount(), false);
  if (horizon_ < t0_) throw Error("simulation horizon before start time");

  // Unrolled edge events over [t0, horizon]. Intervals closing exactly at t0
  // are treated as already gone; intervals opening at t0 start present with
  // no Appearance event.
  for (std::size_t e = 0; e < g.edgeCount(); ++e) {
    auto iv = g.presenceInterval(e, t0_);
    if (iv && t0_ < iv->end) {
      present_[e] = true;
      push({iv->end, Kind::Disappearance, g.nodeIndex(g.edges()[e].u), e,
            seq_++});
    }
    TimeValue t = t0_;
    while (true) {
      auto next = g.nextAppearance(e, t);
      if (!next || horizon_ < *next) break;
      auto win = g.presenceInterval(e, *next);
      push({*next, Kind::Appearance, g.nodeIndex(g.edges()[e].u), e, seq_++});
      if (!(horizon_ < win->end))
        push({win->end, Kind::Disappearance, g.nodeIndex(g.edges()[e].u), e,
              seq_++});
      t = *next;
    }
  }
}

void Engine::setProcess(const std::string& node, std::unique_ptr<Process> p) {
  procs_[g_.nodeIndex(node)] = std::move(p);
}

void Engine::push(Event e) {
  queue_.push_back(std::move(e));
  std::push_heap(queue_.begin(), queue_.end(), EventOrder{});
}

void Engine::countSend(const MessageRecord& r) {
  switch (r.msg.cls) {
    case MsgClass::Information:
      stats_.infoSent++;
      stats_.infoPerDirection[{r.edge, r.from}]++;
      break;
    case MsgClass::Control: stats_.controlSent++; break;
    case MsgClass::Probe: stats_.probeSent++; break;
  }
  if (r.msg.durationSub) stats_.durationSub++;
}

void Engine::doSend(std::size_t node, const std::string& edge, Message msg,
                    bool retry) {
  std::size_t e = g_.edgeIndex(edge);
  if (g_.edges()[e].u != g_.nodes()[node] && g_.edges()[e].v != g_.nodes()[node])
    throw Error("send on non-incident edge " + edge);
  MessageRecord rec;
  rec.seq = seq_++;
  rec.edge = edge;
  rec.from = g_.nodes()[node];
  rec.to = g_.nodes()[g_.otherEndpoint(e, node)];
  rec.msg = std::move(msg);
  rec.sentAt = now_;
  rec.retry = retry;

  const TimeValue& z = g_.zeta();
  auto iv = g_.presenceInterval(e, now_);
  bool fits = iv && !(iv->end < now_ + z);

  if (fits) {
    std::size_t idx = records_.size();
    Event ev{now_ + z, Kind::Delivery, g_.nodeIndex(rec.to), e, seq_++};
    ev.record = idx;
    countSend(rec);
    records_.push_back(std::move(rec));
    push(std::move(ev));
    return;
  }
  if (retry) {
    auto cross = g_.nextCrossingStartIdx(e, now_);
    if (cross) {
      std::size_t idx = records_.size();
      Event ev{*cross + z, Kind::Delivery, g_.nodeIndex(rec.to), e, seq_++};
      ev.record = idx;
      countSend(rec);
      records_.push_back(std::move(rec));
      push(std::move(ev));
    } else {
      rec.status = MessageRecord::Status::PendingRetry;
      countSend(rec);
      records_.push_back(std::move(rec));
    }
    return;
  }
  // Lost: at the disappearance instant if the edge is present, immediately
  // otherwise. The sender gets a loss notice at that instant.
  TimeValue lostAt = iv ? iv->end : now_;
  rec.status = MessageRecord::Status::Lost;
  rec.resolvedAt = lostAt;
  stats_.lost++;
  std::size_t idx = records_.size();
  Event ev{lostAt, Kind::Disappearance, node, e, seq_++};
  ev.record = idx;
  ev.loss = true;
  countSend(rec);
  records_.push_back(std::move(rec));
  push(std::move(ev));
}

void Engine::traceEvent(const Event& e) {
  if (!trace_) return;
  nlohmann::json j;
  j["t"] = e.time.str();
  switch (e.kind) {
    case Kind::Delivery: j["event"] = "delivery"; break;
    case Kind::Disappearance: j["event"] = e.loss ? "loss" : "disappearance"; break;
    case Kind::Appearance: j["event"] = "appearance"; break;
    case Kind::Timer: j["event"] = e.tag == "__init__" ? "init" : "timer"; break;
  }
  if (e.node != SIZE_MAX) j["node"] = g_.nodes()[e.node];
  if (e.edge != SIZE_MAX) j["edge"] = g_.edges()[e.edge].id;
  if (!e.tag.empty()) j["tag"] = e.tag;
  if (e.record != SIZE_MAX) {
    const MessageRecord& r = records_[e.record];
    j["type"] = r.msg.type;
    j["class"] = msgClassName(r.msg.cls);
    j["from"] = r.from;
    j["to"] = r.to;
  }
  (*trace_) << j.dump() << "\n";
}

void Engine::dispatch(const Event& e) {
  Api api(*this, e.node);
  Process* p = e.node == SIZE_MAX ? nullptr : procs_[e.node].get();
  switch (e.kind) {
    case Kind::Delivery: {
      MessageRecord& r = records_[e.record];
      r.status = MessageRecord::Status::Delivered;
      r.resolvedAt = e.time;
      stats_.delivered++;
      if (p) p->onDeliver(api, g_.edges()[e.edge].id, r.msg);
      break;
    }
    case Kind::Disappearance: {
      if (e.loss) {
        if (p) p->onLoss(api, g_.edges()[e.edge].id, records_[e.record].msg);
      } else {
        present_[e.edge] = false;
        for (const std::string& end :
             {g_.edges()[e.edge].u, g_.edges()[e.edge].v}) {
          std::size_t ni = g_.nodeIndex(end);
          if (procs_[ni]) {
            Api a(*this, ni);
            procs_[ni]->onDisappearance(a, g_.edges()[e.edge].id);
          }
          if (terminated_) break;
        }
      }
      break;
    }
    case Kind::Appearance: {
      present_[e.edge] = true;
      for (const std::string& end :
           {g_.edges()[e.edge].u, g_.edges()[e.edge].v}) {
        std::size_t ni = g_.nodeIndex(end);
        if (procs_[ni]) {
          Api a(*this, ni);
          procs_[ni]->onAppearance(a, g_.edges()[e.edge].id);
        }
        if (terminated_) break;
      }
      break;
    }
    case Kind::Timer: {
      if (p) {
        if (e.tag == "__init__")
          p->onInit(api);
        else
          p->onTimer(api, e.tag);
      }
      break;
    }
  }
}

RunStats Engine::run() {
  for (std::size_t n = 0; n < g_.nodeCount(); ++n) {
    if (!procs_[n]) continue;
    Event ev{t0_, Kind::Timer, n, SIZE_MAX, seq_++};
    ev.tag = "__init__";
    push(std::move(ev));
  }
  while (!queue_.empty() && !terminated_) {
    std::pop_heap(queue_.begin(), queue_.end(), EventOrder{});
    Event e = std::move(queue_.back());
    queue_.pop_back();
    if (horizon_ < e.time) break;
    now_ = e.time;
    traceEvent(e);
    dispatch(e);
  }
  for (MessageRecord& r : records_)
    if (r.status == MessageRecord::Status::InFlight) {
      r.status = MessageRecord::Status::Pending;
      stats_.pending++;
    } else if (r.status == MessageRecord::Status::PendingRetry) {
      stats_.pending++;
    }
  stats_.terminated = terminated_;
  stats_.endTime = now_;
  return stats_;
}

}  // namespace tvg::sim
