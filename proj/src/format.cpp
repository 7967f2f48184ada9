#include "tvg/format.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace tvg {

TimeValue parseRational(const std::string& token) {
  auto bad = [&]() -> Rat {
    throw Error("bad rational literal: " + token);
  };
  if (token.empty()) return bad();
  std::size_t slash = token.find('/');
  std::size_t dot = token.find('.');
  try {
    if (slash != std::string::npos) {
      long long n = std::stoll(token.substr(0, slash));
      long long d = std::stoll(token.substr(slash + 1));
      if (d <= 0) return bad();
      return Rat(n, d);
    }
    if (dot != std::string::npos) {
      std::string frac = token.substr(dot + 1);
      if (frac.empty() || frac.size() > 15) return bad();
      for (char c : frac)
        if (!std::isdigit((unsigned char)c)) return bad();
      std::string whole = token.substr(0, dot);
      bool neg = !whole.empty() && whole[0] == '-';
      long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
      long long den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      long long num = std::stoll(frac);
      Rat r = Rat(w < 0 ? -w : w) + Rat(num, den);
      if (neg || w < 0) r = -r;
      return r;
    }
    return Rat(std::stoll(token));
  } catch (const std::invalid_argument&) {
    return bad();
  } catch (const std::out_of_range&) {
    return bad();
  }
}

namespace {

struct Line {
  int number;
  std::vector<std::pair<int, std::string>> tokens;  // (column, token)
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace((unsigned char)raw[i])) {
        ++i;
        continue;
      }
      if (raw[i] == '#') break;  // comment to end of line
      std::size_t start = i;
      while (i < raw.size() && !std::isspace((unsigned char)raw[i])) ++i;
      line.tokens.emplace_back((int)start + 1, raw.substr(start, i - start));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

Interval parseIntervalToken(const Line& line, int col,
                            const std::string& token) {
  if (token.size() < 5 || token.front() != '[' || token.back() != ']')
    throw ParseError(line.number, col, "expected interval [a,b]");
  std::string body = token.substr(1, token.size() - 2);
  std::size_t comma = body.find(',');
  if (comma == std::string::npos)
    throw ParseError(line.number, col, "expected interval [a,b]");
  try {
    return {parseRational(body.substr(0, comma)),
            parseRational(body.substr(comma + 1))};
  } catch (const Error& e) {
    throw ParseError(line.number, col, e.what());
  }
}

}  // namespace

Tvg parse(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  std::size_t i = 0;
  auto expect = [&](bool cond, const Line& l, int col, const std::string& msg) {
    if (!cond) throw ParseError(l.number, col, msg);
  };
  if (lines.empty()) throw ParseError(1, 1, "empty document");

  const Line& hdr = lines[0];
  expect(hdr.tokens.size() == 2 && hdr.tokens[0].second == "tvg" &&
             hdr.tokens[1].second == "1",
         hdr, 1, "expected header 'tvg 1'");
  ++i;

  expect(i < lines.size() && lines[i].tokens[0].second == "zeta" &&
             lines[i].tokens.size() == 2,
         i < lines.size() ? lines[i] : hdr, 1, "expected 'zeta <q>'");
  TimeValue zeta;
  try {
    zeta = parseRational(lines[i].tokens[1].second);
  } catch (const Error& e) {
    throw ParseError(lines[i].number, lines[i].tokens[1].first, e.what());
  }
  ++i;

  Schedule proto;  // kind, period/horizon shared by every edge
  bool haveKind = false;
  if (i < lines.size() && lines[i].tokens[0].second == "period") {
    expect(lines[i].tokens.size() == 2, lines[i], 1, "expected 'period <q>'");
    proto.kind = Schedule::Kind::Periodic;
    proto.period = parseRational(lines[i].tokens[1].second);
    haveKind = true;
    ++i;
  } else if (i < lines.size() && lines[i].tokens[0].second == "horizon") {
    expect(lines[i].tokens.size() == 2 ||
               (lines[i].tokens.size() == 3 &&
                lines[i].tokens[2].second == "recurrent"),
           lines[i], 1, "expected 'horizon <q> [recurrent]'");
    proto.kind = Schedule::Kind::Explicit;
    proto.horizon = parseRational(lines[i].tokens[1].second);
    proto.recurrent = lines[i].tokens.size() == 3;
    haveKind = true;
    ++i;
  }
  if (!haveKind)
    throw ParseError(i < lines.size() ? lines[i].number : hdr.number, 1,
                     "expected 'period <q>' or 'horizon <q>'");

  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<Schedule> schedules;
  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string& kw = l.tokens[0].second;
    if (kw == "node") {
      expect(l.tokens.size() == 2, l, 1, "expected 'node <id>'");
      nodes.push_back(l.tokens[1].second);
    } else if (kw == "edge") {
      expect(l.tokens.size() >= 5, l, 1,
             "expected 'edge <id> <u> <v> [a,b]...'");
      Edge e{l.tokens[1].second, l.tokens[2].second, l.tokens[3].second};
      Schedule s = proto;
      for (std::size_t k = 4; k < l.tokens.size(); ++k)
        s.intervals.push_back(
            parseIntervalToken(l, l.tokens[k].first, l.tokens[k].second));
      std::sort(s.intervals.begin(), s.intervals.end(),
                [](const Interval& a, const Interval& b) {
                  return a.start < b.start;
                });
      edges.push_back(std::move(e));
      schedules.push_back(std::move(s));
    } else {
      throw ParseError(l.number, l.tokens[0].first,
                       "unknown directive '" + kw + "'");
    }
  }

  Tvg g = Tvg::create(std::move(nodes), std::move(edges), std::move(schedules),
                      zeta);
  if (!g.footprint().connected) throw Error("footprint not connected");
  return g;
}

std::string serialize(const Tvg& g) {
  std::ostringstream out;
  out << "tvg 1\n";
  out << "zeta " << g.zeta().str() << "\n";
  if (g.edgeCount() > 0) {
    const Schedule& s0 = g.schedule(0);
    if (s0.kind == Schedule::Kind::Periodic) {
      out << "period " << s0.period.str() << "\n";
    } else {
      out << "horizon " << s0.horizon.str();
      if (s0.recurrent) out << " recurrent";
      out << "\n";
    }
  } else {
    out << "horizon 0\n";
  }
  for (const std::string& n : g.nodes()) out << "node " << n << "\n";
  for (std::size_t e = 0; e < g.edgeCount(); ++e) {
    const Edge& edge = g.edges()[e];
    out << "edge " << edge.id << " " << edge.u << " " << edge.v;
    for (const Interval& iv : g.schedule(e).intervals)
      out << " [" << iv.start.str() << "," << iv.end.str() << "]";
    out << "\n";
  }
  return out.str();
}

Tvg loadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void saveFile(const Tvg& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << serialize(g);
}

std::string contentHash(const Tvg& g) {
  std::string bytes = serialize(g);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace tvg
