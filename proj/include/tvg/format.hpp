// Line-based text format for TVGs. Canonical serialization is byte-stable:
// sorted nodes, sorted edges, sorted intervals, reduced rationals.
//
//   tvg 1
//   zeta <q>
//   period <q>            (periodic graphs)
//   horizon <q> [recurrent]  (explicit graphs)
//   node <id>
//   edge <id> <u> <v> [a,b] [a,b]...
#pragma once

#include <string>

#include "tvg/graph.hpp"

namespace tvg {

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error("line " + std::to_string(line) + ":" + std::to_string(col) +
              ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

Tvg parse(const std::string& text);
std::string serialize(const Tvg& g);

Tvg loadFile(const std::string& path);
void saveFile(const Tvg& g, const std::string& path);

// Rational literal: "a", "a/b", or a finite decimal like "0.25".
TimeValue parseRational(const std::string& token);

// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string contentHash(const Tvg& g);

}  // namespace tvg
