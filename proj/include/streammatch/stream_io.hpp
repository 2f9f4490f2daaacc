#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "streammatch/core.hpp"

// Stream file format (line oriented, UTF-8):
//
//   # free comments
//   n=<int> weighted=<0|1>[ W=<int>]
//   + <u> <v>[ <w>]
//   - <u> <v>[ <w>]
//   #pass                      (starts the next pass)
//   #lines=<count>             (optional trailer: total update lines)
//
// Weighted files carry the weight column on every update; unweighted files
// carry none (weight 1 implied). Consistency (multiplicity 0/1, deletions
// matching the inserted weight) is validated while parsing, per pass.

namespace streammatch {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct ConsistencyError : std::runtime_error {
  int line;
  ConsistencyError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

inline StreamSource parse_stream(std::istream& in) {
  StreamSource src;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  long long update_lines = 0;
  std::map<std::uint64_t, Weight> live;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == "#pass") {
        if (!have_header) throw ParseError(line_no, "pass marker before header");
        src.passes.emplace_back();
        live.clear();
        continue;
      }
      if (line.rfind("#lines=", 0) == 0) {
        long long declared = 0;
        try {
          declared = std::stoll(line.substr(7));
        } catch (...) {
          throw ParseError(line_no, "bad #lines trailer");
        }
        if (declared != update_lines)
          throw ParseError(line_no, "#lines trailer does not match the update count");
      }
      continue;
    }
    if (!have_header) {
      std::istringstream hs(line);
      std::string tok;
      bool saw_n = false, saw_weighted = false;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "malformed header token: " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
          if (key == "n") {
            src.n = static_cast<std::uint32_t>(std::stoul(val));
            saw_n = true;
          } else if (key == "weighted") {
            src.weighted = std::stoi(val) != 0;
            saw_weighted = true;
          } else if (key == "W") {
            src.declared_max_weight = std::stoll(val);
          } else {
            throw ParseError(line_no, "unknown header key: " + key);
          }
        } catch (const ParseError&) {
          throw;
        } catch (...) {
          throw ParseError(line_no, "bad header value: " + tok);
        }
      }
      if (!saw_n || !saw_weighted) throw ParseError(line_no, "header needs n= and weighted=");
      have_header = true;
      src.passes.emplace_back();
      continue;
    }

    std::istringstream ls(line);
    std::string sign;
    long long u = -1, v = -1, w = 1;
    ls >> sign >> u >> v;
    if ((sign != "+" && sign != "-") || u < 0 || v < 0)
      throw ParseError(line_no, "malformed update: " + line);
    if (src.weighted) {
      if (!(ls >> w)) throw ParseError(line_no, "weighted stream update lacks a weight");
    } else {
      long long spurious;
      if (ls >> spurious) throw ParseError(line_no, "unweighted stream update carries a weight");
    }
    std::string rest;
    if (ls >> rest) throw ParseError(line_no, "trailing tokens: " + rest);

    if (u == v) throw ConsistencyError(line_no, "self-loop");
    if (u >= src.n || v >= src.n) throw ConsistencyError(line_no, "vertex out of range");
    if (w < 1) throw ConsistencyError(line_no, "weight must be >= 1");
    if (src.weighted && src.declared_max_weight > 0 && w > src.declared_max_weight)
      throw ConsistencyError(line_no, "weight exceeds declared W");

    WeightedEdge e(static_cast<VertexId>(u), static_cast<VertexId>(v), w);
    std::uint64_t id = edge_pair_id(e);
    if (sign == "+") {
      if (live.count(id)) throw ConsistencyError(line_no, "edge already present");
      live[id] = e.w;
    } else {
      auto it = live.find(id);
      if (it == live.end()) throw ConsistencyError(line_no, "deleting an absent edge");
      if (it->second != e.w)
        throw ConsistencyError(line_no, "deletion weight differs from the live edge");
      live.erase(it);
    }
    src.passes.back().emplace_back(sign == "+" ? +1 : -1, e);
    ++update_lines;
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  return src;
}

inline StreamSource parse_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return parse_stream(in);
}

inline std::string write_stream(const StreamSource& src) {
  std::ostringstream out;
  out << "n=" << src.n << " weighted=" << (src.weighted ? 1 : 0);
  if (src.declared_max_weight > 0) out << " W=" << src.declared_max_weight;
  out << "\n";
  for (std::size_t p = 0; p < src.passes.size(); ++p) {
    if (p > 0) out << "#pass\n";
    for (const auto& up : src.passes[p]) {
      out << (up.sign > 0 ? "+" : "-") << " " << up.edge.u << " " << up.edge.v;
      if (src.weighted) out << " " << up.edge.w;
      out << "\n";
    }
  }
  return out.str();
}

inline void write_stream_file(const StreamSource& src, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << write_stream(src);
}

}  // namespace streammatch
