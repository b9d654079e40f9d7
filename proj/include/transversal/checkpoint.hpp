#pragma once

// Round-boundary checkpoints. Text layout:
//
//   transversal-checkpoint 1
//   config_hash <hex>
//   round <index of the next round>
//   rounds <count>
//   <n> <cubes_in> <pruned x5> <subdivided>     (one line per finished round)
//   cubes <count>
//   <k> <n> <p1> ... <pk>                       (one line per pending cube)

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "transversal/error.hpp"
#include "transversal/search.hpp"

namespace transversal {

struct Checkpoint {
  std::string config_hash;
  int round = 0;
  std::vector<RoundStats> rounds;
  std::vector<AngleCube> cubes;
};

inline bool checkpoint_exists(const std::string& path) { return std::filesystem::exists(path); }

inline void write_checkpoint(std::ostream& os, const Checkpoint& cp) {
  os << "transversal-checkpoint 1\n";
  os << "config_hash " << cp.config_hash << '\n';
  os << "round " << cp.round << '\n';
  os << "rounds " << cp.rounds.size() << '\n';
  for (const RoundStats& r : cp.rounds) {
    os << r.n << ' ' << r.cubes_in;
    for (auto v : r.pruned) os << ' ' << v;
    os << ' ' << r.subdivided << '\n';
  }
  os << "cubes " << cp.cubes.size() << '\n';
  std::string line;
  for (const AngleCube& c : cp.cubes) {
    line.clear();
    line += std::to_string(c.k);
    line += ' ';
    line += std::to_string(c.n);
    for (int i = 0; i < c.k; ++i) {
      line += ' ';
      line += std::to_string(c.p[i]);
    }
    line += '\n';
    os << line;
  }
}

/// Writes to a sibling temporary file and renames it over `path`, so an
/// interrupted write never leaves a truncated checkpoint behind.
inline void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw IoError("cannot write checkpoint " + tmp);
    write_checkpoint(os, cp);
    os.flush();
    if (!os) throw IoError("failed writing checkpoint " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place: " + ec.message());
}

inline Checkpoint read_checkpoint(std::istream& is) {
  auto fail = [](const std::string& what) { return IoError("malformed checkpoint: " + what); };
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != "transversal-checkpoint" || version != 1) throw fail("bad header");
  Checkpoint cp;
  if (!(is >> word >> cp.config_hash) || word != "config_hash") throw fail("missing config_hash");
  if (!(is >> word >> cp.round) || word != "round" || cp.round < 0) throw fail("missing round");
  std::size_t count = 0;
  if (!(is >> word >> count) || word != "rounds") throw fail("missing rounds");
  cp.rounds.resize(count);
  for (RoundStats& r : cp.rounds) {
    is >> r.n >> r.cubes_in;
    for (auto& v : r.pruned) is >> v;
    is >> r.subdivided;
    if (!is) throw fail("truncated round statistics");
  }
  if (!(is >> word >> count) || word != "cubes") throw fail("missing cubes");
  cp.cubes.resize(count);
  for (AngleCube& c : cp.cubes) {
    unsigned k = 0;
    std::uint32_t n = 0;
    if (!(is >> k >> n) || k < 1 || k > 5) throw fail("bad cube record");
    c.k = static_cast<std::uint8_t>(k);
    c.n = n;
    for (unsigned i = 0; i < k; ++i) {
      unsigned p = 0;
      if (!(is >> p) || p > 65535) throw fail("bad cube index");
      c.p[i] = static_cast<std::uint16_t>(p);
    }
    if (!c.valid()) throw fail("cube indices out of order or range");
  }
  return cp;
}

inline Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open checkpoint " + path);
  return read_checkpoint(is);
}

}  // namespace transversal
