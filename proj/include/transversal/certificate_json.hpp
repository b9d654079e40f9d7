#pragma once

// JSON form of certificates and bound reports. Field order is fixed so equal
// campaigns serialize to identical bytes apart from wall_seconds.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "transversal/certify.hpp"
#include "transversal/detail/hash.hpp"
#include "transversal/error.hpp"
#include "transversal/search.hpp"

namespace transversal {

using Json = nlohmann::ordered_json;

inline constexpr int kCertificateSchemaVersion = 1;

namespace detail {

inline Json config_to_json(const CampaignConfig& c) {
  Json j;
  j["mode"] = std::string(to_string(c.mode));
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["n0"] = c.n0;
  j["depth_cap"] = c.depth_cap;
  j["region_depth"] = c.region_depth;
  j["region_min_half_side"] = c.effective_min_half_side();
  j["rho"] = c.rho;
  j["center_check_n"] = c.mode == Mode::GridC ? c.center_check_n : 0;
  j["slack"] = c.slack;
  j["max_listed_survivors"] = c.max_listed_survivors;
  return j;
}

inline CampaignConfig config_from_json(const Json& j) {
  CampaignConfig c;
  c.mode = parse_mode(j.at("mode").get<std::string>());
  c.r1 = j.at("r1").get<double>();
  c.r2 = j.at("r2").get<double>();
  c.n0 = j.at("n0").get<int>();
  c.depth_cap = j.at("depth_cap").get<int>();
  c.region_depth = j.at("region_depth").get<int>();
  c.region_min_half_side = j.at("region_min_half_side").get<double>();
  c.rho = j.at("rho").get<double>();
  c.center_check_n = j.at("center_check_n").get<int>();
  c.slack = j.at("slack").get<double>();
  c.max_listed_survivors = j.at("max_listed_survivors").get<std::size_t>();
  return c;
}

/// Digest over everything but wall_seconds and the digest itself.
inline std::string certificate_digest(Json j) {
  j.erase("wall_seconds");
  j.erase("digest");
  Fnv1a h;
  h.update(j.dump());
  return hex64(h.value());
}

}  // namespace detail

inline Json certificate_to_json(const Certificate& c) {
  Json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["config_hash"] = c.config_hash;
  j["mode"] = std::string(to_string(c.config.mode));
  j["r1"] = c.config.r1;
  j["r2"] = c.config.r2;
  j["config"] = detail::config_to_json(c.config);
  Json rounds = Json::array();
  for (const RoundStats& r : c.rounds) {
    Json jr;
    jr["n"] = r.n;
    jr["cubes_in"] = r.cubes_in;
    Json pruned = Json::object();
    for (PruneReason reason : kAllReasons) pruned[std::string(to_string(reason))] = r.pruned[static_cast<std::size_t>(reason)];
    jr["pruned"] = std::move(pruned);
    jr["subdivided"] = r.subdivided;
    rounds.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rounds);
  j["verdict"] = std::string(to_string(c.verdict));
  j["survivor_count"] = c.survivor_count;
  Json survivors = Json::array();
  for (const AngleCube& q : c.survivors) {
    Json s = Json::array();
    s.push_back(q.n);
    for (int i = 0; i < q.k; ++i) s.push_back(q.p[i]);
    survivors.push_back(std::move(s));
  }
  j["survivors"] = std::move(survivors);
  j["wall_seconds"] = c.wall_seconds;
  j["digest"] = detail::certificate_digest(j);
  return j;
}

inline std::string serialize_certificate(const Certificate& c) { return certificate_to_json(c).dump(2) + "\n"; }

/// Throws IoError on malformed documents and InconsistentInputs when the
/// contents contradict the digest or the bookkeeping identities.
inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  try {
    if (j.at("schema_version").get<int>() != kCertificateSchemaVersion) throw IoError("unsupported certificate schema version");
    c.config_hash = j.at("config_hash").get<std::string>();
    c.config = detail::config_from_json(j.at("config"));
    if (j.at("mode").get<std::string>() != to_string(c.config.mode) || j.at("r1").get<double>() != c.config.r1 ||
        j.at("r2").get<double>() != c.config.r2)
      throw InconsistentInputs("certificate header disagrees with its config");
    for (const Json& jr : j.at("rounds")) {
      RoundStats r;
      r.n = jr.at("n").get<std::uint32_t>();
      r.cubes_in = jr.at("cubes_in").get<std::uint64_t>();
      for (PruneReason reason : kAllReasons)
        r.pruned[static_cast<std::size_t>(reason)] = jr.at("pruned").at(std::string(to_string(reason))).get<std::uint64_t>();
      r.subdivided = jr.at("subdivided").get<std::uint64_t>();
      c.rounds.push_back(r);
    }
    c.verdict = parse_verdict(j.at("verdict").get<std::string>());
    c.survivor_count = j.at("survivor_count").get<std::uint64_t>();
    const int k = cube_dimension(c.config.mode);
    for (const Json& s : j.at("survivors")) {
      if (!s.is_array() || static_cast<int>(s.size()) != k + 1) throw IoError("bad survivor record");
      AngleCube q;
      q.k = static_cast<std::uint8_t>(k);
      q.n = s[0].get<std::uint32_t>();
      for (int i = 0; i < k; ++i) q.p[i] = s[static_cast<std::size_t>(i + 1)].get<std::uint16_t>();
      if (!q.valid()) throw IoError("survivor cube out of range");
      c.survivors.push_back(q);
    }
    c.wall_seconds = j.at("wall_seconds").get<double>();
    if (j.at("digest").get<std::string>() != detail::certificate_digest(j))
      throw InconsistentInputs("certificate digest does not match its contents");
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed certificate: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("malformed certificate: ") + e.what());
  }
  check_certificate_consistency(c);
  return c;
}

inline Certificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("certificate is not JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

inline void write_certificate(const std::string& path, const Certificate& c) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path);
  os << serialize_certificate(c);
  if (!os) throw IoError("failed writing " + path);
}

inline Certificate read_certificate(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_certificate(ss.str());
}

inline Json bound_report_to_json(const BoundReport& r) {
  Json j;
  j["status"] = std::string(to_string(r.status));
  j["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
  j["part_a"] = r.part_a;
  j["lemma15"] = r.lemma15;
  j["grid_b"] = {{"required", r.grid_b_required}, {"verified", r.grid_b_verified}};
  j["grid_c"] = {{"required", r.grid_c_required}, {"verified", r.grid_c_verified}};
  Json ineq = Json::array();
  for (const auto& q : r.inequalities) ineq.push_back({{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"holds", q.holds}});
  j["inequalities"] = std::move(ineq);
  j["gaps"] = r.gaps;
  return j;
}

}  // namespace transversal
