#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "transversal/campaign.hpp"
#include "transversal/certificate_json.hpp"

using namespace transversal;

namespace {

Certificate real_certificate() {
  CampaignConfig cfg = CampaignConfig::defaults_for(Mode::GridB);
  cfg.r1 = cfg.r2 = 1.65;
  cfg.n0 = 24;
  cfg.depth_cap = 0;
  cfg.region_depth = 5;
  cfg.max_listed_survivors = 20;
  return run_campaign(cfg);
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

}  // namespace

TEST(CertificateJson, RoundTripPreservesEverything) {
  const Certificate c = real_certificate();
  const std::string text = serialize_certificate(c);
  const Certificate back = parse_certificate(text);
  EXPECT_EQ(back.config_hash, c.config_hash);
  EXPECT_EQ(back.config.hash(), c.config.hash());
  EXPECT_EQ(back.rounds, c.rounds);
  EXPECT_EQ(back.verdict, c.verdict);
  EXPECT_EQ(back.survivor_count, c.survivor_count);
  EXPECT_EQ(back.survivors, c.survivors);
  EXPECT_EQ(back.wall_seconds, c.wall_seconds);
  EXPECT_EQ(serialize_certificate(back), text);
}

TEST(CertificateJson, FieldOrderIsFixed) {
  const Json j = certificate_to_json(fixture::empty_certificate(Mode::GridC, 1.8, 1.65));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want{"schema_version", "config_hash", "mode",           "r1",        "r2",
                                      "config",         "rounds",      "verdict",        "survivor_count",
                                      "survivors",      "wall_seconds", "digest"};
  EXPECT_EQ(keys, want);
  std::vector<std::string> reasons;
  for (auto it = j["rounds"][0]["pruned"].begin(); it != j["rounds"][0]["pruned"].end(); ++it) reasons.push_back(it.key());
  EXPECT_EQ(reasons, (std::vector<std::string>{"TransversalViolated", "JohnInfeasible", "LargeArc", "RegionVerified",
                                               "CenterCheckPassed"}));
  EXPECT_EQ(j["config"]["center_check_n"], 48);
}

TEST(CertificateJson, DigestIgnoresWallSecondsOnly) {
  Certificate a = fixture::empty_certificate(Mode::GridB, 1.8, 1.65);
  Certificate b = a;
  b.wall_seconds = 99.5;
  EXPECT_EQ(certificate_to_json(a)["digest"], certificate_to_json(b)["digest"]);
  b.config.max_listed_survivors = 5;
  b.config_hash = b.config.hash();
  EXPECT_NE(certificate_to_json(a)["digest"], certificate_to_json(b)["digest"]);
  // Editing wall_seconds in the file is accepted.
  const std::string text = serialize_certificate(a);
  EXPECT_NO_THROW(parse_certificate(replace_once(text, "\"wall_seconds\": 0.0", "\"wall_seconds\": 12.5")));
}

TEST(CertificateJson, TamperingIsDetected) {
  const std::string text = serialize_certificate(real_certificate());
  EXPECT_THROW(parse_certificate(replace_once(text, "\"verdict\": \"DepthCapReached\"", "\"verdict\": \"Empty\"")),
               InconsistentInputs);
  EXPECT_THROW(parse_certificate(replace_once(text, "\"mode\": \"grid-b\"", "\"mode\": \"grid-c\"")), InconsistentInputs);

  // A consistent edit with a recomputed digest still fails the bookkeeping.
  Json j = Json::parse(text);
  j["verdict"] = "Empty";
  j["digest"] = detail::certificate_digest(j);
  EXPECT_THROW(certificate_from_json(j), InconsistentInputs);
}

TEST(CertificateJson, MalformedInputIsAnIoError) {
  EXPECT_THROW(parse_certificate("{"), IoError);
  EXPECT_THROW(parse_certificate("[]"), IoError);
  EXPECT_THROW(parse_certificate("{\"schema_version\": 1}"), IoError);
  Json j = certificate_to_json(fixture::empty_certificate(Mode::GridB, 1.8, 1.65));
  j["schema_version"] = 2;
  EXPECT_THROW(certificate_from_json(j), IoError);
  j = certificate_to_json(fixture::capped_certificate(Mode::GridB, 1.8, 1.65));
  j["survivors"][0] = Json::array({12, 1, 2});
  EXPECT_THROW(certificate_from_json(j), IoError);
  j["survivors"][0] = Json::array({12, 3, 2, 1, 0});
  EXPECT_THROW(certificate_from_json(j), IoError);
  EXPECT_THROW(read_certificate("/nonexistent/certificate.json"), IoError);
}

TEST(CertificateJson, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "transversal_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "cert.json").string();
  const Certificate c = fixture::capped_certificate(Mode::Lemma15, 3.0, 1.62);
  write_certificate(path, c);
  EXPECT_EQ(serialize_certificate(read_certificate(path)), serialize_certificate(c));
}

TEST(BoundReportJson, Shape) {
  BoundInputs in;
  in.grid.step = 0.19;
  in.part_a = true;
  const Json j = bound_report_to_json(assemble_bound(in));
  EXPECT_EQ(j["status"], "Partial");
  EXPECT_TRUE(j["bound"].is_null());
  EXPECT_EQ(j["grid_b"]["required"], 13);
  EXPECT_EQ(j["grid_b"]["verified"], 0);
  EXPECT_EQ(j["inequalities"].size(), 4u);
  EXPECT_EQ(j["gaps"].size(), 27u);  // lemma15 plus 13 + 13 pairs
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"status", "bound", "part_a", "lemma15", "grid_b", "grid_c", "inequalities", "gaps"}));
}
