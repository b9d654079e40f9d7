#include <gtest/gtest.h>

#include "transversal/audit.hpp"
#include "transversal/campaign.hpp"

using namespace transversal;

namespace {

std::size_t records_with(const std::vector<AuditRecord>& rs, PruneReason r) {
  return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), [&](const AuditRecord& a) { return a.reason == r; }));
}

}  // namespace

TEST(Audit, ReservoirKeepsAtMostCapacityPerReason) {
  CampaignConfig cfg = CampaignConfig::defaults_for(Mode::Lemma15);
  cfg.r2 = 1.70;
  cfg.depth_cap = 3;
  RunOptions opts;
  opts.audit_per_reason = 300;
  const CampaignOutcome out = run_campaign(cfg, opts);
  for (PruneReason r : {PruneReason::LargeArc, PruneReason::JohnInfeasible, PruneReason::TransversalViolated})
    EXPECT_EQ(records_with(out.audit, r), 300u);
  EXPECT_EQ(records_with(out.audit, PruneReason::RegionVerified), 0u);
}

TEST(Audit, ReservoirIsIndependentOfSeedOrderButNotSeed) {
  detail::AuditReservoir a(3, 1), b(3, 1), c(3, 2);
  std::vector<AngleCube> cubes = initial_cubes(4, 12);
  for (const AngleCube& q : cubes) a.offer(q, PruneReason::LargeArc);
  for (auto it = cubes.rbegin(); it != cubes.rend(); ++it) b.offer(*it, PruneReason::LargeArc);
  for (const AngleCube& q : cubes) c.offer(q, PruneReason::LargeArc);
  EXPECT_EQ(a.records(), b.records());
  EXPECT_NE(a.records(), c.records());
}

TEST(Audit, Lemma15PrunesAreSound) {
  CampaignConfig cfg = CampaignConfig::defaults_for(Mode::Lemma15);
  cfg.r2 = 1.70;
  cfg.depth_cap = 3;
  RunOptions opts;
  opts.audit_per_reason = 400;
  const CampaignOutcome out = run_campaign(cfg, opts);
  const SoundnessReport rep = check_soundness(cfg, out.audit, 10, 3);
  EXPECT_TRUE(rep.clean()) << rep.violations.front().detail;
  EXPECT_GE(rep.total_samples(), 10000u);
}

TEST(Audit, GridBPrunesIncludingRegionAreSound) {
  CampaignConfig cfg = CampaignConfig::defaults_for(Mode::GridB);
  cfg.r1 = cfg.r2 = 1.65;
  cfg.n0 = 24;
  cfg.depth_cap = 1;
  cfg.region_depth = 6;
  RunOptions opts;
  opts.audit_per_reason = 40;
  const CampaignOutcome out = run_campaign(cfg, opts);
  ASSERT_GT(records_with(out.audit, PruneReason::RegionVerified), 0u);
  const SoundnessReport rep = check_soundness(cfg, out.audit, 5, 4, 8);
  EXPECT_TRUE(rep.clean()) << rep.violations.front().detail;
  EXPECT_GT(rep.region_points, 0u);
}

TEST(Audit, MislabeledRecordsAreCaught) {
  CampaignConfig cfg = CampaignConfig::defaults_for(Mode::GridB);
  cfg.r1 = cfg.r2 = 1.65;
  AngleCube square;
  square.n = 120;
  square.k = 4;
  square.p = {0, 30, 60, 90, 0};
  // The square on a circle of radius 1.65 has no large arc, F = 0 and
  // satisfies T(B, 3)... except that its triples have width 2.33 > 2.
  const std::vector<AuditRecord> recs{{square, PruneReason::LargeArc}, {square, PruneReason::JohnInfeasible}};
  const SoundnessReport rep = check_soundness(cfg, recs, 5, 1);
  EXPECT_FALSE(rep.clean());
  bool arc = false, john = false;
  for (const auto& v : rep.violations) {
    arc = arc || v.reason == PruneReason::LargeArc;
    john = john || v.reason == PruneReason::JohnInfeasible;
  }
  EXPECT_TRUE(arc);
  EXPECT_TRUE(john);

  AngleCube narrow = square;
  narrow.p = {0, 1, 2, 3, 0};
  const SoundnessReport rep2 = check_soundness(cfg, {{narrow, PruneReason::TransversalViolated}}, 5, 1);
  EXPECT_FALSE(rep2.clean());
}
