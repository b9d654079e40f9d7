#pragma once

// Certificates built by hand for tests that only exercise bookkeeping.

#include "transversal/search.hpp"

namespace fixture {

/// One round at n0 in which every initial cube is pruned, so the verdict is
/// Empty and every identity holds.
inline transversal::Certificate empty_certificate(transversal::Mode mode, double r1, double r2) {
  using namespace transversal;
  Certificate c;
  c.config = CampaignConfig::defaults_for(mode);
  c.config.r1 = r1;
  c.config.r2 = r2;
  c.config.n0 = 12;
  c.config.depth_cap = 2;
  if (mode == Mode::GridC) c.config.center_check_n = 48;
  c.config_hash = c.config.hash();
  RoundStats r;
  r.n = 12;
  r.cubes_in = count_initial_cubes(cube_dimension(mode), 12);
  r.pruned[static_cast<std::size_t>(PruneReason::TransversalViolated)] = r.cubes_in;
  c.rounds = {r};
  c.verdict = Verdict::Empty;
  return c;
}

/// Same shape, but three cubes are left after the only allowed round.
inline transversal::Certificate capped_certificate(transversal::Mode mode, double r1, double r2) {
  using namespace transversal;
  Certificate c = empty_certificate(mode, r1, r2);
  c.config.depth_cap = 0;
  c.config_hash = c.config.hash();
  c.rounds[0].pruned[static_cast<std::size_t>(PruneReason::TransversalViolated)] -= 3;
  c.rounds[0].subdivided = 3;
  c.verdict = Verdict::DepthCapReached;
  c.survivor_count = 3;
  AngleCube q;
  q.n = 12;
  q.k = static_cast<std::uint8_t>(cube_dimension(mode));
  c.survivors = {q};
  return c;
}

}  // namespace fixture
