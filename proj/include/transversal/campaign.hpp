#pragma once

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "transversal/checkpoint.hpp"
#include "transversal/search.hpp"

namespace transversal {

/// Runs the rounds n0, 2 n0, ..., n0 * 2^depth_cap until no cube survives.
/// In grid-c mode the round at `center_check_n` checks only cube centers and
/// is final.
inline CampaignOutcome run_campaign(const CampaignConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const int k = cube_dimension(cfg.mode);

  Certificate cert;
  cert.config = cfg;
  cert.config_hash = cfg.hash();

  std::vector<AngleCube> current;
  int first_round = 0;
  if (opts.resume && !opts.checkpoint_path.empty() && checkpoint_exists(opts.checkpoint_path)) {
    Checkpoint cp = read_checkpoint(opts.checkpoint_path);
    if (cp.config_hash != cert.config_hash)
      throw ConfigError("checkpoint config hash " + cp.config_hash + " does not match " + cert.config_hash);
    first_round = cp.round;
    cert.rounds = std::move(cp.rounds);
    current = std::move(cp.cubes);
  } else {
    current = initial_cubes(k, cfg.n0);
  }

  detail::AuditReservoir audit(opts.audit_per_reason, opts.audit_seed);
  constexpr std::size_t kChunk = 4096;
  bool finished = false;

  for (int t = first_round; t <= cfg.depth_cap && !current.empty(); ++t) {
    const std::uint32_t n = cfg.resolution(t);
    const bool center_round = cfg.mode == Mode::GridC && cfg.center_check_n != 0 &&
                              n == static_cast<std::uint32_t>(cfg.center_check_n);
    const bool last = center_round || t == cfg.depth_cap;
    const RuleKernel kernel(cfg, n);

    struct ChunkOut {
      std::array<std::uint64_t, kReasonCount> pruned{};
      std::vector<AngleCube> next;  // children, or unresolved cubes when last
      detail::AuditReservoir audit{0, 0};
    };
    const std::size_t chunks = (current.size() + kChunk - 1) / kChunk;
    std::vector<ChunkOut> outs(chunks);
    detail::parallel_for_index(chunks, cfg.threads, [&](std::size_t ci) {
      ChunkOut& out = outs[ci];
      out.audit = detail::AuditReservoir(opts.audit_per_reason, opts.audit_seed);
      const std::size_t lo = ci * kChunk, hi = std::min(current.size(), lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        const AngleCube& c = current[i];
        std::optional<PruneReason> reason;
        if (center_round) {
          if (kernel.center_passes(c)) reason = PruneReason::CenterCheckPassed;
        } else {
          reason = kernel.evaluate(c);
        }
        if (reason) {
          ++out.pruned[static_cast<std::size_t>(*reason)];
          out.audit.offer(c, *reason);
        } else if (last) {
          out.next.push_back(c);
        } else {
          subdivide_into(c, out.next);
        }
      }
    });

    RoundStats rs;
    rs.n = n;
    rs.cubes_in = current.size();
    std::vector<AngleCube> next;
    std::size_t next_size = 0;
    for (const auto& o : outs) next_size += o.next.size();
    next.reserve(next_size);
    std::uint64_t unresolved = 0;
    for (auto& o : outs) {
      for (std::size_t r = 0; r < kReasonCount; ++r) rs.pruned[r] += o.pruned[r];
      audit.merge(o.audit);
      next.insert(next.end(), o.next.begin(), o.next.end());
    }
    outs.clear();
    unresolved = rs.cubes_in - rs.pruned_total();
    rs.subdivided = unresolved;
    cert.rounds.push_back(rs);
    if (opts.on_round) opts.on_round(rs);

    if (last) {
      cert.survivor_count = unresolved;
      if (next.size() > cfg.max_listed_survivors) next.resize(cfg.max_listed_survivors);
      cert.survivors = std::move(next);
      if (unresolved == 0) {
        cert.verdict = Verdict::Empty;
      } else {
        cert.verdict = center_round ? Verdict::Exhausted : Verdict::DepthCapReached;
      }
      current.clear();
      finished = true;
      break;
    }
    current = std::move(next);
    if (!current.empty() && !opts.checkpoint_path.empty())
      write_checkpoint(opts.checkpoint_path, Checkpoint{cert.config_hash, t + 1, cert.rounds, current});
  }
  if (!finished) {
    // Loop left because a round produced no children (or resumed empty).
    cert.verdict = Verdict::Empty;
    cert.survivor_count = 0;
  }

  cert.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(cert), audit.records()};
}

inline Certificate run_campaign(const CampaignConfig& cfg) { return run_campaign(cfg, RunOptions{}).certificate; }

}  // namespace transversal
