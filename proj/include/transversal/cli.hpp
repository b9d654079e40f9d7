#pragma once

// Command-line front end. Exit codes: 0 Empty (or Complete for `report`),
// 2 DepthCapReached (or Partial), 3 Exhausted, 1 any error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "transversal/audit.hpp"
#include "transversal/campaign.hpp"
#include "transversal/certificate_json.hpp"
#include "transversal/certify.hpp"
#include "transversal/geom.hpp"
#include "transversal/john.hpp"
#include "transversal/region.hpp"
#include "transversal/search.hpp"

namespace transversal::cli {

inline constexpr int kExitEmpty = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDepthCap = 2;
inline constexpr int kExitExhausted = 3;

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Empty: return kExitEmpty;
    case Verdict::DepthCapReached: return kExitDepthCap;
    case Verdict::Exhausted: return kExitExhausted;
  }
  return kExitError;
}

/// Exhausted outranks DepthCapReached outranks Empty.
inline int combine_exit_codes(int a, int b) {
  auto rank = [](int c) { return c == kExitError ? 3 : c == kExitExhausted ? 2 : c == kExitDepthCap ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Angles reduced to [0, 2 pi) and sorted; throws on repeats.
inline std::vector<double> normalized_angles(std::vector<double> a, bool degrees) {
  for (double& x : a) {
    if (!std::isfinite(x)) throw InvalidArgument("angles must be finite");
    if (degrees) x *= kPi / 180.0;
    x = std::fmod(x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    if (x >= kTwoPi) x = 0.0;
  }
  std::sort(a.begin(), a.end());
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i - 1] < a[i])) throw InvalidArgument("angles must be distinct");
  return a;
}

inline std::string certificate_name(const CampaignConfig& c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s-%.3f-%.3f.json", std::string(to_string(c.mode)).c_str(), c.r1, c.r2);
  return buf;
}

}  // namespace detail

struct CheckTupleArgs {
  std::vector<double> angles;
  bool degrees = false;
  double r1 = 1.0, r2 = 1.0;
  std::string mode = "lemma15";
  int n = 120;
};

/// Single-tuple probe: triple widths, functional values, arc gaps, and the
/// prune rule that fires on the cube containing the tuple at resolution n.
inline int cmd_check_tuple(const CheckTupleArgs& a, std::ostream& out) {
  if (a.angles.size() < 3 || a.angles.size() > 5) throw InvalidArgument("check-tuple needs 3 to 5 angles");
  const std::vector<double> angles = detail::normalized_angles(a.angles, a.degrees);
  const AngleTuple t{std::span<const double>(angles)};
  const Ellipse e = Ellipse::axis_aligned(a.r1, a.r2);
  const PointSet z = ellipse_boundary_points(e, angles);
  const std::size_t k = angles.size();

  out << "angles:";
  for (double x : angles) out << ' ' << detail::fmt("%.9f", x);
  out << "\npoints:";
  for (Point2 p : z) out << " (" << detail::fmt("%.9f", p.x) << ", " << detail::fmt("%.9f", p.y) << ')';
  out << '\n';
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l)
        out << "triple " << i + 1 << ' ' << j + 1 << ' ' << l + 1 << " width " << detail::fmt("%.9f", min_altitude(z[i], z[j], z[l]))
            << '\n';
  out << "max triple width " << detail::fmt("%.9f", max_triple_width(z)) << ", T(B, 3) "
      << (satisfies_T3(z, 1.0) ? "holds" : "fails") << '\n';

  out << "arc gaps:";
  for (std::size_t i = 0; i < k; ++i) {
    const double next = i + 1 < k ? angles[i + 1] : angles[0] + kTwoPi;
    out << ' ' << detail::fmt("%.9f", next - angles[i]);
  }
  out << " (max " << detail::fmt("%.9f", max_arc_gap(t)) << ")\n";

  if (k == 4) {
    out << "F = " << detail::fmt("%.12g", four_point_john_residual(t)) << '\n';
  } else if (k == 5) {
    const auto v = five_point_values(t);
    out << "five values:";
    for (double x : v) out << ' ' << detail::fmt("%.12g", x);
    const bool pos = std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
    const bool neg = std::all_of(v.begin(), v.end(), [](double x) { return x < 0.0; });
    out << "\nsign vector: " << (pos ? "all positive" : neg ? "all negative" : "mixed") << '\n';
  }
  out << "simplex condition: " << to_string(simplex_condition(t, 0.0)) << '\n';

  const Mode mode = parse_mode(a.mode);
  const int dim = cube_dimension(mode);
  if (static_cast<int>(k) != dim) {
    out << "rule: " << to_string(mode) << " cubes have " << dim << " angles, none evaluated\n";
    return 0;
  }
  if (a.n < 3 || a.n % 3 != 0) throw InvalidArgument("resolution must be a positive multiple of 3");
  AngleCube c;
  c.n = static_cast<std::uint32_t>(a.n);
  c.k = static_cast<std::uint8_t>(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto p = static_cast<long>(std::floor(angles[i] * a.n / kTwoPi));
    c.p[i] = static_cast<std::uint16_t>(std::clamp<long>(p, 0, a.n - 1));
  }
  CampaignConfig cfg = CampaignConfig::defaults_for(mode);
  cfg.r1 = a.r1;
  cfg.r2 = a.r2;
  const RuleKernel kernel(cfg, c.n);
  const auto reason = kernel.evaluate(c);
  out << "cube at n = " << a.n << ": p =";
  for (std::size_t i = 0; i < k; ++i) out << ' ' << c.p[i];
  out << "\nrule: " << (reason ? std::string(to_string(*reason)) : std::string("none")) << '\n';
  return 0;
}

struct VerifyArgs {
  std::string mode;
  std::optional<double> r1, r2;
  std::optional<double> pair_grid_step;
  std::optional<int> n0, depth_cap, region_depth, center_check_n;
  std::optional<double> region_min_half_side, rho, slack;
  std::optional<std::size_t> max_survivors;
  std::string checkpoint;
  bool resume = false;
  std::string out;
  int threads = 1;
  std::size_t audit = 0;  // pruned cubes sampled per reason
  int audit_tuples = 10;
  bool quiet = false;
};

inline CampaignConfig make_config(const VerifyArgs& a, double r1, double r2) {
  CampaignConfig c = CampaignConfig::defaults_for(parse_mode(a.mode));
  c.r1 = r1;
  c.r2 = r2;
  if (a.n0) c.n0 = *a.n0;
  if (a.depth_cap) c.depth_cap = *a.depth_cap;
  if (a.region_depth) c.region_depth = *a.region_depth;
  if (a.center_check_n) c.center_check_n = *a.center_check_n;
  if (a.region_min_half_side) c.region_min_half_side = *a.region_min_half_side;
  if (a.rho) c.rho = *a.rho;
  if (a.slack) c.slack = *a.slack;
  if (a.max_survivors) c.max_listed_survivors = *a.max_survivors;
  c.threads = a.threads;
  c.validate();
  return c;
}

inline int run_one(const VerifyArgs& a, const CampaignConfig& cfg, const std::string& checkpoint,
                   const std::string& out_path, std::ostream& out) {
  RunOptions opts;
  opts.checkpoint_path = checkpoint;
  opts.resume = a.resume;
  opts.audit_per_reason = a.audit;
  int round = 0;
  if (!a.quiet) {
    opts.on_round = [&](const RoundStats& r) {
      out << "round " << round++ << " n=" << r.n << " in=" << r.cubes_in;
      for (PruneReason reason : kAllReasons) out << ' ' << to_string(reason) << '=' << r.pruned[static_cast<std::size_t>(reason)];
      out << " unresolved=" << r.subdivided << std::endl;
    };
  }
  out << "campaign " << to_string(cfg.mode) << " r1=" << cfg.r1 << " r2=" << cfg.r2 << " n0=" << cfg.n0
      << " depth_cap=" << cfg.depth_cap << " config_hash=" << cfg.hash() << std::endl;
  const CampaignOutcome res = run_campaign(cfg, opts);
  const Certificate& cert = res.certificate;
  out << "verdict " << to_string(cert.verdict) << " survivors=" << cert.survivor_count << " wall_seconds="
      << detail::fmt("%.3f", cert.wall_seconds) << std::endl;
  if (!out_path.empty()) write_certificate(out_path, cert);
  if (!checkpoint.empty() && std::filesystem::exists(checkpoint)) std::filesystem::remove(checkpoint);

  if (a.audit > 0) {
    const SoundnessReport rep = check_soundness(cfg, res.audit, a.audit_tuples);
    out << "soundness samples=" << rep.total_samples() << " region_points=" << rep.region_points
        << " violations=" << rep.violations.size() << std::endl;
    if (!rep.clean()) {
      for (const auto& v : rep.violations) out << "violation " << to_string(v.reason) << ": " << v.detail << '\n';
      throw Error("soundness sampling found violations");
    }
  }
  return exit_code(cert.verdict);
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const Mode mode = parse_mode(a.mode);
  if (a.pair_grid_step) {
    if (a.r1 || a.r2) throw InvalidArgument("--pair-grid-step excludes --r1/--r2");
    if (mode == Mode::Lemma15) throw InvalidArgument("lemma15 runs a single pair");
    PairGrid g;
    g.step = *a.pair_grid_step;
    const auto pairs = enumerate_pair_grid(g);
    if (!a.out.empty()) std::filesystem::create_directories(a.out);
    int code = kExitEmpty;
    for (AxisPair p : pairs) {
      const CampaignConfig cfg = make_config(a, p.r1, p.r2);
      const std::string name = detail::certificate_name(cfg);
      const std::string cp = a.checkpoint.empty() ? "" : a.checkpoint + "." + name + ".ckpt";
      const std::string path = a.out.empty() ? "" : (std::filesystem::path(a.out) / name).string();
      code = combine_exit_codes(code, run_one(a, cfg, cp, path, out));
    }
    out << "pairs " << pairs.size() << std::endl;
    return code;
  }
  const CampaignConfig base = CampaignConfig::defaults_for(mode);
  if (mode != Mode::Lemma15 && !(a.r1 && a.r2)) throw InvalidArgument("grid modes need --r1 and --r2 or --pair-grid-step");
  return run_one(a, make_config(a, a.r1.value_or(base.r1), a.r2.value_or(base.r2)), a.checkpoint, a.out, out);
}

struct RegionDumpArgs {
  std::vector<double> angles;
  bool degrees = false;
  double r1 = 1.65, r2 = 1.65;
  double eps = 0.0;
  int depth = kDefaultRegionDepth;
  double min_half_side = 0.0;  // 0: r1 / 2048
  std::string out;
};

/// Cells covering R(Z, eps) ∩ E for Z given by angles on E, as CSV.
inline int cmd_region_dump(const RegionDumpArgs& a, std::ostream& out) {
  if (a.angles.empty()) throw InvalidArgument("region-dump needs at least one angle");
  const Ellipse e = Ellipse::axis_aligned(a.r1, a.r2);
  const std::vector<double> angles = detail::normalized_angles(a.angles, a.degrees);
  const RegionQuery q{ellipse_boundary_points(e, angles), a.eps, e};
  const OuterApprox oa = outer_approx(q, a.depth, a.min_half_side > 0.0 ? a.min_half_side : default_min_half_side(e));
  if (a.out.empty()) {
    write_cells_csv(out, oa);
  } else {
    std::ofstream os(a.out, std::ios::trunc);
    if (!os) throw IoError("cannot write " + a.out);
    write_cells_csv(os, oa);
    if (!os) throw IoError("failed writing " + a.out);
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> files;
  PairGrid grid;
  bool skip_part_a = false;
  std::string out;
};

inline int cmd_report(const ReportArgs& a, std::ostream& out) {
  BoundInputs in;
  in.grid = a.grid;
  for (const std::string& f : a.files) in.certificates.push_back(read_certificate(f));
  if (!a.skip_part_a) in.part_a = verify_part_a();
  const BoundReport rep = assemble_bound(in);
  const std::string text = bound_report_to_json(rep).dump(2) + "\n";
  out << text;
  if (!a.out.empty()) {
    std::ofstream os(a.out, std::ios::trunc);
    if (!os) throw IoError("cannot write " + a.out);
    os << text;
  }
  return rep.status == BoundStatus::Complete ? kExitEmpty : kExitDepthCap;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Line transversal blow-up certification"};
  app.require_subcommand(1);

  CheckTupleArgs ct;
  auto* check = app.add_subcommand("check-tuple", "Probe one angle tuple against the prune rules");
  check->add_option("angles", ct.angles, "3 to 5 angles (radians)")->required()->expected(1, -1);
  check->add_flag("--degrees", ct.degrees, "Angles are in degrees");
  check->add_option("--r1", ct.r1, "Ellipse semi-axis r1")->capture_default_str();
  check->add_option("--r2", ct.r2, "Ellipse semi-axis r2")->capture_default_str();
  check->add_option("--mode", ct.mode, "lemma15, grid-b or grid-c")->capture_default_str();
  check->add_option("--n", ct.n, "Cube resolution")->capture_default_str();

  VerifyArgs va;
  va.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* verify = app.add_subcommand("verify", "Run a campaign and write its certificate");
  verify->add_option("--mode", va.mode, "lemma15, grid-b or grid-c")->required();
  verify->add_option("--r1", va.r1, "Ellipse semi-axis r1");
  verify->add_option("--r2", va.r2, "Ellipse semi-axis r2");
  verify->add_option("--pair-grid-step", va.pair_grid_step, "Run every pair of the grid with this step");
  verify->add_option("--n0", va.n0, "Initial resolution (multiple of 6)");
  verify->add_option("--depth-cap", va.depth_cap, "Deepest subdivision level");
  verify->add_option("--region-depth", va.region_depth, "Quadtree depth of region checks");
  verify->add_option("--region-min-half-side", va.region_min_half_side, "Smallest quadtree cell half-side");
  verify->add_option("--center-check-n", va.center_check_n, "grid-c center-check resolution (0 disables)");
  verify->add_option("--rho", va.rho, "Region width target is 2 rho");
  verify->add_option("--slack", va.slack, "Floating-point slack");
  verify->add_option("--max-survivors", va.max_survivors, "Survivors listed in the certificate");
  verify->add_option("--checkpoint", va.checkpoint, "Checkpoint file written after each round");
  verify->add_flag("--resume", va.resume, "Resume from the checkpoint if present");
  verify->add_option("--out", va.out, "Certificate path (directory with --pair-grid-step)");
  verify->add_option("--threads", va.threads, "Worker threads")->capture_default_str();
  verify->add_option("--audit", va.audit, "Pruned cubes per reason to re-check by sampling");
  verify->add_option("--audit-tuples", va.audit_tuples, "Sampled tuples per audited cube")->capture_default_str();
  verify->add_flag("--quiet", va.quiet, "Skip per-round lines");

  RegionDumpArgs rd;
  auto* dump = app.add_subcommand("region-dump", "Write the quadtree cover of R(Z, eps) as CSV");
  dump->add_option("angles", rd.angles, "Angles of Z on the ellipse (radians)")->required()->expected(1, -1);
  dump->add_flag("--degrees", rd.degrees, "Angles are in degrees");
  dump->add_option("--r1", rd.r1, "Ellipse semi-axis r1")->capture_default_str();
  dump->add_option("--r2", rd.r2, "Ellipse semi-axis r2")->capture_default_str();
  dump->add_option("--eps", rd.eps, "Inflation eps")->capture_default_str();
  dump->add_option("--depth", rd.depth, "Quadtree depth")->capture_default_str();
  dump->add_option("--min-half-side", rd.min_half_side, "Smallest cell half-side (default r1/2048)");
  dump->add_option("--out", rd.out, "CSV path (default stdout)");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Assemble the bound from certificates");
  report->add_option("files", ra.files, "Certificate JSON files");
  report->add_option("--grid-step", ra.grid.step, "Pair grid step")->capture_default_str();
  report->add_option("--r1-min", ra.grid.r1_lo)->capture_default_str();
  report->add_option("--r1-max", ra.grid.r1_hi)->capture_default_str();
  report->add_option("--r2-min", ra.grid.r2_lo)->capture_default_str();
  report->add_option("--r2-max", ra.grid.r2_hi)->capture_default_str();
  report->add_flag("--skip-part-a", ra.skip_part_a, "Leave part (a) out (reported as a gap)");
  report->add_option("--out", ra.out, "Also write the report JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  try {
    if (*check) return cmd_check_tuple(ct, out);
    if (*verify) return cmd_verify(va, out);
    if (*dump) return cmd_region_dump(rd, out);
    if (*report) return cmd_report(ra, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace transversal::cli
