// Command line front end: inverse/forward kinematics probes, workspace
// mapping, mesh force rendering, and the circle-tracking force experiment.
// All numeric output is printed with 9 fixed decimals so identical configs
// and seeds produce byte-identical runs.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delta/config.hpp"
#include "delta/device.hpp"
#include "delta/experiment.hpp"
#include "delta/format.hpp"
#include "delta/kinematics.hpp"
#include "delta/mesh.hpp"
#include "delta/random.hpp"
#include "delta/rendering.hpp"
#include "delta/stats.hpp"
#include "delta/trajectory.hpp"
#include "delta/workspace.hpp"

namespace {

// Exit codes partition the error classes:
//   0 success, 1 usage/config/input, 2 kinematic domain error,
//   3 empty workspace, 4 mesh parse error, 5 unreachable trajectory point.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitKinematic = 2;
constexpr int kExitEmptyWorkspace = 3;
constexpr int kExitMesh = 4;
constexpr int kExitTrajectory = 5;

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::filesystem::path out_file(const GlobalArgs& ga, const std::string& name) {
  std::filesystem::create_directories(ga.out_dir);
  return std::filesystem::path(ga.out_dir) / name;
}

int run_ik(const delta::RunConfig& rc, double x, double y, double z) {
  delta::Vec3 p{x, y, z};
  if (!p.finite()) {
    std::cerr << "error: target must be finite\n";
    return kExitConfig;
  }
  delta::IkResult ik = delta::inverse_kinematics(rc.geometry, p, rc.limits);
  if (ik.error == delta::IkError::kUnreachable) {
    std::cerr << "unreachable: chain " << ik.chain << "\n";
    return kExitKinematic;
  }
  if (ik.error == delta::IkError::kJointLimit) {
    std::cerr << "joint limit: chain " << ik.chain << "\n";
    return kExitKinematic;
  }
  std::cout << delta::fixed9(ik.angles[0]) << ' ' << delta::fixed9(ik.angles[1])
            << ' ' << delta::fixed9(ik.angles[2]) << '\n';
  return kExitOk;
}

int run_fk(const delta::RunConfig& rc, double t0, double t1, double t2) {
  delta::JointAngles angles;
  angles[0] = t0;
  angles[1] = t1;
  angles[2] = t2;
  if (!angles.finite()) {
    std::cerr << "error: angles must be finite\n";
    return kExitConfig;
  }
  delta::FkResult fk = delta::forward_kinematics(rc.geometry, angles);
  if (fk.error == delta::FkError::kNoIntersection) {
    std::cerr << "no intersection: wrist spheres do not meet\n";
    return kExitKinematic;
  }
  if (fk.error == delta::FkError::kAboveBasePlane) {
    std::cerr << "ambiguous: only the above-base solution exists\n";
    return kExitKinematic;
  }
  std::cout << delta::fixed9(fk.position.x) << ' ' << delta::fixed9(fk.position.y)
            << ' ' << delta::fixed9(fk.position.z) << '\n';
  return kExitOk;
}

int run_workspace(const delta::RunConfig& rc, const GlobalArgs& ga) {
  delta::WorkspaceMap map = delta::sample_workspace(rc.geometry, rc.limits, rc.grid);
  if (map.empty()) {
    std::cerr << "empty workspace: no reachable cell on the grid\n";
    return kExitEmptyWorkspace;
  }
  auto path = out_file(ga, "workspace.csv");
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return kExitConfig;
  }
  delta::write_workspace_csv(map, out);
  std::cout << "z0=" << delta::fixed9(map.best_z)
            << " disc_radius=" << delta::fixed9(map.best_disc_radius)
            << " reachable_cells=" << map.reachable_count << '\n';
  return kExitOk;
}

struct PathSample {
  double t;
  delta::Vec3 p;
};

std::vector<PathSample> load_path_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open path file: " + path);
  std::vector<PathSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    bool blank = line.find_first_not_of(" \t\r,") == std::string::npos;
    if (blank) continue;
    bool has_alpha = false;
    for (char c : line) {
      if (std::isalpha(static_cast<unsigned char>(c))) has_alpha = true;
    }
    if (has_alpha) {
      if (line_no == 1) continue;  // header row
      throw std::runtime_error("path file line " + std::to_string(line_no) +
                               ": expected t,x,y,z numbers");
    }
    std::istringstream ls(line);
    PathSample s;
    char c1, c2, c3;
    if (!(ls >> s.t >> c1 >> s.p.x >> c2 >> s.p.y >> c3 >> s.p.z) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw std::runtime_error("path file line " + std::to_string(line_no) +
                               ": expected t,x,y,z numbers");
    }
    out.push_back(s);
  }
  if (out.empty()) throw std::runtime_error("path file has no samples: " + path);
  return out;
}

int run_render(const delta::RunConfig& rc, const GlobalArgs& ga,
               const std::string& mesh_path, const std::string& path_csv) {
  delta::SurfaceMesh mesh;
  try {
    mesh = delta::load_mesh(mesh_path);
  } catch (const delta::MeshError& e) {
    std::cerr << "mesh error at line " << e.line << ": " << e.what() << "\n";
    return kExitMesh;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<PathSample> path;
  try {
    path = load_path_csv(path_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  // Saturation envelope evaluated at the central operating pose.
  std::optional<delta::DeviceModel> model;
  try {
    model = delta::make_device_model(rc.geometry, rc.limits, rc.servo,
                                     rc.rendering.stiffness, rc.grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmptyWorkspace;
  }

  auto out_path = out_file(ga, "render_trace.csv");
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path.string() << "\n";
    return kExitConfig;
  }
  out << "t,fx,fy,fz,penetration,contact\n";
  for (const PathSample& s : path) {
    delta::ContactForce cf =
        delta::render_force(mesh, s.p, rc.rendering.stiffness,
                            rc.rendering.apex_height, rc.rendering.cone_angle);
    if (!cf.ok()) {
      const char* tag = cf.error == delta::RenderError::kNotOnSurface
                            ? "error:not_on_surface"
                            : "error:patch_incomplete";
      out << delta::fixed9(s.t) << ",0.000000000,0.000000000,0.000000000,0.000000000,"
          << tag;
      if (cf.error == delta::RenderError::kPatchIncomplete) out << ':' << cf.hits;
      out << '\n';
      continue;
    }
    delta::ForceVector f = model->clamp(cf.force);
    out << delta::fixed9(s.t) << ',' << delta::fixed9(f) << ','
        << delta::fixed9(cf.penetration) << ',' << (cf.contact ? 1 : 0) << '\n';
  }
  std::cout << "rendered " << path.size() << " samples to " << out_path.string()
            << '\n';
  return kExitOk;
}

int run_experiment(const delta::RunConfig& rc, const GlobalArgs& ga) {
  const delta::ExperimentConfig& ec = rc.experiment;

  std::optional<delta::DeviceModel> model;
  try {
    model = delta::make_device_model(rc.geometry, rc.limits, rc.servo,
                                     rc.rendering.stiffness, rc.grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmptyWorkspace;
  }

  const std::uint64_t base_seed = ga.seed_given ? ga.seed : ec.noise_seed;

  std::ostringstream report;
  report << "torque_limit=" << delta::fixed9(model->servo.torque_limit)
         << " central_z=" << delta::fixed9(model->central_position.z)
         << " stiffness=" << delta::fixed9(model->stiffness)
         << " seed=" << base_seed << "\n";

  auto stats_path = out_file(ga, "experiment_stats.csv");
  std::ofstream stats_out(stats_path);
  if (!stats_out) {
    std::cerr << "error: cannot write " << stats_path.string() << "\n";
    return kExitConfig;
  }
  stats_out << "radius,repeat,amp_x,amp_y,amp_z,mean_x,mean_y,mean_z,"
               "lateral_amplitude,delta,degenerate\n";

  // Groups for the across-radii ANOVA: per-repeat lateral amplitudes
  // normalized by the commanded spring amplitude stiffness * radius.
  std::vector<std::vector<double>> groups_fx, groups_fy;

  for (std::size_t ri = 0; ri < ec.radii.size(); ++ri) {
    const double radius = ec.radii[ri];
    std::vector<delta::TrajectorySample> traj = delta::circular_trajectory(
        radius, ec.height, ec.angular_rate, ec.duration, ec.sample_rate);
    const delta::Vec3 anchor =
        ec.anchor_override ? ec.anchor : delta::Vec3{0.0, 0.0, ec.height};

    std::vector<double> amps_x, amps_y;
    for (int rep = 0; rep < ec.repeats; ++rep) {
      delta::ExperimentOptions opt;
      opt.ideal_servo = ec.ideal_servo;
      opt.noise_level = ec.noise_level;
      opt.noise_seed = delta::mix_seed(base_seed ^ (static_cast<std::uint64_t>(ri) * 0x100000001b3ull + static_cast<std::uint64_t>(rep)));

      delta::ExperimentResult res = delta::run_force_experiment(
          *model, traj, anchor, opt, radius, ec.height, ec.angular_rate,
          ec.sample_rate);
      if (!res.ok()) {
        std::cerr << "trajectory point " << res.failed_sample
                  << " unreachable (radius " << delta::fixed9(radius);
        if (res.failed_chain >= 0) std::cerr << ", chain " << res.failed_chain;
        std::cerr << ")\n";
        return kExitTrajectory;
      }

      char name[64];
      std::snprintf(name, sizeof(name), "trace_%zu_rep%d.csv", ri, rep);
      auto trace_path = out_file(ga, name);
      std::ofstream trace_out(trace_path);
      trace_out << "t,px,py,pz,fx,fy,fz\n";
      for (const delta::ForceSample& s : res.trace.samples) {
        trace_out << delta::fixed9(s.t) << ',' << delta::fixed9(s.commanded)
                  << ',' << delta::fixed9(s.force) << '\n';
      }

      delta::TraceStats ts = delta::trace_stats(res.trace);
      bool degenerate = ts.error == delta::StatsError::kDegenerateTrace;
      stats_out << delta::fixed9(radius) << ',' << rep << ','
                << delta::fixed9(ts.amplitude[0]) << ','
                << delta::fixed9(ts.amplitude[1]) << ','
                << delta::fixed9(ts.amplitude[2]) << ','
                << delta::fixed9(ts.mean[0]) << ',' << delta::fixed9(ts.mean[1])
                << ',' << delta::fixed9(ts.mean[2]) << ','
                << delta::fixed9(ts.lateral_amplitude) << ','
                << delta::fixed9(degenerate ? 0.0 : ts.delta) << ','
                << (degenerate ? 1 : 0) << '\n';

      report << "radius=" << delta::fixed9(radius) << " rep=" << rep;
      if (degenerate) {
        report << " degenerate=1\n";
      } else {
        report << " delta=" << delta::fixed9(ts.delta)
               << " amp_x=" << delta::fixed9(ts.amplitude[0])
               << " amp_y=" << delta::fixed9(ts.amplitude[1]) << "\n";
      }

      if (radius > 0.0) {
        amps_x.push_back(ts.amplitude[0] / (model->stiffness * radius));
        amps_y.push_back(ts.amplitude[1] / (model->stiffness * radius));
      }
    }
    if (!amps_x.empty()) {
      groups_fx.push_back(std::move(amps_x));
      groups_fy.push_back(std::move(amps_y));
    }
  }

  auto report_anova = [&report](const char* label,
                                const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2 || groups.front().size() < 2) {
      report << label << ": skipped (need >= 2 radii and >= 2 repeats)\n";
      return;
    }
    delta::AnovaResult res = delta::one_way_anova(groups);
    if (!res.ok()) {
      report << label << ": zero within-group variance (identical repeats)\n";
      return;
    }
    report << label << ": F=" << delta::fixed9(res.f)
           << " p=" << delta::fixed9(res.p) << " df=(" << res.df_between << ","
           << res.df_within << ")\n";
  };
  report_anova("anova_fx", groups_fx);
  report_anova("anova_fy", groups_fy);

  auto report_path = out_file(ga, "experiment_report.txt");
  std::ofstream report_out(report_path);
  report_out << report.str();
  std::cout << report.str();
  return kExitOk;
}

int run_encode(const delta::RunConfig& rc, double t0, double t1, double t2) {
  delta::JointAngles angles;
  angles[0] = t0;
  angles[1] = t1;
  angles[2] = t2;
  auto line = delta::encode_command(angles, rc.servo);
  if (!line) {
    std::cerr << "out of range: angle outside the servo limits\n";
    return kExitKinematic;
  }
  std::cout << *line;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finger-scale delta haptic device simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs ga;
  app.add_option("--config", ga.config_path, "Config file (INI-style sections)");
  app.add_option("--out", ga.out_dir, "Output directory for generated files");
  auto* seed_opt =
      app.add_option("--seed", ga.seed, "Noise seed override for experiments");

  double x = 0, y = 0, z = 0;
  auto* ik_cmd = app.add_subcommand("ik", "Joint angles for a finger position");
  ik_cmd->add_option("x", x, "target x (m)")->required();
  ik_cmd->add_option("y", y, "target y (m)")->required();
  ik_cmd->add_option("z", z, "target z (m)")->required();

  double t0 = 0, t1 = 0, t2 = 0;
  auto* fk_cmd = app.add_subcommand("fk", "Finger position for joint angles");
  fk_cmd->add_option("theta0", t0, "joint 0 angle (rad)")->required();
  fk_cmd->add_option("theta1", t1, "joint 1 angle (rad)")->required();
  fk_cmd->add_option("theta2", t2, "joint 2 angle (rad)")->required();

  auto* ws_cmd = app.add_subcommand("workspace", "Sample the reachable workspace grid");

  std::string mesh_path, path_csv;
  auto* render_cmd = app.add_subcommand("render", "Render contact forces along a path");
  render_cmd->add_option("--mesh", mesh_path, "Surface mesh (.off or .stl)")->required();
  render_cmd->add_option("--path", path_csv, "Finger path CSV (t,x,y,z)")->required();

  auto* exp_cmd = app.add_subcommand("experiment", "Run the circle-tracking force study");

  double e0 = 0, e1 = 0, e2 = 0;
  auto* enc_cmd = app.add_subcommand("encode", "Encode joint angles as a wire command");
  enc_cmd->add_option("theta0", e0, "joint 0 angle (rad)")->required();
  enc_cmd->add_option("theta1", e1, "joint 1 angle (rad)")->required();
  enc_cmd->add_option("theta2", e2, "joint 2 angle (rad)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  ga.seed_given = seed_opt->count() > 0;

  delta::RunConfig rc;
  try {
    rc = delta::load_run_config(ga.config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (ik_cmd->parsed()) return run_ik(rc, x, y, z);
    if (fk_cmd->parsed()) return run_fk(rc, t0, t1, t2);
    if (ws_cmd->parsed()) return run_workspace(rc, ga);
    if (render_cmd->parsed()) return run_render(rc, ga, mesh_path, path_csv);
    if (exp_cmd->parsed()) return run_experiment(rc, ga);
    if (enc_cmd->parsed()) return run_encode(rc, e0, e1, e2);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
