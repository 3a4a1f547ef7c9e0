#include "mrplan/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mrplan/errors.hpp"
#include "mrplan/flatness.hpp"

namespace mrplan {

void write_trajectory_csv(const PiecewiseTrajectory& traj, const std::string& path,
                          double rate) {
  if (!(rate > 0.0)) throw PreconditionError("csv sample rate must be > 0");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trajectory CSV: " + path);
  out << "t,px,py,pz,vx,vy,vz,ax,ay,az,jx,jy,jz,yaw,qw,qx,qy,qz\n";

  const double total = traj.total_duration();
  const double dt = 1.0 / rate;
  YawTracker yaw;
  char line[512];
  for (std::size_t k = 0;; ++k) {
    const double t = std::min(k * dt, total);
    const FlatState s = traj.state(t);
    const double psi = yaw.update(s.v);
    Eigen::Quaterniond q;
    try {
      q = Eigen::Quaterniond(flat_to_rotation(s.a, psi));
    } catch (const SingularityError&) {
      q = Eigen::Quaterniond(Eigen::AngleAxisd(psi, Vec3::UnitZ()));
    }
    std::snprintf(line, sizeof(line),
                  "%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,"
                  "%.9f,%.9f,%.9f,%.9f,%.9f\n",
                  t, s.p.x(), s.p.y(), s.p.z(), s.v.x(), s.v.y(), s.v.z(), s.a.x(), s.a.y(),
                  s.a.z(), s.j.x(), s.j.y(), s.j.z(), psi, q.w(), q.x(), q.y(), q.z());
    out << line;
    if (t >= total) break;
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<TrajectoryCsvRow> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trajectory CSV: " + path);

  std::vector<TrajectoryCsvRow> rows;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 18) throw IoError("bad trajectory CSV row in " + path);
    TrajectoryCsvRow r;
    r.t = vals[0];
    r.p = Vec3(vals[1], vals[2], vals[3]);
    r.v = Vec3(vals[4], vals[5], vals[6]);
    r.a = Vec3(vals[7], vals[8], vals[9]);
    r.j = Vec3(vals[10], vals[11], vals[12]);
    r.yaw = vals[13];
    r.quat = Eigen::Vector4d(vals[14], vals[15], vals[16], vals[17]);
    rows.push_back(r);
  }
  return rows;
}

void write_path_csv(const GridPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write path CSV: " + file);
  out << "x,y,z\n";
  out.precision(9);
  for (const auto& w : path.waypoints) {
    out << w.x() << "," << w.y() << "," << w.z() << "\n";
  }
}

std::vector<Vec3> read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open path CSV: " + file);
  std::string line;
  std::getline(in, line);
  std::vector<Vec3> pts;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 3) throw IoError("bad path CSV row in " + file);
    pts.emplace_back(vals[0], vals[1], vals[2]);
  }
  return pts;
}

std::string plan_summary_json(const PlanResult& result) {
  nlohmann::json root;
  root["timings_ms"] = {{"global", result.timings.global_ms},
                        {"extract", result.timings.extract_ms},
                        {"search", result.timings.search_ms},
                        {"se3", result.timings.se3_ms},
                        {"r3", result.timings.r3_ms},
                        {"validate", result.timings.validate_ms},
                        {"total", result.timings.total_ms}};
  root["length_m"] = result.length;
  root["duration_s"] = result.full.total_duration();
  root["pieces"] = nlohmann::json::array();
  for (const auto& p : result.pieces) {
    root["pieces"].push_back(
        {{"label", p.label == PlanMode::SE3 ? "SE3" : "R3"},
         {"duration_s", p.traj.total_duration()},
         {"polyhedra", p.corridor.size()}});
  }
  root["segments"] = nlohmann::json::array();
  for (const auto s : result.segments) {
    root["segments"].push_back(s == SegmentClass::SE3 ? "SE3"
                               : s == SegmentClass::R3Detour ? "R3_detour"
                                                             : "R3");
  }
  return root.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace mrplan
