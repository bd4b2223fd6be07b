#include "ferrovolt/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

namespace {

constexpr const char* kMagic = "ferrovolt-state 1";

void put_vec(std::ofstream& out, const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x, v.y, v.z);
  out << buf;
}

}  // namespace

void save_state(const MultiRegionMesh& mesh, const SolveState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write state file '" + path + "'");
  out << kMagic << "\n";
  out << "regions " << mesh.regions.size() << "\n";
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    out << "region " << mesh.regions[r].name << " " << mesh.regions[r].nCells() << "\n";
    for (const Vec3& a : state.fields[r].A.v) put_vec(out, a);
    for (const Vec3& b : state.fields[r].B.v) put_vec(out, b);
  }
  out << "interfaces " << mesh.interfaces.size() << "\n";
  for (size_t i = 0; i < mesh.interfaces.size(); ++i) {
    out << "interface " << mesh.interfaces[i].name << " " << mesh.interfaces[i].pairs.size()
        << "\n";
    for (const Vec3& k : state.interfaces[i].K) put_vec(out, k);
  }
  if (!out) throw IoError("write error on state file '" + path + "'");
}

namespace {

std::string next_line(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("state file '" + path + "' is truncated");
  return line;
}

Vec3 read_vec(std::ifstream& in, const std::string& path) {
  std::istringstream ss(next_line(in, path));
  Vec3 v;
  if (!(ss >> v.x >> v.y >> v.z)) throw IoError("state file '" + path + "': malformed vector");
  return v;
}

void expect_header(std::istringstream& ss, const std::string& word, const std::string& path) {
  std::string got;
  ss >> got;
  if (got != word) {
    throw IoError("state file '" + path + "': expected '" + word + "', got '" + got + "'");
  }
}

}  // namespace

void load_state(const MultiRegionMesh& mesh, SolveState& state, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file '" + path + "'");
  if (next_line(in, path) != kMagic) {
    throw IoError("state file '" + path + "' has an unknown header");
  }

  {
    std::istringstream ss(next_line(in, path));
    expect_header(ss, "regions", path);
    size_t n = 0;
    ss >> n;
    if (n != mesh.regions.size()) {
      throw IoError("state file '" + path + "' was written for a different mesh (region count)");
    }
  }
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    std::istringstream ss(next_line(in, path));
    expect_header(ss, "region", path);
    std::string name;
    int n = 0;
    ss >> name >> n;
    if (name != mesh.regions[r].name || n != mesh.regions[r].nCells()) {
      throw IoError("state file '" + path + "' was written for a different mesh (region '" +
                    name + "')");
    }
    for (Vec3& a : state.fields[r].A.v) a = read_vec(in, path);
    for (Vec3& b : state.fields[r].B.v) b = read_vec(in, path);
  }
  {
    std::istringstream ss(next_line(in, path));
    expect_header(ss, "interfaces", path);
    size_t n = 0;
    ss >> n;
    if (n != mesh.interfaces.size()) {
      throw IoError("state file '" + path +
                    "' was written for a different mesh (interface count)");
    }
  }
  for (size_t i = 0; i < mesh.interfaces.size(); ++i) {
    std::istringstream ss(next_line(in, path));
    expect_header(ss, "interface", path);
    std::string name;
    size_t n = 0;
    ss >> name >> n;
    if (name != mesh.interfaces[i].name || n != mesh.interfaces[i].pairs.size()) {
      throw IoError("state file '" + path + "' was written for a different mesh (interface '" +
                    name + "')");
    }
    for (Vec3& k : state.interfaces[i].K) k = read_vec(in, path);
    state.interfaces[i].initialized = true;
  }
}

void write_summary(const RunSummary& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write summary file '" + path + "'");
  char buf[128];
  out << "converged = " << (s.converged ? "true" : "false") << "\n";
  out << "diverged = " << (s.diverged ? "true" : "false") << "\n";
  out << "iterations = " << s.iterations << "\n";
  std::snprintf(buf, sizeof(buf), "final_residual = %.6e\n", s.finalResidual);
  out << buf;
  std::snprintf(buf, sizeof(buf), "wall_seconds = %.3f\n", s.wallSeconds);
  out << buf;
  std::snprintf(buf, sizeof(buf), "max_div_A = %.6e\n", s.gauge.maxDivA);
  out << buf;
  std::snprintf(buf, sizeof(buf), "l2_div_A = %.6e\n", s.gauge.l2DivA);
  out << buf;
  std::snprintf(buf, sizeof(buf), "max_div_B = %.6e\n", s.gauge.maxDivB);
  out << buf;
  std::snprintf(buf, sizeof(buf), "l2_div_B = %.6e\n", s.gauge.l2DivB);
  out << buf;
  if (!s.failure.empty()) out << "failure = " << s.failure << "\n";
  if (!out) throw IoError("write error on summary file '" + path + "'");
}

}  // namespace ferrovolt
