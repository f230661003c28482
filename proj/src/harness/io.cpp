#include "sisph/harness/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sisph::harness {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::runtime_error("bad number: " + s);
  return v;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu.csv", index);
  return buf;
}

void write_snapshot(const ParticleSet& ps, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "id,tag,x,y,z,u,v,w,p,rho,m,h,fs\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out << ps.id[i] << ',' << static_cast<int>(ps.tag[i]);
    for (double v : {ps.pos.x[i], ps.pos.y[i], ps.pos.z[i], ps.vel.x[i], ps.vel.y[i], ps.vel.z[i], ps.p[i], ps.rho[i],
                     ps.m[i], ps.h[i]})
      out << ',' << format_double(v);
    out << ',' << static_cast<int>(ps.free_surface[i]) << '\n';
  }
  finish(out, path);
}

ParticleSet read_snapshot(const std::filesystem::path& path, int dim) {
  const Table t = read_table(path);
  ParticleSet ps(dim);
  for (const auto& r : t.rows) {
    if (r.size() != 13) throw std::runtime_error("snapshot row has the wrong column count");
    const auto tag = static_cast<Tag>(static_cast<int>(r[1]));
    const std::size_t i = ps.add({r[2], r[3], r[4]}, r[10], r[11], r[9], tag);
    ps.id[i] = static_cast<std::int64_t>(r[0]);
    ps.vel.set(i, {r[5], r[6], r[7]});
    ps.p[i] = r[8];
    ps.free_surface[i] = static_cast<std::uint8_t>(r[12]);
  }
  return ps;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw std::out_of_range("no column named " + name);
}

void write_table(const Table& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  finish(out, path);
}

Table read_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty table: " + path.string());
  strip_cr(line);
  t.header = split(line);
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_double(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_manifest(const std::map<std::string, std::string>& entries, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  finish(out, path);
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace sisph::harness
