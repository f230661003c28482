#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sisph/particles.hpp"

namespace sisph::harness {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// "snap_000042.csv"
std::string snapshot_name(std::size_t index);

/// Header `id,tag,x,y,z,u,v,w,p,rho,m,h,fs`, one row per particle, LF endings.
/// Throws std::runtime_error on I/O failure.
void write_snapshot(const ParticleSet& ps, const std::filesystem::path& path);

/// Reads a snapshot back. Ids, tags, positions, velocities, p, rho, m, h and
/// free-surface flags are restored.
ParticleSet read_snapshot(const std::filesystem::path& path, int dim);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

void write_table(const Table& table, const std::filesystem::path& path);
Table read_table(const std::filesystem::path& path);

/// Flat key=value lines, keys sorted.
void write_manifest(const std::map<std::string, std::string>& entries, const std::filesystem::path& path);
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

}  // namespace sisph::harness
