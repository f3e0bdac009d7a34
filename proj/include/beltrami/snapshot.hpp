#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "beltrami/field.hpp"

namespace beltrami {

/// BFLD snapshot: "BFLD", u32 version (=1), u32 n, f64 box_length, u8 component
/// count, then each component as n^3 little-endian f64 with x fastest.
struct Snapshot {
  GridSpec grid;
  std::vector<Eigen::ArrayXd> components;
};

void write_snapshot(const std::filesystem::path& path, const GridSpec& grid,
                    const std::vector<const Eigen::ArrayXd*>& components);
void write_snapshot(const std::filesystem::path& path, const PhysicalField& f);
void write_snapshot(const std::filesystem::path& path, const PhysicalScalar& f);
Snapshot read_snapshot(const std::filesystem::path& path);
PhysicalField read_vector_snapshot(const std::filesystem::path& path);

struct SnapshotEntry {
  double t;
  std::string path;
};
/// Sidecar index: JSON list of {t, path}.
void write_snapshot_index(const std::filesystem::path& path, const std::vector<SnapshotEntry>& entries);
std::vector<SnapshotEntry> read_snapshot_index(const std::filesystem::path& path);

}  // namespace beltrami
