#include "beltrami/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace beltrami {
namespace {

static_assert(std::endian::native == std::endian::little, "BFLD I/O assumes a little-endian host");

constexpr char kMagic[4] = {'B', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("snapshot: truncated header");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const GridSpec& grid,
                    const std::vector<const Eigen::ArrayXd*>& components) {
  if (components.empty() || components.size() > 255) throw Error("snapshot: bad component count");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("snapshot: cannot open " + path.string());
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, std::uint32_t(grid.n));
  put<double>(os, grid.box_length);
  put<std::uint8_t>(os, std::uint8_t(components.size()));
  for (const auto* c : components) {
    if (std::size_t(c->size()) != grid.physical_size()) throw Error("snapshot: component size mismatch");
    os.write(reinterpret_cast<const char*>(c->data()), std::streamsize(sizeof(double) * c->size()));
  }
  if (!os) throw Error("snapshot: write failed for " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const PhysicalField& f) {
  write_snapshot(path, f.grid, {&f[0], &f[1], &f[2]});
}

void write_snapshot(const std::filesystem::path& path, const PhysicalScalar& f) {
  write_snapshot(path, f.grid, {&f[0]});
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw Error("snapshot: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw Error("snapshot: unsupported version");
  const auto n = get<std::uint32_t>(is);
  const auto box = get<double>(is);
  const auto count = get<std::uint8_t>(is);
  Snapshot s{GridSpec(int(n), box), {}};
  for (int c = 0; c < count; ++c) {
    Eigen::ArrayXd a(Eigen::Index(s.grid.physical_size()));
    is.read(reinterpret_cast<char*>(a.data()), std::streamsize(sizeof(double) * a.size()));
    if (!is) throw Error("snapshot: truncated data");
    s.components.push_back(std::move(a));
  }
  return s;
}

PhysicalField read_vector_snapshot(const std::filesystem::path& path) {
  Snapshot s = read_snapshot(path);
  if (s.components.size() != 3) throw Error("snapshot: expected 3 components");
  PhysicalField f(s.grid);
  for (int c = 0; c < 3; ++c) f[c] = std::move(s.components[std::size_t(c)]);
  return f;
}

void write_snapshot_index(const std::filesystem::path& path, const std::vector<SnapshotEntry>& entries) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : entries) j.push_back({{"t", e.t}, {"path", e.path}});
  std::ofstream os(path);
  if (!os) throw Error("snapshot index: cannot open " + path.string());
  os << j.dump(2) << '\n';
}

std::vector<SnapshotEntry> read_snapshot_index(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("snapshot index: cannot open " + path.string());
  const auto j = nlohmann::json::parse(is);
  std::vector<SnapshotEntry> out;
  for (const auto& e : j) out.push_back({e.at("t").get<double>(), e.at("path").get<std::string>()});
  return out;
}

}  // namespace beltrami
