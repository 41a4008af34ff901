#include "hydrostat/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "hydrostat/errors.hpp"
#include "hydrostat/transform.hpp"

namespace hydrostat {

namespace {

static_assert(std::endian::native == std::endian::little,
              "HSF1 I/O assumes a little-endian host");

constexpr char kMagic[4] = {'H', 'S', 'F', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw DataError("snapshot: truncated header");
  }
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const PhysicalField& f,
                    Symmetry sym) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("snapshot: cannot open " + path.string());
  const Grid& g = f.grid();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, g.nx());
  put<std::uint32_t>(os, g.ny());
  put<std::uint32_t>(os, g.nz());
  put<double>(os, g.h());
  put<std::uint32_t>(os, f.components());
  put<std::uint8_t>(os, static_cast<std::uint8_t>(sym));
  const auto data = f.data();
  os.write(reinterpret_cast<const char*>(data.data()),
           static_cast<std::streamsize>(data.size_bytes()));
  if (!os) throw ConfigError("snapshot: write failed for " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& f) {
  write_snapshot(path, to_physical(f), f.symmetry());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("snapshot: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("snapshot: bad magic in " + path.string());
  }
  const auto nx = get<std::uint32_t>(is);
  const auto ny = get<std::uint32_t>(is);
  const auto nz = get<std::uint32_t>(is);
  const auto h = get<double>(is);
  const auto ncomp = get<std::uint32_t>(is);
  const auto tag = get<std::uint8_t>(is);
  if (tag > 2) throw DataError("snapshot: unknown symmetry tag");
  if (nx > 4096 || ny > 4096 || nz > 4096) {
    throw DataError("snapshot: implausible resolution");
  }

  GridPtr grid;
  try {
    grid = make_grid(static_cast<int>(nx), static_cast<int>(ny),
                     static_cast<int>(nz), h);
  } catch (const ConfigError& e) {
    throw DataError(std::string("snapshot: ") + e.what());
  }
  if (ncomp < 1 || ncomp > 3) throw DataError("snapshot: bad component count");
  Snapshot s{PhysicalField(grid, static_cast<int>(ncomp)),
             static_cast<Symmetry>(tag)};
  auto data = s.values.data();
  if (!is.read(reinterpret_cast<char*>(data.data()),
               static_cast<std::streamsize>(data.size_bytes()))) {
    throw DataError("snapshot: truncated value block");
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw DataError("snapshot: trailing bytes");
  }
  if (!s.values.all_finite()) throw DataError("snapshot: non-finite value");
  return s;
}

SpectralField load_spectral(const std::filesystem::path& path) {
  Snapshot s = read_snapshot(path);
  return to_spectral(s.values, s.symmetry);
}

}  // namespace hydrostat
