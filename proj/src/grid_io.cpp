#include "grs/grid_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "grs/errors.hpp"
#include "number_format.hpp"

namespace grs {

namespace {

constexpr const char* kMagic = "GRSGRID";
constexpr int kVersion = 1;

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffu) << (56 - 8 * i);
    return out;
  }
  return bits;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    T value{};
    const auto res = std::from_chars(p, end, value);
    if (res.ec != std::errc{}) throw InvalidArgument("grid dump: bad " + key);
    out.push_back(value);
    p = res.ptr;
    if (p < end && *p == ',') ++p;
  }
  return out;
}

}  // namespace

void write_grid_dump(const std::filesystem::path& path,
                     const LevelSetField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  const Grid& g = field.grid;
  os << kMagic << ' ' << kVersion << " dim=" << g.dim()
     << " lower=" << detail::join(g.lower()) << " upper=" << detail::join(g.upper())
     << " counts=" << detail::join(g.counts())
     << " time=" << detail::format_double(field.time) << '\n';
  for (double v : field.values) {
    const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    os.write(bytes, 8);
  }
  if (!os) throw Error("failed writing " + path.string());
}

LevelSetField read_grid_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path.string());
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  hs >> magic >> version;
  if (magic != kMagic || version != kVersion) {
    throw InvalidArgument("grid dump: unrecognized header in " + path.string());
  }
  std::map<std::string, std::string> fields;
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("grid dump: bad token " + token);
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"dim", "lower", "upper", "counts", "time"}) {
    if (!fields.count(key)) throw InvalidArgument(std::string("grid dump: missing ") + key);
  }
  const auto dims = parse_list<int>(fields["dim"], "dim");
  const auto times = parse_list<double>(fields["time"], "time");
  Grid grid(parse_list<double>(fields["lower"], "lower"),
            parse_list<double>(fields["upper"], "upper"),
            parse_list<int>(fields["counts"], "counts"));
  if (dims.size() != 1 || dims[0] != grid.dim() || times.size() != 1) {
    throw InvalidArgument("grid dump: inconsistent header");
  }
  LevelSetField field{grid, std::vector<double>(grid.size()), times[0]};
  for (double& v : field.values) {
    char bytes[8];
    if (!is.read(bytes, 8)) throw InvalidArgument("grid dump: truncated payload");
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little_endian(bits));
  }
  return field;
}

}  // namespace grs
