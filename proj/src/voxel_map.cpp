#include "skyrover/voxel_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "skyrover/errors.hpp"
#include "skyrover/io_util.hpp"

namespace skyrover {

// ---- OccupancyGrid3D ----------------------------------------------------

OccupancyGrid3D::OccupancyGrid3D(Vec3 origin, double resolution, int nx, int ny, int nz)
    : origin_(origin), resolution_(resolution), nx_(nx), ny_(ny), nz_(nz) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw InvalidInputError("grid resolution must be positive and finite");
  if (nx < 1 || ny < 1 || nz < 1) throw InvalidInputError("grid dims must each be >= 1");
  cells_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz), 0);
}

Cell OccupancyGrid3D::cell_at(std::size_t index) const noexcept {
  const auto nx = static_cast<std::size_t>(nx_);
  const auto ny = static_cast<std::size_t>(ny_);
  return {static_cast<int>(index % nx), static_cast<int>((index / nx) % ny), static_cast<int>(index / (nx * ny))};
}

std::size_t OccupancyGrid3D::occupied_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

Vec3 OccupancyGrid3D::cell_center(Cell c) const noexcept {
  return {origin_.x + (c.i + 0.5) * resolution_, origin_.y + (c.j + 0.5) * resolution_,
          origin_.z + (c.k + 0.5) * resolution_};
}

namespace {

// Line-oriented cursor over a byte buffer that remembers offsets for errors.
class LineReader {
 public:
  explicit LineReader(std::string_view bytes) : bytes_(bytes) {}

  bool done() const { return pos_ >= bytes_.size(); }
  std::size_t pos() const { return pos_; }

  std::string_view next_line() {
    const std::size_t start = pos_;
    std::size_t end = bytes_.find('\n', start);
    if (end == std::string_view::npos) {
      pos_ = bytes_.size();
      end = bytes_.size();
    } else {
      pos_ = end + 1;
    }
    std::string_view line = bytes_.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

float load_le_float(const unsigned char* p) {
  std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                       (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

void store_le_float(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

float parse_float_token(std::string_view tok, std::size_t offset) {
  float v = 0.0f;
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc::result_out_of_range) return std::numeric_limits<float>::infinity();
  if (ec != std::errc() || ptr != last) throw ParseError("invalid PCD value '" + std::string(tok) + "'", offset);
  return v;
}

std::string format_float(float f) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, f);
  return std::string(buf, end);
}

}  // namespace

// ---- PCD ----------------------------------------------------------------

PointCloud parse_pcd(std::string_view bytes) {
  struct Field {
    std::string name;
    int size = 4;
    char type = 'F';
    int count = 1;
  };
  std::vector<Field> fields;
  bool have_fields = false, have_size = false, have_type = false;
  std::optional<long long> points;
  std::string data_mode;
  std::size_t data_begin = 0;

  LineReader reader(bytes);
  while (!reader.done()) {
    const std::size_t line_offset = reader.pos();
    auto tokens = split_ws(reader.next_line());
    if (tokens.empty() || tokens[0].front() == '#') continue;
    const std::string_view key = tokens[0];
    const std::vector<std::string_view> values(tokens.begin() + 1, tokens.end());
    auto require_arity = [&](std::size_t n) {
      if (values.size() != n)
        throw ParseError("PCD " + std::string(key) + " expects " + std::to_string(n) + " values", line_offset);
    };
    auto as_int = [&](std::string_view tok) {
      try {
        return parse_int(tok);
      } catch (const ParseError&) {
        throw ParseError("PCD " + std::string(key) + " has non-integer value '" + std::string(tok) + "'",
                         line_offset);
      }
    };
    if (key == "VERSION" || key == "VIEWPOINT") {
      continue;
    } else if (key == "FIELDS") {
      if (values.empty()) throw ParseError("PCD FIELDS is empty", line_offset);
      fields.clear();
      for (auto v : values) fields.push_back({std::string(v)});
      have_fields = true;
    } else if (key == "SIZE" || key == "TYPE" || key == "COUNT") {
      if (!have_fields) throw ParseError("PCD " + std::string(key) + " before FIELDS", line_offset);
      require_arity(fields.size());
      for (std::size_t f = 0; f < fields.size(); ++f) {
        if (key == "TYPE") {
          if (values[f].size() != 1 || std::string_view("FIU").find(values[f][0]) == std::string_view::npos)
            throw ParseError("PCD TYPE must be F, I or U", line_offset);
          fields[f].type = values[f][0];
        } else {
          const long long v = as_int(values[f]);
          if (v < 1 || v > 8) throw ParseError("PCD " + std::string(key) + " out of range", line_offset);
          (key == "SIZE" ? fields[f].size : fields[f].count) = static_cast<int>(v);
        }
      }
      have_size |= key == "SIZE";
      have_type |= key == "TYPE";
    } else if (key == "WIDTH" || key == "HEIGHT") {
      require_arity(1);
      if (as_int(values[0]) < 0) throw ParseError("PCD " + std::string(key) + " is negative", line_offset);
    } else if (key == "POINTS") {
      require_arity(1);
      points = as_int(values[0]);
      if (*points < 0) throw ParseError("PCD POINTS is negative", line_offset);
    } else if (key == "DATA") {
      require_arity(1);
      data_mode = std::string(values[0]);
      data_begin = reader.pos();
      break;
    } else {
      throw ParseError("unknown PCD header key '" + std::string(key) + "'", line_offset);
    }
  }

  if (!have_fields) throw ParseError("PCD header missing FIELDS", data_mode.empty() ? bytes.size() : data_begin);
  if (!points) throw ParseError("PCD header missing POINTS", data_mode.empty() ? bytes.size() : data_begin);
  if (data_mode.empty()) throw ParseError("PCD header missing DATA", bytes.size());
  if (data_mode == "binary_compressed")
    throw UnsupportedFormatError("PCD DATA mode binary_compressed is not supported");
  if (data_mode != "ascii" && data_mode != "binary")
    throw UnsupportedFormatError("PCD DATA mode '" + data_mode + "' is not supported");
  if (data_mode == "binary" && (!have_size || !have_type))
    throw ParseError("binary PCD requires SIZE and TYPE", data_begin);

  // Locate x, y, z as (token index, byte offset) within a record.
  std::array<int, 3> token_of{-1, -1, -1};
  std::array<int, 3> byte_of{-1, -1, -1};
  int tokens_per_point = 0;
  int bytes_per_point = 0;
  for (const auto& f : fields) {
    const int axis = f.name == "x" ? 0 : f.name == "y" ? 1 : f.name == "z" ? 2 : -1;
    if (axis >= 0) {
      if (f.type != 'F' || f.size != 4 || f.count != 1)
        throw ParseError("PCD field " + f.name + " must be TYPE F SIZE 4 COUNT 1", data_begin);
      token_of[axis] = tokens_per_point;
      byte_of[axis] = bytes_per_point;
    }
    tokens_per_point += f.count;
    bytes_per_point += f.size * f.count;
  }
  if (token_of[0] < 0 || token_of[1] < 0 || token_of[2] < 0)
    throw ParseError("PCD FIELDS must include x y z", data_begin);

  const auto expected = static_cast<std::size_t>(*points);
  PointCloud cloud;
  cloud.points.reserve(expected);
  auto accept = [&cloud](float x, float y, float z) {
    if (std::isfinite(x) && std::isfinite(y) && std::isfinite(z))
      cloud.points.push_back({x, y, z});
    else
      ++cloud.dropped;
  };

  if (data_mode == "ascii") {
    LineReader body(bytes.substr(data_begin));
    std::size_t read = 0;
    while (read < expected && !body.done()) {
      const std::size_t row_offset = data_begin + body.pos();
      auto tokens = split_ws(body.next_line());
      if (tokens.empty()) continue;
      if (static_cast<int>(tokens.size()) != tokens_per_point)
        throw ParseError("PCD row has " + std::to_string(tokens.size()) + " values, expected " +
                             std::to_string(tokens_per_point),
                         row_offset);
      accept(parse_float_token(tokens[token_of[0]], row_offset), parse_float_token(tokens[token_of[1]], row_offset),
             parse_float_token(tokens[token_of[2]], row_offset));
      ++read;
    }
    if (read < expected)
      throw ParseError("truncated PCD body: expected " + std::to_string(expected) + " points, found " +
                           std::to_string(read),
                       bytes.size());
  } else {
    const std::size_t available = (bytes.size() - data_begin) / static_cast<std::size_t>(bytes_per_point);
    if (available < expected)
      throw ParseError("truncated PCD body: expected " + std::to_string(expected) + " points, found " +
                           std::to_string(available),
                       bytes.size());
    const auto* base = reinterpret_cast<const unsigned char*>(bytes.data()) + data_begin;
    for (std::size_t p = 0; p < expected; ++p) {
      const unsigned char* rec = base + p * static_cast<std::size_t>(bytes_per_point);
      accept(load_le_float(rec + byte_of[0]), load_le_float(rec + byte_of[1]), load_le_float(rec + byte_of[2]));
    }
  }
  return cloud;
}

std::string write_pcd(const PointCloud& cloud, PcdEncoding encoding) {
  const std::string n = std::to_string(cloud.count());
  std::string out;
  out += "# .PCD v0.7 - Point Cloud Data file format\n";
  out += "VERSION 0.7\nFIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\n";
  out += "WIDTH " + n + "\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS " + n + "\n";
  if (encoding == PcdEncoding::Ascii) {
    out += "DATA ascii\n";
    for (const auto& p : cloud.points) {
      out += format_float(static_cast<float>(p.x)) + ' ' + format_float(static_cast<float>(p.y)) + ' ' +
             format_float(static_cast<float>(p.z)) + '\n';
    }
  } else {
    out += "DATA binary\n";
    out.reserve(out.size() + cloud.count() * 12);
    for (const auto& p : cloud.points) {
      store_le_float(out, static_cast<float>(p.x));
      store_le_float(out, static_cast<float>(p.y));
      store_le_float(out, static_cast<float>(p.z));
    }
  }
  return out;
}

// ---- PGM ----------------------------------------------------------------

GroundMap2D parse_pgm(std::string_view bytes, const PgmOptions& options) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw UnsupportedFormatError("not a PGM P2/P5 file (bad magic number)");
  const bool binary = bytes[1] == '5';
  std::size_t pos = 2;

  auto next_token = [&]() -> std::pair<std::string_view, std::size_t> {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#') ++pos;
    return {bytes.substr(start, pos - start), start};
  };
  auto header_int = [&](const char* what) {
    auto [tok, at] = next_token();
    if (tok.empty()) throw ParseError(std::string("PGM header missing ") + what, at);
    try {
      return parse_int(tok);
    } catch (const ParseError&) {
      throw ParseError(std::string("PGM ") + what + " is not an integer", at);
    }
  };

  const long long width = header_int("width");
  const long long height = header_int("height");
  const long long maxval = header_int("maxval");
  if (width < 1 || height < 1) throw ParseError("PGM dimensions must be positive", pos);
  if (width * height > (1LL << 30)) throw ParseError("PGM dimensions too large", pos);
  if (maxval < 1 || maxval > 65535) throw ParseError("PGM maxval must be in 1..65535", pos);
  if (maxval > 255) throw UnsupportedFormatError("16-bit PGM (maxval above 255) is not supported");

  GroundMap2D map;
  map.width = static_cast<int>(width);
  map.height = static_cast<int>(height);
  map.resolution = options.resolution;
  map.occupancy.assign(static_cast<std::size_t>(width * height), 0);

  auto store = [&](long long index, long long value) {
    const long long row = index / width;
    const long long x = index % width;
    const long long y = height - 1 - row;
    map.occupancy[static_cast<std::size_t>(x + width * y)] = value < options.occupied_threshold ? 1 : 0;
  };

  const long long total = width * height;
  if (binary) {
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
      throw ParseError("PGM P5 header must end with one whitespace byte", pos);
    ++pos;
    if (bytes.size() - pos < static_cast<std::size_t>(total))
      throw ParseError("truncated PGM raster: expected " + std::to_string(total) + " bytes, found " +
                           std::to_string(bytes.size() - pos),
                       bytes.size());
    for (long long p = 0; p < total; ++p) {
      const auto v = static_cast<unsigned char>(bytes[pos + static_cast<std::size_t>(p)]);
      if (v > maxval) throw ParseError("PGM pixel exceeds maxval", pos + static_cast<std::size_t>(p));
      store(p, v);
    }
  } else {
    for (long long p = 0; p < total; ++p) {
      auto [tok, at] = next_token();
      if (tok.empty())
        throw ParseError("truncated PGM raster: expected " + std::to_string(total) + " pixels, found " +
                             std::to_string(p),
                         at);
      long long v;
      try {
        v = parse_int(tok);
      } catch (const ParseError&) {
        throw ParseError("PGM pixel is not an integer", at);
      }
      if (v < 0 || v > maxval) throw ParseError("PGM pixel out of range", at);
      store(p, v);
    }
  }
  return map;
}

std::string write_pgm(const GroundMap2D& map, PgmEncoding encoding) {
  std::string out = encoding == PgmEncoding::Ascii ? "P2\n" : "P5\n";
  out += std::to_string(map.width) + ' ' + std::to_string(map.height) + "\n255\n";
  for (int row = 0; row < map.height; ++row) {
    const int y = map.height - 1 - row;
    for (int x = 0; x < map.width; ++x) {
      const bool occ = map.occupied(x, y);
      if (encoding == PgmEncoding::Binary) {
        out.push_back(static_cast<char>(occ ? 0 : 255));
      } else {
        if (x > 0) out.push_back(' ');
        out += occ ? "0" : "255";
      }
    }
    if (encoding == PgmEncoding::Ascii) out.push_back('\n');
  }
  return out;
}

// ---- rasterization ------------------------------------------------------

OccupancyGrid3D rasterize(const PointCloud& cloud, const RasterizeOptions& options) {
  const double res = options.resolution;
  if (!(res > 0.0) || !std::isfinite(res)) throw InvalidInputError("resolution must be positive and finite");

  Bounds b;
  if (options.bounds) {
    b = *options.bounds;
  } else {
    if (options.padding < 0) throw InvalidInputError("padding must be non-negative");
    bool any = false;
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-lo.x, -lo.y, -lo.z};
    for (const auto& p : cloud.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) continue;
      any = true;
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    if (!any) throw InvalidInputError("cannot derive bounds from an empty cloud; pass explicit bounds");
    const double pad = options.padding * res;
    b = {{lo.x - pad, lo.y - pad, lo.z - pad}, {hi.x + pad, hi.y + pad, hi.z + pad}};
  }
  const double mins[3] = {b.min.x, b.min.y, b.min.z};
  const double maxs[3] = {b.max.x, b.max.y, b.max.z};

  long long dims[3];
  double cells = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(mins[a]) || !std::isfinite(maxs[a]) || maxs[a] < mins[a])
      throw InvalidInputError("bounds must be finite with max >= min");
    const double n = std::max(1.0, std::ceil((maxs[a] - mins[a]) / res));
    cells *= n;
    if (n > static_cast<double>(std::numeric_limits<int>::max()) || cells > static_cast<double>(options.max_cells))
      throw CapacityError("grid would exceed the cell cap of " + std::to_string(options.max_cells) + " cells");
    dims[a] = static_cast<long long>(n);
  }

  OccupancyGrid3D grid(b.min, res, static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]));
  for (const auto& p : cloud.points) {
    const double coords[3] = {p.x, p.y, p.z};
    int idx[3];
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(coords[a]) || coords[a] < mins[a] || coords[a] > maxs[a]) {
        inside = false;
        break;
      }
      const double f = std::floor((coords[a] - mins[a]) / res);
      idx[a] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(dims[a] - 1)));
    }
    if (inside) grid.set({idx[0], idx[1], idx[2]}, true);
  }
  return grid;
}

OccupancyGrid3D extrude_ground(const GroundMap2D& map, int nz, ExtrudeMode mode) {
  if (nz < 1) throw InvalidInputError("nz must be >= 1");
  if (map.width < 1 || map.height < 1 ||
      map.occupancy.size() != static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height))
    throw InvalidInputError("ground map occupancy does not match its dimensions");
  OccupancyGrid3D grid({0, 0, 0}, map.resolution, map.width, map.height, nz);
  const int layers = mode == ExtrudeMode::Walls ? nz : 1;
  for (int y = 0; y < map.height; ++y)
    for (int x = 0; x < map.width; ++x)
      if (map.occupied(x, y))
        for (int k = 0; k < layers; ++k) grid.set({x, y, k}, true);
  return grid;
}

// ---- SKYGRID1 -----------------------------------------------------------

namespace {

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

bool get_varint(std::string_view bytes, std::size_t& pos, std::uint64_t& v) {
  v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (pos >= bytes.size()) return false;
    const auto byte = static_cast<unsigned char>(bytes[pos++]);
    v |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
    if ((byte & 0x80) == 0) return true;
  }
  throw FormatError("grid payload varint is too long");
}

}  // namespace

std::string write_grid(const OccupancyGrid3D& grid) {
  std::string out(kGridMagic);
  const Vec3 o = grid.origin();
  out += "origin " + format_double(o.x) + ' ' + format_double(o.y) + ' ' + format_double(o.z) + '\n';
  out += "resolution " + format_double(grid.resolution()) + '\n';
  out += "dims " + std::to_string(grid.nx()) + ' ' + std::to_string(grid.ny()) + ' ' + std::to_string(grid.nz()) + '\n';
  out += "encoding rle\n\n";
  const auto& cells = grid.raw();
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    put_varint(out, j - i);
    put_varint(out, cells[i]);
    i = j;
  }
  return out;
}

OccupancyGrid3D read_grid(std::string_view bytes) {
  if (bytes.substr(0, 7) != "SKYGRID") throw FormatError("not a SKYGRID file (bad magic)");
  if (bytes.substr(0, kGridMagic.size()) != kGridMagic) {
    const auto eol = bytes.find('\n');
    throw FormatError("unsupported grid file version '" + std::string(bytes.substr(0, std::min<std::size_t>(eol, 16))) +
                      "', expected SKYGRID1");
  }
  LineReader reader(bytes.substr(kGridMagic.size()));
  auto expect_line = [&](std::string_view key, std::size_t arity) {
    if (reader.done()) throw FormatError("grid header truncated before '" + std::string(key) + "'");
    auto tokens = split_ws(reader.next_line());
    if (tokens.empty() || tokens[0] != key || tokens.size() != arity + 1)
      throw FormatError("grid header expected '" + std::string(key) + "' with " + std::to_string(arity) + " values");
    return std::vector<std::string_view>(tokens.begin() + 1, tokens.end());
  };
  try {
    auto o = expect_line("origin", 3);
    auto r = expect_line("resolution", 1);
    auto d = expect_line("dims", 3);
    auto e = expect_line("encoding", 1);
    if (e[0] != "rle") throw FormatError("unsupported grid encoding '" + std::string(e[0]) + "'");
    if (reader.done() || !reader.next_line().empty()) throw FormatError("grid header must end with a blank line");

    const Vec3 origin{parse_double(o[0]), parse_double(o[1]), parse_double(o[2])};
    const double resolution = parse_double(r[0]);
    long long dims[3];
    for (int a = 0; a < 3; ++a) {
      dims[a] = parse_int(d[a]);
      if (dims[a] < 1 || dims[a] > (1LL << 20)) throw FormatError("grid dims out of range");
    }
    if (!(resolution > 0.0) || !std::isfinite(resolution)) throw FormatError("grid resolution must be positive");
    const long long total = dims[0] * dims[1] * dims[2];
    if (total > (1LL << 32)) throw FormatError("grid dims too large");

    OccupancyGrid3D grid(origin, resolution, static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                         static_cast<int>(dims[2]));
    const std::string_view payload = bytes.substr(kGridMagic.size() + reader.pos());
    std::size_t pos = 0;
    std::uint64_t filled = 0;
    auto mismatch = [&]() {
      return FormatError("grid payload length mismatch: header declares " + std::to_string(total) +
                         " cells, payload decodes " + std::to_string(filled));
    };
    while (pos < payload.size()) {
      std::uint64_t count = 0, bit = 0;
      if (!get_varint(payload, pos, count) || !get_varint(payload, pos, bit)) throw mismatch();
      if (count == 0 || bit > 1) throw FormatError("grid payload has an invalid run");
      if (filled + count > static_cast<std::uint64_t>(total)) {
        filled += count;
        throw mismatch();
      }
      if (bit)
        for (std::uint64_t c = 0; c < count; ++c) grid.set_index(filled + c, true);
      filled += count;
    }
    if (filled != static_cast<std::uint64_t>(total)) throw mismatch();
    return grid;
  } catch (const ParseError& e) {
    throw FormatError(std::string("grid header: ") + e.what());
  } catch (const InvalidInputError& e) {
    throw FormatError(std::string("grid header: ") + e.what());
  }
}

}  // namespace skyrover
