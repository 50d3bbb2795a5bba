#include "ngrank/features.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include "ngrank/error.hpp"
#include "text_util.hpp"

namespace ngrank {

namespace {

constexpr std::array<char, 4> kBinaryMagic = {'N', 'G', 'F', '1'};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return std::move(buf).str();
}

template <typename T>
T read_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

template <typename T>
void write_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

FeatureMatrix parse_binary(const std::string& bytes, std::string channel) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 8 || std::memcmp(p, kBinaryMagic.data(), 4) != 0) {
    throw FormatError("binary features: bad magic");
  }
  const auto dim = read_le<std::uint32_t>(p + 4);
  if (dim == 0) throw FormatError("binary features: dim is zero");
  const std::size_t record = 8 + std::size_t{dim} * 4;
  const std::size_t body = bytes.size() - 8;
  if (body == 0) throw FormatError("binary features: no items");
  if (body % record != 0) throw FormatError("binary features: truncated record");

  FeatureMatrix m(std::move(channel), dim);
  std::vector<double> values(dim);
  for (std::size_t off = 8; off < bytes.size(); off += record) {
    const auto id = read_le<std::uint64_t>(p + off);
    for (std::uint32_t j = 0; j < dim; ++j) {
      values[j] = std::bit_cast<float>(read_le<std::uint32_t>(p + off + 8 + 4 * j));
    }
    m.add(id, values);
  }
  return m;
}

}  // namespace

FeatureFormat infer_feature_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".bin" || ext == ".ngf") ? FeatureFormat::kBinary : FeatureFormat::kCsv;
}

FeatureMatrix::FeatureMatrix(std::string channel, std::size_t dim)
    : channel_(std::move(channel)), dim_(dim) {}

void FeatureMatrix::add(ItemId id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw DimensionError("item " + std::to_string(id) + " has " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(dim_));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw FormatError("item " + std::to_string(id) + " has a non-finite value");
  }
  if (!row_of_.emplace(id, ids_.size()).second) {
    throw FormatError("duplicate item id " + std::to_string(id));
  }
  ids_.push_back(id);
  values_.insert(values_.end(), values.begin(), values.end());
}

std::optional<std::size_t> FeatureMatrix::find(ItemId id) const {
  if (auto it = row_of_.find(id); it != row_of_.end()) return it->second;
  return std::nullopt;
}

FeatureMatrix parse_features_csv(std::string_view text, std::string channel) {
  FeatureMatrix m;
  bool have_dim = false;
  bool first_row = true;
  std::size_t line_no = 0;
  std::vector<double> values;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    const bool header_allowed = std::exchange(first_row, false);
    ItemId id = 0;
    if (!detail::parse_uint(fields[0], id)) {
      double probe = 0.0;
      if (header_allowed && !detail::parse_double(fields[0], probe)) continue;
      throw FormatError("line " + std::to_string(line_no) + ": bad item id '" +
                        std::string(detail::trim(fields[0])) + "'");
    }
    if (fields.size() < 2) {
      throw FormatError("line " + std::to_string(line_no) + ": no feature values");
    }
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!detail::parse_double(fields[i], v)) {
        throw FormatError("line " + std::to_string(line_no) + ": bad value '" +
                          std::string(detail::trim(fields[i])) + "'");
      }
      values.push_back(v);
    }
    if (!have_dim) {
      m = FeatureMatrix(channel, values.size());
      have_dim = true;
    }
    if (values.size() != m.dim()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(m.dim()) +
                        " values, got " + std::to_string(values.size()));
    }
    try {
      m.add(id, values);
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (m.empty()) throw FormatError("feature file has no items");
  return m;
}

FeatureMatrix load_features(const std::filesystem::path& path, FeatureFormat format,
                            std::string channel) {
  const std::string bytes = read_file(path);
  try {
    return format == FeatureFormat::kBinary ? parse_binary(bytes, std::move(channel))
                                            : parse_features_csv(bytes, std::move(channel));
  } catch (const DimensionError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

FeatureMatrix load_features(const std::filesystem::path& path, std::string channel) {
  return load_features(path, infer_feature_format(path), std::move(channel));
}

void save_features_csv(const FeatureMatrix& features, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  std::string line;
  for (std::size_t r = 0; r < features.size(); ++r) {
    line = std::to_string(features.id(r));
    for (double v : features.row(r)) {
      line.push_back(',');
      line += detail::format_double(v);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

void save_features_binary(const FeatureMatrix& features, const std::filesystem::path& path) {
  std::string bytes(kBinaryMagic.begin(), kBinaryMagic.end());
  write_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(features.dim()));
  for (std::size_t r = 0; r < features.size(); ++r) {
    write_le<std::uint64_t>(bytes, features.id(r));
    for (double v : features.row(r)) {
      write_le<std::uint32_t>(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace ngrank
