#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "binary.h"
#include "dsim/errors.h"
#include "dsim/io.h"

namespace dsim {
namespace {

using internal::BinaryReader;
using internal::BinaryWriter;

// Splits `text` into LF-terminated lines, tolerating a trailing CR and a
// missing final newline.
std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
bool ParseNumber(std::string_view field, T& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::string FormatFloat(float value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// Re-raises record validation failures with the record's position.
void ValidateAt(const FeatureRecord& record, const std::string& where,
                std::optional<std::uint64_t> line,
                std::optional<std::uint64_t> byte_offset) {
  try {
    ValidateRecord(record);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.message(), line, byte_offset);
  }
}

}  // namespace

std::vector<FeatureRecord> ParseFeaturesCsv(std::string_view text,
                                            const std::string& source) {
  const auto lines = SplitLines(text);
  if (lines.empty() || lines.front().empty()) {
    throw ParseErrorAtLine(source, 1, "missing header");
  }
  const auto header = SplitFields(lines.front());
  if (header.size() < 3 || header[0] != "image_id" ||
      header[1] != "category_id") {
    throw ParseErrorAtLine(source, 1,
                           "header must be image_id,category_id,f0,...");
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t k = 0; k < dim; ++k) {
    if (header[k + 2] != "f" + std::to_string(k)) {
      throw ParseErrorAtLine(source, 1,
                             "expected column f" + std::to_string(k) +
                                 ", found '" + std::string(header[k + 2]) + "'");
    }
  }

  std::vector<FeatureRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::uint64_t line_no = n + 1;
    if (lines[n].empty()) {
      if (n + 1 == lines.size()) break;
      throw ParseErrorAtLine(source, line_no, "blank line");
    }
    const auto fields = SplitFields(lines[n]);
    if (fields.size() != dim + 2) {
      throw Error(ErrorCode::kDimensionMismatch,
                  source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim + 2) + " fields, found " +
                      std::to_string(fields.size()),
                  line_no, std::nullopt);
    }
    FeatureRecord r;
    r.image_id = std::string(fields[0]);
    r.category_id = std::string(fields[1]);
    r.vector.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!ParseNumber(fields[k + 2], r.vector[k])) {
        throw ParseErrorAtLine(source, line_no,
                               "bad number '" + std::string(fields[k + 2]) +
                                   "' in column f" + std::to_string(k));
      }
    }
    ValidateAt(r, source + ":" + std::to_string(line_no), line_no, std::nullopt);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<FeatureRecord> ParseFeaturesBinary(std::string_view bytes,
                                               const std::string& source) {
  BinaryReader in(bytes, source);
  if (in.GetRaw(kFeatureMagic.size(), "magic") != kFeatureMagic) {
    throw Error(ErrorCode::kBadMagic, source + ": not a feature table",
                std::nullopt, 0);
  }
  const std::uint64_t version_at = in.offset();
  const auto version = in.Get<std::uint32_t>("version");
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kBadVersion,
                source + ": unsupported version " + std::to_string(version),
                std::nullopt, version_at);
  }
  const std::uint64_t dim_at = in.offset();
  const auto dim = in.Get<std::uint32_t>("dim");
  if (dim == 0) in.Fail(dim_at, "dim must be positive");
  const auto count = in.Get<std::uint64_t>("record count");

  std::vector<FeatureRecord> records;
  // Each record needs at least its two length prefixes and the vector.
  const std::uint64_t min_record = 8 + 4ULL * dim;
  records.reserve(std::min<std::uint64_t>(count, in.remaining() / min_record));
  for (std::uint64_t n = 0; n < count; ++n) {
    const std::uint64_t at = in.offset();
    FeatureRecord r;
    r.image_id = in.GetString("image_id");
    r.category_id = in.GetString("category_id");
    r.vector.resize(dim);
    for (std::uint32_t k = 0; k < dim; ++k) {
      r.vector[k] = in.Get<float>("feature component");
    }
    ValidateAt(r, source + " @ byte " + std::to_string(at), std::nullopt, at);
    records.push_back(std::move(r));
  }
  if (in.remaining() != 0) {
    in.Fail(in.offset(), std::to_string(in.remaining()) +
                             " trailing bytes after the last record");
  }
  return records;
}

std::string EncodeFeaturesCsv(std::span<const FeatureRecord> records) {
  const std::size_t dim = records.empty() ? 0 : records.front().vector.size();
  std::string out = "image_id,category_id";
  for (std::size_t k = 0; k < dim; ++k) out += ",f" + std::to_string(k);
  out += '\n';
  for (const auto& r : records) {
    if (r.vector.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "record '" + r.image_id + "' has a different dim");
    }
    out += r.image_id;
    out += ',';
    out += r.category_id;
    for (const float v : r.vector) {
      out += ',';
      out += FormatFloat(v);
    }
    out += '\n';
  }
  return out;
}

std::string EncodeFeaturesBinary(std::span<const FeatureRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "binary tables need at least one record");
  }
  const std::size_t dim = records.front().vector.size();
  BinaryWriter out;
  out.PutRaw(kFeatureMagic);
  out.Put(kFormatVersion);
  out.Put(static_cast<std::uint32_t>(dim));
  out.Put(static_cast<std::uint64_t>(records.size()));
  for (const auto& r : records) {
    if (r.vector.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "record '" + r.image_id + "' has a different dim");
    }
    out.PutString(r.image_id);
    out.PutString(r.category_id);
    for (const float v : r.vector) out.Put(v);
  }
  return out.Take();
}

std::vector<FeatureRecord> LoadFeatures(const std::filesystem::path& path,
                                        FeatureFormat hint) {
  const std::string bytes = ReadFile(path);
  if (hint == FeatureFormat::kAuto) {
    hint = std::string_view(bytes).starts_with(kFeatureMagic)
               ? FeatureFormat::kBinary
               : FeatureFormat::kCsv;
  }
  return hint == FeatureFormat::kBinary
             ? ParseFeaturesBinary(bytes, path.string())
             : ParseFeaturesCsv(bytes, path.string());
}

void SaveFeatures(const std::filesystem::path& path,
                  std::span<const FeatureRecord> records,
                  FeatureFormat format) {
  WriteFileAtomically(path, format == FeatureFormat::kBinary
                                ? EncodeFeaturesBinary(records)
                                : EncodeFeaturesCsv(records));
}

CategoryCounts ParseIndexCsv(std::string_view text, const std::string& source) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw ParseErrorAtLine(source, 1, "missing header");
  const auto header = SplitFields(lines.front());
  const bool per_image = header.size() == 2 && header[0] == "category_id" &&
                         header[1] == "image_id";
  const bool per_count = header.size() == 2 && header[0] == "category_id" &&
                         header[1] == "count";
  if (!per_image && !per_count) {
    throw ParseErrorAtLine(
        source, 1, "header must be category_id,image_id or category_id,count");
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::uint64_t line_no = n + 1;
    if (lines[n].empty()) {
      if (n + 1 == lines.size()) break;
      throw ParseErrorAtLine(source, line_no, "blank line");
    }
    const auto fields = SplitFields(lines[n]);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseErrorAtLine(source, line_no, "expected two non-empty fields");
    }
    if (per_image) {
      pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
      continue;
    }
    std::uint64_t count = 0;
    if (!ParseNumber(fields[1], count)) {
      throw ParseErrorAtLine(source, line_no,
                             "bad count '" + std::string(fields[1]) + "'");
    }
    if (!counts.emplace(std::string(fields[0]), count).second) {
      throw Error(ErrorCode::kDuplicateCategory,
                  source + ":" + std::to_string(line_no) + ": category '" +
                      std::string(fields[0]) + "' listed twice",
                  line_no, std::nullopt);
    }
  }
  return per_image ? CategoryCounts::FromImages(pairs)
                   : CategoryCounts::FromCounts(std::move(counts));
}

CategoryCounts LoadIndex(const std::filesystem::path& path) {
  return ParseIndexCsv(ReadFile(path), path.string());
}

std::string EncodeManifestCsv(const SubsetManifest& manifest) {
  std::string out = "category_id,image_id\n";
  for (const auto& [id, images] : manifest.entries) {
    for (const auto& image : images) {
      out += id;
      out += ',';
      out += image;
      out += '\n';
    }
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIoError, "error reading '" + path.string() + "'");
  }
  return std::move(buf).str();
}

void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError, "cannot write '" + tmp.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      throw Error(ErrorCode::kIoError, "error writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoError,
                "cannot move output into '" + path.string() + "'");
  }
}

}  // namespace dsim
