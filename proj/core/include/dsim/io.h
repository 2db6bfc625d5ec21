#ifndef DSIM_IO_H_
#define DSIM_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsim/domain.h"
#include "dsim/rebalance.h"

namespace dsim {

// Binary feature tables: "DSIM", u32 version, u32 dim, u64 record count, then
// per record u32-length-prefixed image_id and category_id followed by dim
// float32 components. All integers and floats little-endian.
inline constexpr std::string_view kFeatureMagic = "DSIM";
// Centroid files: "DCEN", u32 version, u32 dim, u64 category count, then per
// category a u32-length-prefixed id, u64 image count and dim float64 means.
inline constexpr std::string_view kCentroidMagic = "DCEN";
inline constexpr std::uint32_t kFormatVersion = 1;

enum class FeatureFormat { kAuto, kCsv, kBinary };

// CSV: header "image_id,category_id,f0,...,f{d-1}", one record per line.
// `source` names the input in error messages.
std::vector<FeatureRecord> ParseFeaturesCsv(std::string_view text,
                                            const std::string& source = "<csv>");
std::vector<FeatureRecord> ParseFeaturesBinary(std::string_view bytes,
                                               const std::string& source = "<bin>");
std::string EncodeFeaturesCsv(std::span<const FeatureRecord> records);
std::string EncodeFeaturesBinary(std::span<const FeatureRecord> records);

// kAuto picks binary when the file starts with the feature magic.
std::vector<FeatureRecord> LoadFeatures(const std::filesystem::path& path,
                                        FeatureFormat hint = FeatureFormat::kAuto);
void SaveFeatures(const std::filesystem::path& path,
                  std::span<const FeatureRecord> records, FeatureFormat format);

std::string EncodeCentroids(const Domain& domain);
// Weights are recomputed from the stored counts. Zero-count categories are
// skipped and reported through `dropped_empty`.
Domain DecodeCentroids(std::string_view bytes, const std::string& source = "<centroids>",
                       std::vector<std::string>* dropped_empty = nullptr);
void SaveCentroids(const Domain& domain, const std::filesystem::path& path);
Domain LoadCentroids(const std::filesystem::path& path,
                     std::vector<std::string>* dropped_empty = nullptr);

// Index CSV, either per-image rows under "category_id,image_id" or
// per-category rows under "category_id,count".
CategoryCounts ParseIndexCsv(std::string_view text,
                             const std::string& source = "<index>");
CategoryCounts LoadIndex(const std::filesystem::path& path);

// "category_id,image_id" rows in manifest order.
std::string EncodeManifestCsv(const SubsetManifest& manifest);

std::string ReadFile(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`.
void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view bytes);

}  // namespace dsim

#endif  // DSIM_IO_H_
