#include <cmath>

#include "binary.h"
#include "dsim/errors.h"
#include "dsim/io.h"

namespace dsim {

std::string EncodeCentroids(const Domain& domain) {
  internal::BinaryWriter out;
  out.PutRaw(kCentroidMagic);
  out.Put(kFormatVersion);
  out.Put(static_cast<std::uint32_t>(domain.dim()));
  out.Put(static_cast<std::uint64_t>(domain.size()));
  for (const auto& c : domain.centroids()) {
    out.PutString(c.category_id);
    out.Put(static_cast<std::uint64_t>(c.count));
    for (const double v : c.mean) out.Put(v);
  }
  return out.Take();
}

Domain DecodeCentroids(std::string_view bytes, const std::string& source,
                       std::vector<std::string>* dropped_empty) {
  internal::BinaryReader in(bytes, source);
  if (in.GetRaw(kCentroidMagic.size(), "magic") != kCentroidMagic) {
    throw Error(ErrorCode::kBadMagic, source + ": not a centroid file",
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
  const auto count = in.Get<std::uint64_t>("category count");

  std::vector<CategoryCentroid> centroids;
  const std::uint64_t min_entry = 4 + 8 + 8ULL * dim;
  centroids.reserve(std::min<std::uint64_t>(count, in.remaining() / min_entry));
  for (std::uint64_t n = 0; n < count; ++n) {
    const std::uint64_t at = in.offset();
    CategoryCentroid c;
    c.category_id = in.GetString("category_id");
    if (c.category_id.empty()) in.Fail(at, "empty category_id");
    if (!centroids.empty() && !(centroids.back().category_id < c.category_id)) {
      in.Fail(at, "category '" + c.category_id +
                      "' is duplicated or out of order");
    }
    c.count = in.Get<std::uint64_t>("count");
    c.mean.resize(dim);
    for (std::uint32_t k = 0; k < dim; ++k) {
      c.mean[k] = in.Get<double>("mean component");
      if (!std::isfinite(c.mean[k])) {
        throw Error(ErrorCode::kNonFiniteValue,
                    source + " @ byte " + std::to_string(at) + ": category '" +
                        c.category_id + "' has a non-finite mean",
                    std::nullopt, at);
      }
    }
    centroids.push_back(std::move(c));
  }
  if (in.remaining() != 0) {
    in.Fail(in.offset(), std::to_string(in.remaining()) +
                             " trailing bytes after the last category");
  }
  return Domain::FromCentroids(std::move(centroids), dropped_empty);
}

void SaveCentroids(const Domain& domain, const std::filesystem::path& path) {
  WriteFileAtomically(path, EncodeCentroids(domain));
}

Domain LoadCentroids(const std::filesystem::path& path,
                     std::vector<std::string>* dropped_empty) {
  return DecodeCentroids(ReadFile(path), path.string(), dropped_empty);
}

}  // namespace dsim
