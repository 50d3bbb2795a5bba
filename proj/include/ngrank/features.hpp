#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ngrank/types.hpp"

namespace ngrank {

enum class FeatureFormat { kCsv, kBinary };

/// Picks kBinary for `.bin`/`.ngf` files, kCsv otherwise.
FeatureFormat infer_feature_format(const std::filesystem::path& path);

/// n items x dim finite reals for one feature channel. Rows keep insertion
/// order; ids are unique.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::string channel, std::size_t dim);

  /// Throws DimensionError on a length mismatch and FormatError on a
  /// duplicate id or a non-finite entry.
  void add(ItemId id, std::span<const double> values);

  const std::string& channel() const { return channel_; }
  void set_channel(std::string name) { channel_ = std::move(name); }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  ItemId id(std::size_t row) const { return ids_[row]; }
  const std::vector<ItemId>& ids() const { return ids_; }
  std::span<const double> row(std::size_t row) const {
    return {values_.data() + row * dim_, dim_};
  }
  std::optional<std::size_t> find(ItemId id) const;

 private:
  std::string channel_;
  std::size_t dim_ = 0;
  std::vector<ItemId> ids_;
  std::vector<double> values_;
  std::unordered_map<ItemId, std::size_t> row_of_;
};

FeatureMatrix load_features(const std::filesystem::path& path, FeatureFormat format,
                            std::string channel = {});
FeatureMatrix load_features(const std::filesystem::path& path, std::string channel = {});

FeatureMatrix parse_features_csv(std::string_view text, std::string channel = {});

void save_features_csv(const FeatureMatrix& features, const std::filesystem::path& path);

/// Binary layout: "NGF1", dim as u32 LE, then per item: u64 LE id followed by
/// dim IEEE-754 float32 LE values. Values are narrowed to float on save.
void save_features_binary(const FeatureMatrix& features, const std::filesystem::path& path);

}  // namespace ngrank
