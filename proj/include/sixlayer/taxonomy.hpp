#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sixlayer/layer.hpp"

namespace sixlayer {

enum class CategoryFlag {
  GuidanceObject,
  RoadsideStructure,
  Movable,
  EnvironmentalCondition,
  DigitalInformation,
  TemporaryOnly,
  SupportsPeriodicState,
};

std::string_view to_string(CategoryFlag flag);
std::optional<CategoryFlag> category_flag_from_string(std::string_view name);

/// Small bit set over CategoryFlag.
class FlagSet {
 public:
  FlagSet() = default;
  FlagSet(std::initializer_list<CategoryFlag> flags) {
    for (auto f : flags) insert(f);
  }

  bool contains(CategoryFlag f) const noexcept { return (bits_ >> static_cast<int>(f)) & 1U; }
  void insert(CategoryFlag f) noexcept { bits_ |= 1U << static_cast<int>(f); }
  bool empty() const noexcept { return bits_ == 0; }
  /// Flag names sorted lexicographically.
  std::vector<std::string> names() const;

  friend bool operator==(FlagSet, FlagSet) = default;

 private:
  unsigned bits_ = 0;
};

/// A class of traffic entities. Categories do not carry a layer themselves;
/// instances are placed on one of the admissible layers.
struct EntityCategory {
  std::string id;                     // lowercase dotted path
  std::optional<std::string> parent;  // absent only for the root
  std::string display_name;
  LayerSet admissible_layers;
  FlagSet flags;

  bool has(CategoryFlag f) const noexcept { return flags.contains(f); }

  friend bool operator==(const EntityCategory&, const EntityCategory&) = default;
};

inline constexpr std::string_view kRootCategory = "entity";

/// Immutable category catalog. Every Taxonomy instance satisfies the
/// hierarchy and flag invariants; construction goes through from_categories.
class Taxonomy {
 public:
  /// Checks every invariant and throws Error(Semantic) on the first
  /// violation (duplicate ids, cycles, dangling parents, empty layer sets,
  /// flag inconsistencies, parent-subset rule, missing or extra roots).
  static Taxonomy from_categories(std::string version, std::vector<EntityCategory> categories);

  const std::string& version() const noexcept { return version_; }
  const std::map<std::string, EntityCategory, std::less<>>& categories() const noexcept {
    return categories_;
  }

  const EntityCategory* find(std::string_view id) const noexcept;
  /// Throws Error(Lookup) for an unknown id.
  const EntityCategory& at(std::string_view id) const;

  /// Ancestors of id, nearest first, ending at the root. Excludes id itself.
  std::vector<const EntityCategory*> ancestors(std::string_view id) const;

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;

 private:
  std::string version_;
  std::map<std::string, EntityCategory, std::less<>> categories_;
};

/// Built-in catalog covering the exemplary entities of every layer.
const Taxonomy& default_taxonomy();

/// Parses the JSON taxonomy file format. Throws Error(Parse) for malformed
/// documents, Error(Schema) for wrong shapes, Error(Semantic) for invariant
/// violations.
Taxonomy load_taxonomy(std::string_view document);

/// Canonical JSON: sorted keys, categories sorted by id, layers ascending,
/// flags lexicographic, newline-terminated.
std::string serialize_taxonomy(const Taxonomy& taxonomy);

LayerSet admissible_layers(const Taxonomy& taxonomy, std::string_view category);

/// True iff b is a (reflexive) ancestor of a.
bool is_subcategory(const Taxonomy& taxonomy, std::string_view a, std::string_view b);

}  // namespace sixlayer
