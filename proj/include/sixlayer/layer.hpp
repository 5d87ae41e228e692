#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sixlayer {

/// One of the six layers of the model. Constructed only through
/// Layer::from_int, so a Layer value is always in 1..6.
class Layer {
 public:
  static constexpr int kCount = 6;

  static Layer from_int(int value);
  static std::optional<Layer> try_from_int(int value) noexcept;

  constexpr int value() const noexcept { return value_; }

  /// Canonical layer name, e.g. "Roadside Structures".
  std::string_view name() const noexcept;

  friend constexpr auto operator<=>(Layer, Layer) = default;

 private:
  constexpr explicit Layer(int v) : value_(v) {}
  int value_;
};

namespace layers {
inline constexpr int kRoadNetwork = 1;
inline constexpr int kRoadside = 2;
inline constexpr int kTemporary = 3;
inline constexpr int kDynamic = 4;
inline constexpr int kEnvironment = 5;
inline constexpr int kDigital = 6;
}  // namespace layers

/// Subset of {1..6}; may be empty.
class LayerSet {
 public:
  constexpr LayerSet() = default;
  LayerSet(std::initializer_list<int> members);

  static constexpr LayerSet all() { return LayerSet(0x3F); }

  bool contains(int layer) const noexcept;
  bool contains(Layer layer) const noexcept { return contains(layer.value()); }
  void insert(int layer);
  void erase(int layer) noexcept;

  bool empty() const noexcept { return bits_ == 0; }
  int size() const noexcept;
  /// Lowest member; nullopt when empty.
  std::optional<int> lowest() const noexcept;
  /// Members in ascending order.
  std::vector<int> members() const;

  bool is_subset_of(LayerSet other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }
  LayerSet operator|(LayerSet other) const noexcept {
    return LayerSet(static_cast<std::uint8_t>(bits_ | other.bits_));
  }
  LayerSet operator&(LayerSet other) const noexcept {
    return LayerSet(static_cast<std::uint8_t>(bits_ & other.bits_));
  }

  /// "1,2,4"
  std::string to_string() const;
  /// Parses a comma separated list such as "1,4". Throws Error(Range) on a
  /// token outside 1..6 and Error(Parse) on anything that is not an integer.
  static LayerSet parse_csv(std::string_view csv);

  friend bool operator==(LayerSet, LayerSet) = default;

 private:
  constexpr explicit LayerSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

}  // namespace sixlayer
