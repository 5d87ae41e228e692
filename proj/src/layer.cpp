#include "sixlayer/layer.hpp"

#include <charconv>
#include <sstream>

#include "sixlayer/error.hpp"

namespace sixlayer {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Structure: return "structural error";
    case ErrorKind::Semantic: return "semantic error";
    case ErrorKind::Lookup: return "lookup error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Io: return "io error";
  }
  return "error";
}

namespace {

constexpr std::array<std::string_view, Layer::kCount> kLayerNames = {
    "Road Network and Traffic Guidance Objects",
    "Roadside Structures",
    "Temporary Modifications of L1 and L2",
    "Dynamic Objects",
    "Environmental Conditions",
    "Digital Information",
};

}  // namespace

std::optional<Layer> Layer::try_from_int(int value) noexcept {
  if (value < 1 || value > kCount) return std::nullopt;
  return Layer(value);
}

Layer Layer::from_int(int value) {
  if (auto layer = try_from_int(value)) return *layer;
  throw Error(ErrorKind::Range,
              "layer out of range: " + std::to_string(value) + " (expected 1..6)");
}

std::string_view Layer::name() const noexcept { return kLayerNames[value_ - 1]; }

LayerSet::LayerSet(std::initializer_list<int> members) {
  for (int m : members) insert(m);
}

bool LayerSet::contains(int layer) const noexcept {
  if (layer < 1 || layer > Layer::kCount) return false;
  return (bits_ >> (layer - 1)) & 1U;
}

void LayerSet::insert(int layer) {
  Layer::from_int(layer);
  bits_ = static_cast<std::uint8_t>(bits_ | (1U << (layer - 1)));
}

void LayerSet::erase(int layer) noexcept {
  if (layer < 1 || layer > Layer::kCount) return;
  bits_ = static_cast<std::uint8_t>(bits_ & ~(1U << (layer - 1)));
}

int LayerSet::size() const noexcept {
  int n = 0;
  for (int l = 1; l <= Layer::kCount; ++l) n += contains(l) ? 1 : 0;
  return n;
}

std::optional<int> LayerSet::lowest() const noexcept {
  for (int l = 1; l <= Layer::kCount; ++l)
    if (contains(l)) return l;
  return std::nullopt;
}

std::vector<int> LayerSet::members() const {
  std::vector<int> out;
  for (int l = 1; l <= Layer::kCount; ++l)
    if (contains(l)) out.push_back(l);
  return out;
}

std::string LayerSet::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int l : members()) {
    if (!first) os << ',';
    os << l;
    first = false;
  }
  return os.str();
}

LayerSet LayerSet::parse_csv(std::string_view csv) {
  LayerSet out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    auto token = csv.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size())
      throw Error(ErrorKind::Parse, "bad layer token '" + std::string(token) + "'");
    out.insert(value);
    pos = comma + 1;
  }
  return out;
}

}  // namespace sixlayer
