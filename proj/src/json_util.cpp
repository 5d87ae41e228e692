#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace sixlayer::detail {

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann reports the byte just past the offending token
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    auto msg_pos = what.find("error: ");
    std::string detail = msg_pos == std::string::npos ? what : what.substr(msg_pos + 7);
    throw Error(ErrorKind::Parse, "syntax error at " + line_col(text, byte) + ": " + detail);
  }
}

void expect_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorKind::Schema, where + ": unknown key \"" + key + "\"");
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(ErrorKind::Schema, where + ": missing key \"" + key + "\"");
  return *it;
}

const Json& require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, where + ": expected an object");
  return j;
}

const Json& require_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::Schema, where + ": expected an array");
  return j;
}

std::string require_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw Error(ErrorKind::Schema, where + ": expected a string");
  return j.get<std::string>();
}

double require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorKind::Schema, where + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::Schema, where + ": number is not finite");
  return v;
}

int require_int(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 1e9) return static_cast<int>(v);
  }
  throw Error(ErrorKind::Schema, where + ": expected an integer");
}

bool require_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw Error(ErrorKind::Schema, where + ": expected a boolean");
  return j.get<bool>();
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sixlayer::detail
