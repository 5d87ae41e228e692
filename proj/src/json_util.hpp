#pragma once

// Helpers for strict reading of nlohmann::json documents. Internal to the
// library; not installed.

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sixlayer/error.hpp"

namespace sixlayer::detail {

using Json = nlohmann::json;

/// Parses text, turning nlohmann's byte offset into line:column.
Json parse_json_text(std::string_view text);

/// Rejects keys outside `allowed`. `where` names the object in messages.
void expect_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& where);

const Json& require(const Json& obj, const char* key, const std::string& where);
const Json& require_object(const Json& j, const std::string& where);
const Json& require_array(const Json& j, const std::string& where);
std::string require_string(const Json& j, const std::string& where);
double require_number(const Json& j, const std::string& where);
int require_int(const Json& j, const std::string& where);
bool require_bool(const Json& j, const std::string& where);

/// Canonical rendering: sorted keys (nlohmann's default object map),
/// two-space indent, shortest round-trip doubles, trailing newline.
std::string dump_canonical(const Json& j);

}  // namespace sixlayer::detail
