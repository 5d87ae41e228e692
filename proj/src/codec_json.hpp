#pragma once

// JSON mappings for model types, shared by the codec, query output and CLI.

#include "json_util.hpp"
#include "sixlayer/model.hpp"

namespace sixlayer::detail {

Json value_to_json(const PropertyValue& value);
PropertyValue value_from_json(const Json& j, const std::string& where);

Json series_to_json(const TimeSeries& series);
TimeSeries series_from_json(const Json& j, const std::string& where);

Json entity_to_json(const Entity& entity);
Entity entity_from_json(const Json& j, std::size_t index);

Json entities_to_json(std::vector<Entity> entities);

}  // namespace sixlayer::detail
