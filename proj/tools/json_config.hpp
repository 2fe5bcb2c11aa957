#pragma once

#include <istream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace fts::cli {

//! CLI11 config reader for JSON files. Top-level objects name subcommands,
//! e.g. {"simulate": {"n": [50, 100], "reps": 200}}; scalars and arrays map
//! to option values, booleans to flags.
class JsonConfig : public CLI::Config
{
public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override
  {
    return {};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
  {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& err) {
      throw CLI::ConversionError("config", err.what());
    }
    if (!doc.is_object())
      throw CLI::ConversionError("config", "top level must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(doc, {}, items);
    return items;
  }

private:
  static std::string scalar(const nlohmann::json& value)
  {
    if (value.is_string())
      return value.get<std::string>();
    if (value.is_boolean())
      return value.get<bool>() ? "true" : "false";
    if (value.is_number_integer() || value.is_number_unsigned())
      return value.dump();
    if (value.is_number())
      return value.dump();
    throw CLI::ConversionError("config", "unsupported value " + value.dump());
  }

  static void collect(const nlohmann::json& object,
                      const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items)
  {
    for (const auto& [key, value] : object.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& entry : value)
          item.inputs.push_back(scalar(entry));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

} // namespace fts::cli
