#include <string>

#include "corpusclean/cli.hpp"
#include "json.hpp"

namespace corpusclean {

namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& v, const std::string& name) {
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("config field '" + name + "' must be a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("config field '" + name + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError("config field '" + name + "' must be a non-negative integer");
      }
    } else {
      if (!v.is_number()) throw ConfigError("config field '" + name + "' must be a number");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + name + "': " + e.what());
  }
}

void apply_params(const json& p, FilterParams& params) {
  if (!p.is_object()) throw ConfigError("config field 'params' must be an object");
  for (const auto& [key, v] : p.items()) {
    if (key == "nonalpha_majority_threshold") {
      params.nonalpha_majority_threshold = get_as<double>(v, key);
    } else if (key == "mismatch_ratio") {
      params.mismatch_ratio = get_as<double>(v, key);
    } else if (key == "mismatch_min_count") {
      params.mismatch_min_count = get_as<std::size_t>(v, key);
    } else if (key == "repeat_min_run") {
      params.repeat_min_run = get_as<std::size_t>(v, key);
    } else if (key == "langid_min_chars") {
      params.langid_min_chars = get_as<std::size_t>(v, key);
    } else if (key == "langid_min_margin") {
      params.langid_min_margin = get_as<double>(v, key);
    } else if (key == "len_min") {
      params.len_min = get_as<std::size_t>(v, key);
    } else if (key == "len_max") {
      params.len_max = get_as<std::size_t>(v, key);
    } else if (key == "len_ratio_max") {
      params.len_ratio_max = get_as<double>(v, key);
    } else {
      throw ConfigError("unknown config field 'params." + key + "'");
    }
  }
}

}  // namespace

PipelineConfig apply_config_json(std::string_view text, PipelineConfig config) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "filter_order") {
      if (!v.is_array()) throw ConfigError("config field 'filter_order' must be an array");
      config.filter_order.clear();
      for (const auto& name : v) {
        const auto id = parse_filter_id(get_as<std::string>(name, "filter_order[]"));
        if (!id) throw ConfigError("unknown filter '" + name.get<std::string>() + "' in filter_order");
        config.filter_order.push_back(*id);
      }
    } else if (key == "params") {
      apply_params(v, config.params);
    } else if (key == "src_lang") {
      config.src_lang = get_as<std::string>(v, key);
    } else if (key == "tgt_lang") {
      config.tgt_lang = get_as<std::string>(v, key);
    } else if (key == "langid_model_path") {
      if (v.is_null()) {
        config.langid_model_path.reset();
      } else {
        config.langid_model_path = get_as<std::string>(v, key);
      }
    } else if (key == "mode") {
      const auto mode = get_as<std::string>(v, key);
      if (mode == "parallel") {
        config.mode = CorpusMode::parallel;
      } else if (mode == "monolingual") {
        config.mode = CorpusMode::monolingual;
      } else {
        throw ConfigError("config field 'mode' must be \"parallel\" or \"monolingual\"");
      }
    } else if (key == "multi_align") {
      const auto mode = get_as<std::string>(v, key);
      if (mode == "keep_first") {
        config.multi_align = MultiAlignMode::keep_first;
      } else if (mode == "drop_all") {
        config.multi_align = MultiAlignMode::drop_all;
      } else {
        throw ConfigError("config field 'multi_align' must be \"keep_first\" or \"drop_all\"");
      }
    } else if (key == "exact_dedup") {
      config.exact_dedup = get_as<bool>(v, key);
    } else if (key == "threads") {
      config.threads = get_as<std::size_t>(v, key);
    } else if (key == "max_bad_lines") {
      if (v.is_null()) {
        config.max_bad_lines.reset();
      } else {
        config.max_bad_lines = get_as<std::uint64_t>(v, key);
      }
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  return config;
}

}  // namespace corpusclean
