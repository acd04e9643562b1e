#include "gsum/param_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gsum {
namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = trim(
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    double value = 0.0;
    const char* last = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), last, value);
    if (item.empty() || ec != std::errc() || ptr != last) {
      throw ParamFileError("invalid number '" + item + "' in " + field);
    }
    out.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

ParameterSet make_params(std::vector<double> k, std::vector<double> w) {
  try {
    return ParameterSet(std::move(k), std::move(w));
  } catch (const std::logic_error& e) {
    throw ParamFileError(std::string("invalid parameter values: ") + e.what());
  }
}

}  // namespace

nlohmann::json params_to_json(const ParameterSet& params, const nlohmann::json& meta) {
  nlohmann::json j;
  j["version"] = 1;
  j["k"] = params.k();
  j["w"] = params.w();
  if (!meta.is_null()) {
    j["meta"] = meta;
  } else if (params.scheme_tag()) {
    j["meta"] = {{"scheme",
                  {{"base", params.scheme_tag()->base()},
                   {"depth", params.scheme_tag()->depth()}}}};
  }
  return j;
}

ParameterSet params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ParamFileError("parameter file root must be a JSON object");
  }
  if (!j.contains("version")) {
    throw ParamFileError("parameter file is missing the required field 'version' (expected 1)");
  }
  if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) {
    throw ParamFileError("unsupported parameter file version (expected 1)");
  }
  if (!j.contains("k") || !j["k"].is_array() || j["k"].empty()) {
    throw ParamFileError("parameter file needs a nonempty numeric array 'k'");
  }
  std::vector<double> k;
  k.reserve(j["k"].size());
  for (const auto& item : j["k"]) {
    if (!item.is_number()) {
      throw ParamFileError("parameter file needs a nonempty numeric array 'k'");
    }
    k.push_back(item.get<double>());
  }
  std::vector<double> w;
  if (j.contains("w") && !j["w"].is_null()) {
    if (!j["w"].is_array()) {
      throw ParamFileError("'w' must be a numeric array matching 'k' in length");
    }
    w.reserve(j["w"].size());
    for (const auto& item : j["w"]) {
      if (!item.is_number()) {
        throw ParamFileError("'w' must be a numeric array matching 'k' in length");
      }
      w.push_back(item.get<double>());
    }
    if (w.size() != k.size()) {
      throw ParamFileError("'w' must be a numeric array matching 'k' in length");
    }
  } else {
    w = uniform_weights(k.size());
  }
  return make_params(std::move(k), std::move(w));
}

ParameterSet load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParamFileError("cannot open parameter file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParamFileError("cannot parse parameter file '" + path + "': " + e.what());
  }
  return params_from_json(j);
}

void save_params(const std::string& path, const ParameterSet& params,
                 const nlohmann::json& meta) {
  std::ofstream out(path);
  if (!out) {
    throw ParamFileError("cannot write parameter file '" + path + "'");
  }
  out << params_to_json(params, meta).dump(2) << '\n';
  out.flush();
  if (!out) {
    throw ParamFileError("cannot write parameter file '" + path + "'");
  }
}

ParameterSet parse_inline(const std::string& text) {
  std::vector<double> k;
  std::vector<double> w;
  bool have_k = false;
  bool have_w = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t semi = text.find(';', pos);
    const std::string part = trim(
        text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
    if (!part.empty()) {
      const std::size_t eq = part.find('=');
      if (eq == std::string::npos) {
        throw ParamFileError("inline parameters expect key=value groups separated by ';'");
      }
      const std::string key = trim(part.substr(0, eq));
      const std::string value = part.substr(eq + 1);
      if (key == "k") {
        k = parse_number_list(value, "k");
        have_k = true;
      } else if (key == "w") {
        w = parse_number_list(value, "w");
        have_w = true;
      } else {
        throw ParamFileError("unknown inline parameter key '" + key + "'");
      }
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  if (!have_k) {
    throw ParamFileError("inline parameters require a 'k' list");
  }
  if (!have_w) w = uniform_weights(k.size());
  return make_params(std::move(k), std::move(w));
}

ParameterSet load_params_arg(const std::string& arg) {
  if (arg.find('=') != std::string::npos) return parse_inline(arg);
  return load_params(arg);
}

}  // namespace gsum
