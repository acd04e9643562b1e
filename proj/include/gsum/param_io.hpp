#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gsum/approx.hpp"

namespace gsum {

class ParamFileError : public std::runtime_error {
 public:
  explicit ParamFileError(const std::string& message) : std::runtime_error(message) {}
};

// Parameter file schema: {"version": 1, "k": [...], "w": [...], "meta": {...}}.
// "w" defaults to uniform weights; "meta" is free-form provenance.
nlohmann::json params_to_json(const ParameterSet& params,
                              const nlohmann::json& meta = nlohmann::json());
ParameterSet params_from_json(const nlohmann::json& j);

ParameterSet load_params(const std::string& path);
void save_params(const std::string& path, const ParameterSet& params,
                 const nlohmann::json& meta = nlohmann::json());

// Inline form "k=v1,v2,...[;w=w1,w2,...]".
ParameterSet parse_inline(const std::string& text);

// Dispatch: arguments containing '=' parse inline, anything else loads a file.
ParameterSet load_params_arg(const std::string& arg);

}  // namespace gsum
