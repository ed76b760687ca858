#pragma once

#include <memory>
#include <string>

#include "fri/model.hpp"

namespace fri {

// Model/signal JSON schema (field names are exact):
//   {"model": {"type": "spline", "a": ..., "b": ..., "knots": [...]},
//    "coeffs": [[lambda, c], ...]}
//   {"model": {"type": "triangulation", "nodes": [[x, y], ...],
//              "triangles": [[i, j, k], ...], "inner_nodes": [...]},
//    "coeffs": [[lambda, c], ...]}
// An optional "r0" inside "model" overrides the derived support radius.
// Unknown model types are rejected.

std::shared_ptr<const GeneratorModel> model_from_json(const std::string& text);
Signal signal_from_json(const std::string& text);
Signal signal_from_json(const std::string& text, std::shared_ptr<const GeneratorModel> model);

std::string model_to_json(const GeneratorModel& model);
std::string signal_to_json(const Signal& f);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fri
