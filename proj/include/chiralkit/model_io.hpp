#pragma once

#include <stdexcept>
#include <string>

#include "chiralkit/poly.hpp"

namespace chiralkit {

// Raised on malformed model files; message names the offending key.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Model {
  FivePolys F = fermat_model();
  GParams g = generic_g();
};

struct LoadOptions {
  // When false the F^i|_{x_i=0}=0 support condition is not enforced on load;
  // the differential checker reports such violations itself, with witnesses.
  bool enforce_support = true;
};

Model load_model(const std::string& path, const LoadOptions& opts = {});
Model parse_model(const std::string& json_text, const LoadOptions& opts = {});
void save_model(const Model& model, const std::string& path);
std::string model_schema_version();

}  // namespace chiralkit
