#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fdn/model.hpp"

namespace fdn {

/// Platforms plus the function definitions that may be deployed on them.
struct Catalog {
  std::vector<TargetPlatform> platforms;
  std::vector<FunctionSpec> functions;

  const TargetPlatform* find_platform(std::string_view id) const;
  const FunctionSpec* find_function(std::string_view name) const;

  bool operator==(const Catalog&) const = default;
};

/// Parses the "platforms" array of a catalog document and validates every
/// platform. Throws ValidationError.
std::vector<TargetPlatform> parse_catalog(std::string_view document);

/// Parses the "functions" array of a catalog or functions document.
/// A document without a "functions" key yields an empty list.
std::vector<FunctionSpec> parse_functions(std::string_view document);

/// Both of the above.
Catalog parse_catalog_document(std::string_view document);

std::string serialize_catalog(const Catalog& catalog);

void validate_platform(const TargetPlatform& platform);
void validate_function(const FunctionSpec& function);

/// Throws ValidationError when `function` cannot run on `platform`.
void validate_deployment(const FunctionSpec& function, const TargetPlatform& platform);

std::string read_text_file(const std::string& path);

/// Path of the bundled catalog, honoring the FDN_CATALOG environment override.
std::string default_catalog_path();

}  // namespace fdn
