#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mog/acquisition.hpp"
#include "mog/generation.hpp"
#include "mog/model_gateway.hpp"
#include "mog/organization.hpp"

namespace mog::cli {

enum class SourceKind { kFixture, kHttp };

struct SearchConfig {
  SourceKind kind = SourceKind::kFixture;
  std::filesystem::path fixture_dir;
  std::string endpoint;
  std::string api_key_env = "MOG_SEARCH_API_KEY";
  std::chrono::milliseconds timeout{20'000};
};

struct PagesConfig {
  SourceKind kind = SourceKind::kFixture;
  std::filesystem::path index;  // fixture URL → file map
  std::chrono::milliseconds timeout{20'000};
  std::size_t max_document_chars = 100'000;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  AcquisitionConfig acquisition;
  OrganizeConfig organization;
  GenerationConfig generation;
  BackendConfig chat;
  BackendConfig embed;
  ModelRouting routing;
  SearchConfig search;
  PagesConfig pages;
  std::optional<std::filesystem::path> store_path;   // extra copy of the store
  std::optional<std::filesystem::path> output_dir;   // default for --out

  void validate() const;
  // Search and page sources; only needed by generate.
  void validate_sources() const;
};

// Parses a config document. Unknown keys and type errors are reported with
// their JSON pointer, e.g. "/organization/recursion_treshold: unknown key".
// Relative paths resolve against `base_dir`.
PipelineConfig parse_config(const nlohmann::json& json, const std::filesystem::path& base_dir);

PipelineConfig load_config(const std::filesystem::path& path);

// Effective configuration, paths as given after resolution.
nlohmann::json config_to_json(const PipelineConfig& cfg);

}  // namespace mog::cli
