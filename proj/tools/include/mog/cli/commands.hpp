#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mog/cli/config.hpp"
#include "mog/error.hpp"

namespace mog::cli {

// A failure inside one pipeline stage; what() reads "[stage] Code: message".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const Error& cause);
  const std::string& stage() const noexcept { return stage_; }
  ErrorCode code() const noexcept { return code_; }

 private:
  std::string stage_;
  ErrorCode code_;
};

struct GenerateOptions {
  std::string topic;
  std::filesystem::path config;
  std::filesystem::path out;
  bool no_subtopic_explorer = false;
  bool no_memory_organization = false;
};

struct GenerateResult {
  std::filesystem::path article;
  std::filesystem::path sidecar;
  std::filesystem::path report;
  std::filesystem::path outline;
  std::filesystem::path store;
  int sections = 0;
  int units = 0;
  int pages_fetched = 0;
};

// explore → organize → assemble_and_cite → render. Files are staged in a
// hidden directory under `out` and renamed into place only when every stage
// succeeded. Throws StageError.
GenerateResult run_generate(const GenerateOptions& options);

struct EvaluateOptions {
  std::filesystem::path article;
  std::filesystem::path sidecar;
  std::optional<std::filesystem::path> reference;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> article_mentions;    // external recognizer output
  std::optional<std::filesystem::path> reference_mentions;  // external recognizer output
  std::filesystem::path out;
};

nlohmann::json run_evaluate(const EvaluateOptions& options);

// Macro-averages every numeric metric over per-topic evaluation reports and
// records the pooled utilization ratio next to it for comparison.
nlohmann::json aggregate_reports(const std::vector<nlohmann::json>& reports);

struct InspectOptions {
  std::filesystem::path store;
  std::optional<std::filesystem::path> outline;
  bool units = false;
};

void run_inspect(const InspectOptions& options, std::ostream& out);

// Writes `content` to `path` through a temporary sibling and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mog::cli
