#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "instructkit/backends.hpp"
#include "instructkit/dataset.hpp"
#include "instructkit/workflows.hpp"

namespace ik::cli {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "0.1.0";

// Global flags as parsed; unset ones fall back to env, config file, defaults.
struct GlobalFlags {
  std::optional<std::string> config;
  std::optional<std::string> backend;
  std::optional<std::string> cache;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> model;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<std::int64_t> max_tokens;
  std::optional<std::string> teacher_url;
};

class Context {
 public:
  GlobalFlags flags;

  /// Loads the config file and resolves the global settings. Call after parsing.
  void resolve();

  // Generic resolution for per-command settings. `secret` values are used
  // but never recorded.
  std::string setting(const std::string& key, const std::optional<std::string>& flag, const char* env,
                      std::string fallback, bool secret = false);
  std::int64_t setting(const std::string& key, const std::optional<std::int64_t>& flag, const char* env,
                       std::int64_t fallback);

  const std::string& backend_name() const { return backend_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t workers() const { return workers_; }
  const teacher::DecodingConfig& decoding() const { return decoding_; }

  std::shared_ptr<teacher::Backend> make_backend();
  teacher::WorkflowOptions workflow_options(const std::optional<std::string>& templates_path = std::nullopt);

  /// Provenance block written next to every artifact: resolved settings,
  /// their sources, prompt/template versions and input digests.
  json run_meta(const std::string& command, const std::map<std::string, fs::path>& inputs,
                const teacher::TemplateSet* templates = nullptr) const;

 private:
  json file_ = json::object();
  json resolved_ = json::object();
  json sources_ = json::object();
  std::string backend_;
  std::optional<fs::path> cache_;
  std::uint64_t seed_ = 0;
  std::size_t workers_ = 4;
  teacher::DecodingConfig decoding_;
  std::string teacher_url_;
};

// ---- input helpers ----------------------------------------------------------

Dataset load_instances(const fs::path& path, const std::string& kind);

/// A response set, or an instruction file whose outputs are taken as one
/// answer per instance. Name: explicit > common model tag > source_model in
/// the sidecar > file stem.
struct AnswerSet {
  std::string name;
  std::vector<ResponseRecord> records;
};
AnswerSet load_answers(const fs::path& path, const std::string& name = "");

/// Lowest decode_index per instance.
std::map<std::string, const ResponseRecord*> one_per_instance(const std::vector<ResponseRecord>& records);

// ---- output helpers ---------------------------------------------------------

/// Saves a dataset with `meta` (plus the dataset's own provenance) in its sidecar.
void save_with_meta(Dataset dataset, const fs::path& path, json meta);
void save_json(const fs::path& path, const json& j, const json& meta);
void save_text(const fs::path& path, const std::string& body, const json& meta);

json failures_json(const std::vector<teacher::Failure>& failures);

/// Prints the run summary and returns the exit status (0, or 2 on partial failure).
int finish(json summary, std::size_t failures);

}  // namespace ik::cli
