#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "instructkit/records.hpp"

namespace ik {

enum class DatasetKind { instruction_following, comparison, benchmark, response_set };

const char* to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(std::string_view s);

/// A homogeneous list of records plus free-form provenance. Instruction-following
/// and benchmark datasets both hold InstructionInstance records.
struct Dataset {
  using Records = std::variant<std::vector<InstructionInstance>, std::vector<ComparisonRecord>,
                               std::vector<ResponseRecord>>;

  DatasetKind kind = DatasetKind::instruction_following;
  Records records = std::vector<InstructionInstance>{};
  json provenance = json::object();

  static Dataset of(DatasetKind kind, std::vector<InstructionInstance> records, json provenance = json::object());
  static Dataset of(std::vector<ComparisonRecord> records, json provenance = json::object());
  static Dataset of(std::vector<ResponseRecord> records, json provenance = json::object());

  std::size_t size() const;

  // Typed views; each throws SchemaError when the kind does not match.
  const std::vector<InstructionInstance>& instances() const;
  const std::vector<ComparisonRecord>& comparisons() const;
  const std::vector<ResponseRecord>& responses() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Path of the provenance sidecar written next to a dataset or artifact.
std::filesystem::path meta_path(const std::filesystem::path& path);

/// Reads a line-delimited dataset (a JSON array is also accepted). Every record
/// is validated; errors carry the 1-based line or record index. Benchmark files
/// may expand one line into several instances.
Dataset load_dataset(const std::filesystem::path& path, DatasetKind kind);

/// Parses dataset text that is already in memory.
Dataset parse_dataset(std::string_view content, DatasetKind kind, std::string_view origin = "<memory>");

/// Canonical serialization: one record per line, sorted keys, UTF-8, trailing
/// newline. Provenance, when non-empty, goes to the `.meta.json` sidecar.
std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Pretty JSON with sorted keys and a trailing newline.
std::string dump_pretty(const json& j);
void write_meta(const std::filesystem::path& artifact, const json& meta);

}  // namespace ik
