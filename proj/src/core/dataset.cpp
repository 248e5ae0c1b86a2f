#include "instructkit/dataset.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "instructkit/error.hpp"
#include "instructkit/text.hpp"

namespace ik {

namespace fs = std::filesystem;

const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::instruction_following: return "instruction_following";
    case DatasetKind::comparison: return "comparison";
    case DatasetKind::benchmark: return "benchmark";
    case DatasetKind::response_set: return "response_set";
  }
  return "instruction_following";
}

DatasetKind dataset_kind_from_string(std::string_view s) {
  if (s == "instruction_following") return DatasetKind::instruction_following;
  if (s == "comparison") return DatasetKind::comparison;
  if (s == "benchmark") return DatasetKind::benchmark;
  if (s == "response_set") return DatasetKind::response_set;
  throw SchemaError("core", "unknown dataset kind '" + std::string(s) + "'");
}

Dataset Dataset::of(DatasetKind kind, std::vector<InstructionInstance> records, json provenance) {
  if (kind != DatasetKind::instruction_following && kind != DatasetKind::benchmark) {
    throw SchemaError("core", std::string("instruction records cannot form a '") + to_string(kind) + "' dataset");
  }
  return Dataset{kind, std::move(records), std::move(provenance)};
}

Dataset Dataset::of(std::vector<ComparisonRecord> records, json provenance) {
  return Dataset{DatasetKind::comparison, std::move(records), std::move(provenance)};
}

Dataset Dataset::of(std::vector<ResponseRecord> records, json provenance) {
  return Dataset{DatasetKind::response_set, std::move(records), std::move(provenance)};
}

std::size_t Dataset::size() const {
  return std::visit([](const auto& v) { return v.size(); }, records);
}

namespace {

template <typename T>
const std::vector<T>& view(const Dataset& d, const char* wanted) {
  if (const auto* v = std::get_if<std::vector<T>>(&d.records)) return *v;
  throw SchemaError("core", std::string("dataset of kind '") + to_string(d.kind) + "' is not " + wanted);
}

[[noreturn]] void record_error(std::string_view origin, std::size_t line, const std::exception& e) {
  throw ValidationError("core", std::string(origin) + ": record at line " + std::to_string(line) + ": " + e.what());
}

void check_response_uniqueness(const std::vector<ResponseRecord>& rs, std::string_view origin,
                               const std::vector<std::size_t>& lines) {
  std::map<std::tuple<std::string, std::string, std::int64_t>, std::size_t> seen;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    auto key = std::make_tuple(rs[i].instance_id, rs[i].model, rs[i].decode_index);
    auto [it, inserted] = seen.emplace(key, lines[i]);
    if (!inserted) {
      throw ValidationError("core", std::string(origin) + ": record at line " + std::to_string(lines[i]) +
                                        ": duplicate (instance_id, model, decode_index), first seen at line " +
                                        std::to_string(it->second));
    }
  }
}

}  // namespace

const std::vector<InstructionInstance>& Dataset::instances() const {
  return view<InstructionInstance>(*this, "an instruction dataset");
}
const std::vector<ComparisonRecord>& Dataset::comparisons() const {
  return view<ComparisonRecord>(*this, "a comparison dataset");
}
const std::vector<ResponseRecord>& Dataset::responses() const {
  return view<ResponseRecord>(*this, "a response set");
}

fs::path meta_path(const fs::path& path) {
  fs::path p = path;
  p += ".meta.json";
  return p;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("core", "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("core", "read failed for '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("core", "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("core", "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("core", "cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string dump_pretty(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::strict) + "\n"; }

void write_meta(const fs::path& artifact, const json& meta) { write_file_atomic(meta_path(artifact), dump_pretty(meta)); }

Dataset parse_dataset(std::string_view content, DatasetKind kind, std::string_view origin) {
  // Collect (line number, parsed json) items from either layout.
  std::vector<std::pair<std::size_t, json>> items;
  const std::string trimmed = text::trim(content);
  try {
    if (!trimmed.empty() && trimmed.front() == '[') {
      json arr = json::parse(trimmed);
      std::size_t k = 0;
      for (auto& e : arr) items.emplace_back(++k, std::move(e));
    } else {
      std::size_t line_no = 0;
      std::size_t pos = 0;
      while (pos <= content.size()) {
        std::size_t nl = content.find('\n', pos);
        if (nl == std::string_view::npos) nl = content.size();
        ++line_no;
        std::string_view line = content.substr(pos, nl - pos);
        if (!text::trim(line).empty()) {
          try {
            items.emplace_back(line_no, json::parse(line));
          } catch (const json::parse_error& e) {
            throw SchemaError("core", std::string(origin) + ": line " + std::to_string(line_no) +
                                          " is not valid JSON: " + e.what());
          }
        }
        pos = nl + 1;
      }
    }
  } catch (const json::parse_error& e) {
    throw SchemaError("core", std::string(origin) + ": not valid JSON: " + e.what());
  }

  Dataset d;
  d.kind = kind;
  std::vector<std::size_t> lines;
  switch (kind) {
    case DatasetKind::instruction_following:
    case DatasetKind::benchmark: {
      std::vector<InstructionInstance> out;
      for (auto& [line, j] : items) {
        try {
          if (kind == DatasetKind::benchmark) {
            for (auto& r : benchmark_from_json(j)) out.push_back(std::move(r));
          } else {
            out.push_back(instance_from_json(j));
          }
        } catch (const ValidationError& e) {
          record_error(origin, line, e);
        } catch (const SchemaError& e) {
          record_error(origin, line, e);
        }
      }
      d.records = std::move(out);
      break;
    }
    case DatasetKind::comparison: {
      std::vector<ComparisonRecord> out;
      for (auto& [line, j] : items) {
        try {
          out.push_back(comparison_from_json(j));
        } catch (const Error& e) {
          record_error(origin, line, e);
        }
      }
      d.records = std::move(out);
      break;
    }
    case DatasetKind::response_set: {
      std::vector<ResponseRecord> out;
      for (auto& [line, j] : items) {
        try {
          out.push_back(response_from_json(j));
          lines.push_back(line);
        } catch (const Error& e) {
          record_error(origin, line, e);
        }
      }
      check_response_uniqueness(out, origin, lines);
      d.records = std::move(out);
      break;
    }
  }
  return d;
}

Dataset load_dataset(const fs::path& path, DatasetKind kind) {
  Dataset d = parse_dataset(read_file(path), kind, path.string());
  const fs::path meta = meta_path(path);
  if (fs::exists(meta)) {
    try {
      d.provenance = json::parse(read_file(meta));
    } catch (const json::parse_error& e) {
      throw SchemaError("core", meta.string() + ": not valid JSON: " + e.what());
    }
  }
  return d;
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out;
  std::visit(
      [&](const auto& records) {
        for (const auto& r : records) {
          validate(r);
          try {
            out += to_json(r).dump(-1, ' ', false, json::error_handler_t::strict);
          } catch (const json::type_error& e) {
            throw ValidationError("core", std::string("record is not valid UTF-8: ") + e.what());
          }
          out += '\n';
        }
      },
      dataset.records);
  return out;
}

void save_dataset(const Dataset& dataset, const fs::path& path) {
  if (dataset.kind == DatasetKind::response_set) {
    std::vector<std::size_t> idx(dataset.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
    check_response_uniqueness(dataset.responses(), path.string(), idx);
  }
  const std::string body = serialize_dataset(dataset);
  try {
    write_file_atomic(path, body);
    if (dataset.provenance.is_object() && !dataset.provenance.empty()) write_meta(path, dataset.provenance);
  } catch (const IoError& e) {
    throw IoError("core", "saving dataset to '" + path.string() + "': " + e.what());
  }
}

}  // namespace ik
