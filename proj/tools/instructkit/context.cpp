#include "context.hpp"

#include <cstdlib>
#include <iostream>

#include "instructkit/error.hpp"
#include "instructkit/hashing.hpp"
#include "instructkit/prompts.hpp"

namespace ik::cli {

namespace {

const char* env_value(const char* name) {
  if (!name) return nullptr;
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

std::int64_t parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("cli", key + ": expected an integer, got '" + s + "'");
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    auto v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("cli", key + ": expected a number, got '" + s + "'");
}

}  // namespace

std::string Context::setting(const std::string& key, const std::optional<std::string>& flag, const char* env,
                             std::string fallback, bool secret) {
  std::string value = std::move(fallback), source = "default";
  if (flag) {
    value = *flag;
    source = "flag";
  } else if (const char* e = env_value(env)) {
    value = e;
    source = "env";
  } else if (!secret && file_.contains(key)) {
    value = file_[key].is_string() ? file_[key].get<std::string>() : file_[key].dump();
    source = "config";
  }
  sources_[key] = source;
  if (!secret) resolved_[key] = value;
  return value;
}

std::int64_t Context::setting(const std::string& key, const std::optional<std::int64_t>& flag, const char* env,
                              std::int64_t fallback) {
  std::int64_t value = fallback;
  std::string source = "default";
  if (flag) {
    value = *flag;
    source = "flag";
  } else if (const char* e = env_value(env)) {
    value = parse_int(e, key);
    source = "env";
  } else if (file_.contains(key)) {
    if (!file_[key].is_number_integer()) throw ValidationError("cli", "config " + key + ": expected an integer");
    value = file_[key].get<std::int64_t>();
    source = "config";
  }
  sources_[key] = source;
  resolved_[key] = value;
  return value;
}

void Context::resolve() {
  std::string config_path = flags.config.value_or("");
  if (config_path.empty()) {
    if (const char* e = env_value("INSTRUCTKIT_CONFIG")) config_path = e;
  }
  if (!config_path.empty()) {
    try {
      file_ = json::parse(read_file(config_path));
    } catch (const json::parse_error& e) {
      throw SchemaError("cli", config_path + ": config is not valid JSON: " + e.what());
    }
    if (!file_.is_object()) throw SchemaError("cli", config_path + ": config must be a JSON object");
  }

  backend_ = setting("backend", flags.backend, "INSTRUCTKIT_BACKEND", "mock");
  if (backend_ != "mock" && backend_ != "live" && backend_ != "replay") {
    throw ValidationError("cli", "backend must be mock, live or replay, got '" + backend_ + "'");
  }
  auto cache = setting("cache", flags.cache, "INSTRUCTKIT_CACHE", "");
  if (!cache.empty()) cache_ = cache;

  std::optional<std::int64_t> seed_flag, workers_flag, max_tokens_flag;
  if (flags.seed) seed_flag = static_cast<std::int64_t>(*flags.seed);
  if (flags.workers) workers_flag = static_cast<std::int64_t>(*flags.workers);
  seed_ = static_cast<std::uint64_t>(setting("seed", seed_flag, "INSTRUCTKIT_SEED", 0));
  auto workers = setting("workers", workers_flag, "INSTRUCTKIT_WORKERS", 4);
  if (workers < 1) throw ValidationError("cli", "workers must be >= 1");
  workers_ = static_cast<std::size_t>(workers);

  decoding_.model = setting("model", flags.model, "INSTRUCTKIT_MODEL", decoding_.model);
  auto real = [&](const std::string& key, const std::optional<double>& flag, const char* env, double fallback) {
    double v = fallback;
    std::string source = "default";
    if (flag) {
      v = *flag;
      source = "flag";
    } else if (const char* e = env_value(env)) {
      v = parse_double(e, key);
      source = "env";
    } else if (file_.contains(key)) {
      if (!file_[key].is_number()) throw ValidationError("cli", "config " + key + ": expected a number");
      v = file_[key].get<double>();
      source = "config";
    }
    sources_[key] = source;
    resolved_[key] = v;
    return v;
  };
  decoding_.temperature = real("temperature", flags.temperature, "INSTRUCTKIT_TEMPERATURE", decoding_.temperature);
  decoding_.top_p = real("top_p", flags.top_p, "INSTRUCTKIT_TOP_P", decoding_.top_p);
  decoding_.max_tokens = setting("max_tokens", flags.max_tokens, "INSTRUCTKIT_MAX_TOKENS", decoding_.max_tokens);
  teacher::validate(decoding_);
  teacher_url_ = setting("teacher_url", flags.teacher_url, "INSTRUCTKIT_TEACHER_URL", "");
}

std::shared_ptr<teacher::Backend> Context::make_backend() {
  std::shared_ptr<teacher::Backend> upstream;
  if (backend_ == "mock") {
    upstream = std::make_shared<teacher::MockBackend>();
  } else if (backend_ == "live") {
    auto http = teacher::HttpConfig::from_env();
    if (!teacher_url_.empty()) http.url = teacher_url_;
    if (http.url.empty()) {
      throw ValidationError("cli", "live backend needs a teacher URL (--teacher-url or INSTRUCTKIT_TEACHER_URL)");
    }
    upstream = std::make_shared<teacher::HttpBackend>(http);
  }
  if (!cache_) {
    if (backend_ == "replay") throw ValidationError("cli", "replay backend needs --cache");
    return upstream;
  }
  return std::make_shared<teacher::ReplayBackend>(std::make_shared<teacher::ResponseCache>(*cache_), upstream);
}

teacher::WorkflowOptions Context::workflow_options(const std::optional<std::string>& templates_path) {
  teacher::WorkflowOptions o;
  if (templates_path) {
    try {
      o.templates = teacher::TemplateSet::from_json(json::parse(read_file(*templates_path)));
    } catch (const json::parse_error& e) {
      throw SchemaError("cli", *templates_path + ": templates are not valid JSON: " + e.what());
    }
  }
  o.workers = workers_;
  return o;
}

json Context::run_meta(const std::string& command, const std::map<std::string, fs::path>& inputs,
                       const teacher::TemplateSet* templates) const {
  json in = json::object();
  for (const auto& [role, path] : inputs) {
    in[role] = {{"path", path.string()}, {"sha256", sha256_hex(read_file(path))}};
  }
  json run = {{"command", command},
              {"tool_version", kToolVersion},
              {"config", resolved_},
              {"config_sources", sources_},
              {"inputs", in},
              {"prompt_versions",
               {{"rating", teacher::kRatingPromptVersion},
                {"judge", teacher::kJudgePromptVersion},
                {"translation", teacher::kTranslationPromptVersion}}}};
  if (templates) {
    run["templates"] = {{"version", templates->version()},
                        {"prompt_input_sha256", sha256_hex(templates->prompt_input)},
                        {"prompt_no_input_sha256", sha256_hex(templates->prompt_no_input)}};
  }
  return run;
}

Dataset load_instances(const fs::path& path, const std::string& kind) {
  if (kind == "instruction") return load_dataset(path, DatasetKind::instruction_following);
  if (kind == "benchmark") return load_dataset(path, DatasetKind::benchmark);
  throw ValidationError("cli", "--kind must be instruction or benchmark, got '" + kind + "'");
}

AnswerSet load_answers(const fs::path& path, const std::string& name) {
  const std::string content = read_file(path);
  bool responses = false;
  {
    const auto start = content.find_first_not_of(" \t\r\n[");
    if (start != std::string::npos) {
      const auto end = content.find('\n', start);
      try {
        auto first = json::parse(content.substr(start, end == std::string::npos ? std::string::npos : end - start));
        responses = first.is_object() && first.contains("instance_id");
      } catch (const json::exception&) {
        // an array layout or a malformed line; the full parse below reports it
        responses = content.find("\"instance_id\"") != std::string::npos;
      }
    }
  }
  AnswerSet out;
  json provenance = json::object();
  if (fs::exists(meta_path(path))) {
    try {
      provenance = json::parse(read_file(meta_path(path)));
    } catch (const json::exception&) {
    }
  }
  if (responses) {
    out.records = parse_dataset(content, DatasetKind::response_set, path.string()).responses();
  } else {
    auto d = parse_dataset(content, DatasetKind::benchmark, path.string());
    for (const auto& r : d.instances()) {
      if (!r.output) continue;
      out.records.push_back({r.id, "", 0, *r.output, json::object()});
    }
  }
  std::string tag;
  bool common = !out.records.empty();
  for (const auto& r : out.records) {
    if (r.model.empty() || (!tag.empty() && r.model != tag)) common = false;
    if (tag.empty()) tag = r.model;
  }
  if (!name.empty()) out.name = name;
  else if (common) out.name = tag;
  else if (provenance.contains("source_model") && provenance["source_model"].is_string())
    out.name = provenance["source_model"].get<std::string>();
  else out.name = path.stem().string();
  for (auto& r : out.records) {
    if (r.model.empty() || !name.empty()) r.model = out.name;
  }
  return out;
}

std::map<std::string, const ResponseRecord*> one_per_instance(const std::vector<ResponseRecord>& records) {
  std::map<std::string, const ResponseRecord*> m;
  for (const auto& r : records) {
    auto& slot = m[r.instance_id];
    if (!slot || r.decode_index < slot->decode_index) slot = &r;
  }
  return m;
}

void save_with_meta(Dataset dataset, const fs::path& path, json meta) {
  if (dataset.provenance.is_object()) {
    for (auto& [k, v] : dataset.provenance.items()) {
      if (!meta.contains(k)) meta[k] = v;
    }
  }
  dataset.provenance = std::move(meta);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_dataset(dataset, path);
}

void save_json(const fs::path& path, const json& j, const json& meta) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, dump_pretty(j));
  write_meta(path, meta);
}

void save_text(const fs::path& path, const std::string& body, const json& meta) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, body);
  write_meta(path, meta);
}

json failures_json(const std::vector<teacher::Failure>& failures) {
  json arr = json::array();
  for (const auto& f : failures) arr.push_back({{"id", f.id}, {"error", f.message}});
  return arr;
}

int finish(json summary, std::size_t failures) {
  summary["status"] = failures ? "partial" : "ok";
  std::cout << summary.dump() << std::endl;
  return failures ? 2 : 0;
}

}  // namespace ik::cli
