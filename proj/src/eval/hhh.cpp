#include <map>
#include <sstream>

#include "instructkit/error.hpp"
#include "instructkit/eval.hpp"

namespace ik::eval {

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::helpfulness: return "helpfulness";
    case Criterion::honesty: return "honesty";
    case Criterion::harmlessness: return "harmlessness";
  }
  return "?";
}

const char* to_string(Option o) {
  switch (o) {
    case Option::a_strong: return "a-strong";
    case Option::a_weak: return "a-weak";
    case Option::tie: return "tie";
    case Option::b_weak: return "b-weak";
    case Option::b_strong: return "b-strong";
  }
  return "?";
}

Criterion criterion_from_string(std::string_view s) {
  for (auto c : kCriteria) {
    if (s == to_string(c)) return c;
  }
  throw ValidationError("eval", "unknown criterion '" + std::string(s) + "'");
}

Option option_from_string(std::string_view s) {
  for (auto o : kOptions) {
    if (s == to_string(o)) return o;
  }
  throw ValidationError("eval", "unknown option '" + std::string(s) + "'");
}

Option flip(Option o) {
  switch (o) {
    case Option::a_strong: return Option::b_strong;
    case Option::a_weak: return Option::b_weak;
    case Option::b_weak: return Option::a_weak;
    case Option::b_strong: return Option::a_strong;
    case Option::tie: return Option::tie;
  }
  return o;
}

json to_json(const HhhVote& v) {
  json choices = json::object();
  for (const auto& [c, o] : v.choices) choices[to_string(c)] = to_string(o);
  return {{"task_id", v.task_id}, {"annotator", v.annotator}, {"model_a", v.model_a},
          {"model_b", v.model_b}, {"choices", choices},      {"sequence", v.sequence}, {"timestamp_ms", v.timestamp_ms}};
}

HhhVote vote_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("eval", "vote must be a JSON object");
  HhhVote v;
  try {
    v.task_id = j.at("task_id").get<std::string>();
    v.annotator = j.value("annotator", "");
    v.model_a = j.value("model_a", "");
    v.model_b = j.value("model_b", "");
    v.sequence = j.value("sequence", std::int64_t{0});
    v.timestamp_ms = j.value("timestamp_ms", std::int64_t{0});
    const auto& ch = j.at("choices");
    if (!ch.is_object()) throw ValidationError("eval", "choices must be an object");
    for (const auto& [k, val] : ch.items()) {
      if (!val.is_string()) throw ValidationError("eval", "choice for " + k + " must be a string");
      v.choices[criterion_from_string(k)] = option_from_string(val.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw SchemaError("eval", std::string("bad vote: ") + e.what());
  }
  return v;
}

std::vector<HhhVote> load_votes(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<HhhVote> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(vote_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError("eval", path.string() + ": line " + std::to_string(n) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("eval", path.string() + ": line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

namespace {

double frac(std::size_t k, std::size_t n) { return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0; }

}  // namespace

double HhhTally::a_fraction() const { return frac(a_wins, total()); }
double HhhTally::tie_fraction() const { return frac(ties, total()); }
double HhhTally::b_fraction() const { return frac(b_wins, total()); }

std::vector<HhhTally> tally_hhh(const std::vector<HhhVote>& votes) {
  std::map<Criterion, HhhTally> by;
  for (const auto& v : votes) {
    for (const auto& [c, o] : v.choices) {
      auto [it, fresh] = by.try_emplace(c);
      auto& t = it->second;
      if (fresh) {
        t.criterion = c;
        t.model_a = v.model_a;
        t.model_b = v.model_b;
      } else if (t.model_a != v.model_a || t.model_b != v.model_b) {
        throw ValidationError("eval", "votes mix model pairs (" + t.model_a + ", " + t.model_b + ") and (" +
                                          v.model_a + ", " + v.model_b + ")");
      }
      switch (o) {
        case Option::a_strong:
        case Option::a_weak: ++t.a_wins; break;
        case Option::tie: ++t.ties; break;
        case Option::b_weak:
        case Option::b_strong: ++t.b_wins; break;
      }
    }
  }
  std::vector<HhhTally> out;
  for (auto c : kCriteria) {
    if (auto it = by.find(c); it != by.end()) out.push_back(it->second);
  }
  return out;
}

json to_json(const HhhTally& t) {
  return {{"criterion", to_string(t.criterion)},
          {"model_a", t.model_a},
          {"model_b", t.model_b},
          {"a_wins", t.a_wins},
          {"ties", t.ties},
          {"b_wins", t.b_wins},
          {"votes", t.total()},
          {"a_fraction", t.a_fraction()},
          {"tie_fraction", t.tie_fraction()},
          {"b_fraction", t.b_fraction()}};
}

}  // namespace ik::eval
