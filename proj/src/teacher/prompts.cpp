#include "instructkit/prompts.hpp"

#include <cctype>
#include <string>

#include "instructkit/text.hpp"

namespace ik::teacher {

namespace {

std::string start_marker(std::string_view noun, std::size_t i) {
  return "[The Start of " + std::string(noun) + " " + std::to_string(i) + "]";
}
std::string end_marker(std::string_view noun, std::size_t i) {
  return "[The End of " + std::string(noun) + " " + std::to_string(i) + "]";
}

// Pulls numbered blocks "[The Start of <noun> i]\n...\n[The End of <noun> i]".
std::vector<std::string> extract_blocks(std::string_view prompt, std::string_view noun) {
  std::vector<std::string> out;
  std::size_t from = 0;
  for (std::size_t i = 1;; ++i) {
    const std::string open = start_marker(noun, i) + "\n";
    const std::string close = "\n" + end_marker(noun, i);
    const auto a = prompt.find(open, from);
    if (a == std::string_view::npos) break;
    const auto body = a + open.size();
    const auto b = prompt.find(close, body);
    if (b == std::string_view::npos) break;
    out.emplace_back(prompt.substr(body, b - body));
    from = b + close.size();
  }
  return out;
}

bool ends_with_label(std::string_view before) {
  std::string tail = text::to_lower_ascii(before.substr(before.size() > 12 ? before.size() - 12 : 0));
  while (!tail.empty() && (tail.back() == ' ' || tail.back() == '#')) tail.pop_back();
  for (std::string_view label : {"assistant", "response", "answer"}) {
    if (tail.size() >= label.size() && tail.compare(tail.size() - label.size(), label.size(), label) == 0) return true;
  }
  return false;
}

struct NumberToken {
  double value;
  int decimals;
};

std::vector<NumberToken> numbers_in_line(std::string_view line) {
  std::vector<NumberToken> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (!std::isdigit(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    int decimals = 0;
    if (i + 1 < line.size() && line[i] == '.' && std::isdigit(static_cast<unsigned char>(line[i + 1]))) {
      ++i;
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
        ++i;
        ++decimals;
      }
    }
    const std::string literal(line.substr(start, i - start));
    // "7/10" is one score
    std::size_t j = i;
    while (j < line.size() && line[j] == ' ') ++j;
    if (j < line.size() && line[j] == '/') {
      ++j;
      while (j < line.size() && line[j] == ' ') ++j;
      if (line.substr(j, 2) == "10" && (j + 2 == line.size() || !std::isdigit(static_cast<unsigned char>(line[j + 2])))) {
        i = j + 2;
      }
    }
    if (ends_with_label(line.substr(0, start))) continue;
    out.push_back({std::stod(literal), decimals});
  }
  return out;
}

}  // namespace

std::string render_rating_prompt(std::string_view prompt, const std::vector<std::string>& responses, bool strict) {
  const std::size_t k = responses.size();
  std::string out;
  out += "[Prompt]\n";
  out += prompt;
  out += "\n\n";
  for (std::size_t i = 0; i < k; ++i) {
    out += start_marker("Response", i + 1) + "\n" + responses[i] + "\n" + end_marker("Response", i + 1) + "\n\n";
  }
  out += "[System]\n";
  out += "We would like to request your feedback on the quality of " + std::to_string(k) +
         (k == 1 ? " response" : " responses") + " to the prompt displayed above.\n";
  out += "Please rate each response on a scale of 1 to 10, where a higher score indicates better overall "
         "performance. Output the scores as a comma-separated list of " +
         std::to_string(k) + (k == 1 ? " number" : " numbers") +
         " on the first line, in the order the responses appear. In the subsequent lines, briefly explain your "
         "rating.";
  if (strict) {
    out += "\n\nIMPORTANT: Your reply must start with a single line containing exactly " + std::to_string(k) +
           (k == 1 ? " number" : " numbers") + " between 1 and 10, separated by commas, and nothing else.";
  }
  return out;
}

std::string render_translation_prompt(std::string_view text) {
  return std::string(kTranslationWrapper) + "\n\n" + std::string(text);
}

std::string render_judge_prompt(std::string_view question, std::string_view answer_1, std::string_view answer_2,
                                bool strict) {
  std::string out;
  out += "[Question]\n";
  out += question;
  out += "\n\n";
  out += start_marker("Assistant", 1) + "\n" + std::string(answer_1) + "\n" + end_marker("Assistant", 1) + "\n\n";
  out += start_marker("Assistant", 2) + "\n" + std::string(answer_2) + "\n" + end_marker("Assistant", 2) + "\n\n";
  out += "[System]\n";
  out += "We would like to request your feedback on the performance of two AI assistants in response to the user "
         "question displayed above.\n"
         "Please rate the helpfulness, relevance, accuracy, and level of detail of their responses. Each assistant "
         "receives an overall score on a scale of 1 to 10, where a higher score indicates better overall "
         "performance.\n"
         "Please first output a single line containing only two values indicating the scores for Assistant 1 and 2, "
         "respectively. The two scores are separated by a space. In the subsequent line, please provide a "
         "comprehensive explanation of your evaluation, avoiding any potential bias and ensuring that the order in "
         "which the responses were presented does not affect your judgment.";
  if (strict) {
    out += "\n\nIMPORTANT: Your reply must start with a single line containing exactly two numbers between 1 and "
           "10 separated by a space, and nothing else on that line.";
  }
  return out;
}

std::optional<std::vector<std::string>> rating_candidates(std::string_view prompt) {
  if (prompt.rfind("[Prompt]\n", 0) != 0) return std::nullopt;
  auto blocks = extract_blocks(prompt, "Response");
  if (blocks.empty()) return std::nullopt;
  return blocks;
}

std::optional<std::vector<std::string>> judge_answers(std::string_view prompt) {
  if (prompt.rfind("[Question]\n", 0) != 0) return std::nullopt;
  auto blocks = extract_blocks(prompt, "Assistant");
  if (blocks.size() != 2) return std::nullopt;
  return blocks;
}

std::optional<std::string> translation_source(std::string_view prompt) {
  const std::string head = std::string(kTranslationWrapper) + "\n\n";
  if (prompt.rfind(head, 0) != 0) return std::nullopt;
  return std::string(prompt.substr(head.size()));
}

ScoreParse parse_scores(std::string_view reply, std::size_t k) {
  ScoreParse result;
  if (k == 0) {
    result.reason = "no scores requested";
    return result;
  }
  std::size_t pos = 0;
  while (pos <= reply.size()) {
    std::size_t nl = reply.find('\n', pos);
    if (nl == std::string_view::npos) nl = reply.size();
    const auto numbers = numbers_in_line(reply.substr(pos, nl - pos));
    if (numbers.size() == k) {
      std::vector<double> scores;
      for (const auto& n : numbers) {
        if (n.decimals > 1 || n.value < 1.0 || n.value > 10.0) {
          result.reason = "score " + std::to_string(n.value) + " is not an integer or one-decimal value in [1,10]";
          return result;
        }
        scores.push_back(n.value);
      }
      result.scores = std::move(scores);
      return result;
    }
    pos = nl + 1;
  }
  result.reason = "no line contains exactly " + std::to_string(k) + " scores";
  return result;
}

}  // namespace ik::teacher
