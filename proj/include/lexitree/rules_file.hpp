#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "registry.hpp"

namespace lexitree {

class RulesFileError : public Error {
 public:
  RulesFileError(std::size_t line, const std::string& message)
      : Error("rules line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The shipped rules; rules/default.rules carries the same text.
inline constexpr std::string_view kDefaultRules =
    "# Default feature classes for dictionary trees.\n"
    "over orth\n"
    "over etym\n"
    "over pos\n"
    "over gen\n"
    "over pron\n"
    "cum def\n"
    "cum domain\n"
    "cum time\n"
    "loc ex\n"
    "loc xr\n"
    "loc brack\n"
    "\n"
    "# gen is licensed only for nouns\n"
    "dep gen pos noun\n";

namespace detail {

inline std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

inline FeatureName rules_feature(std::size_t line, const std::string& word) {
  if (!FeatureName::is_valid(word)) throw RulesFileError(line, "invalid feature name '" + word + "'");
  return FeatureName(word);
}

}  // namespace detail

// Directives, one per line:
//   class <feature> <cum|over|loc>
//   <cum|over|loc> <feature>
//   dep <dependent> <governor> <required-value>
// '#' starts a comment running to the end of the line. A dep governor must already be declared over.
inline FeatureClassRegistry parse_rules(std::string_view source) {
  FeatureClassRegistry registry(FeatureClass::Local);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    line = line.substr(0, line.find('#'));
    auto words = detail::split_words(line);
    if (words.empty()) continue;

    const std::string& verb = words[0];
    if (verb == "class") {
      if (words.size() != 3) throw RulesFileError(line_no, "expected: class <feature> <cum|over|loc>");
      auto c = parse_feature_class(words[2]);
      if (!c) throw RulesFileError(line_no, "unknown feature class '" + words[2] + "'");
      try {
        registry.set_class(detail::rules_feature(line_no, words[1]), *c);
      } catch (const InvalidRegistry& e) {
        throw RulesFileError(line_no, e.what());
      }
    } else if (auto c = parse_feature_class(verb)) {
      if (words.size() != 2) throw RulesFileError(line_no, "expected: " + verb + " <feature>");
      try {
        registry.set_class(detail::rules_feature(line_no, words[1]), *c);
      } catch (const InvalidRegistry& e) {
        throw RulesFileError(line_no, e.what());
      }
    } else if (verb == "dep") {
      if (words.size() != 4) throw RulesFileError(line_no, "expected: dep <dependent> <governor> <value>");
      FeatureName dependent = detail::rules_feature(line_no, words[1]);
      FeatureName governor = detail::rules_feature(line_no, words[2]);
      if (!registry.is_registered(governor) ||
          registry.classify(governor) != FeatureClass::Overwriting)
        throw RulesFileError(line_no, "governor '" + governor.str() + "' must be declared over earlier");
      try {
        registry.add_rule({dependent, governor, words[3]});
      } catch (const InvalidRegistry& e) {
        throw RulesFileError(line_no, e.what());
      }
    } else {
      throw RulesFileError(line_no, "unknown directive '" + verb + "'");
    }
  }
  return registry;
}

inline FeatureClassRegistry default_registry() { return parse_rules(kDefaultRules); }

inline FeatureClassRegistry load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read rules file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str());
}

// Writes a registry back in rules-file form.
inline std::string format_rules(const FeatureClassRegistry& registry) {
  std::string out;
  for (const auto& [f, c] : registry.classes()) out += std::string(to_string(c)) + " " + f.str() + "\n";
  for (const auto& r : registry.rules())
    out += "dep " + r.dependent.str() + " " + r.governor.str() + " " + r.required_value + "\n";
  return out;
}

}  // namespace lexitree
