#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace lexitree {

enum class FeatureClass { Cumulative, Overwriting, Local };

inline std::string_view to_string(FeatureClass c) {
  switch (c) {
    case FeatureClass::Cumulative: return "cum";
    case FeatureClass::Overwriting: return "over";
    case FeatureClass::Local: return "loc";
  }
  return "?";
}

inline std::optional<FeatureClass> parse_feature_class(std::string_view s) {
  if (s == "cum") return FeatureClass::Cumulative;
  if (s == "over") return FeatureClass::Overwriting;
  if (s == "loc") return FeatureClass::Local;
  return std::nullopt;
}

// `dependent` is licensed only while `governor` carries `required_value`.
struct DependencyRule {
  FeatureName dependent;
  FeatureName governor;
  std::string required_value;

  friend bool operator==(const DependencyRule&, const DependencyRule&) = default;
};

class FeatureClassRegistry {
 public:
  explicit FeatureClassRegistry(FeatureClass default_class = FeatureClass::Local)
      : default_class_(default_class) {}

  FeatureClass classify(const FeatureName& f) const {
    auto it = classes_.find(f);
    return it == classes_.end() ? default_class_ : it->second;
  }

  bool is_registered(const FeatureName& f) const { return classes_.count(f) != 0; }

  // Reclassifying a governor away from Overwriting is rejected.
  FeatureClassRegistry& set_class(const FeatureName& f, FeatureClass c) {
    if (c != FeatureClass::Overwriting)
      for (const auto& r : rules_)
        if (r.governor == f)
          throw InvalidRegistry("'" + f.str() + "' governs a dependency rule and must stay overwriting");
    classes_.insert_or_assign(f, c);
    return *this;
  }

  FeatureClassRegistry& add_rule(DependencyRule rule) {
    if (classify(rule.governor) != FeatureClass::Overwriting)
      throw InvalidRegistry("dependency governor '" + rule.governor.str() + "' is not overwriting");
    if (rule.dependent == rule.governor)
      throw InvalidRegistry("feature '" + rule.dependent.str() + "' cannot depend on itself");
    rules_.push_back(std::move(rule));
    return *this;
  }

  const std::map<FeatureName, FeatureClass>& classes() const noexcept { return classes_; }
  const std::vector<DependencyRule>& rules() const noexcept { return rules_; }
  FeatureClass default_class() const noexcept { return default_class_; }

  // Features of `used` that fall back to the default class.
  std::vector<FeatureName> unregistered(const std::set<FeatureName>& used) const {
    std::vector<FeatureName> out;
    for (const auto& f : used)
      if (!is_registered(f)) out.push_back(f);
    return out;
  }

  friend bool operator==(const FeatureClassRegistry&, const FeatureClassRegistry&) = default;

 private:
  std::map<FeatureName, FeatureClass> classes_;
  std::vector<DependencyRule> rules_;
  FeatureClass default_class_;
};

inline FeatureClass classify(const FeatureClassRegistry& registry, const FeatureName& f) {
  return registry.classify(f);
}

}  // namespace lexitree
