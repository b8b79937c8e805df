#pragma once

// Reference evaluator for effective feature sets, written against the
// propagation rules directly and sharing no code with the engine. It keeps
// an append-only event log with tombstones; the surviving events, in log
// order, are the effective set.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <lexitree/model.hpp>

namespace lexitree::testing {

struct OracleRules {
  std::map<std::string, char> classes;  // 'C', 'O' or 'L'
  char default_class = 'L';
  std::vector<std::tuple<std::string, std::string, std::string>> deps;  // dependent, governor, value
};

struct OracleEntry {
  Property property;
  std::size_t depth;
};

namespace oracle_detail {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string key(const Property& p);

inline std::string value_key(const FeatureValue& v) {
  if (v.is_atomic()) return "A{" + strip(v.atomic()) + "}";
  std::string k = "C{";
  for (const auto& q : v.composite()) k += key(q) + ";";
  return k + "}";
}

inline std::string key(const Property& p) {
  std::string k = p.feature.str() + "=" + value_key(p.value) + "@";
  for (const auto& a : p.attrs) k += a.name + "\x1f" + a.value + "\x1e";
  return k;
}

}  // namespace oracle_detail

// nullopt when a node on the path holds one overwriting feature twice.
inline std::optional<std::vector<OracleEntry>> oracle_effective_set(const Node& root, const NodePath& path,
                                                                    const OracleRules& rules) {
  using oracle_detail::key;
  struct Event {
    Property property;
    std::size_t depth;
    bool alive;
  };
  std::vector<Event> log;

  auto class_of = [&](const std::string& f) {
    auto it = rules.classes.find(f);
    return it == rules.classes.end() ? rules.default_class : it->second;
  };

  std::vector<const Node*> nodes{&root};
  for (std::size_t i : path.indices()) nodes.push_back(&nodes.back()->children.at(i));

  for (std::size_t depth = 0; depth < nodes.size(); ++depth) {
    bool endpoint = depth + 1 == nodes.size();
    std::vector<std::string> overwritten_here;
    for (const Property& p : nodes[depth]->properties) {
      const std::string f = p.feature.str();
      char c = class_of(f);
      if (c == 'L') {
        if (endpoint) log.push_back({p, depth, true});
        continue;
      }
      if (c == 'C') {
        bool duplicate = false;
        for (const auto& ev : log)
          if (ev.alive && key(ev.property) == key(p)) duplicate = true;
        if (!duplicate) log.push_back({p, depth, true});
        continue;
      }
      for (const auto& seen : overwritten_here)
        if (seen == f) return std::nullopt;
      overwritten_here.push_back(f);

      Event* current = nullptr;
      for (auto& ev : log)
        if (ev.alive && ev.property.feature.str() == f) current = &ev;
      if (current && key(current->property) == key(p)) continue;
      if (current) current->alive = false;
      log.push_back({p, depth, true});

      for (const auto& [dependent, governor, required] : rules.deps) {
        if (governor != f) continue;
        if (oracle_detail::value_key(p.value) == "A{" + required + "}") continue;
        for (auto& ev : log)
          if (ev.alive && ev.property.feature.str() == dependent && ev.depth < depth) ev.alive = false;
      }
    }
  }

  std::vector<OracleEntry> out;
  for (const auto& ev : log)
    if (ev.alive) out.push_back({ev.property, ev.depth});
  return out;
}

}  // namespace lexitree::testing
