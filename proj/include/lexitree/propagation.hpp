#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "registry.hpp"

namespace lexitree {

struct EffectiveEntry {
  Property property;
  std::size_t depth;  // depth of the contributing node, 0 = root

  friend bool operator==(const EffectiveEntry&, const EffectiveEntry&) = default;
};

// All properties holding at one node along one root-to-node path.
//
// Entries are ordered by the moment they entered the set: ancestors first,
// document order within a node. An overwrite removes the previous entry and
// appends the new one; restating an identical value is a no-op.
class EffectiveFeatureSet {
 public:
  EffectiveFeatureSet() = default;
  explicit EffectiveFeatureSet(std::vector<EffectiveEntry> entries) : entries_(std::move(entries)) {}

  const std::vector<EffectiveEntry>& entries() const& noexcept { return entries_; }
  std::vector<EffectiveEntry> entries() && { return std::move(entries_); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::vector<Property> properties() const {
    std::vector<Property> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.property);
    return out;
  }

  // Values of `f` in set order.
  std::vector<FeatureValue> values(const FeatureName& f) const {
    std::vector<FeatureValue> out;
    for (const auto& e : entries_)
      if (e.property.feature == f) out.push_back(e.property.value);
    return out;
  }

  const EffectiveEntry* find(const FeatureName& f) const& {
    for (const auto& e : entries_)
      if (e.property.feature == f) return &e;
    return nullptr;
  }
  const EffectiveEntry* find(const FeatureName& f) const&& = delete;

  bool contains(const FeatureName& f) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const EffectiveEntry& e) { return e.property.feature == f; });
  }

  friend bool operator==(const EffectiveFeatureSet&, const EffectiveFeatureSet&) = default;

 private:
  std::vector<EffectiveEntry> entries_;
};

namespace detail {

// Applies the propagation rules one node at a time. Holds only the
// propagating (cumulative and overwriting) state; local properties are
// emitted on the node being finished.
class Propagator {
 public:
  enum class OnConflict { Throw, KeepFirst };

  Propagator(const FeatureClassRegistry& registry, OnConflict on_conflict)
      : registry_(&registry), on_conflict_(on_conflict) {}

  // Processes `props` of the node at `depth`. Local properties are kept only
  // when `endpoint` is set.
  void step(const Properties& props, std::size_t depth, bool endpoint) {
    std::vector<const Property*> seen_overwriting;
    for (const Property& p : props) {
      switch (registry_->classify(p.feature)) {
        case FeatureClass::Local:
          if (endpoint) entries_.push_back({p, depth});
          break;
        case FeatureClass::Cumulative:
          if (std::none_of(entries_.begin(), entries_.end(),
                           [&](const EffectiveEntry& e) { return equivalent(e.property, p); }))
            entries_.push_back({p, depth});
          break;
        case FeatureClass::Overwriting: {
          auto twin = std::find_if(seen_overwriting.begin(), seen_overwriting.end(),
                                   [&](const Property* q) { return q->feature == p.feature; });
          if (twin != seen_overwriting.end()) {
            if (on_conflict_ == OnConflict::Throw)
              throw OverwriteConflict(p.feature.str(), render_value((*twin)->value), render_value(p.value));
            break;
          }
          seen_overwriting.push_back(&p);
          overwrite(p, depth);
          break;
        }
      }
    }
  }

  const std::vector<EffectiveEntry>& entries() const noexcept { return entries_; }

  const FeatureValue* current(const FeatureName& f) const {
    for (const auto& e : entries_)
      if (e.property.feature == f) return &e.property.value;
    return nullptr;
  }

 private:
  void overwrite(const Property& p, std::size_t depth) {
    auto prior = std::find_if(entries_.begin(), entries_.end(),
                              [&](const EffectiveEntry& e) { return e.property.feature == p.feature; });
    if (prior != entries_.end()) {
      if (equivalent(prior->property, p)) return;
      entries_.erase(prior);
    }
    entries_.push_back({p, depth});

    for (const auto& rule : registry_->rules()) {
      if (rule.governor != p.feature) continue;
      if (p.value.is_atomic() && text::same_text(p.value.atomic(), rule.required_value)) continue;
      std::erase_if(entries_, [&](const EffectiveEntry& e) {
        return e.property.feature == rule.dependent && e.depth < depth;
      });
    }
  }

  const FeatureClassRegistry* registry_;
  OnConflict on_conflict_;
  std::vector<EffectiveEntry> entries_;
};

}  // namespace detail

// Returns `node` with `p` appended. An overwriting feature may appear only
// once per node.
inline Node attach_property(Node node, Property p, const FeatureClassRegistry& registry) {
  if (registry.classify(p.feature) == FeatureClass::Overwriting) {
    for (const auto& q : node.properties)
      if (q.feature == p.feature)
        throw OverwriteConflict(p.feature.str(), render_value(q.value), render_value(p.value));
  }
  node.properties.push_back(std::move(p));
  return node;
}

inline EffectiveFeatureSet effective_set(const Node& root, const NodePath& path,
                                         const FeatureClassRegistry& registry) {
  auto nodes = resolve(root, path);
  detail::Propagator propagator(registry, detail::Propagator::OnConflict::Throw);
  for (std::size_t depth = 0; depth < nodes.size(); ++depth) {
    if (!nodes[depth]->alt_groups.empty()) throw UnexpandedAlternatives();
    propagator.step(nodes[depth]->properties, depth, depth + 1 == nodes.size());
  }
  return EffectiveFeatureSet(propagator.entries());
}

struct Violation {
  enum class Kind { OverwriteConflict, DependencyViolation };

  Kind kind;
  NodePath path;
  FeatureName feature;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string_view to_string(Violation::Kind k) {
  return k == Violation::Kind::OverwriteConflict ? "OverwriteConflict" : "DependencyViolation";
}

namespace detail {

inline void overwrite_conflicts(const Properties& props, const FeatureClassRegistry& registry,
                                const NodePath& path, std::vector<Violation>& out) {
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (registry.classify(props[i].feature) != FeatureClass::Overwriting) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (props[j].feature != props[i].feature) continue;
      out.push_back({Violation::Kind::OverwriteConflict, path, props[i].feature,
                     "'" + props[i].feature.str() + "' holds both '" + render_value(props[j].value) +
                         "' and '" + render_value(props[i].value) + "'"});
      break;
    }
  }
}

}  // namespace detail

// Reports every node holding two values for one overwriting feature and
// every locally attached dependent whose governor's effective value at that
// node differs from the required one. An absent governor is not a violation.
// For nodes with alternatives, each alternative is checked together with
// the node's common properties.
inline std::vector<Violation> check_consistency(const Node& root, const FeatureClassRegistry& registry) {
  using detail::Propagator;
  std::vector<Violation> out;

  auto check_dependents = [&](const Properties& props, const Propagator& state, const NodePath& path) {
    for (const auto& p : props) {
      for (const auto& rule : registry.rules()) {
        if (rule.dependent != p.feature) continue;
        const FeatureValue* governor = state.current(rule.governor);
        if (!governor) continue;
        if (governor->is_atomic() && text::same_text(governor->atomic(), rule.required_value)) continue;
        out.push_back({Violation::Kind::DependencyViolation, path, p.feature,
                       "'" + p.feature.str() + "' requires " + rule.governor.str() + "=" +
                           rule.required_value + " but " + rule.governor.str() + " is '" +
                           render_value(*governor) + "'"});
      }
    }
  };

  std::function<void(const Node&, const NodePath&, const Propagator&)> visit =
      [&](const Node& node, const NodePath& path, const Propagator& inherited) {
        detail::overwrite_conflicts(node.properties, registry, path, out);
        Propagator state = inherited;
        state.step(node.properties, path.depth(), false);
        check_dependents(node.properties, state, path);

        for (const auto& group : node.alt_groups) {
          for (const auto& alt : group.alternatives) {
            Properties combined = alt;
            combined.insert(combined.end(), node.properties.begin(), node.properties.end());
            detail::overwrite_conflicts(combined, registry, path, out);
            Propagator alt_state = inherited;
            alt_state.step(combined, path.depth(), false);
            check_dependents(alt, alt_state, path);
          }
        }

        for (std::size_t i = 0; i < node.children.size(); ++i) visit(node.children[i], path.child(i), state);
      };

  visit(root, NodePath{}, Propagator(registry, Propagator::OnConflict::KeepFirst));

  // Alternatives re-report conflicts among common properties; keep one each.
  std::vector<Violation> unique;
  for (auto& v : out)
    if (std::find(unique.begin(), unique.end(), v) == unique.end()) unique.push_back(std::move(v));
  return unique;
}

// Root-to-leaf paths in document order.
inline std::vector<NodePath> enumerate_traversals(const Node& root) {
  if (has_alternatives(root)) throw UnexpandedAlternatives();
  std::vector<NodePath> out;
  std::function<void(const Node&, const NodePath&)> visit = [&](const Node& n, const NodePath& p) {
    if (n.is_leaf()) {
      out.push_back(p);
      return;
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) visit(n.children[i], p.child(i));
  };
  visit(root, NodePath{});
  return out;
}

// One path per node, preorder.
inline std::vector<NodePath> partial_traversals(const Node& root) {
  if (has_alternatives(root)) throw UnexpandedAlternatives();
  std::vector<NodePath> out;
  std::function<void(const Node&, const NodePath&)> visit = [&](const Node& n, const NodePath& p) {
    out.push_back(p);
    for (std::size_t i = 0; i < n.children.size(); ++i) visit(n.children[i], p.child(i));
  };
  visit(root, NodePath{});
  return out;
}

}  // namespace lexitree
