#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "text.hpp"

namespace lexitree {

// A feature token: ASCII letters, digits and hyphens, stored lowercase.
class FeatureName {
 public:
  FeatureName() = delete;

  FeatureName(std::string_view name) : name_(normalize(name)) {}
  FeatureName(const char* name) : FeatureName(std::string_view(name)) {}
  FeatureName(const std::string& name) : FeatureName(std::string_view(name)) {}

  static bool is_valid(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
      return std::isalnum(c) != 0 || c == '-';
    });
  }

  const std::string& str() const noexcept { return name_; }

  friend bool operator==(const FeatureName&, const FeatureName&) = default;
  friend auto operator<=>(const FeatureName&, const FeatureName&) = default;

  friend std::ostream& operator<<(std::ostream& os, const FeatureName& f) { return os << f.name_; }

 private:
  static std::string normalize(std::string_view name) {
    if (!is_valid(name)) throw Error("invalid feature name '" + std::string(name) + "'");
    std::string out(name);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  }

  std::string name_;
};

struct Attribute {
  std::string name;
  std::string value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

using Attributes = std::vector<Attribute>;

struct Property;

// Either atomic text or an ordered list of nested properties.
class FeatureValue {
 public:
  using Composite = std::vector<Property>;

  FeatureValue() : value_(std::string()) {}
  FeatureValue(std::string text) : value_(std::move(text)) {}
  FeatureValue(const char* text) : value_(std::string(text)) {}
  FeatureValue(Composite parts) : value_(std::move(parts)) {}

  bool is_atomic() const noexcept { return std::holds_alternative<std::string>(value_); }
  bool is_composite() const noexcept { return !is_atomic(); }

  const std::string& atomic() const { return std::get<std::string>(value_); }
  const Composite& composite() const { return std::get<Composite>(value_); }

  friend bool operator==(const FeatureValue& a, const FeatureValue& b);

 private:
  std::variant<std::string, Composite> value_;
};

struct Property {
  FeatureName feature;
  FeatureValue value;
  Attributes attrs;

  Property(FeatureName f, FeatureValue v, Attributes a = {})
      : feature(std::move(f)), value(std::move(v)), attrs(std::move(a)) {
    for (std::size_t i = 0; i < attrs.size(); ++i)
      for (std::size_t j = i + 1; j < attrs.size(); ++j)
        if (attrs[i].name == attrs[j].name)
          throw Error("duplicate attribute '" + attrs[i].name + "' on " + feature.str());
  }

  friend bool operator==(const Property&, const Property&) = default;
};

inline bool operator==(const FeatureValue& a, const FeatureValue& b) { return a.value_ == b.value_; }

using Properties = std::vector<Property>;

// Parallel bundles of properties; each alternative is one partition.
struct AltGroup {
  std::vector<Properties> alternatives;

  AltGroup() = default;
  explicit AltGroup(std::vector<Properties> alts) : alternatives(std::move(alts)) {
    if (alternatives.size() < 2) throw Error("an alternative group needs at least two alternatives");
    for (const auto& alt : alternatives)
      if (alt.empty()) throw Error("an alternative must carry at least one property");
  }

  friend bool operator==(const AltGroup&, const AltGroup&) = default;
};

struct Node {
  Properties properties;
  std::vector<AltGroup> alt_groups;
  std::vector<Node> children;
  Attributes attrs;  // attributes of the struc element, carried verbatim

  bool is_leaf() const noexcept { return children.empty(); }

  friend bool operator==(const Node&, const Node&) = default;
};

// Values compare after NFC and trimming; attrs compare exactly.
inline bool equivalent(const FeatureValue& a, const FeatureValue& b);

inline bool equivalent(const Property& a, const Property& b) {
  return a.feature == b.feature && a.attrs == b.attrs && equivalent(a.value, b.value);
}

inline bool equivalent(const FeatureValue& a, const FeatureValue& b) {
  if (a.is_atomic() != b.is_atomic()) return false;
  if (a.is_atomic()) return text::same_text(a.atomic(), b.atomic());
  const auto& x = a.composite();
  const auto& y = b.composite();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!equivalent(x[i], y[i])) return false;
  return true;
}

// "value" for atomics, "[f : v, g : w]" for composites.
inline std::string render_value(const FeatureValue& v) {
  if (v.is_atomic()) return v.atomic();
  std::string out = "[";
  bool first = true;
  for (const auto& p : v.composite()) {
    if (!first) out += ", ";
    first = false;
    out += p.feature.str() + " : " + render_value(p.value);
  }
  return out + "]";
}

// Child indices from the root; empty denotes the root itself.
class NodePath {
 public:
  NodePath() = default;
  NodePath(std::vector<std::size_t> indices) : indices_(std::move(indices)) {}
  NodePath(std::initializer_list<std::size_t> indices) : indices_(indices) {}

  // Dotted 0-based indices, "" for the root.
  static NodePath parse(std::string_view dotted) {
    NodePath path;
    if (dotted.empty()) return path;
    std::size_t start = 0;
    while (true) {
      std::size_t end = dotted.find('.', start);
      std::string_view piece = dotted.substr(start, end == std::string_view::npos ? end : end - start);
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), index);
      if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size())
        throw PathOutOfRange("malformed path '" + std::string(dotted) + "'");
      path.indices_.push_back(index);
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    return path;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(indices_[i]);
    }
    return out;
  }

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t depth() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  NodePath child(std::size_t index) const {
    NodePath p = *this;
    p.indices_.push_back(index);
    return p;
  }

  bool is_prefix_of(const NodePath& other) const {
    return indices_.size() <= other.indices_.size() &&
           std::equal(indices_.begin(), indices_.end(), other.indices_.begin());
  }

  friend bool operator==(const NodePath&, const NodePath&) = default;

 private:
  std::vector<std::size_t> indices_;
};

// The nodes visited from the root to the endpoint of `path`, root first.
inline std::vector<const Node*> resolve(const Node& root, const NodePath& path) {
  std::vector<const Node*> nodes{&root};
  for (std::size_t index : path.indices()) {
    const Node& here = *nodes.back();
    if (index >= here.children.size())
      throw PathOutOfRange("path '" + path.to_string() + "' leaves the tree at index " +
                           std::to_string(index));
    nodes.push_back(&here.children[index]);
  }
  return nodes;
}

inline const Node& node_at(const Node& root, const NodePath& path) { return *resolve(root, path).back(); }

inline bool has_alternatives(const Node& n) {
  if (!n.alt_groups.empty()) return true;
  return std::any_of(n.children.begin(), n.children.end(), [](const Node& c) { return has_alternatives(c); });
}

// Every feature name used anywhere in the tree, including inside composites
// and alternatives.
inline std::set<FeatureName> collect_features(const Node& root) {
  std::set<FeatureName> out;
  std::function<void(const Properties&)> visit_props = [&](const Properties& props) {
    for (const auto& p : props) {
      out.insert(p.feature);
      if (p.value.is_composite()) visit_props(p.value.composite());
    }
  };
  std::function<void(const Node&)> visit = [&](const Node& n) {
    visit_props(n.properties);
    for (const auto& g : n.alt_groups)
      for (const auto& alt : g.alternatives) visit_props(alt);
    for (const auto& c : n.children) visit(c);
  };
  visit(root);
  return out;
}

}  // namespace lexitree
