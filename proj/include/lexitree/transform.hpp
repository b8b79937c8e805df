#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "propagation.hpp"
#include "registry.hpp"

namespace lexitree {

namespace transform_detail {

// One choice per alt group, first group outermost.
inline std::vector<Properties> choose_alternatives(const std::vector<AltGroup>& groups) {
  std::vector<Properties> combos{Properties{}};
  for (const auto& group : groups) {
    std::vector<Properties> next;
    next.reserve(combos.size() * group.alternatives.size());
    for (const auto& prefix : combos) {
      for (const auto& alt : group.alternatives) {
        Properties combo = prefix;
        combo.insert(combo.end(), alt.begin(), alt.end());
        next.push_back(std::move(combo));
      }
    }
    combos = std::move(next);
  }
  return combos;
}

// The node(s) that replace `n` in its parent's child list.
inline std::vector<Node> expand_node(const Node& n) {
  std::vector<Node> children;
  for (const auto& c : n.children) {
    auto expanded = expand_node(c);
    children.insert(children.end(), std::make_move_iterator(expanded.begin()),
                    std::make_move_iterator(expanded.end()));
  }
  if (n.alt_groups.empty()) {
    Node copy;
    copy.properties = n.properties;
    copy.attrs = n.attrs;
    copy.children = std::move(children);
    return {std::move(copy)};
  }
  std::vector<Node> siblings;
  for (auto& chosen : choose_alternatives(n.alt_groups)) {
    Node sibling;
    sibling.properties = std::move(chosen);
    sibling.properties.insert(sibling.properties.end(), n.properties.begin(), n.properties.end());
    sibling.attrs = n.attrs;
    sibling.children = children;
    siblings.push_back(std::move(sibling));
  }
  return siblings;
}

}  // namespace transform_detail

// Replaces every alternative group by sibling partitions. A node whose
// groups yield k combinations becomes k siblings, each carrying its chosen
// alternative properties (in group order) followed by the node's common
// properties and copies of its expanded children. Alternatives on the root
// become children of a new, empty root.
inline Node expand_alternatives(const Node& root) {
  std::vector<Node> expanded = transform_detail::expand_node(root);
  if (expanded.size() == 1) return std::move(expanded.front());
  Node wrapper;
  wrapper.children = std::move(expanded);
  return wrapper;
}

// Writes inherited values onto every node: each node gains the overwriting
// and cumulative entries of its effective set that came from ancestors and
// are not already present locally, placed before its own properties.
// Blocked dependents are not written. Idempotent.
inline Node materialize_inheritance(const Node& root, const FeatureClassRegistry& registry) {
  if (has_alternatives(root)) throw UnexpandedAlternatives();

  std::function<Node(const Node&, const detail::Propagator&, std::size_t)> visit =
      [&](const Node& n, const detail::Propagator& inherited, std::size_t depth) {
        detail::Propagator state = inherited;
        state.step(n.properties, depth, false);

        Node out;
        out.attrs = n.attrs;
        for (const auto& e : state.entries()) {
          if (e.depth >= depth) continue;
          bool present = std::any_of(n.properties.begin(), n.properties.end(),
                                     [&](const Property& p) { return equivalent(p, e.property); });
          if (!present) out.properties.push_back(e.property);
        }
        out.properties.insert(out.properties.end(), n.properties.begin(), n.properties.end());
        for (const auto& c : n.children) out.children.push_back(visit(c, state, depth + 1));
        return out;
      };

  return visit(root, detail::Propagator(registry, detail::Propagator::OnConflict::Throw), 0);
}

enum class TableFormat { Tsv, Html };

struct TableSpec {
  std::vector<FeatureName> columns;
  TableFormat format = TableFormat::Tsv;
};

struct TableRow {
  std::vector<std::string> cells;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

inline constexpr std::string_view kCellSeparator = "; ";

// One row per full traversal. Multiple values of a column are joined with
// "; "; a missing feature yields an empty cell.
inline std::vector<TableRow> extract_table(const Node& root, const TableSpec& spec,
                                           const FeatureClassRegistry& registry) {
  if (spec.columns.empty()) throw Error("a table needs at least one column");
  std::vector<TableRow> rows;
  for (const auto& path : enumerate_traversals(root)) {
    EffectiveFeatureSet effective = effective_set(root, path, registry);
    TableRow row;
    for (const auto& column : spec.columns) {
      std::string cell;
      for (const auto& v : effective.values(column)) {
        if (!cell.empty()) cell += kCellSeparator;
        cell += render_value(v);
      }
      row.cells.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace transform_detail {

inline std::string tsv_cell(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return out;
}

inline std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace transform_detail

inline std::string render_table(const TableSpec& spec, const std::vector<TableRow>& rows) {
  std::string out;
  if (spec.format == TableFormat::Tsv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += '\t';
        out += transform_detail::tsv_cell(cells[i]);
      }
      out += '\n';
    };
    std::vector<std::string> header;
    for (const auto& c : spec.columns) header.push_back(c.str());
    line(header);
    for (const auto& r : rows) line(r.cells);
    return out;
  }

  out += "<table>\n  <tr>";
  for (const auto& c : spec.columns) out += "<th>" + transform_detail::html_escape(c.str()) + "</th>";
  out += "</tr>\n";
  for (const auto& r : rows) {
    out += "  <tr>";
    for (const auto& cell : r.cells) out += "<td>" + transform_detail::html_escape(cell) + "</td>";
    out += "</tr>\n";
  }
  out += "</table>\n";
  return out;
}

}  // namespace lexitree
