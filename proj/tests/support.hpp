#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <lexitree/lexitree.hpp>

namespace lexitree::testing {

inline std::string fixture_path(const std::string& name) { return std::string(LEXITREE_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Node load_fixture(const std::string& name) { return read_entry(read_fixture(name)); }

// Compact "feature : value" listing of an effective set, one entry per line.
inline std::string listing(const EffectiveFeatureSet& set) {
  std::string out;
  for (const auto& e : set.entries())
    out += e.property.feature.str() + " : " + render_value(e.property.value) + "\n";
  return out;
}

}  // namespace lexitree::testing
