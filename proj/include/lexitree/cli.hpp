#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexitree.hpp"

namespace lexitree::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kParseFailure = 2 };

struct Environment {
  std::optional<std::string> rules_path;  // LEXITREE_RULES

  static Environment from_process() {
    Environment env;
    if (const char* v = std::getenv("LEXITREE_RULES"); v && *v) env.rules_path = v;
    return env;
  }
};

namespace detail {

// Thrown to leave a command with a given exit code; the message goes to stderr.
struct Exit {
  int code;
  std::string message;
};

inline std::string path_label(const NodePath& p) { return p.empty() ? "(root)" : p.to_string(); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kParseFailure, "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string file;
  std::string rules;
  std::string path;
  std::vector<std::string> cols;
  std::string format = "tsv";
  bool partial = false;
  bool strict = false;
};

class Session {
 public:
  Session(const Options& opts, const Environment& env, std::ostream& out, std::ostream& err)
      : opts_(opts), env_(env), out_(out), err_(err) {}

  Node load_tree() {
    profile_ = EncodingProfile::standard();
    profile_.strict = opts_.strict;
    std::string bytes = read_file(opts_.file);
    ParseResult result = parse_entry(bytes, profile_);
    for (const auto& d : result.diagnostics) err_ << opts_.file << ":" << d.to_string() << "\n";
    if (!result.ok()) throw Exit{kParseFailure, ""};
    // Unknown elements accepted leniently may be written back out.
    profile_ = profile_.with(collect_features(*result.root));
    return std::move(*result.root);
  }

  FeatureClassRegistry load_registry(const Node& tree) {
    FeatureClassRegistry registry = default_registry();
    std::optional<std::string> path = env_.rules_path;
    if (!opts_.rules.empty()) path = opts_.rules;
    if (path) {
      try {
        registry = parse_rules(read_file(*path));
      } catch (const RulesFileError& e) {
        throw Exit{kParseFailure, *path + ": " + e.what()};
      }
    }
    for (const auto& f : registry.unregistered(collect_features(tree)))
      err_ << "warning: feature '" << f << "' is not classified; treating it as "
           << to_string(registry.default_class()) << "\n";
    return registry;
  }

  const EncodingProfile& profile() const { return profile_; }

  void print_set(const EffectiveFeatureSet& set, std::string_view indent) {
    for (const auto& e : set.entries())
      out_ << indent << e.property.feature << " : " << render_value(e.property.value) << "\n";
  }

 private:
  const Options& opts_;
  const Environment& env_;
  std::ostream& out_;
  std::ostream& err_;
  EncodingProfile profile_;
};

inline void require_expanded(const Node& tree) {
  if (has_alternatives(tree))
    throw Exit{kViolation, "the entry contains <alt> groups; run 'lexitree expand' first"};
}

inline int cmd_validate(Session& s, std::ostream& out, std::ostream& err) {
  Node tree = s.load_tree();
  auto registry = s.load_registry(tree);
  auto violations = check_consistency(tree, registry);
  if (violations.empty()) {
    out << "OK\n";
    return kOk;
  }
  for (const auto& v : violations)
    err << "node " << path_label(v.path) << ": " << to_string(v.kind) << ": " << v.message << "\n";
  return kViolation;
}

inline int cmd_effective(Session& s, const Options& opts) {
  Node tree = s.load_tree();
  auto registry = s.load_registry(tree);
  NodePath path;
  try {
    path = NodePath::parse(opts.path);
    auto nodes = resolve(tree, path);
    for (const Node* n : nodes)
      if (!n->alt_groups.empty()) require_expanded(tree);
  } catch (const PathOutOfRange& e) {
    throw Exit{kViolation, e.what()};
  }
  s.print_set(effective_set(tree, path, registry), "");
  return kOk;
}

inline int cmd_traversals(Session& s, const Options& opts, std::ostream& out) {
  Node tree = s.load_tree();
  auto registry = s.load_registry(tree);
  require_expanded(tree);
  auto paths = opts.partial ? partial_traversals(tree) : enumerate_traversals(tree);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (i) out << "\n";
    out << "traversal " << path_label(paths[i]) << "\n";
    s.print_set(effective_set(tree, paths[i], registry), "  ");
  }
  return kOk;
}

inline int cmd_expand(Session& s, std::ostream& out) {
  Node tree = s.load_tree();
  out << serialize_entry(expand_alternatives(tree), s.profile());
  return kOk;
}

inline int cmd_materialize(Session& s, std::ostream& out) {
  Node tree = s.load_tree();
  auto registry = s.load_registry(tree);
  out << serialize_entry(materialize_inheritance(expand_alternatives(tree), registry), s.profile());
  return kOk;
}

inline int cmd_table(Session& s, const Options& opts, std::ostream& out) {
  TableSpec spec;
  for (const auto& c : opts.cols) {
    if (c.empty()) continue;
    if (!FeatureName::is_valid(c)) throw Exit{kViolation, "invalid column '" + c + "'"};
    spec.columns.emplace_back(c);
  }
  if (spec.columns.empty()) throw Exit{kViolation, "--cols needs at least one feature"};
  if (opts.format == "html")
    spec.format = TableFormat::Html;
  else if (opts.format != "tsv")
    throw Exit{kViolation, "unknown --format '" + opts.format + "'"};

  Node tree = s.load_tree();
  auto registry = s.load_registry(tree);
  require_expanded(tree);
  out << render_table(spec, extract_table(tree, spec, registry));
  return kOk;
}

}  // namespace detail

// Runs one command line; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const Environment& env = Environment::from_process()) {
  using namespace detail;
  Options opts;

  CLI::App app{"Query and transform dictionary entry trees", "lexitree"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", opts.file, "Entry XML file")->required();
    cmd->add_option("--rules", opts.rules, "Feature class rules file");
    cmd->add_flag("--strict", opts.strict, "Reject unknown elements");
  };

  auto* validate = app.add_subcommand("validate", "Check overwrite and dependency constraints");
  add_common(validate);

  auto* effective = app.add_subcommand("effective", "Print the effective feature set at a node");
  add_common(effective);
  effective->add_option("--path", opts.path, "Dotted 0-based child indices; empty for the root");

  auto* traversals = app.add_subcommand("traversals", "Print every traversal with its feature set");
  add_common(traversals);
  auto* full = traversals->add_flag("--full", "Root-to-leaf traversals (default)");
  auto* partial = traversals->add_flag("--partial", opts.partial, "Root-to-node traversals");
  full->excludes(partial);

  auto* expand = app.add_subcommand("expand", "Expand <alt> shorthand into sibling nodes");
  add_common(expand);

  auto* materialize = app.add_subcommand("materialize", "Write inherited values onto every node");
  add_common(materialize);

  auto* table = app.add_subcommand("table", "Tabulate features, one row per full traversal");
  add_common(table);
  table->add_option("--cols", opts.cols, "Comma-separated feature columns")->delimiter(',');
  table->add_option("--format", opts.format, "tsv or html");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lexitree: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub && e.get_exit_code() != 0)
      err << "run 'lexitree " << sub->get_name() << " --help' for usage\n";
    return kViolation;
  }

  Session session(opts, env, out, err);
  try {
    if (validate->parsed()) return cmd_validate(session, out, err);
    if (effective->parsed()) return cmd_effective(session, opts);
    if (traversals->parsed()) return cmd_traversals(session, opts, out);
    if (expand->parsed()) return cmd_expand(session, out);
    if (materialize->parsed()) return cmd_materialize(session, out);
    if (table->parsed()) return cmd_table(session, opts, out);
  } catch (const Exit& e) {
    if (!e.message.empty()) err << "lexitree: " << e.message << "\n";
    return e.code;
  } catch (const UnexpandedAlternatives& e) {
    err << "lexitree: " << e.what() << " (run 'lexitree expand')\n";
    return kViolation;
  } catch (const Error& e) {
    err << "lexitree: " << e.what() << "\n";
    return kViolation;
  }
  return kViolation;
}

}  // namespace lexitree::cli
