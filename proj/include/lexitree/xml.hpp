#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <expat.h>

#include "errors.hpp"
#include "model.hpp"
#include "text.hpp"

namespace lexitree {

// Which feature elements a document may use.
struct EncodingProfile {
  std::set<FeatureName> base_elements;
  bool strict = false;

  static EncodingProfile standard() {
    EncodingProfile p;
    for (const char* name :
         {"orth", "pron", "hyph",     "syll",   "stress", "pos",    "gen", "case",  "number",
          "gram", "tns",  "mood",     "usg",    "time",   "register", "geo", "domain", "style",
          "def",  "eg",   "etym",     "xr",     "trans",  "itype",  "ex",  "gender"})
      p.base_elements.insert(FeatureName(name));
    return p;
  }

  bool is_reserved(std::string_view name) const {
    return name == "struc" || name == "alt" || name == "brack" || name == "dict";
  }

  bool knows(const FeatureName& f) const { return base_elements.count(f) != 0; }

  EncodingProfile with(const std::set<FeatureName>& extra) const {
    EncodingProfile p = *this;
    for (const auto& f : extra)
      if (!is_reserved(f.str())) p.base_elements.insert(f);
    return p;
  }
};

struct ParseDiagnostic {
  enum class Severity { Warning, Error };
  enum class Code { XmlMalformed, UnknownElement, MultipleRoots, InvalidStructure, StrayText, DroppedAttributes };

  Severity severity;
  Code code;
  std::size_t line;
  std::size_t column;
  std::string message;

  bool is_error() const noexcept { return severity == Severity::Error; }

  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           (is_error() ? "error: " : "warning: ") + message;
  }
};

struct ParseResult {
  std::optional<Node> root;  // empty whenever an error was diagnosed
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const noexcept { return root.has_value(); }
};

class ParseError : public Error {
 public:
  explicit ParseError(const ParseDiagnostic& d) : Error(d.to_string()), diagnostic_(d) {}
  const ParseDiagnostic& diagnostic() const noexcept { return diagnostic_; }

 private:
  ParseDiagnostic diagnostic_;
};

namespace xml_detail {

struct XmlNode {
  enum class Kind { Element, Text, Comment };
  Kind kind = Kind::Element;
  std::string name;  // element name, or the text
  Attributes attrs;
  std::vector<XmlNode> children;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_blank_text() const { return kind == Kind::Text && text::trim(name).empty(); }
};

class DomBuilder {
 public:
  DomBuilder() { stack_.push_back(&document_); }

  // Returns the single top-level element, or a diagnostic.
  std::optional<ParseDiagnostic> build(std::string_view bytes) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate("UTF-8"), &XML_ParserFree);
    parser_ = parser.get();
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &DomBuilder::on_start, &DomBuilder::on_end);
    XML_SetCharacterDataHandler(parser_, &DomBuilder::on_text);
    XML_SetCommentHandler(parser_, &DomBuilder::on_comment);
    if (XML_Parse(parser_, bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
      return ParseDiagnostic{ParseDiagnostic::Severity::Error, ParseDiagnostic::Code::XmlMalformed,
                             static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_)),
                             static_cast<std::size_t>(XML_GetCurrentColumnNumber(parser_)) + 1,
                             std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser_))};
    }
    return std::nullopt;
  }

  const XmlNode& top() const { return document_.children.front(); }

 private:
  static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<DomBuilder*>(self_ptr);
    XmlNode el;
    el.kind = XmlNode::Kind::Element;
    el.name = name;
    for (std::size_t i = 0; atts[i]; i += 2) el.attrs.push_back({atts[i], atts[i + 1]});
    self->locate(el);
    XmlNode* parent = self->stack_.back();
    parent->children.push_back(std::move(el));
    self->stack_.push_back(&parent->children.back());
  }

  static void on_end(void* self_ptr, const XML_Char*) { static_cast<DomBuilder*>(self_ptr)->stack_.pop_back(); }

  static void on_text(void* self_ptr, const XML_Char* s, int len) {
    auto* self = static_cast<DomBuilder*>(self_ptr);
    XmlNode* parent = self->stack_.back();
    if (!parent->children.empty() && parent->children.back().kind == XmlNode::Kind::Text) {
      parent->children.back().name.append(s, static_cast<std::size_t>(len));
      return;
    }
    XmlNode t;
    t.kind = XmlNode::Kind::Text;
    t.name.assign(s, static_cast<std::size_t>(len));
    self->locate(t);
    parent->children.push_back(std::move(t));
  }

  static void on_comment(void* self_ptr, const XML_Char*) {
    auto* self = static_cast<DomBuilder*>(self_ptr);
    XmlNode c;
    c.kind = XmlNode::Kind::Comment;
    self->locate(c);
    self->stack_.back()->children.push_back(std::move(c));
  }

  void locate(XmlNode& n) const {
    n.line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_));
    n.column = static_cast<std::size_t>(XML_GetCurrentColumnNumber(parser_)) + 1;
  }

  XML_Parser parser_ = nullptr;
  XmlNode document_;
  std::vector<XmlNode*> stack_;
};

// Converts the element tree into a dictionary tree, collecting diagnostics.
class TreeReader {
 public:
  explicit TreeReader(const EncodingProfile& profile) : profile_(profile) {}

  std::optional<Node> read_document(const XmlNode& top) {
    if (top.name == "dict") {
      drop_attrs(top, "dict");
      const XmlNode* root = nullptr;
      for (const auto& child : top.children) {
        if (child.kind == XmlNode::Kind::Comment || child.is_blank_text()) continue;
        if (child.kind == XmlNode::Kind::Text) {
          stray_text(child, "dict");
        } else if (child.name == "struc") {
          if (root) {
            error(child, ParseDiagnostic::Code::MultipleRoots, "more than one root struc in dict");
            continue;
          }
          root = &child;
        } else {
          error(child, ParseDiagnostic::Code::InvalidStructure, "<" + child.name + "> not allowed in dict");
        }
      }
      if (!root) {
        error(top, ParseDiagnostic::Code::InvalidStructure, "dict holds no struc");
        return std::nullopt;
      }
      return read_struc(*root);
    }
    if (top.name != "struc") {
      error(top, ParseDiagnostic::Code::InvalidStructure, "document element must be <dict> or <struc>, found <" +
                                                              top.name + ">");
      return std::nullopt;
    }
    return read_struc(top);
  }

  std::vector<ParseDiagnostic> take_diagnostics() { return std::move(diagnostics_); }

 private:
  Node read_struc(const XmlNode& el) {
    Node node;
    node.attrs = el.attrs;
    std::vector<Properties> alt_run;
    std::size_t alt_members = 0;  // includes alts whose content was all rejected
    auto close_run = [&](const XmlNode& where) {
      if (alt_members == 0) return;
      if (alt_members == 1) {
        problem(where, ParseDiagnostic::Code::InvalidStructure,
                "a lone <alt> is not an alternative group; its content is attached to the node");
      }
      if (alt_run.size() >= 2)
        node.alt_groups.push_back(AltGroup(std::move(alt_run)));
      else
        for (auto& bundle : alt_run)
          for (auto& p : bundle) node.properties.push_back(std::move(p));
      alt_run.clear();
      alt_members = 0;
    };

    for (const auto& child : el.children) {
      if (child.kind == XmlNode::Kind::Text) {
        if (!child.is_blank_text()) stray_text(child, "struc");
        continue;
      }
      if (child.kind == XmlNode::Kind::Comment) {
        close_run(child);
        continue;
      }
      if (child.name == "alt") {
        drop_attrs(child, "alt");
        bool has_elements = std::any_of(child.children.begin(), child.children.end(),
                                        [](const XmlNode& c) { return c.kind == XmlNode::Kind::Element; });
        Properties alt = read_bundle(child, "alt");
        if (!has_elements) {
          error(child, ParseDiagnostic::Code::InvalidStructure, "empty <alt>");
          continue;
        }
        ++alt_members;
        if (!alt.empty()) alt_run.push_back(std::move(alt));
        continue;
      }
      close_run(child);
      if (child.name == "struc") {
        node.children.push_back(read_struc(child));
      } else if (auto p = read_property(child, false)) {
        node.properties.push_back(std::move(*p));
      }
    }
    close_run(el);
    return node;
  }

  // Content of <alt>: base elements and brack.
  Properties read_bundle(const XmlNode& el, const std::string& where) {
    Properties props;
    for (const auto& child : el.children) {
      if (child.kind == XmlNode::Kind::Comment || child.is_blank_text()) continue;
      if (child.kind == XmlNode::Kind::Text) {
        stray_text(child, where);
        continue;
      }
      if (child.name == "struc" || child.name == "alt" || child.name == "dict") {
        error(child, ParseDiagnostic::Code::InvalidStructure, "<" + child.name + "> not allowed in <" + where + ">");
        continue;
      }
      if (auto p = read_property(child, false)) props.push_back(std::move(*p));
    }
    return props;
  }

  std::optional<Property> read_property(const XmlNode& el, bool inside_brack) {
    if (el.name == "brack") {
      if (inside_brack) {
        error(el, ParseDiagnostic::Code::InvalidStructure, "<brack> cannot nest inside <brack>");
        return std::nullopt;
      }
      Properties parts;
      for (const auto& child : el.children) {
        if (child.kind == XmlNode::Kind::Comment || child.is_blank_text()) continue;
        if (child.kind == XmlNode::Kind::Text) {
          stray_text(child, "brack");
          continue;
        }
        if (child.name == "struc" || child.name == "alt" || child.name == "dict") {
          error(child, ParseDiagnostic::Code::InvalidStructure, "<" + child.name + "> not allowed in <brack>");
          continue;
        }
        if (auto p = read_property(child, true)) parts.push_back(std::move(*p));
      }
      return Property(FeatureName("brack"), FeatureValue(std::move(parts)), el.attrs);
    }

    if (!FeatureName::is_valid(el.name)) {
      problem(el, ParseDiagnostic::Code::UnknownElement, "unusable element name <" + el.name + ">; skipped");
      return std::nullopt;
    }
    FeatureName feature(el.name);
    if (!profile_.knows(feature)) {
      problem(el, ParseDiagnostic::Code::UnknownElement, "unknown element <" + el.name + ">");
      if (profile_.strict) return std::nullopt;
    }
    if (feature.str() == "gender") feature = FeatureName("gen");

    std::string raw;
    for (const auto& child : el.children) {
      if (child.kind == XmlNode::Kind::Text) {
        raw += child.name;
      } else if (child.kind == XmlNode::Kind::Element) {
        error(child, ParseDiagnostic::Code::InvalidStructure,
              "<" + child.name + "> not allowed inside feature <" + el.name + ">");
      }
    }
    return Property(std::move(feature), FeatureValue(text::canonical(raw)), el.attrs);
  }

  void stray_text(const XmlNode& t, const std::string& where) {
    problem(t, ParseDiagnostic::Code::StrayText,
            "text '" + text::collapse_whitespace(t.name) + "' directly inside <" + where + "> ignored");
  }

  void drop_attrs(const XmlNode& el, const std::string& where) {
    if (!el.attrs.empty())
      warning(el, ParseDiagnostic::Code::DroppedAttributes, "attributes on <" + where + "> are not kept");
  }

  // An error in strict mode, a warning otherwise.
  void problem(const XmlNode& at, ParseDiagnostic::Code code, std::string message) {
    if (profile_.strict)
      error(at, code, std::move(message));
    else
      warning(at, code, std::move(message));
  }

  void error(const XmlNode& at, ParseDiagnostic::Code code, std::string message) {
    diagnostics_.push_back({ParseDiagnostic::Severity::Error, code, at.line, at.column, std::move(message)});
  }

  void warning(const XmlNode& at, ParseDiagnostic::Code code, std::string message) {
    diagnostics_.push_back({ParseDiagnostic::Severity::Warning, code, at.line, at.column, std::move(message)});
  }

  const EncodingProfile& profile_;
  std::vector<ParseDiagnostic> diagnostics_;
};

inline std::string escape(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\n': out += attribute ? "&#10;" : "\n"; break;
      case '\t': out += attribute ? "&#9;" : "\t"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

class Writer {
 public:
  explicit Writer(const EncodingProfile& profile) : profile_(profile) {}

  std::string write(const Node& root) {
    out_ = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<dict>\n";
    write_struc(root, 1);
    out_ += "</dict>\n";
    return std::move(out_);
  }

 private:
  void indent(std::size_t level) { out_.append(level * 2, ' '); }

  void open_tag(std::string_view name, const Attributes& attrs) {
    out_ += '<';
    out_ += name;
    for (const auto& a : attrs) out_ += " " + a.name + "=\"" + escape(text::nfc(a.value), true) + "\"";
  }

  void write_struc(const Node& n, std::size_t level) {
    indent(level);
    open_tag("struc", n.attrs);
    if (n.properties.empty() && n.alt_groups.empty() && n.children.empty()) {
      out_ += "/>\n";
      return;
    }
    out_ += ">\n";
    for (const auto& p : n.properties) write_property(p, level + 1, false);
    for (std::size_t g = 0; g < n.alt_groups.size(); ++g) {
      // Adjacent <alt> runs would merge into one group on re-parse.
      if (g > 0) {
        indent(level + 1);
        out_ += "<!-- -->\n";
      }
      for (const auto& alt : n.alt_groups[g].alternatives) {
        indent(level + 1);
        out_ += "<alt>\n";
        for (const auto& p : alt) write_property(p, level + 2, false);
        indent(level + 1);
        out_ += "</alt>\n";
      }
    }
    for (const auto& c : n.children) write_struc(c, level + 1);
    indent(level);
    out_ += "</struc>\n";
  }

  void write_property(const Property& p, std::size_t level, bool inside_brack) {
    const std::string& name = p.feature.str();
    indent(level);
    if (name == "brack") {
      if (inside_brack || !p.value.is_composite()) throw UnknownFeature(name);
      open_tag(name, p.attrs);
      if (p.value.composite().empty()) {
        out_ += "/>\n";
        return;
      }
      out_ += ">\n";
      for (const auto& q : p.value.composite()) write_property(q, level + 1, true);
      indent(level);
      out_ += "</brack>\n";
      return;
    }
    if (!profile_.knows(p.feature) || p.value.is_composite()) throw UnknownFeature(name);
    open_tag(name, p.attrs);
    if (p.value.atomic().empty()) {
      out_ += "/>\n";
      return;
    }
    out_ += ">" + escape(text::nfc(p.value.atomic()), false) + "</" + name + ">\n";
  }

  const EncodingProfile& profile_;
  std::string out_;
};

}  // namespace xml_detail

// Reads one entry. The outermost struc (or the single struc inside a dict
// wrapper) becomes the root.
inline ParseResult parse_entry(std::string_view document,
                               const EncodingProfile& profile = EncodingProfile::standard()) {
  ParseResult result;
  xml_detail::DomBuilder dom;
  if (auto failure = dom.build(document)) {
    result.diagnostics.push_back(*failure);
    return result;
  }
  xml_detail::TreeReader reader(profile);
  std::optional<Node> root = reader.read_document(dom.top());
  result.diagnostics = reader.take_diagnostics();
  bool failed = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                            [](const ParseDiagnostic& d) { return d.is_error(); });
  if (!failed) result.root = std::move(root);
  return result;
}

// As parse_entry, throwing ParseError on the first error diagnostic.
inline Node read_entry(std::string_view document, const EncodingProfile& profile = EncodingProfile::standard()) {
  ParseResult result = parse_entry(document, profile);
  if (!result.ok()) {
    for (const auto& d : result.diagnostics)
      if (d.is_error()) throw ParseError(d);
  }
  return std::move(*result.root);
}

inline std::string serialize_entry(const Node& root, const EncodingProfile& profile = EncodingProfile::standard()) {
  return xml_detail::Writer(profile).write(root);
}

}  // namespace lexitree
