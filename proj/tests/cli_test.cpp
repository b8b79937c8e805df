#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <lexitree/cli.hpp>

#include "support.hpp"

using namespace lexitree;
using lexitree::testing::fixture_path;
using lexitree::testing::load_fixture;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome lexitree_run(std::vector<std::string> args, cli::Environment env = {}) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("lexitree_cli_test_" + name);
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

}  // namespace

TEST(Validate, CleanEntry) {
  auto r = lexitree_run({"validate", fixture_path("gendarme.xml")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "OK\n");
}

TEST(Validate, OverwriteConflict) {
  auto r = lexitree_run({"validate", fixture_path("two_orth.xml")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("OverwriteConflict"), std::string::npos) << r.err;
}

TEST(Validate, DependencyViolation) {
  auto r = lexitree_run({"validate", fixture_path("gen_under_verb.xml")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("node 0: DependencyViolation"), std::string::npos) << r.err;
}

TEST(Validate, ParseFailures) {
  EXPECT_EQ(lexitree_run({"validate", temp_file("bad.xml", "<struc><orth>a</struc>")}).code, 2);
  EXPECT_EQ(lexitree_run({"validate", fixture_path("does_not_exist.xml")}).code, 2);
  auto strict = lexitree_run({"validate", "--strict", fixture_path("pinna.xml")});
  EXPECT_EQ(strict.code, 2);
  EXPECT_NE(strict.err.find("unknown element <plural>"), std::string::npos);
  EXPECT_EQ(strict.err.find("alt>"), std::string::npos) << strict.err;
}

TEST(Validate, LenientWarningsGoToStderr) {
  auto r = lexitree_run({"validate", fixture_path("pinna.xml")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "OK\n");
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.err.find("'plural' is not classified"), std::string::npos) << r.err;
}

TEST(Arguments, Usage) {
  EXPECT_EQ(lexitree_run({}).code, 1);
  EXPECT_EQ(lexitree_run({"frobnicate", "x.xml"}).code, 1);
  EXPECT_EQ(lexitree_run({"validate"}).code, 1);
  auto help = lexitree_run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("materialize"), std::string::npos);
}

TEST(Effective, LeafListing) {
  auto r = lexitree_run({"effective", fixture_path("gendarme.xml"), "--path", "0.0.0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "pron : ...\n"
            "pos : noun\n"
            "gen : masculine\n"
            "etym : 1790\n"
            "time : modern\n"
            "def : Militaire appartenant \xc3\xa0 un corps ...\n"
            "orth : le gendarme\n"
            "def : symbole de la force publique, de l'ordre.\n"
            "ex : La peur du gendarme\n");
}

TEST(Effective, RootByDefault) {
  auto r = lexitree_run({"effective", fixture_path("overdress.xml")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "orth : overdress\n");
}

TEST(Effective, BadPath) {
  auto r = lexitree_run({"effective", fixture_path("overdress.xml"), "--path", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(lexitree_run({"effective", fixture_path("overdress.xml"), "--path", "a.b"}).code, 1);
}

TEST(Traversals, FullAndPartial) {
  auto full = lexitree_run({"traversals", fixture_path("overdress.xml"), "--full"});
  ASSERT_EQ(full.code, 0) << full.err;
  EXPECT_EQ(full.out,
            "traversal 0\n"
            "  orth : overdress\n"
            "  pos : verb\n"
            "  pron : pron1\n"
            "  def : To dress (oneself or another) too elaborately or finely\n"
            "\n"
            "traversal 1\n"
            "  orth : overdress\n"
            "  pos : noun\n"
            "  pron : pron2\n"
            "  def : A dress that may be worn over a jumper, blouse, etc.\n");
  EXPECT_EQ(lexitree_run({"traversals", fixture_path("overdress.xml")}).out, full.out);

  auto partial = lexitree_run({"traversals", fixture_path("overdress.xml"), "--partial"});
  EXPECT_EQ(partial.code, 0);
  EXPECT_EQ(partial.out.rfind("traversal (root)\n  orth : overdress\n\ntraversal 0\n", 0), 0u);
}

TEST(Traversals, AlternativesNeedExpansion) {
  auto r = lexitree_run({"traversals", fixture_path("pinna.xml")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("lexitree expand"), std::string::npos);
}

TEST(Expand, Pinna) {
  auto r = lexitree_run({"expand", fixture_path("pinna.xml")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("<alt"), std::string::npos);
  Node tree = read_entry(r.out);
  EXPECT_EQ(tree.children.size(), 2u);
  EXPECT_EQ(tree, expand_alternatives(load_fixture("pinna.xml")));
}

TEST(Materialize, OverdressWithOrthOnly) {
  auto r = lexitree_run({"materialize", fixture_path("overdress.xml"), "--rules", fixture_path("orth_only.rules")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_entry(r.out), load_fixture("overdress_materialized.xml"));
}

TEST(Materialize, AutoExpands) {
  auto r = lexitree_run({"materialize", fixture_path("pinna.xml")});
  ASSERT_EQ(r.code, 0) << r.err;
  Node tree = read_entry(r.out);
  EXPECT_FALSE(has_alternatives(tree));
  EXPECT_EQ(tree.children.size(), 2u);
}

TEST(Table, TsvAndHtml) {
  auto tsv = lexitree_run({"table", fixture_path("overdress.xml"), "--cols", "orth,pos"});
  ASSERT_EQ(tsv.code, 0) << tsv.err;
  EXPECT_EQ(tsv.out, "orth\tpos\noverdress\tverb\noverdress\tnoun\n");
  auto html = lexitree_run({"table", fixture_path("overdress.xml"), "--cols", "orth,pos", "--format", "html"});
  EXPECT_EQ(html.out,
            "<table>\n  <tr><th>orth</th><th>pos</th></tr>\n"
            "  <tr><td>overdress</td><td>verb</td></tr>\n"
            "  <tr><td>overdress</td><td>noun</td></tr>\n</table>\n");
}

TEST(Table, BadArguments) {
  EXPECT_EQ(lexitree_run({"table", fixture_path("overdress.xml"), "--cols", ""}).code, 1);
  EXPECT_EQ(lexitree_run({"table", fixture_path("overdress.xml")}).code, 1);
  EXPECT_EQ(lexitree_run({"table", fixture_path("overdress.xml"), "--cols", "orth", "--format", "csv"}).code, 1);
  EXPECT_EQ(lexitree_run({"table", fixture_path("overdress.xml"), "--cols", "Or th"}).code, 1);
}

TEST(Rules, DefaultFileMatchesBuiltIn) {
  std::string rules = std::string(LEXITREE_RULES_DIR) + "/default.rules";
  for (const char* file : {"gendarme.xml", "overdress.xml", "gen_under_verb.xml"}) {
    auto a = lexitree_run({"traversals", fixture_path(file), "--partial"});
    auto b = lexitree_run({"traversals", fixture_path(file), "--partial", "--rules", rules});
    EXPECT_EQ(a.out, b.out) << file;
    EXPECT_EQ(lexitree_run({"validate", fixture_path(file)}).code,
              lexitree_run({"validate", fixture_path(file), "--rules", rules}).code)
        << file;
  }
}

TEST(Rules, EnvironmentAndFlagPrecedence) {
  cli::Environment env;
  env.rules_path = fixture_path("orth_only.rules");
  // Under orth-only rules pos is local, so it does not reach the leaf table.
  auto via_env = lexitree_run({"effective", fixture_path("gendarme.xml"), "--path", "0.0.0"}, env);
  EXPECT_EQ(via_env.code, 0);
  EXPECT_EQ(via_env.out.find("pos :"), std::string::npos);

  auto flag_wins = lexitree_run({"effective", fixture_path("gendarme.xml"), "--path", "0.0.0", "--rules",
                                 std::string(LEXITREE_RULES_DIR) + "/default.rules"},
                                env);
  EXPECT_NE(flag_wins.out.find("pos : noun"), std::string::npos);
}

TEST(Rules, BadRulesFile) {
  auto r = lexitree_run({"validate", fixture_path("gendarme.xml"), "--rules", temp_file("bad.rules", "over orth\nmaybe pos\n")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(lexitree_run({"validate", fixture_path("gendarme.xml"), "--rules", "/nonexistent.rules"}).code, 2);
}

TEST(Rules, BlockingFixture) {
  auto r = lexitree_run({"effective", fixture_path("blocking.xml"), "--path", "0", "--rules", fixture_path("blocking.rules")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "pos : v\n");
}
