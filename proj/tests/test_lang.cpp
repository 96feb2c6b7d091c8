#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "viewforge/error.hpp"

using namespace viewforge;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> corpus_documents() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(vftest::corpus())) {
    auto ext = e.path().extension().string();
    if (ext == ".vtype" || ext == ".vobj" || ext == ".vclass" || ext == ".vlife") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParseError parse_error_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError(ErrorCode::Syntax, 0, 0, {}, "");
}

}  // namespace

TEST(Lang, CorpusDocumentsAreCanonical) {
  auto docs = corpus_documents();
  ASSERT_GE(docs.size(), 16u);
  for (const auto& p : docs) {
    const std::string text = vftest::slurp(p);
    Document d = parse_document(text);
    EXPECT_EQ(render_document(d), text) << p;
    EXPECT_TRUE(parse_document(render_document(d)) == d) << p;
  }
}

TEST(Lang, RenderSortsMembers) {
  const std::string text =
      "classdocument C :\n  class Branch ;\n  attributes\n    town : Town ;\n    available_cars : Set Car ;\n"
      "  methods\n    return(r : Rental, c : Car) ;\n    inform(b : Branch, c : Car) ;\nendclassdocument\n";
  const std::string expected =
      "classdocument C :\n  class Branch ;\n  attributes\n    available_cars : Set Car ;\n    town : Town ;\n"
      "  methods\n    inform(b : Branch, c : Car) ;\n    return(r : Rental, c : Car) ;\nendclassdocument\n";
  EXPECT_EQ(render_document(parse_document(text)), expected);
}

TEST(Lang, FormatIsIdempotent) {
  for (const auto& p : corpus_documents()) {
    std::string once = render_document(parse_document(vftest::slurp(p)));
    EXPECT_EQ(render_document(parse_document(once)), once) << p;
  }
}

TEST(Lang, MissingCommaReportsPositionAndExpectedTokens) {
  ParseError e = parse_error_of("typedocument T :\n  sort Car = { c1 c2 } ;\nendtypedocument\n");
  EXPECT_EQ(e.code(), ErrorCode::Syntax);
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 19);
  EXPECT_NE(std::find(e.expected().begin(), e.expected().end(), "}"), e.expected().end());
}

TEST(Lang, DuplicateStateIsRejected) {
  ParseError e = parse_error_of(
      "lifecycledocument L :\n  class Rental ;\n  state A [ true ] ;\n  state A [ false ] ;\n  initial A ;\n"
      "endlifecycledocument\n");
  EXPECT_EQ(e.code(), ErrorCode::DuplicateName);
}

TEST(Lang, TransitionToUndeclaredStateIsRejected) {
  ParseError e = parse_error_of(
      "lifecycledocument L :\n  class Rental ;\n  state A [ true ] ;\n  initial A ;\n"
      "  transition t : A -> B\n    input sender?m() ;\nendlifecycledocument\n");
  EXPECT_EQ(e.code(), ErrorCode::Structure);
}

TEST(Lang, EmptyRangeIsRejected) {
  EXPECT_THROW(parse_document("typedocument T :\n  sort D = 3 .. 1 ;\nendtypedocument\n"), ParseError);
}

TEST(Lang, FormulaRenderReparses) {
  const char* formulas[] = {
      "c elem available_cars and rb elem branches",
      "available_cars' = available_cars - {c} and pick-up_rentals' = pick-up_rentals + {r}",
      "not (a = b or c = d) => e subset f",
      "(a = b <=> c = d) <=> e = f",
      "exists x : Car . x elem s",
      "forall x : Date . x + 1 > x or x = 3",
      "card(s) <= 2 and arg(in, 1) = c1",
      "a - (b - c) = a - b + c",
  };
  for (const char* f : formulas) {
    Formula parsed = parse_formula(f);
    EXPECT_TRUE(equal(parse_formula(render(parsed)), parsed)) << f << " rendered as " << render(parsed);
  }
}

TEST(Lang, PrecedenceOfConnectives) {
  Formula f = parse_formula("a = b or c = d and e = f");
  ASSERT_EQ(f->op, Op::Or);
  EXPECT_EQ(f->args[1]->op, Op::And);
  Formula g = parse_formula("a = b => c = d => e = f");
  ASSERT_EQ(g->op, Op::Implies);
  EXPECT_EQ(g->args[1]->op, Op::Implies);
}

TEST(Lang, OutputPatternWithCreation) {
  TransitionDef t = parse_transition(
      "transition ok : Idle -> Idle input sender?pick-up(e, t) output new r : Rental !create(e), sender!ack(r) ;");
  ASSERT_EQ(t.outputs.size(), 2u);
  EXPECT_EQ(render_output(t.outputs[0]), "new r : Rental !create(e)");
  EXPECT_EQ(render_output(t.outputs[1]), "sender!ack(r)");
}
