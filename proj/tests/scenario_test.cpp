#include <gtest/gtest.h>

#include "rol/corpus.hpp"
#include "rol/scenario.hpp"

using namespace rol;

namespace {

const char* kExample = R"(# two points, one overlap
SPACES
instances a b
labels 0 1
HYPOTHESES
h1: 0 0
h2: 0 1
h3: 1 1
PERTURBATIONS
a: a b
b: b
GAME
protocol robust
horizon 6
learner soa
adversary random
seed 9
)";

bool has_error(const ParseResult& r, std::size_t line, std::size_t column, const std::string& fragment) {
  for (const auto& d : r.errors)
    if (d.line == line && d.column == column && d.message.find(fragment) != std::string::npos) return true;
  return false;
}

std::string dump(const ParseResult& r) {
  std::string s;
  for (const auto& d : r.errors) s += d.str() + "\n";
  return s;
}

}  // namespace

TEST(Parse, MinimalScenario) {
  const auto r = parse_scenario("SPACES\ninstances x\nlabels 0 1\nHYPOTHESES\nh: 1\nPERTURBATIONS\nx: x\n");
  ASSERT_TRUE(r.ok()) << dump(r);
  EXPECT_EQ(r.scenario->hypotheses.size(), 1u);
  EXPECT_EQ(r.scenario->perturbation_names, std::vector<std::string>{"U"});
  EXPECT_EQ(r.scenario->game, GameConfig{});
}

TEST(Parse, FullExample) {
  const auto r = parse_scenario(kExample);
  ASSERT_TRUE(r.ok()) << dump(r);
  const Scenario& sc = *r.scenario;
  EXPECT_EQ(sc.instance_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(sc.hypotheses.table(1), (HypothesisClass::Table{0, 1}));
  EXPECT_EQ(sc.perturbation().forward(0), bit(0) | bit(1));
  EXPECT_EQ(sc.perturbation().forward(1), bit(1));
  EXPECT_EQ(sc.game.horizon, 6u);
  EXPECT_EQ(sc.game.adversary, "random");
  EXPECT_EQ(sc.game.seed, 9u);
}

TEST(Parse, EmptyPerturbationSet) {
  const auto r = parse_scenario("SPACES\ninstances x y\nlabels 0 1\nHYPOTHESES\nh: 1 0\nPERTURBATIONS\nx:\ny: x\n");
  ASSERT_TRUE(r.ok()) << dump(r);
  EXPECT_EQ(r.scenario->perturbation().forward(0), 0u);
}

TEST(Parse, ShortHypothesisRow) {
  const auto r = parse_scenario("SPACES\ninstances a b c\nlabels 0 1\nHYPOTHESES\nh0: 0 1 1\nh1: 0 1\n"
                                "PERTURBATIONS\na: a\nb: b\nc: c\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_error(r, 6, 7, "'h1' has 2 labels, expected 3")) << dump(r);
}

TEST(Parse, UnknownSection) {
  const auto r = parse_scenario(std::string(kExample) + "EXTRAS\nfoo bar\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_error(r, 18, 1, "unknown section 'EXTRAS'")) << dump(r);
}

TEST(Parse, OutOfRangeTarget) {
  const auto r = parse_scenario("SPACES\ninstances a b\nlabels 0 1\nHYPOTHESES\nh: 0 1\nPERTURBATIONS\na: a q\nb: b\n");
  EXPECT_TRUE(has_error(r, 7, 6, "'q' is not an instance")) << dump(r);
}

TEST(Parse, MissingRowAndUnknownLabel) {
  const auto r = parse_scenario("SPACES\ninstances a b\nlabels 0 1\nHYPOTHESES\nh: 0 7\nPERTURBATIONS\na: a\n");
  EXPECT_TRUE(has_error(r, 5, 6, "unknown label '7'")) << dump(r);
  EXPECT_TRUE(has_error(r, 6, 1, "no row for instance 'b'")) << dump(r);
}

TEST(Parse, DuplicateNames) {
  const auto r = parse_scenario("SPACES\ninstances a a\nlabels 0 1\nHYPOTHESES\nh: 0 1\nh: 1 1\n"
                                "PERTURBATIONS\na: a\n");
  EXPECT_TRUE(has_error(r, 2, 13, "duplicate instances name 'a'")) << dump(r);
  const auto s = parse_scenario("SPACES\ninstances a\nlabels 0 1\nHYPOTHESES\nh: 0\nh: 1\nPERTURBATIONS\na: a\n");
  EXPECT_TRUE(has_error(s, 6, 1, "duplicate hypothesis name 'h'")) << dump(s);
}

TEST(Parse, DuplicateTablesMergeWithWarning) {
  const auto r = parse_scenario("SPACES\ninstances a\nlabels 0 1\nHYPOTHESES\nh: 0\ng: 0\nPERTURBATIONS\na: a\n");
  ASSERT_TRUE(r.ok()) << dump(r);
  EXPECT_EQ(r.scenario->hypotheses.size(), 1u);
  EXPECT_EQ(r.scenario->hypothesis_names, std::vector<std::string>{"h"});
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].line, 6u);
  EXPECT_NE(r.warnings[0].message.find("merged"), std::string::npos);
}

TEST(Parse, GameErrors) {
  const std::string base = "SPACES\ninstances a\nlabels 0 1\nHYPOTHESES\nh: 0\nPERTURBATIONS\na: a\nGAME\n";
  EXPECT_TRUE(has_error(parse_scenario(base + "protocol sideways\n"), 9, 10, "unknown protocol"));
  EXPECT_TRUE(has_error(parse_scenario(base + "horizon -3\n"), 9, 9, "non-negative integer"));
  EXPECT_TRUE(has_error(parse_scenario(base + "truth V\n"), 9, 7, "unknown perturbation block 'V'"));
  EXPECT_TRUE(has_error(parse_scenario(base + "colour red\n"), 9, 1, "unknown GAME key"));
}

TEST(Parse, MissingSectionsAndStrayContent) {
  const auto r = parse_scenario("hello\n");
  EXPECT_TRUE(has_error(r, 1, 1, "content before the first section"));
  EXPECT_TRUE(has_error(r, 0, 0, "missing SPACES"));
  EXPECT_TRUE(has_error(r, 0, 0, "missing HYPOTHESES"));
  EXPECT_TRUE(has_error(r, 0, 0, "missing PERTURBATIONS"));
}

TEST(Parse, NeverThrowsOnGarbage) {
  Rng rng(61);
  const std::string alphabet = "SPACEHYOTRUBIGMab01:# \n\tinstanceslabels";
  for (int i = 0; i < 500; ++i) {
    std::string text(kExample);
    const std::size_t edits = 1 + rng.below(6);
    for (std::size_t e = 0; e < edits; ++e) {
      const std::size_t at = rng.below(text.size());
      if (rng.bernoulli(0.5)) text.erase(at, 1 + rng.below(4));
      else text.insert(at, 1, alphabet[rng.below(alphabet.size())]);
    }
    ParseResult r;
    EXPECT_NO_THROW(r = parse_scenario(text));
    EXPECT_TRUE(r.ok() || !r.errors.empty());
  }
}

TEST(RoundTrip, Example) {
  const auto r = parse_scenario(kExample);
  ASSERT_TRUE(r.ok());
  const auto again = parse_scenario(serialize_scenario(*r.scenario));
  ASSERT_TRUE(again.ok()) << dump(again);
  EXPECT_EQ(*again.scenario, *r.scenario);
}

TEST(RoundTrip, GeneratedCorpora) {
  for (std::size_t labels : {2u, 3u}) {
    CorpusParams p;
    p.labels = labels;
    for (const auto& e : generate_corpus(p, 80, 5 + labels)) {
      const auto r = parse_scenario(serialize_scenario(e.scenario));
      ASSERT_TRUE(r.ok()) << dump(r);
      EXPECT_EQ(*r.scenario, e.scenario);
    }
  }
  for (const auto& sc : generate_family_corpus(CorpusParams{}, 20, 4, 3)) {
    const auto r = parse_scenario(serialize_scenario(sc));
    ASSERT_TRUE(r.ok()) << dump(r);
    EXPECT_EQ(*r.scenario, sc);
  }
}

TEST(Family, ReadsAgainstBase) {
  const auto base = parse_scenario(kExample);
  ASSERT_TRUE(base.ok());
  const auto f = parse_family("PERTURBATIONS U0\na: a\nb: b\nPERTURBATIONS U1\na: a b\nb: a b\nGAME\ntruth U1\n",
                              *base.scenario);
  ASSERT_TRUE(f.ok()) << dump(f);
  EXPECT_EQ(f.scenario->perturbations.size(), 2u);
  EXPECT_EQ(f.scenario->truth_index(), 1u);
  EXPECT_EQ(f.scenario->perturbation().forward(1), bit(0) | bit(1));
  EXPECT_EQ(f.scenario->game.seed, 9u);
}

TEST(Family, DiagnosticsUseFamilyLineNumbers) {
  const auto base = parse_scenario(kExample);
  ASSERT_TRUE(base.ok());
  const auto f = parse_family("PERTURBATIONS U0\na: a\nb: zz\n", *base.scenario);
  EXPECT_TRUE(has_error(f, 3, 4, "'zz' is not an instance")) << dump(f);
}

TEST(TreeText, Format) {
  const auto r = parse_scenario(kExample);
  ASSERT_TRUE(r.ok());
  const AdversarialTree t{2, {{0, 1, 0, 1}, {1, 1, 0, 1}, {0, 0, 0, 1}}};
  EXPECT_EQ(tree_to_text(t, *r.scenario), "TREE depth 2\n- a b 0 1\n0 b b 0 1\n1 a a 0 1\n");
}
