#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "test_paths.hpp"
#include "typicality/embedstore.hpp"
#include "typicality/errors.hpp"
#include "typicality/text.hpp"
#include "typicality/wordnet.hpp"

using namespace typicality;
using namespace typicality::wordnet;
using testing_support::fixture;

namespace {

struct Expected {
  double count;
  double ic;
};

// Hand-propagated counts and IC values shipped next to the toy taxonomy.
std::map<std::string, Expected> expected_ic() {
  std::ifstream in(fixture("toy_expected_ic.tsv"));
  std::map<std::string, Expected> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = text::split(line, '\t');
    out[f[1]] = Expected{std::stod(f[2]), std::stod(f[3])};
  }
  return out;
}

class ToyWordNet : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    graph_ = new SynsetGraph(parse_wordnet(fixture("toy_wordnet")));
    ic_ = new ICTable(compute_ic(*graph_, embedstore::load_word_counts(fixture("toy_counts.tsv"))));
  }
  static void TearDownTestSuite() {
    delete ic_;
    delete graph_;
  }

  static SynsetIndex noun(const std::string& word, std::size_t sense = 0) {
    return graph_->synsets_of(word, PartOfSpeech::noun).at(sense);
  }

  static SynsetGraph* graph_;
  static ICTable* ic_;
};

SynsetGraph* ToyWordNet::graph_ = nullptr;
ICTable* ToyWordNet::ic_ = nullptr;

}  // namespace

TEST_F(ToyWordNet, Structure) {
  std::size_t nouns = 0;
  for (const auto& s : graph_->synsets()) nouns += s.pos == PartOfSpeech::noun;
  EXPECT_EQ(nouns, 15u);
  EXPECT_EQ(graph_->hypernym_edge_count(), 14u);  // 13 non-roots, fruit with two parents
  ASSERT_EQ(graph_->roots().size(), 2u);
  EXPECT_EQ(graph_->synset(graph_->roots()[0]).lemmas[0], "entity");
  EXPECT_EQ(graph_->synset(graph_->roots()[1]).lemmas[0], "artifact");
  EXPECT_EQ(graph_->synset(noun("robin")).id, "00000561-n");
  // Instance hypernyms count as hypernyms.
  ASSERT_EQ(graph_->hypernyms(noun("hammer")).size(), 1u);
  EXPECT_EQ(graph_->hypernyms(noun("hammer"))[0], noun("artifact"));
  EXPECT_EQ(graph_->ancestors(noun("apple")).size(), 5u);
}

TEST_F(ToyWordNet, LemmaLookup) {
  const auto fruit = graph_->synsets_of("fruit", PartOfSpeech::noun);
  ASSERT_EQ(fruit.size(), 2u);
  EXPECT_EQ(graph_->synset(fruit[1]).lemmas[0], "consequence");
  EXPECT_EQ(graph_->synsets_of("fruit").size(), 3u);  // plus the verb
  EXPECT_TRUE(graph_->synsets_of("zzzz").empty());
  EXPECT_TRUE(graph_->synsets_of("fruits", PartOfSpeech::noun).empty());
  EXPECT_EQ(graph_->synsets_of("fruits", PartOfSpeech::noun, LemmaLookup::morphological), fruit);
  EXPECT_EQ(graph_->base_forms("robins", PartOfSpeech::noun), std::vector<std::string>{"robin"});
  EXPECT_EQ(graph_->base_forms("hammered", PartOfSpeech::verb), std::vector<std::string>{"hammer"});
  // The exception list maps mice to mouse, which the toy index lacks.
  EXPECT_TRUE(graph_->base_forms("mice", PartOfSpeech::noun).empty());
  EXPECT_EQ(polysemy_counts(*graph_, "fruits").all_pos, 3u);
  EXPECT_EQ(polysemy_counts(*graph_, "fruits").noun_only, 2u);
}

TEST_F(ToyWordNet, InformationContentMatchesHandPropagation) {
  const auto expected = expected_ic();
  ASSERT_EQ(expected.size(), 15u);
  EXPECT_DOUBLE_EQ(ic_->total(), 55.0);
  for (const auto& [name, e] : expected) {
    const SynsetIndex s = noun(name);
    EXPECT_NEAR(ic_->count(s), e.count, 1e-12) << name;
    EXPECT_NEAR(ic_->ic(s), e.ic, 1e-12) << name;
    EXPECT_NEAR(e.ic, -std::log((e.count + 1.0) / 56.0), 1e-12) << name;
  }
}

TEST_F(ToyWordNet, CountsGrowTowardTheRoot) {
  for (SynsetIndex s = 0; s < graph_->size(); ++s) {
    for (SynsetIndex p : graph_->hypernyms(s)) {
      EXPECT_GE(ic_->count(p), ic_->count(s));
      EXPECT_LE(ic_->ic(p), ic_->ic(s));
    }
  }
}

TEST_F(ToyWordNet, LinMatchesHandValues) {
  auto e = expected_ic();
  auto lin = [&](const std::string& a, const std::string& b, std::size_t sa = 0) {
    return lin_similarity(*graph_, *ic_, noun(a, sa), noun(b));
  };
  EXPECT_NEAR(lin("robin", "penguin").value,
              2 * e["bird"].ic / (e["robin"].ic + e["penguin"].ic), 1e-12);
  // Fruit also sits under organism, which is more specific than entity.
  EXPECT_NEAR(lin("apple", "robin").value,
              2 * e["organism"].ic / (e["apple"].ic + e["robin"].ic), 1e-12);
  EXPECT_NEAR(lin("fruit", "apple", 1).value,
              2 * e["entity"].ic / (e["consequence"].ic + e["apple"].ic), 1e-12);
  EXPECT_EQ(*lowest_common_subsumer(*graph_, *ic_, noun("apple"), noun("robin")), noun("organism"));

  const auto none = lin("hammer", "robin");
  EXPECT_FALSE(none.has_common_ancestor);
  EXPECT_EQ(none.value, 0.0);
}

TEST_F(ToyWordNet, LinBoundedSymmetricAndReflexive) {
  for (SynsetIndex a = 0; a < graph_->size(); ++a) {
    if (graph_->synset(a).pos != PartOfSpeech::noun) continue;
    EXPECT_NEAR(lin_similarity(*graph_, *ic_, a, a).value, 1.0, 1e-15);
    for (SynsetIndex b = 0; b < graph_->size(); ++b) {
      if (graph_->synset(b).pos != PartOfSpeech::noun) continue;
      const double ab = lin_similarity(*graph_, *ic_, a, b).value;
      EXPECT_GE(ab, 0.0);
      EXPECT_LE(ab, 1.0);
      EXPECT_EQ(ab, lin_similarity(*graph_, *ic_, b, a).value);
    }
  }
}

TEST_F(ToyWordNet, PathMatchesHandValues) {
  auto path = [&](const std::string& a, const std::string& b, PathOptions o = {}) {
    return shortest_path_similarity(*graph_, noun(a), noun(b), o);
  };
  EXPECT_NEAR(*path("robin", "penguin"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(*path("apple", "robin"), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(*path("apple", "food"), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(*path("olive", "olive"), 1.0);
  EXPECT_NEAR(*path("hammer", "robin"), 1.0 / 8.0, 1e-12);
  EXPECT_FALSE(path("hammer", "robin", PathOptions{false}));
  EXPECT_EQ(*shortest_path_length(*graph_, noun("robin"), noun("ostrich")), 2u);
}

TEST_F(ToyWordNet, TypicalityScoresUseMaxOrMeanOverSenses) {
  auto e = expected_ic();
  const dataset::TypicalityDataset ds(
      "toy", {dataset::Category{"fruit", {{"apple", 3}, {"olive", 1}, {"unicorn", 2}}}});
  const ScoreTable maxsim = wn_typicality(*graph_, ic_, {}, ds);
  EXPECT_EQ(maxsim.method(), "WNIC");
  EXPECT_NEAR(*maxsim.score("fruit", "apple"), 2 * e["fruit"].ic / (e["fruit"].ic + e["apple"].ic),
              1e-12);
  EXPECT_TRUE(maxsim.is_unscored("fruit", "unicorn"));

  TypicalityOptions avg;
  avg.wsd = WsdMode::average;
  const ScoreTable mean = wn_typicality(*graph_, ic_, avg, ds);
  const double other = 2 * e["entity"].ic / (e["consequence"].ic + e["apple"].ic);
  EXPECT_NEAR(*mean.score("fruit", "apple"), (*maxsim.score("fruit", "apple") + other) / 2, 1e-12);
  // maxsim never falls below the mean.
  for (const auto& [key, v] : mean.scores()) {
    EXPECT_GE(*maxsim.score(key.category, key.exemplar), v);
  }
  EXPECT_THROW(wn_typicality(*graph_, nullptr, {}, ds), std::invalid_argument);
}

TEST_F(ToyWordNet, UnreachableSynsetPairsLeaveScoresUndefined) {
  EXPECT_FALSE(aggregate_similarities(std::vector<std::optional<double>>{std::nullopt}, WsdMode::maxsim));
  TypicalityOptions path;
  path.measure = Measure::path;
  path.path.virtual_root = false;
  const dataset::TypicalityDataset ds("toy", {dataset::Category{"artifact", {{"hammer", 1}, {"robin", 1}}}});
  const ScoreTable t = wn_typicality(*graph_, nullptr, path, ds);
  EXPECT_NEAR(*t.score("artifact", "hammer"), 0.5, 1e-15);
  EXPECT_TRUE(t.is_unscored("artifact", "robin"));
}

TEST_F(ToyWordNet, IcTableTsvRoundTrip) {
  std::stringstream io;
  ic_->write_tsv(*graph_, io);
  const ICTable back = ICTable::read_tsv(*graph_, io, "ic.tsv");
  for (SynsetIndex s = 0; s < graph_->size(); ++s) {
    if (graph_->synset(s).pos == PartOfSpeech::noun) {
      EXPECT_EQ(back.ic(s), ic_->ic(s));
    }
  }
}

TEST(WordNetParse, CycleIsRejected) {
  EXPECT_THROW(parse_wordnet(fixture("toy_wordnet_cycle")), ValidationError);
}

TEST(WordNetParse, MissingDirectoryIsIoError) {
  EXPECT_THROW(parse_wordnet(fixture("no_such_wordnet")), IoError);
}

TEST(WordNetParse, MalformedRecordReportsByteOffset) {
  testing_support::TempDir dir("wn");
  for (const auto& entry : std::filesystem::directory_iterator(fixture("toy_wordnet"))) {
    std::filesystem::copy_file(entry.path(), dir / entry.path().filename().string());
  }
  std::string data;
  {
    std::ifstream in(dir / "data.noun", std::ios::binary);
    data.assign(std::istreambuf_iterator<char>(in), {});
  }
  const std::string good = "00000422 03 n 01 bird 0 004";
  const auto at = data.find(good);
  ASSERT_NE(at, std::string::npos);
  data.replace(at, good.size(), "00000422 03 n 01 bird 0 0x4");
  std::ofstream(dir / "data.noun", std::ios::binary) << data;
  try {
    parse_wordnet(dir.path());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.byte_offset(), 422u);
  }
}

TEST(WordNetParse, CrlfCopiesKeepTheirLfOffsets) {
  testing_support::TempDir dir("wn");
  for (const auto& entry : std::filesystem::directory_iterator(fixture("toy_wordnet"))) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::string body(std::istreambuf_iterator<char>(in), {}), crlf;
    for (char c : body) {
      if (c == '\n') crlf += '\r';
      crlf += c;
    }
    std::ofstream(dir / entry.path().filename().string(), std::ios::binary) << crlf;
  }
  const SynsetGraph crlf = parse_wordnet(dir.path());
  const SynsetGraph lf = parse_wordnet(fixture("toy_wordnet"));
  ASSERT_EQ(crlf.size(), lf.size());
  for (SynsetIndex s = 0; s < lf.size(); ++s) {
    EXPECT_EQ(crlf.synset(s).id, lf.synset(s).id);
    EXPECT_EQ(crlf.synset(s).lemmas, lf.synset(s).lemmas);
  }
  EXPECT_EQ(crlf.hypernym_edge_count(), lf.hypernym_edge_count());
  EXPECT_EQ(crlf.base_forms("hammered", PartOfSpeech::verb), std::vector<std::string>{"hammer"});
}

TEST(WordNetBuilder, RejectsInvalidGraphs) {
  {
    SynsetGraph::Builder b;
    b.add_synset("1-n", PartOfSpeech::noun, {"a"});
    EXPECT_ANY_THROW(b.add_synset("1-n", PartOfSpeech::noun, {"b"}));
  }
  {
    SynsetGraph::Builder b;
    const auto v = b.add_synset("1-v", PartOfSpeech::verb, {"run"});
    const auto n = b.add_synset("2-n", PartOfSpeech::noun, {"race"});
    b.add_hypernym(n, v);
    EXPECT_THROW(std::move(b).build(), ValidationError);
  }
}

TEST(WordNet30, MatchesReleaseCounts) {
  const auto dir = testing_support::wordnet_dir();
  if (!dir) GTEST_SKIP() << "WordNet 3.0 not configured";
  const SynsetGraph g = parse_wordnet(*dir);

  // Independent count of data records: lines not starting with two spaces.
  std::ifstream in(*dir / "data.noun");
  std::size_t records = 0;
  std::string line;
  while (std::getline(in, line)) records += !(line.size() >= 2 && line[0] == ' ' && line[1] == ' ');
  std::size_t nouns = 0;
  for (const auto& s : g.synsets()) nouns += s.pos == PartOfSpeech::noun;
  EXPECT_EQ(nouns, records);

  EXPECT_EQ(g.synsets_of("animal", PartOfSpeech::noun).size(), 1u);
  EXPECT_EQ(polysemy_counts(g, "tools").all_pos, 8u);
  EXPECT_EQ(polysemy_counts(g, "tools").noun_only, 4u);
  EXPECT_TRUE(g.synsets_of("zzzz").empty());
  for (SynsetIndex r : g.roots()) EXPECT_EQ(g.synset(r).lemmas[0], "entity");
}
