#include <gtest/gtest.h>

#include <sstream>

#include "test_paths.hpp"
#include "typicality/dataset.hpp"
#include "typicality/errors.hpp"
#include "typicality/score_table.hpp"

using namespace typicality;
using namespace typicality::dataset;

namespace {

TypicalityDataset parse(const std::string& body, const LoadOptions& options = {}) {
  std::istringstream in(body);
  return parse_norms(in, "norms.csv", options);
}

}  // namespace

TEST(Dataset, ParsesAnyColumnOrderAndNormalizes) {
  const auto ds = parse("score,exemplar,category,source\n6.9, Robin ,BIRD,x\n3.1,penguin,bird,y\n"
                        "6.5,apple,fruit,z\n");
  EXPECT_EQ(ds.name(), "norms");
  ASSERT_EQ(ds.categories().size(), 2u);
  EXPECT_EQ(ds.categories()[0].name, "bird");
  EXPECT_EQ(ds.categories()[0].exemplars[0].word, "robin");
  EXPECT_DOUBLE_EQ(ds.find("bird")->find("penguin")->human_score, 3.1);
  EXPECT_EQ(ds.total_exemplars(), 3u);
}

TEST(Dataset, LowerIsTypicalIsFlipped) {
  LoadOptions opts;
  opts.direction = ScoreDirection::lower_is_typical;
  const auto ds = parse("category,exemplar,score\nbird,robin,1\nbird,penguin,0\n", opts);
  // Penguin has the lower raw score, so it ranks as more typical.
  const auto& ex = ds.find("bird")->exemplars;
  EXPECT_GT(ex[1].human_score, ex[0].human_score);
  EXPECT_FALSE(std::signbit(ex[1].human_score));
}

TEST(Dataset, RejectsMalformedInput) {
  EXPECT_THROW(parse("category,exemplar\nbird,robin\n"), ParseError);
  EXPECT_THROW(parse("category,exemplar,score\nbird,robin,high\n"), ParseError);
  EXPECT_THROW(parse("category,exemplar,score\n"), ParseError);
  EXPECT_THROW(parse("category,exemplar,score\nbird,robin,1\nBird,Robin,2\n"), ValidationError);
  try {
    parse("category,exemplar,score\nbird,robin,1\nbird,,2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Dataset, ConstructorValidates) {
  EXPECT_THROW(TypicalityDataset("d", {Category{"bird", {}}}), ValidationError);
  EXPECT_THROW(TypicalityDataset("d", {Category{"bird", {{"robin", 1}}}, Category{"bird", {{"owl", 1}}}}),
               ValidationError);
  EXPECT_THROW(TypicalityDataset("d", {Category{"bird", {{"robin", 1}, {"robin", 2}}}}),
               ValidationError);
  EXPECT_THROW(TypicalityDataset("d", {Category{"bird", {{"robin", std::nan("")}}}}),
               ValidationError);
}

TEST(Dataset, PreprocessFiltersAndKeepsOrder) {
  const auto ds = parse(
      "category,exemplar,score\n"
      "bird,robin,7\nbird,blue jay,6\nbird,o'hare,5\nbird,penguin,3\nbird,dodo,2\n"
      "tool,hammer,7\ntool,saw,6\n");
  const std::vector<VocabFilter> filters{
      VocabFilter::from_words("m", {"robin", "penguin", "hammer", "saw", "blue jay", "o'hare"})};
  const auto out = preprocess(ds, filters, 2);
  ASSERT_EQ(out.categories().size(), 2u);
  const auto& birds = out.find("bird")->exemplars;
  ASSERT_EQ(birds.size(), 2u);
  EXPECT_EQ(birds[0].word, "robin");
  EXPECT_EQ(birds[1].word, "penguin");

  // Tool keeps two exemplars, so raising the minimum drops both categories.
  EXPECT_THROW(preprocess(ds, filters, 3), EmptyDatasetError);
}

TEST(Dataset, PreprocessIsIdempotent) {
  const auto ds = load_norms(testing_support::fixture("micro_norms.csv"));
  const std::vector<VocabFilter> none;
  const auto once = preprocess(ds, none, 3);
  const auto twice = preprocess(once, none, 3);
  std::ostringstream a, b;
  write_norms(once, a);
  write_norms(twice, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Dataset, VocabFromVectorFileSkipsHeader) {
  const auto f = VocabFilter::from_file(testing_support::fixture("micro_vectors.txt"));
  EXPECT_TRUE(f.in_vocabulary("robin"));
  EXPECT_FALSE(f.in_vocabulary("14"));
}

TEST(Dataset, AgreementAcrossNorms) {
  LoadOptions lower;
  lower.direction = ScoreDirection::lower_is_typical;
  const auto a = load_norms(testing_support::fixture("micro_norms.csv"));
  const auto b = load_norms(testing_support::fixture("micro_norms_b.csv"), lower);
  const auto rows = inter_dataset_agreement(a, b);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.n, 6u);
    // One adjacent swap among six: 1 - 6*2/(6*35).
    EXPECT_NEAR(*r.rho, 1.0 - 12.0 / 210.0, 1e-12);
  }
  // Symmetric in its arguments.
  const auto back = inter_dataset_agreement(b, a);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_DOUBLE_EQ(*rows[i].rho, *back[i].rho);
}

TEST(ScoreTable, ScoredAndUnscoredAreExclusive) {
  ScoreTable t("M");
  t.mark_unscored("bird", "robin");
  t.set("bird", "robin", 0.5);
  EXPECT_FALSE(t.is_unscored("bird", "robin"));
  EXPECT_EQ(*t.score("bird", "robin"), 0.5);
  EXPECT_THROW(t.set("bird", "owl", std::numeric_limits<double>::infinity()), ValidationError);
}

TEST(ScoreTable, CsvRoundTripKeepsUnscoredAndExactValues) {
  ScoreTable a("BERT-MPro");
  a.set("bird", "robin", 0.1 + 0.2);
  a.set("bird", "penguin, emperor", -1e-300);
  a.mark_unscored("bird", "dodo");
  ScoreTable b("WNIC");
  b.set("fruit", "apple", 1.0 / 3.0);
  std::stringstream io;
  write_score_csv({a, b}, io);
  const auto back = read_score_csv(io, "mem");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], a);
  EXPECT_EQ(back[1], b);
}

TEST(ScoreTable, ReadRejectsDuplicates) {
  std::istringstream in("method,category,exemplar,score\nM,bird,robin,1\nM,bird,robin,2\n");
  EXPECT_THROW(read_score_csv(in, "dup.csv"), ParseError);
}
