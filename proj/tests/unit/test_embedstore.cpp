#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "test_paths.hpp"
#include "typicality/embedstore.hpp"
#include "typicality/errors.hpp"

using namespace typicality;
using namespace typicality::embedstore;
using testing_support::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

StoreLayout small_layout() {
  StoreLayout layout;
  layout.n_layers = 3;
  layout.hidden = 5;
  layout.layer_convention = "0=embedding,1..2=encoder";
  return layout;
}

std::filesystem::path write_small_store(const TempDir& dir) {
  const auto words = testing_support::random_occurrences({"bird", "robin"}, 4, 3, 5, 1);
  const auto manifest = dir / "manifest.json";
  write_store(manifest, small_layout(), words);
  return manifest;
}

std::vector<MaskedPredictionRecord> parse_records(const std::string& body) {
  std::istringstream in(body);
  return parse_masked_predictions(in, "records.jsonl");
}

}  // namespace

TEST(EmbedStore, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(EmbedStore, RoundTripIsBitExact) {
  TempDir dir("store");
  const auto words = testing_support::random_occurrences({"bird", "robin", "penguin"}, 6, 3, 5, 9);
  write_store(dir / "manifest.json", small_layout(), words);
  const auto store = read_manifest(dir / "manifest.json");
  EXPECT_EQ(store.n_layers, 3u);
  EXPECT_EQ(store.hidden, 5u);
  ASSERT_EQ(store.words.size(), 3u);
  for (const auto& w : words) {
    const auto back = load_word(store, w.word);
    ASSERT_EQ(back.values.size(), w.values.size());
    EXPECT_EQ(std::memcmp(back.values.data(), w.values.data(), w.values.size() * sizeof(float)), 0);
  }
  // Layer slicing follows the [occurrence][layer][hidden] layout.
  const FloatMatrix l1 = load_occurrences(store, "robin", 1);
  ASSERT_EQ(l1.rows(), 6);
  ASSERT_EQ(l1.cols(), 5);
  EXPECT_EQ(l1(2, 3), words[1].values[(2 * 3 + 1) * 5 + 3]);
}

TEST(EmbedStore, LookupErrors) {
  TempDir dir("store");
  const auto store = read_manifest(write_small_store(dir));
  EXPECT_THROW(load_word(store, "unicorn"), LookupError);
  EXPECT_THROW(load_occurrences(store, "bird", 3), LookupError);
}

TEST(EmbedStore, TruncatedTensorIsIntegrityError) {
  TempDir dir("store");
  const auto manifest = write_small_store(dir);
  const auto tensor = dir / "w000001.f32";
  auto bytes = slurp(tensor);
  bytes.resize(bytes.size() - 4);
  spit(tensor, bytes);
  EXPECT_THROW(read_manifest(manifest), IntegrityError);
}

TEST(EmbedStore, FlippedByteIsIntegrityError) {
  TempDir dir("store");
  const auto manifest = write_small_store(dir);
  const auto tensor = dir / "w000000.f32";
  auto bytes = slurp(tensor);
  bytes[7] = static_cast<char>(bytes[7] ^ 0x01);
  spit(tensor, bytes);
  EXPECT_THROW(read_manifest(manifest), IntegrityError);
}

TEST(EmbedStore, MissingTensorIsIoError) {
  TempDir dir("store");
  const auto manifest = write_small_store(dir);
  std::filesystem::remove(dir / "w000000.f32");
  EXPECT_THROW(read_manifest(manifest), IoError);
}

TEST(EmbedStore, ManifestShapeDisagreementIsFormatError) {
  TempDir dir("store");
  const auto manifest = write_small_store(dir);
  auto j = nlohmann::json::parse(slurp(manifest));
  j["words"][0]["shape"] = {4, 3, 6};
  spit(manifest, j.dump());
  EXPECT_THROW(read_manifest(manifest), FormatError);

  j["words"][0]["shape"] = {4, 3, 5};
  j["format"] = "something-else";
  spit(manifest, j.dump());
  EXPECT_THROW(read_manifest(manifest), FormatError);
}

TEST(EmbedStore, NonFiniteValuesAreRejectedOnLoad) {
  TempDir dir("store");
  auto words = testing_support::random_occurrences({"bird"}, 2, 3, 5, 2);
  words[0].values[4] = std::numeric_limits<float>::quiet_NaN();
  write_store(dir / "manifest.json", small_layout(), words);
  const auto store = read_manifest(dir / "manifest.json");
  EXPECT_THROW(load_word(store, "bird"), FormatError);
}

TEST(MaskedPredictions, ValidRecordsParse) {
  const auto r = parse_records(
      R"({"sentence_id":"s1","category":"bird","exemplar":"robin","variant":"taxonomic","subtokens":["ro","##bin"],"probs":[0.5,0.5]})"
      "\n\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].variant, MaskVariant::taxonomic);
  EXPECT_EQ(r[0].probs, (std::vector<double>{0.5, 0.5}));

  std::stringstream io;
  write_masked_predictions(r, io);
  EXPECT_EQ(parse_masked_predictions(io, "again"), r);
}

TEST(MaskedPredictions, InvalidRecordsAreRejected) {
  const std::string head =
      R"({"sentence_id":"s1","category":"bird","exemplar":"robin","variant":"category_context",)";
  EXPECT_THROW(parse_records(head + R"("subtokens":["robin"],"probs":[1.2]})"), ValidationError);
  EXPECT_THROW(parse_records(head + R"("subtokens":[],"probs":[]})"), ValidationError);
  EXPECT_THROW(parse_records(head + R"("subtokens":["a","b"],"probs":[0.1]})"), ValidationError);
  try {
    parse_records(head + R"("subtokens":["robin"],"probs":[0.3]})" "\n{not json\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(SentenceEmbeddings, RoundTripAndValidation) {
  TempDir dir("sent");
  SentenceEmbeddings emb;
  emb.n_layers = 2;
  emb.hidden = 3;
  for (int i = 0; i < 3; ++i) {
    SentenceEmbeddingRecord r;
    r.sentence_id = "s0";
    r.category = "bird";
    if (i > 0) r.substituted_exemplar = i == 1 ? "robin" : "penguin";
    r.vectors = FloatMatrix::Constant(2, 3, static_cast<float>(i) + 0.25f);
    emb.records.push_back(std::move(r));
  }
  const auto path = dir / "sent.jsonl";
  write_sentence_embeddings(path, emb);
  EXPECT_TRUE(std::filesystem::exists(sentence_vectors_path(path)));
  const auto back = load_sentence_embeddings(path);
  ASSERT_EQ(back.records.size(), 3u);
  EXPECT_FALSE(back.records[0].substituted_exemplar);
  EXPECT_EQ(*back.records[2].substituted_exemplar, "penguin");
  EXPECT_EQ(back.records[2].vectors, emb.records[2].vectors);

  // A record declaring a different shape.
  auto lines = slurp(path);
  const auto last = lines.rfind("\"hidden\":3");
  ASSERT_NE(last, std::string::npos);
  spit(path, lines.substr(0, last) + "\"hidden\":4" + lines.substr(last + 10));
  EXPECT_THROW(load_sentence_embeddings(path), FormatError);

  // A substituted sentence whose original is missing.
  emb.records.erase(emb.records.begin());
  write_sentence_embeddings(path, emb);
  EXPECT_THROW(load_sentence_embeddings(path), ValidationError);
}

TEST(Counts, WordCountsAndCooccurrence) {
  std::istringstream wc("robin\t10\nbird\t4.5\n");
  const auto counts = parse_word_counts(wc, "wc.tsv");
  EXPECT_EQ(counts.at("bird"), 4.5);
  std::istringstream dup("robin\t10\nrobin\t1\n");
  EXPECT_THROW(parse_word_counts(dup, "dup.tsv"), ParseError);
  std::istringstream neg("robin\t-1\n");
  EXPECT_THROW(parse_word_counts(neg, "neg.tsv"), ParseError);

  std::istringstream co("bird\tfly\t3\nbird\tnest\t2\nrobin\tfly\t1\n");
  const auto c = parse_cooccurrence(co, "co.tsv");
  EXPECT_EQ(c.words, (std::vector<std::string>{"bird", "robin"}));
  EXPECT_EQ(c.contexts, (std::vector<std::string>{"fly", "nest"}));
  EXPECT_EQ(c.counts.coeff(1, 0), 1.0);
  EXPECT_EQ(c.counts.coeff(1, 1), 0.0);
}

TEST(StaticVectorsFormat, ParseAndValidate) {
  std::istringstream ok("2 3\nbird 1 0 0\nrobin 0.5 0.5 0\n");
  const auto v = parse_static_vectors(ok, "v.txt");
  EXPECT_EQ(v.dim(), 3u);
  EXPECT_EQ(v.get("robin")[1], 0.5);
  std::stringstream io;
  write_static_vectors(v, io);
  EXPECT_EQ(parse_static_vectors(io, "again").get("robin"), v.get("robin"));

  std::istringstream short_row("1 3\nbird 1 0\n");
  EXPECT_THROW(parse_static_vectors(short_row, "v.txt"), FormatError);
  std::istringstream wrong_count("3 3\nbird 1 0 0\n");
  EXPECT_THROW(parse_static_vectors(wrong_count, "v.txt"), FormatError);
  std::istringstream repeated("2 1\nbird 1\nbird 2\n");
  EXPECT_THROW(parse_static_vectors(repeated, "v.txt"), ParseError);
}
