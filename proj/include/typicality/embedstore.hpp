#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "typicality/counts.hpp"

// Readers and writers for the artifacts the extraction pipeline produces.
//
// Occurrence store: one binary tensor per word holding little-endian
// float32 values laid out [occurrence][layer][hidden], plus a JSON manifest
// with the shared dimensions and a SHA-256 per tensor. Layer 0 is the
// embedding layer; layers 1..n_layers-1 are encoder layers.
namespace typicality::embedstore {

using FloatMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::string_view kManifestFormat = "typicality-embedstore";
inline constexpr int kManifestVersion = 1;

struct WordEntry {
  std::string word;
  std::size_t n_occurrences = 0;
  std::filesystem::path file;  // absolute, resolved against the manifest directory
  std::string sha256;          // lowercase hex
};

struct StoreDescription {
  std::filesystem::path manifest_path;
  std::size_t n_layers = 0;
  std::size_t hidden = 0;
  std::string layer_convention;
  std::string pooling;
  std::vector<WordEntry> words;

  const WordEntry* find(std::string_view word) const;
};

// Parses the manifest and checks that every tensor exists (IoError), has
// the declared byte length and checksum (IntegrityError), and that declared
// shapes agree (FormatError).
StoreDescription read_manifest(const std::filesystem::path& manifest_path);

struct OccurrenceEmbeddings {
  std::string word;
  std::size_t n_occurrences = 0;
  std::size_t n_layers = 0;
  std::size_t hidden = 0;
  std::vector<float> values;  // [occurrence][layer][hidden]

  // Rows are occurrences, in file order.
  FloatMatrix layer(std::size_t layer) const;
};

// Throws LookupError for an unknown word, FormatError for non-finite values.
OccurrenceEmbeddings load_word(const StoreDescription& store, std::string_view word);

// The n_occurrences vectors of one layer. Throws LookupError for an unknown
// word or a layer outside [0, n_layers).
FloatMatrix load_occurrences(const StoreDescription& store, std::string_view word,
                             std::size_t layer);

struct StoreLayout {
  std::size_t n_layers = 13;
  std::size_t hidden = 768;
  std::string layer_convention = "0=embedding,1..12=encoder";
  std::string pooling = "mean-subtoken";
};

// Writes one tensor per word next to `manifest_path` and the manifest.
void write_store(const std::filesystem::path& manifest_path, const StoreLayout& layout,
                 std::span<const OccurrenceEmbeddings> words);

// ---------------------------------------------------------------------------
// Masked-prediction records (JSON Lines)

enum class MaskVariant { category_context, taxonomic, misra };

std::string_view to_string(MaskVariant variant);
std::optional<MaskVariant> parse_mask_variant(std::string_view name);

struct MaskedPredictionRecord {
  std::string sentence_id;
  std::string category;
  std::string exemplar;
  MaskVariant variant = MaskVariant::category_context;
  std::vector<std::string> subtokens;
  std::vector<double> probs;  // one per subtoken, each in [0, 1]

  bool operator==(const MaskedPredictionRecord&) const = default;
};

// Rejects records with empty or mismatched subtoken/prob lists and
// probabilities outside [0, 1] (ValidationError naming the line).
std::vector<MaskedPredictionRecord> parse_masked_predictions(std::istream& in,
                                                             const std::string& source);
std::vector<MaskedPredictionRecord> load_masked_predictions(const std::filesystem::path& path);
void write_masked_predictions(std::span<const MaskedPredictionRecord> records, std::ostream& out);

// ---------------------------------------------------------------------------
// Sentence embeddings: JSON Lines metadata plus a sibling `.f32` file holding
// [record][layer][hidden] float32 values in record order.

struct SentenceEmbeddingRecord {
  std::string sentence_id;
  std::string category;
  std::optional<std::string> substituted_exemplar;  // absent for the original sentence
  FloatMatrix vectors;                              // n_layers x hidden
};

struct SentenceEmbeddings {
  std::size_t n_layers = 0;
  std::size_t hidden = 0;
  std::vector<SentenceEmbeddingRecord> records;
};

std::filesystem::path sentence_vectors_path(const std::filesystem::path& jsonl_path);

// Also enforces that every substituted record has an original with the same
// (category, sentence_id).
SentenceEmbeddings load_sentence_embeddings(const std::filesystem::path& jsonl_path);
void write_sentence_embeddings(const std::filesystem::path& jsonl_path,
                               const SentenceEmbeddings& embeddings);

// ---------------------------------------------------------------------------
// Word counts (`word<TAB>count`) and co-occurrence triples
// (`word<TAB>context<TAB>count`)

WordCounts parse_word_counts(std::istream& in, const std::string& source);
WordCounts load_word_counts(const std::filesystem::path& path);
void write_word_counts(const WordCounts& counts, std::ostream& out);

struct CooccurrenceCounts {
  std::vector<std::string> words;     // row labels, first-appearance order
  std::vector<std::string> contexts;  // column labels, first-appearance order
  Eigen::SparseMatrix<double> counts;
};

CooccurrenceCounts parse_cooccurrence(std::istream& in, const std::string& source);
CooccurrenceCounts load_cooccurrence(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Static word vectors, text format: `n_words dim` header, then
// `word v1 ... vD` per line.

class StaticVectors {
 public:
  explicit StaticVectors(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  bool contains(std::string_view word) const;
  // Throws LookupError when absent.
  Eigen::VectorXd get(std::string_view word) const;

  // Throws FormatError on dimension mismatch or non-finite values,
  // ValidationError on a repeated word.
  void add(std::string word, const Eigen::VectorXd& v);

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<Eigen::VectorXd> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

StaticVectors parse_static_vectors(std::istream& in, const std::string& source);
StaticVectors load_static_vectors(const std::filesystem::path& path);
void write_static_vectors(const StaticVectors& vectors, std::ostream& out);

// Lowercase hex SHA-256 of a byte string / of a file's bytes.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace typicality::embedstore
