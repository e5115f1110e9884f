#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "typicality/counts.hpp"
#include "typicality/dataset.hpp"
#include "typicality/score_table.hpp"

// WordNet noun taxonomy, information content and the similarity-based
// typicality scores built on them.
namespace typicality::wordnet {

enum class PartOfSpeech : std::uint8_t { noun = 0, verb = 1, adj = 2, adv = 3 };

inline constexpr std::array<PartOfSpeech, 4> kAllPos = {
    PartOfSpeech::noun, PartOfSpeech::verb, PartOfSpeech::adj, PartOfSpeech::adv};

char pos_letter(PartOfSpeech pos);
std::optional<PartOfSpeech> pos_from_letter(char letter);

using SynsetIndex = std::uint32_t;

struct Synset {
  std::string id;  // "<8-digit offset>-<n|v|a|r>"
  PartOfSpeech pos = PartOfSpeech::noun;
  std::vector<std::string> lemmas;
};

// exact: the lemma must appear verbatim in the index.
// morphological: WordNet's base-form rules (exception lists, then suffix
// detachment) are applied first, so "tools" finds the synsets of "tool".
enum class LemmaLookup { exact, morphological };

class SynsetGraph {
 public:
  class Builder;

  std::size_t size() const { return synsets_.size(); }
  const std::vector<Synset>& synsets() const { return synsets_; }
  const Synset& synset(SynsetIndex i) const { return synsets_.at(i); }
  std::optional<SynsetIndex> find(std::string_view id) const;
  // Throws LookupError for an unknown id.
  SynsetIndex index_of(std::string_view id) const;

  // Noun hypernym edges (instance hypernyms included) and their reverse.
  std::span<const SynsetIndex> hypernyms(SynsetIndex i) const { return hypernyms_.at(i); }
  std::span<const SynsetIndex> hyponyms(SynsetIndex i) const { return hyponyms_.at(i); }
  std::size_t hypernym_edge_count() const;
  // Noun synsets without hypernyms.
  const std::vector<SynsetIndex>& roots() const { return roots_; }

  // Synsets listing `word` as a lemma, in index-file order, nouns first when
  // pos is unset. Spaces in `word` match WordNet's underscores. Unknown
  // words yield an empty list.
  std::vector<SynsetIndex> synsets_of(std::string_view word,
                                      std::optional<PartOfSpeech> pos = std::nullopt,
                                      LemmaLookup lookup = LemmaLookup::exact) const;

  // Candidate base forms of `word` that exist in the index for `pos`.
  std::vector<std::string> base_forms(std::string_view word, PartOfSpeech pos) const;

  // Inclusive hypernym closure, deduplicated, in breadth-first order.
  std::vector<SynsetIndex> ancestors(SynsetIndex i) const;

 private:
  SynsetGraph() = default;

  std::vector<Synset> synsets_;
  std::unordered_map<std::string, SynsetIndex> by_id_;
  std::unordered_map<std::string, std::array<std::vector<SynsetIndex>, 4>> lemma_index_;
  std::array<std::unordered_map<std::string, std::vector<std::string>>, 4> exceptions_;
  std::vector<std::vector<SynsetIndex>> hypernyms_;
  std::vector<std::vector<SynsetIndex>> hyponyms_;
  std::vector<SynsetIndex> roots_;
};

// Assembles a graph in memory. build() validates the invariants: unique ids,
// non-empty lemma lists, noun-only acyclic hypernym edges.
class SynsetGraph::Builder {
 public:
  SynsetIndex add_synset(std::string id, PartOfSpeech pos, std::vector<std::string> lemmas);
  void add_hypernym(SynsetIndex child, SynsetIndex parent);
  // Appends to the lemma index. Without explicit entries, build() indexes
  // every synset under each of its lemmas in insertion order.
  void add_index_entry(std::string lemma, PartOfSpeech pos, SynsetIndex synset);
  // Take the lemma index only from add_index_entry, even if it stays empty.
  void use_index_files() { explicit_index_ = true; }
  void add_exception(PartOfSpeech pos, std::string inflected, std::vector<std::string> bases);
  std::optional<SynsetIndex> find(std::string_view id) const;

  SynsetGraph build() &&;

 private:
  SynsetGraph graph_;
  std::vector<std::pair<SynsetIndex, SynsetIndex>> edges_;
  bool explicit_index_ = false;
};

// Parses a WordNet 3.x database directory: data.{noun,verb,adj,adv},
// index.{noun,verb,adj,adv} and, when present, {noun,verb,adj,adv}.exc.
// Throws IoError for missing files, ParseError (with byte offset for data
// files, line number for index files) for malformed records and dangling
// pointers, ValidationError for hypernym cycles.
SynsetGraph parse_wordnet(const std::filesystem::path& directory);

// ---------------------------------------------------------------------------
// Information content

class ICTable {
 public:
  // Splits each word's count evenly over its noun synsets, propagates every
  // synset's share once to each distinct ancestor, and sets
  // IC(s) = -ln((count(s) + 1) / (total + 1)), total being the mass
  // distributed. `warning`, if given, receives a message when no counted
  // word reaches any synset.
  static ICTable from_counts(const SynsetGraph& g, const WordCounts& word_counts,
                             std::string* warning = nullptr);

  // Explicit IC values by synset id; other synsets get `fallback`. Counts are
  // left at zero.
  static ICTable from_values(const SynsetGraph& g,
                             const std::vector<std::pair<std::string, double>>& ic_by_id,
                             double fallback = 0.0);

  double ic(SynsetIndex s) const { return ic_.at(s); }
  double count(SynsetIndex s) const { return counts_.at(s); }
  double total() const { return total_; }
  std::span<const double> ic_values() const { return ic_; }
  std::span<const double> counts() const { return counts_; }

  // TSV `synset_id<TAB>ic`, noun synsets in graph order.
  void write_tsv(const SynsetGraph& g, std::ostream& out) const;
  static ICTable read_tsv(const SynsetGraph& g, std::istream& in, const std::string& source);

 private:
  std::vector<double> counts_;
  std::vector<double> ic_;
  double total_ = 0.0;
};

inline ICTable compute_ic(const SynsetGraph& g, const WordCounts& word_counts,
                          std::string* warning = nullptr) {
  return ICTable::from_counts(g, word_counts, warning);
}

// ---------------------------------------------------------------------------
// Similarity

struct PathOptions {
  // Joins all noun roots under one virtual node so any two nouns connect.
  bool virtual_root = true;
};

// Minimum number of hypernym/hyponym edges between two noun synsets, edges
// walked in either direction. std::nullopt when they are not connected.
std::optional<std::size_t> shortest_path_length(const SynsetGraph& g, SynsetIndex a,
                                                SynsetIndex b, const PathOptions& options = {});

// 1 / (d + 1); std::nullopt when no path exists.
std::optional<double> shortest_path_similarity(const SynsetGraph& g, SynsetIndex a,
                                               SynsetIndex b, const PathOptions& options = {});

// Common ancestor (inclusive) with the largest IC; ties go to the lowest
// index.
std::optional<SynsetIndex> lowest_common_subsumer(const SynsetGraph& g, const ICTable& ic,
                                                  SynsetIndex a, SynsetIndex b);

struct LinSimilarity {
  double value = 0.0;
  bool has_common_ancestor = false;
};

// 2 IC(lcs) / (IC(a) + IC(b)), or 0 when either the denominator or IC(lcs)
// is zero, or when there is no common ancestor (flagged).
LinSimilarity lin_similarity(const SynsetGraph& g, const ICTable& ic, SynsetIndex a,
                             SynsetIndex b);

enum class Measure { path, lin };
enum class WsdMode { maxsim, average };

// Max or mean over the defined entries; std::nullopt if none is defined.
std::optional<double> aggregate_similarities(std::span<const std::optional<double>> sims,
                                             WsdMode wsd);

struct TypicalityOptions {
  Measure measure = Measure::lin;
  WsdMode wsd = WsdMode::maxsim;
  LemmaLookup lookup = LemmaLookup::exact;
  PathOptions path;
};

// Caches ancestor sets and reuses search buffers across many queries.
class SimilarityScorer {
 public:
  // `ic` may be null for the path measure; it must outlive the scorer.
  SimilarityScorer(const SynsetGraph& g, const ICTable* ic, TypicalityOptions options);

  // Similarity of two synsets; std::nullopt when undefined.
  std::optional<double> similarity(SynsetIndex a, SynsetIndex b);
  // Aggregated over A x B, row-major.
  std::optional<double> set_similarity(std::span<const SynsetIndex> a,
                                       std::span<const SynsetIndex> b);

 private:
  const std::vector<SynsetIndex>& cached_ancestors(SynsetIndex s);

  const SynsetGraph& graph_;
  const ICTable* ic_;
  TypicalityOptions options_;
  std::unordered_map<SynsetIndex, std::vector<SynsetIndex>> ancestors_;
  std::vector<std::uint32_t> dist_a_, dist_b_;
};

// "WNSP", "WNSP-noWSD", "WNIC" or "WNIC-noWSD".
std::string method_name(Measure measure, WsdMode wsd);

// Scores every (category, exemplar) pair of `ds` from the noun synsets of
// both words. Pairs where either word has no noun synset, or where no
// synset pair has a defined similarity, are marked unscored. Throws
// std::invalid_argument for the lin measure without an IC table.
ScoreTable wn_typicality(const SynsetGraph& g, const ICTable* ic,
                         const TypicalityOptions& options, const dataset::TypicalityDataset& ds);

struct PolysemyCounts {
  std::size_t all_pos = 0;
  std::size_t noun_only = 0;
};

PolysemyCounts polysemy_counts(const SynsetGraph& g, std::string_view word,
                               LemmaLookup lookup = LemmaLookup::morphological);

}  // namespace typicality::wordnet
