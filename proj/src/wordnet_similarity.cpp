#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "typicality/errors.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::wordnet {
namespace {

constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

void require_noun(const SynsetGraph& g, SynsetIndex s) {
  if (s >= g.size()) throw LookupError("synset index out of range");
  if (g.synset(s).pos != PartOfSpeech::noun) {
    throw ValidationError("similarity is defined for noun synsets only: " + g.synset(s).id);
  }
}

// Bidirectional breadth-first search over the undirected hypernym/hyponym
// graph. Index g.size() stands for the virtual root joined to every root.
class PathSearch {
 public:
  PathSearch(const SynsetGraph& g, const PathOptions& options,
             std::vector<std::uint32_t>& dist_a, std::vector<std::uint32_t>& dist_b)
      : g_(g), options_(options), dist_a_(dist_a), dist_b_(dist_b) {
    const std::size_t slots = g.size() + 1;
    if (dist_a_.size() != slots) dist_a_.assign(slots, kUnseen);
    if (dist_b_.size() != slots) dist_b_.assign(slots, kUnseen);
  }

  ~PathSearch() {
    for (SynsetIndex s : touched_) {
      dist_a_[s] = kUnseen;
      dist_b_[s] = kUnseen;
    }
  }

  std::optional<std::size_t> run(SynsetIndex a, SynsetIndex b) {
    if (a == b) return 0;
    std::vector<SynsetIndex> front_a{a}, front_b{b};
    visit(dist_a_, a, 0);
    visit(dist_b_, b, 0);
    while (!front_a.empty() && !front_b.empty()) {
      const bool grow_a = front_a.size() <= front_b.size();
      auto& front = grow_a ? front_a : front_b;
      auto& mine = grow_a ? dist_a_ : dist_b_;
      auto& other = grow_a ? dist_b_ : dist_a_;
      std::vector<SynsetIndex> next;
      std::uint32_t best = kUnseen;
      for (SynsetIndex u : front) {
        const std::uint32_t du = mine[u];
        for_each_neighbour(u, [&](SynsetIndex v) {
          if (mine[v] != kUnseen) return;
          visit(mine, v, du + 1);
          next.push_back(v);
          if (other[v] != kUnseen) best = std::min(best, du + 1 + other[v]);
        });
      }
      if (best != kUnseen) return best;
      front = std::move(next);
    }
    return std::nullopt;
  }

 private:
  void visit(std::vector<std::uint32_t>& dist, SynsetIndex s, std::uint32_t d) {
    if (dist_a_[s] == kUnseen && dist_b_[s] == kUnseen) touched_.push_back(s);
    dist[s] = d;
  }

  template <typename Fn>
  void for_each_neighbour(SynsetIndex u, Fn fn) const {
    const auto virtual_root = static_cast<SynsetIndex>(g_.size());
    if (u == virtual_root) {
      for (SynsetIndex r : g_.roots()) fn(r);
      return;
    }
    for (SynsetIndex v : g_.hypernyms(u)) fn(v);
    for (SynsetIndex v : g_.hyponyms(u)) fn(v);
    if (options_.virtual_root && g_.hypernyms(u).empty()) fn(virtual_root);
  }

  const SynsetGraph& g_;
  const PathOptions& options_;
  std::vector<std::uint32_t>& dist_a_;
  std::vector<std::uint32_t>& dist_b_;
  std::vector<SynsetIndex> touched_;
};

std::optional<SynsetIndex> best_common(const ICTable& ic, std::span<const SynsetIndex> anc_a,
                                       std::span<const SynsetIndex> anc_b) {
  std::unordered_set<SynsetIndex> in_a(anc_a.begin(), anc_a.end());
  std::optional<SynsetIndex> best;
  for (SynsetIndex s : anc_b) {
    if (!in_a.contains(s)) continue;
    if (!best || ic.ic(s) > ic.ic(*best) || (ic.ic(s) == ic.ic(*best) && s < *best)) best = s;
  }
  return best;
}

LinSimilarity lin_from_ancestors(const ICTable& ic, SynsetIndex a, SynsetIndex b,
                                 std::span<const SynsetIndex> anc_a,
                                 std::span<const SynsetIndex> anc_b) {
  const auto lcs = best_common(ic, anc_a, anc_b);
  if (!lcs) return LinSimilarity{0.0, false};
  const double denom = ic.ic(a) + ic.ic(b);
  const double top = ic.ic(*lcs);
  if (denom == 0.0 || top == 0.0) return LinSimilarity{0.0, true};
  return LinSimilarity{2.0 * top / denom, true};
}

}  // namespace

std::optional<std::size_t> shortest_path_length(const SynsetGraph& g, SynsetIndex a,
                                                SynsetIndex b, const PathOptions& options) {
  require_noun(g, a);
  require_noun(g, b);
  std::vector<std::uint32_t> dist_a, dist_b;
  return PathSearch(g, options, dist_a, dist_b).run(a, b);
}

std::optional<double> shortest_path_similarity(const SynsetGraph& g, SynsetIndex a,
                                               SynsetIndex b, const PathOptions& options) {
  const auto d = shortest_path_length(g, a, b, options);
  if (!d) return std::nullopt;
  return 1.0 / (static_cast<double>(*d) + 1.0);
}

std::optional<SynsetIndex> lowest_common_subsumer(const SynsetGraph& g, const ICTable& ic,
                                                  SynsetIndex a, SynsetIndex b) {
  require_noun(g, a);
  require_noun(g, b);
  return best_common(ic, g.ancestors(a), g.ancestors(b));
}

LinSimilarity lin_similarity(const SynsetGraph& g, const ICTable& ic, SynsetIndex a,
                             SynsetIndex b) {
  require_noun(g, a);
  require_noun(g, b);
  return lin_from_ancestors(ic, a, b, g.ancestors(a), g.ancestors(b));
}

std::optional<double> aggregate_similarities(std::span<const std::optional<double>> sims,
                                             WsdMode wsd) {
  std::optional<double> best;
  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& s : sims) {
    if (!s) continue;
    ++defined;
    sum += *s;
    if (!best || *s > *best) best = *s;
  }
  if (defined == 0) return std::nullopt;
  if (wsd == WsdMode::maxsim) return best;
  return sum / static_cast<double>(defined);
}

SimilarityScorer::SimilarityScorer(const SynsetGraph& g, const ICTable* ic,
                                   TypicalityOptions options)
    : graph_(g), ic_(ic), options_(options) {
  if (options_.measure == Measure::lin && ic_ == nullptr) {
    throw std::invalid_argument("the lin measure needs an IC table");
  }
}

const std::vector<SynsetIndex>& SimilarityScorer::cached_ancestors(SynsetIndex s) {
  auto it = ancestors_.find(s);
  if (it == ancestors_.end()) it = ancestors_.emplace(s, graph_.ancestors(s)).first;
  return it->second;
}

std::optional<double> SimilarityScorer::similarity(SynsetIndex a, SynsetIndex b) {
  require_noun(graph_, a);
  require_noun(graph_, b);
  if (options_.measure == Measure::path) {
    const auto d = PathSearch(graph_, options_.path, dist_a_, dist_b_).run(a, b);
    if (!d) return std::nullopt;
    return 1.0 / (static_cast<double>(*d) + 1.0);
  }
  const LinSimilarity lin =
      lin_from_ancestors(*ic_, a, b, cached_ancestors(a), cached_ancestors(b));
  if (!lin.has_common_ancestor) return std::nullopt;
  return lin.value;
}

std::optional<double> SimilarityScorer::set_similarity(std::span<const SynsetIndex> a,
                                                       std::span<const SynsetIndex> b) {
  std::vector<std::optional<double>> sims;
  sims.reserve(a.size() * b.size());
  for (SynsetIndex x : a) {
    for (SynsetIndex y : b) sims.push_back(similarity(x, y));
  }
  return aggregate_similarities(sims, options_.wsd);
}

std::string method_name(Measure measure, WsdMode wsd) {
  std::string name = measure == Measure::path ? "WNSP" : "WNIC";
  if (wsd == WsdMode::average) name += "-noWSD";
  return name;
}

ScoreTable wn_typicality(const SynsetGraph& g, const ICTable* ic,
                         const TypicalityOptions& options, const dataset::TypicalityDataset& ds) {
  SimilarityScorer scorer(g, ic, options);
  ScoreTable table(method_name(options.measure, options.wsd));
  for (const auto& category : ds.categories()) {
    const auto cat_synsets = g.synsets_of(category.name, PartOfSpeech::noun, options.lookup);
    for (const auto& exemplar : category.exemplars) {
      const auto ex_synsets = g.synsets_of(exemplar.word, PartOfSpeech::noun, options.lookup);
      std::optional<double> score;
      if (!cat_synsets.empty() && !ex_synsets.empty()) {
        score = scorer.set_similarity(cat_synsets, ex_synsets);
      }
      if (score) table.set(category.name, exemplar.word, *score);
      else table.mark_unscored(category.name, exemplar.word);
    }
  }
  return table;
}

PolysemyCounts polysemy_counts(const SynsetGraph& g, std::string_view word, LemmaLookup lookup) {
  return PolysemyCounts{g.synsets_of(word, std::nullopt, lookup).size(),
                        g.synsets_of(word, PartOfSpeech::noun, lookup).size()};
}

}  // namespace typicality::wordnet
