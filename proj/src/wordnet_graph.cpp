#include <algorithm>
#include <set>
#include <unordered_set>

#include "typicality/errors.hpp"
#include "typicality/wordnet.hpp"

namespace typicality::wordnet {
namespace {

using Rule = std::pair<std::string_view, std::string_view>;

// WordNet's suffix detachment rules, per part of speech.
const std::vector<Rule>& detachment_rules(PartOfSpeech pos) {
  static const std::vector<Rule> noun = {{"s", ""},    {"ses", "s"},   {"ves", "f"},
                                         {"xes", "x"}, {"zes", "z"},   {"ches", "ch"},
                                         {"shes", "sh"}, {"men", "man"}, {"ies", "y"}};
  static const std::vector<Rule> verb = {{"s", ""},   {"ies", "y"}, {"es", "e"},
                                         {"es", ""},  {"ed", "e"},  {"ed", ""},
                                         {"ing", "e"}, {"ing", ""}};
  static const std::vector<Rule> adj = {{"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};
  static const std::vector<Rule> none;
  switch (pos) {
    case PartOfSpeech::noun: return noun;
    case PartOfSpeech::verb: return verb;
    case PartOfSpeech::adj: return adj;
    case PartOfSpeech::adv: return none;
  }
  return none;
}

std::string to_lemma_key(std::string_view word) {
  std::string key(word);
  std::replace(key.begin(), key.end(), ' ', '_');
  return key;
}

}  // namespace

char pos_letter(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return 'n';
    case PartOfSpeech::verb: return 'v';
    case PartOfSpeech::adj: return 'a';
    case PartOfSpeech::adv: return 'r';
  }
  return '?';
}

std::optional<PartOfSpeech> pos_from_letter(char letter) {
  switch (letter) {
    case 'n': return PartOfSpeech::noun;
    case 'v': return PartOfSpeech::verb;
    case 'a':
    case 's': return PartOfSpeech::adj;
    case 'r': return PartOfSpeech::adv;
    default: return std::nullopt;
  }
}

std::optional<SynsetIndex> SynsetGraph::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

SynsetIndex SynsetGraph::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw LookupError("unknown synset id '" + std::string(id) + "'");
}

std::size_t SynsetGraph::hypernym_edge_count() const {
  std::size_t n = 0;
  for (const auto& parents : hypernyms_) n += parents.size();
  return n;
}

std::vector<std::string> SynsetGraph::base_forms(std::string_view word, PartOfSpeech pos) const {
  const std::string form = to_lemma_key(word);
  const auto p = static_cast<std::size_t>(pos);
  std::vector<std::string> candidates{form};
  if (auto it = exceptions_[p].find(form); it != exceptions_[p].end()) {
    candidates.insert(candidates.end(), it->second.begin(), it->second.end());
  } else {
    for (const auto& [suffix, replacement] : detachment_rules(pos)) {
      if (form.size() > suffix.size() && form.ends_with(suffix)) {
        candidates.push_back(form.substr(0, form.size() - suffix.size()) +
                             std::string(replacement));
      }
    }
  }
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& c : candidates) {
    auto it = lemma_index_.find(c);
    if (it == lemma_index_.end() || it->second[p].empty()) continue;
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

std::vector<SynsetIndex> SynsetGraph::synsets_of(std::string_view word,
                                                 std::optional<PartOfSpeech> pos,
                                                 LemmaLookup lookup) const {
  std::vector<SynsetIndex> out;
  std::unordered_set<SynsetIndex> seen;
  for (PartOfSpeech p : kAllPos) {
    if (pos && *pos != p) continue;
    std::vector<std::string> forms;
    if (lookup == LemmaLookup::exact) forms.push_back(to_lemma_key(word));
    else forms = base_forms(word, p);
    for (const std::string& f : forms) {
      auto it = lemma_index_.find(f);
      if (it == lemma_index_.end()) continue;
      for (SynsetIndex s : it->second[static_cast<std::size_t>(p)]) {
        if (seen.insert(s).second) out.push_back(s);
      }
    }
  }
  return out;
}

std::vector<SynsetIndex> SynsetGraph::ancestors(SynsetIndex i) const {
  std::vector<SynsetIndex> order{i};
  std::unordered_set<SynsetIndex> seen{i};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (SynsetIndex parent : hypernyms_[order[head]]) {
      if (seen.insert(parent).second) order.push_back(parent);
    }
  }
  return order;
}

// ---------------------------------------------------------------------------

SynsetIndex SynsetGraph::Builder::add_synset(std::string id, PartOfSpeech pos,
                                             std::vector<std::string> lemmas) {
  if (lemmas.empty()) throw ValidationError("synset " + id + " has no lemmas");
  const auto index = static_cast<SynsetIndex>(graph_.synsets_.size());
  if (!graph_.by_id_.emplace(id, index).second) {
    throw ValidationError("duplicate synset id " + id);
  }
  graph_.synsets_.push_back(Synset{std::move(id), pos, std::move(lemmas)});
  return index;
}

void SynsetGraph::Builder::add_hypernym(SynsetIndex child, SynsetIndex parent) {
  edges_.emplace_back(child, parent);
}

void SynsetGraph::Builder::add_index_entry(std::string lemma, PartOfSpeech pos,
                                           SynsetIndex synset) {
  explicit_index_ = true;
  graph_.lemma_index_[std::move(lemma)][static_cast<std::size_t>(pos)].push_back(synset);
}

void SynsetGraph::Builder::add_exception(PartOfSpeech pos, std::string inflected,
                                         std::vector<std::string> bases) {
  auto& slot = graph_.exceptions_[static_cast<std::size_t>(pos)][std::move(inflected)];
  slot.insert(slot.end(), bases.begin(), bases.end());
}

std::optional<SynsetIndex> SynsetGraph::Builder::find(std::string_view id) const {
  return graph_.find(id);
}

SynsetGraph SynsetGraph::Builder::build() && {
  SynsetGraph& g = graph_;
  const std::size_t n = g.synsets_.size();

  if (!explicit_index_) {
    for (SynsetIndex i = 0; i < n; ++i) {
      const Synset& s = g.synsets_[i];
      for (const std::string& lemma : s.lemmas) {
        auto& list = g.lemma_index_[lemma][static_cast<std::size_t>(s.pos)];
        if (std::find(list.begin(), list.end(), i) == list.end()) list.push_back(i);
      }
    }
  } else {
    for (auto& [lemma, lists] : g.lemma_index_) {
      for (const auto& list : lists) {
        for (SynsetIndex s : list) {
          if (s >= n) throw ValidationError("lemma index for '" + lemma + "' names a missing synset");
        }
      }
    }
  }

  g.hypernyms_.assign(n, {});
  g.hyponyms_.assign(n, {});
  std::set<std::pair<SynsetIndex, SynsetIndex>> unique_edges;
  for (auto [child, parent] : edges_) {
    if (child >= n || parent >= n) throw ValidationError("hypernym edge names a missing synset");
    if (g.synsets_[child].pos != PartOfSpeech::noun || g.synsets_[parent].pos != PartOfSpeech::noun) {
      throw ValidationError("hypernym edge " + g.synsets_[child].id + " -> " +
                            g.synsets_[parent].id + " is not between nouns");
    }
    if (child == parent) throw ValidationError("self hypernym on " + g.synsets_[child].id);
    if (!unique_edges.emplace(child, parent).second) continue;
    g.hypernyms_[child].push_back(parent);
    g.hyponyms_[parent].push_back(child);
  }

  // Cycle check: iterative three-colour DFS along hypernym edges.
  enum : std::uint8_t { white, grey, black };
  std::vector<std::uint8_t> colour(n, white);
  for (SynsetIndex start = 0; start < n; ++start) {
    if (colour[start] != white) continue;
    std::vector<std::pair<SynsetIndex, std::size_t>> stack{{start, 0}};
    colour[start] = grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < g.hypernyms_[node].size()) {
        const SynsetIndex parent = g.hypernyms_[node][next++];
        if (colour[parent] == grey) {
          throw ValidationError("hypernym cycle through " + g.synsets_[parent].id);
        }
        if (colour[parent] == white) {
          colour[parent] = grey;
          stack.emplace_back(parent, 0);
        }
      } else {
        colour[node] = black;
        stack.pop_back();
      }
    }
  }

  for (SynsetIndex i = 0; i < n; ++i) {
    if (g.synsets_[i].pos == PartOfSpeech::noun && g.hypernyms_[i].empty()) g.roots_.push_back(i);
  }
  return std::move(graph_);
}

}  // namespace typicality::wordnet
