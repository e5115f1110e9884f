#include "typicality/embedstore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "typicality/errors.hpp"
#include "typicality/text.hpp"

namespace typicality::embedstore {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

std::vector<float> decode_f32le(std::string_view bytes) {
  std::vector<float> out(bytes.size() / 4);
  std::memcpy(out.data(), bytes.data(), out.size() * 4);
  if constexpr (std::endian::native == std::endian::big) {
    for (float& f : out) f = std::bit_cast<float>(byteswap32(std::bit_cast<std::uint32_t>(f)));
  }
  return out;
}

void write_f32le(std::ostream& out, std::span<const float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(float)));
  } else {
    for (float f : values) {
      const std::uint32_t le = byteswap32(std::bit_cast<std::uint32_t>(f));
      out.write(reinterpret_cast<const char*>(&le), 4);
    }
  }
}

std::size_t json_size(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw FormatError(where + ": '" + key + "' must be a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

std::string json_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ValidationError(where + ": '" + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

void require_finite(std::span<const float> values, const std::string& what) {
  for (float v : values) {
    if (!std::isfinite(v)) throw FormatError(what + ": non-finite value");
  }
}

template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), source, line_no);
    }
    if (!j.is_object()) throw ParseError("record must be a JSON object", source, line_no);
    try {
      fn(j, line_no);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), source, line_no);
    }
  }
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_bytes(path)); }

const WordEntry* StoreDescription::find(std::string_view word) const {
  for (const WordEntry& w : words) {
    if (w.word == word) return &w;
  }
  return nullptr;
}

StoreDescription read_manifest(const fs::path& manifest_path) {
  const std::string where = manifest_path.string();
  json j;
  try {
    j = json::parse(read_bytes(manifest_path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid manifest JSON: ") + e.what(), where);
  }
  if (!j.is_object()) throw FormatError(where + ": manifest must be a JSON object");
  if (j.value("format", "") != kManifestFormat) {
    throw FormatError(where + ": unexpected format tag");
  }
  if (j.value("version", 0) != kManifestVersion) {
    throw FormatError(where + ": unsupported manifest version");
  }
  if (j.value("dtype", "") != "float32-le") throw FormatError(where + ": dtype must be float32-le");

  StoreDescription store;
  store.manifest_path = manifest_path;
  store.n_layers = json_size(j, "n_layers", where);
  store.hidden = json_size(j, "hidden", where);
  if (store.n_layers == 0 || store.hidden == 0) {
    throw FormatError(where + ": n_layers and hidden must be positive");
  }
  store.layer_convention = j.value("layer_convention", "");
  store.pooling = j.value("pooling", "");
  if (!j.contains("words") || !j["words"].is_array()) {
    throw FormatError(where + ": 'words' must be an array");
  }

  const fs::path root = manifest_path.parent_path();
  std::set<std::string> seen;
  for (const json& w : j["words"]) {
    WordEntry entry;
    entry.word = text::normalize_word(json_string(w, "word", where));
    if (!seen.insert(entry.word).second) {
      throw FormatError(where + ": word '" + entry.word + "' listed twice");
    }
    entry.n_occurrences = json_size(w, "n_occurrences", where + " [" + entry.word + "]");
    if (entry.n_occurrences == 0) {
      throw FormatError(where + ": word '" + entry.word + "' has no occurrences");
    }
    if (w.contains("shape")) {
      const auto shape = w["shape"].get<std::vector<std::size_t>>();
      if (shape != std::vector<std::size_t>{entry.n_occurrences, store.n_layers, store.hidden}) {
        throw FormatError(where + ": shape of '" + entry.word + "' disagrees with the manifest");
      }
    }
    entry.file = root / json_string(w, "file", where);
    entry.sha256 = json_string(w, "sha256", where);
    if (!fs::is_regular_file(entry.file)) {
      throw IoError("tensor file missing: " + entry.file.string());
    }
    const std::uintmax_t expected = entry.n_occurrences * store.n_layers * store.hidden * 4;
    const std::uintmax_t actual = fs::file_size(entry.file);
    if (actual != expected) {
      throw IntegrityError(entry.file.string() + ": " + std::to_string(actual) +
                           " bytes, expected " + std::to_string(expected));
    }
    if (sha256_file(entry.file) != entry.sha256) {
      throw IntegrityError(entry.file.string() + ": checksum mismatch");
    }
    store.words.push_back(std::move(entry));
  }
  return store;
}

FloatMatrix OccurrenceEmbeddings::layer(std::size_t layer) const {
  if (layer >= n_layers) {
    throw LookupError("layer " + std::to_string(layer) + " out of range [0, " +
                      std::to_string(n_layers) + ")");
  }
  FloatMatrix m(static_cast<Eigen::Index>(n_occurrences), static_cast<Eigen::Index>(hidden));
  for (std::size_t o = 0; o < n_occurrences; ++o) {
    const float* src = values.data() + (o * n_layers + layer) * hidden;
    std::copy(src, src + hidden, m.row(static_cast<Eigen::Index>(o)).data());
  }
  return m;
}

OccurrenceEmbeddings load_word(const StoreDescription& store, std::string_view word) {
  const WordEntry* entry = store.find(word);
  if (entry == nullptr) throw LookupError("word '" + std::string(word) + "' not in store");
  const std::string bytes = read_bytes(entry->file);
  const std::size_t expected = entry->n_occurrences * store.n_layers * store.hidden * 4;
  if (bytes.size() != expected) {
    throw IntegrityError(entry->file.string() + ": size changed since manifest was read");
  }
  OccurrenceEmbeddings occ{entry->word, entry->n_occurrences, store.n_layers, store.hidden,
                           decode_f32le(bytes)};
  require_finite(occ.values, entry->file.string());
  return occ;
}

FloatMatrix load_occurrences(const StoreDescription& store, std::string_view word,
                             std::size_t layer) {
  if (layer >= store.n_layers) {
    throw LookupError("layer " + std::to_string(layer) + " out of range [0, " +
                      std::to_string(store.n_layers) + ")");
  }
  return load_word(store, word).layer(layer);
}

void write_store(const fs::path& manifest_path, const StoreLayout& layout,
                 std::span<const OccurrenceEmbeddings> words) {
  const fs::path root = manifest_path.parent_path();
  if (!root.empty()) fs::create_directories(root);
  json manifest = {{"format", kManifestFormat},
                   {"version", kManifestVersion},
                   {"dtype", "float32-le"},
                   {"n_layers", layout.n_layers},
                   {"hidden", layout.hidden},
                   {"layer_convention", layout.layer_convention},
                   {"pooling", layout.pooling},
                   {"words", json::array()}};
  std::size_t index = 0;
  for (const OccurrenceEmbeddings& occ : words) {
    if (occ.n_layers != layout.n_layers || occ.hidden != layout.hidden ||
        occ.values.size() != occ.n_occurrences * occ.n_layers * occ.hidden) {
      throw FormatError("tensor for '" + occ.word + "' does not match the store layout");
    }
    char name[32];
    std::snprintf(name, sizeof(name), "w%06zu.f32", index++);
    const fs::path file = root / name;
    {
      std::ofstream out(file, std::ios::binary);
      if (!out) throw IoError("cannot write " + file.string());
      write_f32le(out, occ.values);
    }
    manifest["words"].push_back({{"word", occ.word},
                                 {"n_occurrences", occ.n_occurrences},
                                 {"shape", {occ.n_occurrences, occ.n_layers, occ.hidden}},
                                 {"file", name},
                                 {"sha256", sha256_file(file)}});
  }
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

std::string_view to_string(MaskVariant variant) {
  switch (variant) {
    case MaskVariant::category_context: return "category_context";
    case MaskVariant::taxonomic: return "taxonomic";
    case MaskVariant::misra: return "misra";
  }
  return "";
}

std::optional<MaskVariant> parse_mask_variant(std::string_view name) {
  for (MaskVariant v : {MaskVariant::category_context, MaskVariant::taxonomic, MaskVariant::misra}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

std::vector<MaskedPredictionRecord> parse_masked_predictions(std::istream& in,
                                                             const std::string& source) {
  std::vector<MaskedPredictionRecord> records;
  for_each_json_line(in, source, [&](const json& j, std::size_t line_no) {
    const std::string where = source + ":" + std::to_string(line_no);
    MaskedPredictionRecord r;
    r.sentence_id = json_string(j, "sentence_id", where);
    r.category = text::normalize_word(json_string(j, "category", where));
    r.exemplar = text::normalize_word(json_string(j, "exemplar", where));
    const auto variant = parse_mask_variant(json_string(j, "variant", where));
    if (!variant) throw ValidationError(where + ": unknown variant");
    r.variant = *variant;
    r.subtokens = j.at("subtokens").get<std::vector<std::string>>();
    r.probs = j.at("probs").get<std::vector<double>>();
    if (r.subtokens.empty()) throw ValidationError(where + ": empty subtoken list");
    if (r.subtokens.size() != r.probs.size()) {
      throw ValidationError(where + ": subtokens and probs differ in length");
    }
    for (double p : r.probs) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(where + ": probability " + text::format_double(p) +
                              " outside [0, 1]");
      }
    }
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<MaskedPredictionRecord> load_masked_predictions(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_masked_predictions(in, path.string());
}

void write_masked_predictions(std::span<const MaskedPredictionRecord> records,
                              std::ostream& out) {
  for (const auto& r : records) {
    json j = {{"sentence_id", r.sentence_id}, {"category", r.category},
              {"exemplar", r.exemplar},       {"variant", to_string(r.variant)},
              {"subtokens", r.subtokens},     {"probs", r.probs}};
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------

fs::path sentence_vectors_path(const fs::path& jsonl_path) {
  fs::path p = jsonl_path;
  p.replace_extension(".f32");
  return p;
}

SentenceEmbeddings load_sentence_embeddings(const fs::path& jsonl_path) {
  std::ifstream in(jsonl_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + jsonl_path.string());
  const std::string source = jsonl_path.string();

  SentenceEmbeddings out;
  std::optional<std::pair<std::size_t, std::size_t>> dims;
  for_each_json_line(in, source, [&](const json& j, std::size_t line_no) {
    const std::string where = source + ":" + std::to_string(line_no);
    SentenceEmbeddingRecord r;
    r.sentence_id = json_string(j, "sentence_id", where);
    r.category = text::normalize_word(json_string(j, "category", where));
    if (j.contains("substituted_exemplar") && !j["substituted_exemplar"].is_null()) {
      r.substituted_exemplar = text::normalize_word(json_string(j, "substituted_exemplar", where));
    }
    const std::pair<std::size_t, std::size_t> d{json_size(j, "n_layers", where),
                                                json_size(j, "hidden", where)};
    if (d.first == 0 || d.second == 0) throw FormatError(where + ": empty vector shape");
    if (dims && *dims != d) throw FormatError(where + ": vector shape differs from earlier records");
    dims = d;
    out.records.push_back(std::move(r));
  });
  if (!dims) throw ParseError("no sentence embedding records", source);
  out.n_layers = dims->first;
  out.hidden = dims->second;

  const fs::path vectors_path = sentence_vectors_path(jsonl_path);
  if (!fs::is_regular_file(vectors_path)) throw IoError("missing " + vectors_path.string());
  const std::string bytes = read_bytes(vectors_path);
  const std::size_t per_record = out.n_layers * out.hidden;
  if (bytes.size() != out.records.size() * per_record * 4) {
    throw IntegrityError(vectors_path.string() + ": " + std::to_string(bytes.size()) +
                         " bytes, expected " +
                         std::to_string(out.records.size() * per_record * 4));
  }
  const std::vector<float> values = decode_f32le(bytes);
  require_finite(values, vectors_path.string());
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    out.records[i].vectors = Eigen::Map<const FloatMatrix>(
        values.data() + i * per_record, static_cast<Eigen::Index>(out.n_layers),
        static_cast<Eigen::Index>(out.hidden));
  }

  std::set<std::pair<std::string, std::string>> originals;
  for (const auto& r : out.records) {
    if (!r.substituted_exemplar) originals.emplace(r.category, r.sentence_id);
  }
  for (const auto& r : out.records) {
    if (r.substituted_exemplar && !originals.contains({r.category, r.sentence_id})) {
      throw ValidationError(source + ": substituted record for sentence '" + r.sentence_id +
                            "' has no original");
    }
  }
  return out;
}

void write_sentence_embeddings(const fs::path& jsonl_path, const SentenceEmbeddings& emb) {
  std::ofstream meta(jsonl_path, std::ios::binary);
  std::ofstream vec(sentence_vectors_path(jsonl_path), std::ios::binary);
  if (!meta || !vec) throw IoError("cannot write " + jsonl_path.string());
  for (const auto& r : emb.records) {
    if (static_cast<std::size_t>(r.vectors.rows()) != emb.n_layers ||
        static_cast<std::size_t>(r.vectors.cols()) != emb.hidden) {
      throw FormatError("sentence vector shape disagrees with the declared layout");
    }
    json j = {{"sentence_id", r.sentence_id},
              {"category", r.category},
              {"substituted_exemplar", r.substituted_exemplar ? json(*r.substituted_exemplar) : json()},
              {"n_layers", emb.n_layers},
              {"hidden", emb.hidden}};
    meta << j.dump() << '\n';
    write_f32le(vec, std::span<const float>(r.vectors.data(), static_cast<std::size_t>(r.vectors.size())));
  }
}

// ---------------------------------------------------------------------------

WordCounts parse_word_counts(std::istream& in, const std::string& source) {
  WordCounts counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    double count = 0.0;
    if (fields.size() != 2 || !text::parse_double(fields[1], count)) {
      throw ParseError("expected word<TAB>count", source, line_no);
    }
    if (!std::isfinite(count) || count < 0.0) {
      throw ParseError("count must be finite and non-negative", source, line_no);
    }
    if (!counts.emplace(text::normalize_word(fields[0]), count).second) {
      throw ParseError("duplicate word '" + fields[0] + "'", source, line_no);
    }
  }
  return counts;
}

WordCounts load_word_counts(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_word_counts(in, path.string());
}

void write_word_counts(const WordCounts& counts, std::ostream& out) {
  for (const auto& [word, count] : counts) out << word << '\t' << text::format_double(count) << '\n';
}

CooccurrenceCounts parse_cooccurrence(std::istream& in, const std::string& source) {
  CooccurrenceCounts out;
  std::unordered_map<std::string, int> word_ids, context_ids;
  std::set<std::pair<int, int>> seen;
  std::vector<Eigen::Triplet<double>> triplets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    double count = 0.0;
    if (fields.size() != 3 || !text::parse_double(fields[2], count)) {
      throw ParseError("expected word<TAB>context<TAB>count", source, line_no);
    }
    if (!std::isfinite(count) || count < 0.0) {
      throw ParseError("count must be finite and non-negative", source, line_no);
    }
    const std::string w = text::normalize_word(fields[0]);
    const std::string c = text::normalize_word(fields[1]);
    auto [wi, w_new] = word_ids.try_emplace(w, static_cast<int>(out.words.size()));
    if (w_new) out.words.push_back(w);
    auto [ci, c_new] = context_ids.try_emplace(c, static_cast<int>(out.contexts.size()));
    if (c_new) out.contexts.push_back(c);
    if (!seen.emplace(wi->second, ci->second).second) {
      throw ParseError("duplicate pair (" + w + ", " + c + ")", source, line_no);
    }
    if (count > 0.0) triplets.emplace_back(wi->second, ci->second, count);
  }
  out.counts.resize(static_cast<Eigen::Index>(out.words.size()),
                    static_cast<Eigen::Index>(out.contexts.size()));
  out.counts.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

CooccurrenceCounts load_cooccurrence(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_cooccurrence(in, path.string());
}

// ---------------------------------------------------------------------------

bool StaticVectors::contains(std::string_view word) const {
  return index_.contains(std::string(word));
}

Eigen::VectorXd StaticVectors::get(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) throw LookupError("no vector for '" + std::string(word) + "'");
  return vectors_[it->second];
}

void StaticVectors::add(std::string word, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw FormatError("vector for '" + word + "' has dimension " + std::to_string(v.size()) +
                      ", expected " + std::to_string(dim_));
  }
  if (!v.allFinite()) throw FormatError("vector for '" + word + "' has non-finite values");
  if (index_.contains(word)) throw ValidationError("duplicate vector for '" + word + "'");
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  vectors_.push_back(v);
}

StaticVectors parse_static_vectors(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    header = text::split_ws(line);
  }
  std::size_t n_words = 0, dim = 0;
  if (header.size() != 2 || !text::parse_size(header[0], n_words) ||
      !text::parse_size(header[1], dim) || dim == 0) {
    throw ParseError("expected header 'n_words dim'", source, line_no);
  }
  StaticVectors vectors(dim);
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = text::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != dim + 1) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(dim) + " values, got " + std::to_string(tok.size() - 1));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      if (!text::parse_double(tok[i + 1], v[static_cast<Eigen::Index>(i)])) {
        throw ParseError("bad number '" + tok[i + 1] + "'", source, line_no);
      }
    }
    try {
      vectors.add(text::normalize_word(tok[0]), v);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), source, line_no);
    }
  }
  if (vectors.size() != n_words) {
    throw FormatError(source + ": header declares " + std::to_string(n_words) + " words, found " +
                      std::to_string(vectors.size()));
  }
  return vectors;
}

StaticVectors load_static_vectors(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_static_vectors(in, path.string());
}

void write_static_vectors(const StaticVectors& vectors, std::ostream& out) {
  out << vectors.size() << ' ' << vectors.dim() << '\n';
  for (const std::string& w : vectors.words()) {
    out << w;
    const Eigen::VectorXd v = vectors.get(w);
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << text::format_double(v[i]);
    out << '\n';
  }
}

}  // namespace typicality::embedstore
