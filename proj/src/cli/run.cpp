#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "common.hpp"
#include "typicality/cli.hpp"
#include "typicality/embedstore.hpp"
#include "typicality/eval.hpp"
#include "typicality/lmmethods.hpp"
#include "typicality/text.hpp"
#include "typicality/vecmethods.hpp"

#ifndef TYPICALITY_VERSION
#define TYPICALITY_VERSION "0.0.0"
#endif

namespace typicality::cli {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using nlohmann::json;

const std::vector<std::string> kStageOrder = {"prep", "wordnet",  "embed",  "lm",
                                              "baseline", "eval", "ensemble", "analyze"};

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"run", {"stages", "output_dir", "workers"}},
    {"dataset", {"path", "format", "direction", "name", "min_exemplars", "vocab"}},
    {"wordnet", {"dir", "ic", "counts", "methods", "lookup", "virtual_root"}},
    {"embed", {"store", "methods", "layer", "max_k", "seed"}},
    {"lm", {"mlm", "taxo", "misra", "sentemb", "sentemb_layer"}},
    {"baseline", {"methods", "counts", "vectors", "cooccurrence", "svd_dim", "svd_seed"}},
    {"ensemble", {"members"}},
    {"analyze", {"complementarity", "polysemy", "agreement", "agreement_format", "agreement_direction"}},
};

// Reads typed values out of the flattened configuration.
class Settings {
 public:
  Settings(std::map<std::string, std::string> values, fs::path base)
      : values_(std::move(values)), base_(std::move(base)) {}

  std::optional<std::string> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }
  std::string require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError("missing required setting " + key);
    return *v;
  }
  std::optional<fs::path> path(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return resolve(*v);
  }
  fs::path resolve(const std::string& v) const {
    fs::path p(v);
    return p.is_absolute() ? p : base_ / p;
  }
  std::size_t size(const std::string& key, std::size_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    std::size_t out = 0;
    if (!text::parse_size(*v, out)) throw ConfigError(key + " must be a non-negative integer");
    return out;
  }
  std::optional<std::uint64_t> seed(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    std::size_t out = 0;
    if (!text::parse_size(*v, out)) throw ConfigError(key + " must be a non-negative integer");
    return static_cast<std::uint64_t>(out);
  }
  bool flag(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    throw ConfigError(key + " must be true or false");
  }

 private:
  std::map<std::string, std::string> values_;
  fs::path base_;
};

void require_exists(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) throw ConfigError(what + " not found: " + p.string());
}

std::pair<std::string, std::string> parse_method_pair(const std::string& item,
                                                      const std::string& key) {
  const auto names = detail::split_list(item);
  if (names.size() != 2) throw ConfigError(key + " expects pairs of two method names");
  return {names[0], names[1]};
}

std::vector<std::string> split_groups(const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& g : text::split(value, ';')) {
    if (!text::trim(g).empty()) out.emplace_back(text::trim(g));
  }
  return out;
}

bool has_stage(const RunConfig& c, std::string_view stage) {
  return std::find(c.stages.begin(), c.stages.end(), stage) != c.stages.end();
}

// Methods the scoring stages of `c` will produce, in production order.
std::vector<std::string> planned_methods(const RunConfig& c) {
  std::vector<std::string> out;
  if (has_stage(c, "wordnet")) out.insert(out.end(), c.wordnet_methods.begin(), c.wordnet_methods.end());
  if (has_stage(c, "embed")) {
    for (const auto& m : c.embed_methods) out.push_back(detail::embed_method_name(m));
  }
  if (has_stage(c, "lm")) {
    if (c.mlm) out.emplace_back("BERT-MLM");
    if (c.taxo) out.emplace_back("BERT-MLM-Taxo");
    if (c.misra) out.emplace_back("Misra");
    if (c.sentemb) out.emplace_back("BERT-SentEmb");
  }
  if (has_stage(c, "baseline")) {
    for (const auto& m : c.baseline_methods) out.push_back(detail::baseline_method_name(m));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : std::string(sep)) + p;
  return out;
}

}  // namespace

std::string method_slug(std::string_view method) {
  std::string out;
  bool dash = false;
  for (unsigned char ch : method) {
    if (std::isalnum(ch)) {
      if (dash && !out.empty()) out.push_back('-');
      out.push_back(static_cast<char>(std::tolower(ch)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out.empty() ? "method" : out;
}

StageError::StageError(std::string stage, const std::exception& cause)
    : Error("stage '" + stage + "': " + cause.what()),
      stage_(std::move(stage)),
      cause_type_(detail::error_type(cause)),
      config_error_(dynamic_cast<const ConfigError*>(&cause) != nullptr ||
                    dynamic_cast<const std::invalid_argument*>(&cause) != nullptr) {}

RunConfig load_run_config(const fs::path& path, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }

  std::map<std::string, std::string> flat;
  for (const auto& [section, body] : tree) {
    if (!kKnownKeys.contains(section)) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!kKnownKeys.at(section).contains(key)) {
        throw ConfigError("unknown setting " + section + "." + key);
      }
      flat[section + "." + key] = std::string(text::trim(value.data()));
    }
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override must look like section.key=value: " + o);
    }
    const std::string section = o.substr(0, dot);
    const std::string key = o.substr(dot + 1, eq - dot - 1);
    if (!kKnownKeys.contains(section) || !kKnownKeys.at(section).contains(key)) {
      throw ConfigError("unknown setting " + section + "." + key);
    }
    flat[section + "." + key] = std::string(text::trim(o.substr(eq + 1)));
  }

  RunConfig c;
  c.base_dir = fs::absolute(path).parent_path();
  for (const auto& [k, v] : flat) c.canonical += k + "=" + v + "\n";
  const Settings s(flat, c.base_dir);

  const auto listed = detail::split_list(s.require("run.stages"));
  for (const auto& st : listed) {
    if (std::find(kStageOrder.begin(), kStageOrder.end(), st) == kStageOrder.end()) {
      throw ConfigError("unknown stage '" + st + "'");
    }
  }
  for (const auto& st : kStageOrder) {
    if (std::find(listed.begin(), listed.end(), st) != listed.end()) c.stages.push_back(st);
  }
  c.output_dir = s.resolve(s.require("run.output_dir"));
  c.workers = s.size("run.workers", 1);
  if (c.workers == 0) throw ConfigError("run.workers must be at least 1");

  c.dataset = s.resolve(s.require("dataset.path"));
  require_exists(c.dataset, "dataset");
  c.load.format = detail::parse_format(s.get("dataset.format").value_or("csv"));
  c.load.direction = detail::parse_direction(s.get("dataset.direction").value_or("higher"));
  c.load.name = s.get("dataset.name");
  c.min_exemplars = s.size("dataset.min_exemplars", 1);
  if (c.min_exemplars == 0) throw ConfigError("dataset.min_exemplars must be at least 1");
  for (const auto& v : detail::split_list(s.get("dataset.vocab").value_or(""))) {
    c.vocab.push_back(s.resolve(v));
    require_exists(c.vocab.back(), "vocabulary file");
  }

  c.wordnet_dir = s.path("wordnet.dir");
  c.ic_table = s.path("wordnet.ic");
  c.ic_counts = s.path("wordnet.counts");
  c.wordnet_methods = detail::split_list(s.get("wordnet.methods").value_or("WNIC"));
  c.lookup = detail::parse_lookup(s.get("wordnet.lookup").value_or("exact"));
  c.virtual_root = s.flag("wordnet.virtual_root", true);

  c.store = s.path("embed.store");
  c.embed_methods = detail::split_list(s.get("embed.methods").value_or("mpro"));
  c.layer = s.size("embed.layer", 10);
  c.max_k = static_cast<int>(s.size("embed.max_k", 15));
  c.seed = s.seed("embed.seed");

  c.mlm = s.path("lm.mlm");
  c.taxo = s.path("lm.taxo");
  c.misra = s.path("lm.misra");
  c.sentemb = s.path("lm.sentemb");
  c.sentemb_layer = s.size("lm.sentemb_layer", 12);

  c.baseline_methods = detail::split_list(s.get("baseline.methods").value_or(""));
  c.counts = s.path("baseline.counts");
  c.vectors = s.path("baseline.vectors");
  c.cooccurrence = s.path("baseline.cooccurrence");
  c.svd_dim = static_cast<int>(s.size("baseline.svd_dim", 300));
  c.svd_seed = s.seed("baseline.svd_seed");

  for (const auto& g : split_groups(s.get("ensemble.members").value_or(""))) {
    c.ensembles.push_back(detail::split_list(g));
    if (c.ensembles.back().size() < 2) {
      throw ConfigError("each ensemble needs at least two members");
    }
  }
  if (auto v = s.get("analyze.complementarity")) {
    c.complementarity = parse_method_pair(*v, "analyze.complementarity");
  }
  for (const auto& g : split_groups(s.get("analyze.polysemy").value_or(""))) {
    c.polysemy.push_back(parse_method_pair(g, "analyze.polysemy"));
  }
  c.agreement_with = s.path("analyze.agreement");
  c.agreement_load = c.load;
  c.agreement_load.name.reset();
  if (auto v = s.get("analyze.agreement_format")) c.agreement_load.format = detail::parse_format(*v);
  if (auto v = s.get("analyze.agreement_direction")) {
    c.agreement_load.direction = detail::parse_direction(*v);
  }

  // Stage requirements, checked before anything runs.
  if (has_stage(c, "wordnet") || (has_stage(c, "analyze") && !c.polysemy.empty())) {
    if (!c.wordnet_dir) throw ConfigError("wordnet.dir is required");
    require_exists(*c.wordnet_dir, "WordNet directory");
  }
  if (has_stage(c, "wordnet")) {
    bool needs_ic = false;
    for (const auto& m : c.wordnet_methods) {
      wordnet::Measure measure{};
      wordnet::WsdMode wsd{};
      if (!detail::parse_wordnet_method(m, measure, wsd)) {
        throw ConfigError("unknown WordNet method '" + m + "'");
      }
      needs_ic = needs_ic || measure == wordnet::Measure::lin;
    }
    if (needs_ic && c.ic_table.has_value() == c.ic_counts.has_value()) {
      throw ConfigError("lin methods need exactly one of wordnet.ic or wordnet.counts");
    }
    if (c.ic_table) require_exists(*c.ic_table, "IC table");
    if (c.ic_counts) require_exists(*c.ic_counts, "IC word counts");
  }
  if (has_stage(c, "embed")) {
    if (!c.store) throw ConfigError("embed.store is required");
    require_exists(*c.store, "embedding store");
    for (const auto& m : c.embed_methods) {
      if (detail::embed_method_name(m) == "BERT-MPro" && !c.seed) {
        throw ConfigError("embed.seed must be set explicitly for mpro");
      }
    }
    if (c.max_k < 1) throw ConfigError("embed.max_k must be at least 1");
  }
  if (has_stage(c, "lm")) {
    if (!c.mlm && !c.taxo && !c.misra && !c.sentemb) {
      throw ConfigError("the lm stage needs at least one of lm.mlm, lm.taxo, lm.misra, lm.sentemb");
    }
    for (const auto* p : {&c.mlm, &c.taxo, &c.misra}) {
      if (*p) require_exists(**p, "masked prediction records");
    }
    if (c.sentemb) {
      require_exists(*c.sentemb, "sentence embedding records");
      require_exists(embedstore::sentence_vectors_path(*c.sentemb), "sentence embedding vectors");
    }
  }
  if (has_stage(c, "baseline")) {
    if (c.baseline_methods.empty()) throw ConfigError("baseline.methods is required");
    for (const auto& m : c.baseline_methods) {
      const std::string name = detail::baseline_method_name(m);
      if (name == "Frequency") {
        if (!c.counts) throw ConfigError("baseline.counts is required for frequency");
        require_exists(*c.counts, "word counts");
      } else if (name == "W2V") {
        if (!c.vectors) throw ConfigError("baseline.vectors is required for static");
        require_exists(*c.vectors, "static vectors");
      } else {
        if (!c.cooccurrence) throw ConfigError("baseline.cooccurrence is required for ppmi-svd");
        require_exists(*c.cooccurrence, "co-occurrence counts");
        if (!c.svd_seed) throw ConfigError("baseline.svd_seed must be set explicitly for ppmi-svd");
        if (c.svd_dim < 1) throw ConfigError("baseline.svd_dim must be at least 1");
      }
    }
  }

  std::vector<std::string> available = planned_methods(c);
  if (has_stage(c, "ensemble")) {
    if (c.ensembles.empty()) throw ConfigError("ensemble.members is required");
    for (const auto& members : c.ensembles) {
      for (const auto& m : members) {
        if (std::find(available.begin(), available.end(), m) == available.end()) {
          throw ConfigError("ensemble member '" + m + "' is not produced by this run");
        }
      }
    }
    for (const auto& members : c.ensembles) available.push_back(join(members, " + "));
  }
  if (has_stage(c, "analyze")) {
    if (!c.complementarity && c.polysemy.empty() && !c.agreement_with) {
      throw ConfigError("the analyze stage needs at least one analysis");
    }
    std::vector<std::string> wanted;
    if (c.complementarity) wanted.insert(wanted.end(), {c.complementarity->first, c.complementarity->second});
    for (const auto& [a, b] : c.polysemy) wanted.insert(wanted.end(), {a, b});
    for (const auto& m : wanted) {
      if (std::find(available.begin(), available.end(), m) == available.end()) {
        throw ConfigError("analysis method '" + m + "' is not produced by this run");
      }
    }
    if (c.agreement_with) require_exists(*c.agreement_with, "agreement dataset");
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

class Runner {
 public:
  Runner(const RunConfig& c, std::ostream& log) : c_(c), log_(log) {}

  void run() {
    fs::create_directories(c_.output_dir);
    if (!has_stage(c_, "prep")) timed("load", [&] { load_dataset(); });
    for (const std::string& stage : c_.stages) {
      timed(stage, [&] {
        if (stage == "prep") prep();
        else if (stage == "wordnet") wordnet_stage();
        else if (stage == "embed") embed_stage();
        else if (stage == "lm") lm_stage();
        else if (stage == "baseline") baseline_stage();
        else if (stage == "eval") eval_stage();
        else if (stage == "ensemble") ensemble_stage();
        else if (stage == "analyze") analyze_stage();
      });
    }
    write_summary();
  }

 private:
  template <typename Fn>
  void timed(const std::string& stage, Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      throw StageError(stage, e);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    stages_.push_back({{"name", stage}, {"seconds", elapsed.count()}});
  }

  void emit(const std::string& relative, const std::string& contents) {
    detail::write_text_file(c_.output_dir / relative, contents);
    if (std::find(outputs_.begin(), outputs_.end(), relative) == outputs_.end()) {
      outputs_.push_back(relative);
    }
  }

  void load_dataset() { ds_ = dataset::load_norms(c_.dataset, c_.load); }

  void prep() {
    load_dataset();
    std::vector<dataset::VocabFilter> filters;
    for (const auto& v : c_.vocab) filters.push_back(dataset::VocabFilter::from_file(v));
    const std::size_t before = ds_->total_exemplars();
    ds_ = dataset::preprocess(*ds_, filters, c_.min_exemplars);
    spdlog::info("prep: kept {} of {} exemplars in {} categories", ds_->total_exemplars(), before,
                 ds_->categories().size());
    std::ostringstream out;
    dataset::write_norms(*ds_, out);
    emit("dataset.csv", out.str());
  }

  const wordnet::SynsetGraph& graph() {
    if (!graph_) graph_ = std::make_unique<wordnet::SynsetGraph>(wordnet::parse_wordnet(*c_.wordnet_dir));
    return *graph_;
  }

  void add_table(ScoreTable table) {
    if (!table.unscored().empty()) {
      spdlog::warn("{}: {} pairs unscored", table.method(), table.unscored().size());
    }
    std::ostringstream out;
    write_score_csv(std::vector<ScoreTable>{table}, out);
    emit("scores/" + method_slug(table.method()) + ".csv", out.str());
    tables_.push_back(std::move(table));
  }

  const ScoreTable& table(const std::string& method) const {
    for (const auto& t : tables_) {
      if (t.method() == method) return t;
    }
    throw ConfigError("no score table for method '" + method + "'");
  }

  void wordnet_stage() {
    const auto& g = graph();
    std::optional<wordnet::ICTable> ic;
    if (c_.ic_table) {
      std::ifstream in(*c_.ic_table, std::ios::binary);
      if (!in) throw IoError("cannot open " + c_.ic_table->string());
      ic = wordnet::ICTable::read_tsv(g, in, c_.ic_table->string());
    } else if (c_.ic_counts) {
      std::string warning;
      ic = wordnet::compute_ic(g, embedstore::load_word_counts(*c_.ic_counts), &warning);
      if (!warning.empty()) spdlog::warn("{}", warning);
      std::ostringstream out;
      ic->write_tsv(g, out);
      emit("ic.tsv", out.str());
    }
    for (const auto& m : c_.wordnet_methods) {
      wordnet::TypicalityOptions options;
      detail::parse_wordnet_method(m, options.measure, options.wsd);
      options.lookup = c_.lookup;
      options.path.virtual_root = c_.virtual_root;
      add_table(wordnet::wn_typicality(g, ic ? &*ic : nullptr, options, *ds_));
    }
  }

  void embed_stage() {
    const auto store = embedstore::read_manifest(*c_.store);
    vec::EmbeddingOptions options{c_.layer, c_.max_k, c_.seed.value_or(0), c_.workers};
    for (const auto& m : c_.embed_methods) {
      if (detail::embed_method_name(m) == "BERT-Avg") {
        add_table(vec::bert_avg_scores(*ds_, store, options));
      } else {
        add_table(vec::bert_mpro_scores(*ds_, store, options));
      }
    }
  }

  void lm_stage() {
    using embedstore::MaskVariant;
    if (c_.mlm) {
      const auto records = embedstore::load_masked_predictions(*c_.mlm);
      add_table(lm::mlm_typicality(records, MaskVariant::category_context, *ds_));
    }
    if (c_.taxo) {
      const auto records = embedstore::load_masked_predictions(*c_.taxo);
      add_table(lm::mlm_typicality(records, MaskVariant::taxonomic, *ds_));
    }
    if (c_.misra) {
      const auto records = embedstore::load_masked_predictions(*c_.misra);
      add_table(lm::misra_typicality(records, *ds_));
    }
    if (c_.sentemb) {
      const auto emb = embedstore::load_sentence_embeddings(*c_.sentemb);
      add_table(lm::sentemb_typicality(emb, c_.sentemb_layer, *ds_));
    }
  }

  void baseline_stage() {
    for (const auto& m : c_.baseline_methods) {
      const std::string name = detail::baseline_method_name(m);
      if (name == "Frequency") {
        add_table(eval::frequency_scores(*ds_, embedstore::load_word_counts(*c_.counts)));
      } else if (name == "W2V") {
        add_table(vec::static_cosine_scores(*ds_, embedstore::load_static_vectors(*c_.vectors), name));
      } else {
        const auto cooc = embedstore::load_cooccurrence(*c_.cooccurrence);
        add_table(vec::static_cosine_scores(*ds_, vec::ppmi_svd_vectors(cooc, c_.svd_dim, *c_.svd_seed),
                                            name));
      }
    }
  }

  void eval_stage() {
    reports_.clear();
    for (const auto& t : tables_) reports_.push_back(eval::evaluate(t, *ds_));
    evaluated_ = true;
    write_reports();
  }

  void write_reports() {
    std::ostringstream csv, md;
    eval::write_eval_csv(reports_, csv);
    emit("eval.csv", csv.str());
    eval::write_category_markdown(reports_, md);
    md << '\n';
    const eval::DatasetReports column{ds_->name(), reports_};
    eval::write_summary_markdown(std::span(&column, 1), md);
    emit("eval.md", md.str());
  }

  void ensemble_stage() {
    for (const auto& members : c_.ensembles) {
      std::vector<ScoreTable> inputs;
      for (const auto& m : members) inputs.push_back(table(m));
      std::vector<eval::FlaggedCategory> flagged;
      ScoreTable ens = eval::zscore_ensemble(inputs, &flagged);
      for (const auto& f : flagged) {
        spdlog::warn("ensemble: {} has constant scores in '{}', contributing 0", f.method, f.category);
      }
      if (evaluated_) reports_.push_back(eval::evaluate(ens, *ds_));
      add_table(std::move(ens));
    }
    if (evaluated_) write_reports();
  }

  void analyze_stage() {
    if (c_.complementarity) {
      const auto report = eval::complementarity(table(c_.complementarity->first),
                                                table(c_.complementarity->second), *ds_);
      std::ostringstream csv, md;
      eval::write_complementarity_csv(report, csv);
      eval::write_complementarity_markdown(report, md);
      emit("complementarity.csv", csv.str());
      emit("complementarity.md", md.str());
    }
    if (!c_.polysemy.empty()) {
      std::vector<eval::ReportPair> pairs;
      for (const auto& [with, without] : c_.polysemy) {
        pairs.push_back({eval::evaluate(table(with), *ds_), eval::evaluate(table(without), *ds_)});
      }
      std::ostringstream csv;
      eval::write_polysemy_csv(eval::polysemy_gain_report(*ds_, pairs, graph()), csv);
      emit("polysemy.csv", csv.str());
    }
    if (c_.agreement_with) {
      const auto other = dataset::load_norms(*c_.agreement_with, c_.agreement_load);
      std::ostringstream csv;
      eval::write_agreement_csv(dataset::inter_dataset_agreement(*ds_, other), csv);
      emit("agreement.csv", csv.str());
    }
  }

  void write_summary() {
    json tables = json::array();
    for (const auto& t : tables_) {
      tables.push_back({{"method", t.method()},
                        {"scored", t.scores().size()},
                        {"unscored", t.unscored().size()}});
    }
    json summary = {{"version", TYPICALITY_VERSION},
                    {"config_hash", embedstore::sha256_hex(c_.canonical)},
                    {"workers", c_.workers},
                    {"dataset",
                     {{"name", ds_->name()},
                      {"categories", ds_->categories().size()},
                      {"exemplars", ds_->total_exemplars()}}},
                    {"stages", stages_},
                    {"tables", tables},
                    {"outputs", outputs_}};
    detail::write_text_file(c_.output_dir / "run_summary.json", summary.dump(2) + "\n");
    log_ << "wrote " << (c_.output_dir / "run_summary.json").string() << '\n';
  }

  const RunConfig& c_;
  std::ostream& log_;
  std::optional<dataset::TypicalityDataset> ds_;
  std::unique_ptr<wordnet::SynsetGraph> graph_;
  std::vector<ScoreTable> tables_;
  std::vector<eval::EvalReport> reports_;
  bool evaluated_ = false;
  json stages_ = json::array();
  std::vector<std::string> outputs_;
};

}  // namespace

void execute(const RunConfig& config, std::ostream& log) { Runner(config, log).run(); }

}  // namespace typicality::cli
