#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "common.hpp"
#include "typicality/cli.hpp"
#include "typicality/embedstore.hpp"
#include "typicality/eval.hpp"
#include "typicality/lmmethods.hpp"
#include "typicality/vecmethods.hpp"

#ifndef TYPICALITY_VERSION
#define TYPICALITY_VERSION "0.0.0"
#endif

namespace typicality::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void report_error(std::ostream& err, const std::string& type, const std::string& message,
                  int code, const std::string& stage = "") {
  json j = {{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}};
  if (!stage.empty()) j["error"]["stage"] = stage;
  err << j.dump() << '\n';
}

// "-" means the command's standard output.
void write_output(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path == "-") {
    out << contents;
  } else {
    detail::write_text_file(path, contents);
  }
}

dataset::TypicalityDataset load_dataset(const std::string& path) {
  return dataset::load_norms(path);
}

std::vector<ScoreTable> load_tables(const std::vector<std::string>& paths) {
  std::vector<ScoreTable> tables;
  for (const auto& p : paths) {
    for (auto& t : read_score_csv(fs::path(p))) tables.push_back(std::move(t));
  }
  return tables;
}

std::string tables_csv(const std::vector<ScoreTable>& tables) {
  std::ostringstream s;
  write_score_csv(tables, s);
  return s.str();
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw ConfigError("--seed must be given explicitly for " + what);
  return *seed;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // Warnings go to the error stream as plain lines; stdout stays clean for
  // data written with `--output -`.
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("typicality", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  spdlog::set_default_logger(logger);

  CLI::App app{"Typicality prediction and evaluation for category-exemplar norms", "typicality"};
  app.set_version_flag("--version", TYPICALITY_VERSION);
  app.require_subcommand(1);

  std::function<void()> action;
  std::string stage_name;

  // dataset prep
  auto* ds_cmd = app.add_subcommand("dataset", "Norm dataset utilities")->require_subcommand(1);
  struct {
    std::string input, format = "csv", direction = "higher", name, output;
    std::size_t min_exemplars = 1;
    std::vector<std::string> vocab;
  } prep;
  auto* prep_cmd = ds_cmd->add_subcommand("prep", "Filter a norm file for evaluation");
  prep_cmd->add_option("--input", prep.input, "Norm file with category, exemplar, score columns")
      ->required()->check(CLI::ExistingFile);
  prep_cmd->add_option("--format", prep.format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  prep_cmd->add_option("--direction", prep.direction, "Whether higher or lower raw scores are more typical")
      ->check(CLI::IsMember({"higher", "lower"}));
  prep_cmd->add_option("--name", prep.name, "Dataset name (default: file stem)");
  prep_cmd->add_option("--min-exemplars", prep.min_exemplars, "Drop smaller categories")
      ->check(CLI::PositiveNumber);
  prep_cmd->add_option("--vocab", prep.vocab, "Vocabulary files; exemplars must be in all")
      ->check(CLI::ExistingFile);
  prep_cmd->add_option("--output", prep.output, "Output CSV ('-' for stdout)")->required();
  prep_cmd->callback([&] {
    action = [&] {
      dataset::LoadOptions options;
      options.format = detail::parse_format(prep.format);
      options.direction = detail::parse_direction(prep.direction);
      if (!prep.name.empty()) options.name = prep.name;
      const auto raw = dataset::load_norms(prep.input, options);
      std::vector<dataset::VocabFilter> filters;
      for (const auto& v : prep.vocab) filters.push_back(dataset::VocabFilter::from_file(v));
      std::ostringstream s;
      dataset::write_norms(dataset::preprocess(raw, filters, prep.min_exemplars), s);
      write_output(prep.output, s.str(), out);
    };
  });

  // wordnet score / ic
  auto* wn_cmd = app.add_subcommand("wordnet", "WordNet similarity methods")->require_subcommand(1);
  struct {
    std::string dir, dataset, method = "WNIC", ic, counts, lookup = "exact", output;
    bool no_virtual_root = false;
  } wn;
  auto* wn_score = wn_cmd->add_subcommand("score", "Score pairs with WNIC / WNSP and their noWSD variants");
  wn_score->add_option("--wordnet", wn.dir, "WordNet dict directory")->required()->check(CLI::ExistingDirectory);
  wn_score->add_option("--dataset", wn.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  wn_score->add_option("--method", wn.method, "WNIC, WNIC-noWSD, WNSP or WNSP-noWSD");
  wn_score->add_option("--ic", wn.ic, "IC table TSV")->check(CLI::ExistingFile);
  wn_score->add_option("--counts", wn.counts, "Word counts TSV to derive IC from")->check(CLI::ExistingFile);
  wn_score->add_option("--lookup", wn.lookup, "exact or morphological lemma lookup")
      ->check(CLI::IsMember({"exact", "morphological"}));
  wn_score->add_flag("--no-virtual-root", wn.no_virtual_root, "Do not connect noun roots for path lengths");
  wn_score->add_option("--output", wn.output, "Score CSV ('-' for stdout)")->required();
  wn_score->callback([&] {
    action = [&] {
      wordnet::TypicalityOptions options;
      if (!detail::parse_wordnet_method(wn.method, options.measure, options.wsd)) {
        throw ConfigError("unknown WordNet method '" + wn.method + "'");
      }
      options.lookup = detail::parse_lookup(wn.lookup);
      options.path.virtual_root = !wn.no_virtual_root;
      const auto g = wordnet::parse_wordnet(wn.dir);
      std::optional<wordnet::ICTable> ic;
      if (options.measure == wordnet::Measure::lin) {
        if (wn.ic.empty() == wn.counts.empty()) {
          throw ConfigError("lin methods need exactly one of --ic or --counts");
        }
        if (!wn.ic.empty()) {
          std::ifstream in(wn.ic, std::ios::binary);
          ic = wordnet::ICTable::read_tsv(g, in, wn.ic);
        } else {
          std::string warning;
          ic = wordnet::compute_ic(g, embedstore::load_word_counts(wn.counts), &warning);
          if (!warning.empty()) spdlog::warn("{}", warning);
        }
      }
      const auto table = wordnet::wn_typicality(g, ic ? &*ic : nullptr, options, load_dataset(wn.dataset));
      write_output(wn.output, tables_csv({table}), out);
    };
  });
  auto* wn_ic = wn_cmd->add_subcommand("ic", "Compute an IC table from word counts");
  wn_ic->add_option("--wordnet", wn.dir, "WordNet dict directory")->required()->check(CLI::ExistingDirectory);
  wn_ic->add_option("--counts", wn.counts, "Word counts TSV")->required()->check(CLI::ExistingFile);
  wn_ic->add_option("--output", wn.output, "IC TSV ('-' for stdout)")->required();
  wn_ic->callback([&] {
    action = [&] {
      const auto g = wordnet::parse_wordnet(wn.dir);
      std::string warning;
      const auto ic = wordnet::compute_ic(g, embedstore::load_word_counts(wn.counts), &warning);
      if (!warning.empty()) spdlog::warn("{}", warning);
      std::ostringstream s;
      ic.write_tsv(g, s);
      write_output(wn.output, s.str(), out);
    };
  });

  // embed score
  auto* embed_cmd = app.add_subcommand("embed", "Contextual embedding methods")->require_subcommand(1);
  struct {
    std::string store, dataset, method = "mpro", output;
    std::size_t layer = 10, workers = 1;
    int max_k = 15;
    std::optional<std::uint64_t> seed;
  } em;
  auto* embed_score = embed_cmd->add_subcommand("score", "Score pairs with BERT-Avg or BERT-MPro");
  embed_score->add_option("--store", em.store, "Embedding store manifest")->required()->check(CLI::ExistingFile);
  embed_score->add_option("--dataset", em.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  embed_score->add_option("--method", em.method, "avg or mpro")->check(CLI::IsMember({"avg", "mpro"}));
  embed_score->add_option("--layer", em.layer, "Layer (0 = embedding layer)");
  embed_score->add_option("--max-k", em.max_k, "Largest k for the prototype union")->check(CLI::PositiveNumber);
  embed_score->add_option("--seed", em.seed, "k-means seed (required for mpro)");
  embed_score->add_option("--workers", em.workers, "Worker threads")->check(CLI::PositiveNumber);
  embed_score->add_option("--output", em.output, "Score CSV ('-' for stdout)")->required();
  embed_score->callback([&] {
    action = [&] {
      const auto store = embedstore::read_manifest(em.store);
      const auto ds = load_dataset(em.dataset);
      vec::EmbeddingOptions options{em.layer, em.max_k, 0, em.workers};
      ScoreTable table("");
      if (em.method == "avg") {
        table = vec::bert_avg_scores(ds, store, options);
      } else {
        options.seed = require_seed(em.seed, "mpro");
        table = vec::bert_mpro_scores(ds, store, options);
      }
      write_output(em.output, tables_csv({table}), out);
    };
  });

  // lm score
  auto* lm_cmd = app.add_subcommand("lm", "Language-model probe aggregation")->require_subcommand(1);
  struct {
    std::string method, records, dataset, output;
    std::size_t layer = 12;
  } lmo;
  auto* lm_score = lm_cmd->add_subcommand("score", "Score pairs from masked-prediction or sentence-embedding records");
  lm_score->add_option("--method", lmo.method, "mlm, taxo, misra or sentemb")
      ->required()->check(CLI::IsMember({"mlm", "taxo", "misra", "sentemb"}));
  lm_score->add_option("--records", lmo.records, "JSON Lines records")->required()->check(CLI::ExistingFile);
  lm_score->add_option("--dataset", lmo.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  lm_score->add_option("--layer", lmo.layer, "Layer for sentemb");
  lm_score->add_option("--output", lmo.output, "Score CSV ('-' for stdout)")->required();
  lm_score->callback([&] {
    action = [&] {
      using embedstore::MaskVariant;
      const auto ds = load_dataset(lmo.dataset);
      ScoreTable table("");
      if (lmo.method == "sentemb") {
        table = lm::sentemb_typicality(embedstore::load_sentence_embeddings(lmo.records), lmo.layer, ds);
      } else {
        const auto records = embedstore::load_masked_predictions(lmo.records);
        if (lmo.method == "mlm") table = lm::mlm_typicality(records, MaskVariant::category_context, ds);
        else if (lmo.method == "taxo") table = lm::mlm_typicality(records, MaskVariant::taxonomic, ds);
        else table = lm::misra_typicality(records, ds);
      }
      write_output(lmo.output, tables_csv({table}), out);
    };
  });

  // baseline score
  auto* base_cmd = app.add_subcommand("baseline", "Frequency and static-vector baselines")->require_subcommand(1);
  struct {
    std::string method, counts, vectors, cooc, dataset, output;
    int dim = vec::kDefaultSvdDim;
    std::optional<std::uint64_t> seed;
  } bo;
  auto* base_score = base_cmd->add_subcommand("score", "Score pairs with a baseline");
  base_score->add_option("--method", bo.method, "frequency, static or ppmi-svd")
      ->required()->check(CLI::IsMember({"frequency", "static", "ppmi-svd"}));
  base_score->add_option("--counts", bo.counts, "Word counts TSV (frequency)")->check(CLI::ExistingFile);
  base_score->add_option("--vectors", bo.vectors, "Static vectors, text format (static)")->check(CLI::ExistingFile);
  base_score->add_option("--cooc", bo.cooc, "Co-occurrence TSV (ppmi-svd)")->check(CLI::ExistingFile);
  base_score->add_option("--dim", bo.dim, "SVD dimension")->check(CLI::PositiveNumber);
  base_score->add_option("--seed", bo.seed, "SVD seed (required for ppmi-svd)");
  base_score->add_option("--dataset", bo.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  base_score->add_option("--output", bo.output, "Score CSV ('-' for stdout)")->required();
  base_score->callback([&] {
    action = [&] {
      const auto ds = load_dataset(bo.dataset);
      ScoreTable table("");
      if (bo.method == "frequency") {
        if (bo.counts.empty()) throw ConfigError("--counts is required for frequency");
        table = eval::frequency_scores(ds, embedstore::load_word_counts(bo.counts));
      } else if (bo.method == "static") {
        if (bo.vectors.empty()) throw ConfigError("--vectors is required for static");
        table = vec::static_cosine_scores(ds, embedstore::load_static_vectors(bo.vectors), "W2V");
      } else {
        if (bo.cooc.empty()) throw ConfigError("--cooc is required for ppmi-svd");
        const auto cooc = embedstore::load_cooccurrence(bo.cooc);
        const auto vectors = vec::ppmi_svd_vectors(cooc, bo.dim, require_seed(bo.seed, "ppmi-svd"));
        table = vec::static_cosine_scores(ds, vectors, "PPMI-SVD");
      }
      write_output(bo.output, tables_csv({table}), out);
    };
  });

  // eval
  struct {
    std::vector<std::string> scores;
    std::string dataset, csv, markdown;
  } ev;
  auto* eval_cmd = app.add_subcommand("eval", "Spearman correlation of score tables against norms");
  eval_cmd->add_option("--scores", ev.scores, "Score CSV files")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--dataset", ev.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--csv", ev.csv, "Report CSV (default: stdout)");
  eval_cmd->add_option("--markdown", ev.markdown, "Per-category Markdown table");
  eval_cmd->callback([&] {
    action = [&] {
      const auto ds = load_dataset(ev.dataset);
      std::vector<eval::EvalReport> reports;
      for (const auto& t : load_tables(ev.scores)) reports.push_back(eval::evaluate(t, ds));
      std::ostringstream csv;
      eval::write_eval_csv(reports, csv);
      write_output(ev.csv.empty() ? "-" : ev.csv, csv.str(), out);
      if (!ev.markdown.empty()) {
        std::ostringstream md;
        eval::write_category_markdown(reports, md);
        write_output(ev.markdown, md.str(), out);
      }
    };
  });

  // ensemble
  struct {
    std::vector<std::string> scores;
    std::string output;
  } en;
  auto* ens_cmd = app.add_subcommand("ensemble", "Sum of per-category z-scores across methods");
  ens_cmd->add_option("--scores", en.scores, "Score CSV files (two or more methods in total)")
      ->required()->check(CLI::ExistingFile);
  ens_cmd->add_option("--output", en.output, "Score CSV ('-' for stdout)")->required();
  ens_cmd->callback([&] {
    action = [&] {
      const auto tables = load_tables(en.scores);
      if (tables.size() < 2) throw ConfigError("an ensemble needs at least two methods");
      std::vector<eval::FlaggedCategory> flagged;
      const auto ens = eval::zscore_ensemble(tables, &flagged);
      for (const auto& f : flagged) {
        spdlog::warn("ensemble: {} has constant scores in '{}', contributing 0", f.method, f.category);
      }
      write_output(en.output, tables_csv({ens}), out);
    };
  });

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "Complementarity, polysemy and agreement analyses")
                     ->require_subcommand(1);
  struct {
    std::vector<std::string> scores, with, without;
    std::string dataset, wordnet, a, b, format = "csv", direction = "higher", csv, markdown;
  } an;
  auto* comp = an_cmd->add_subcommand("complementarity", "Inter-method correlation and ensemble gain per category");
  comp->add_option("--scores", an.scores, "Score CSV files holding exactly two methods")
      ->required()->check(CLI::ExistingFile);
  comp->add_option("--dataset", an.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  comp->add_option("--csv", an.csv, "Report CSV (default: stdout)");
  comp->add_option("--markdown", an.markdown, "Markdown table");
  comp->callback([&] {
    action = [&] {
      const auto tables = load_tables(an.scores);
      if (tables.size() != 2) throw ConfigError("complementarity needs exactly two methods");
      const auto report = eval::complementarity(tables[0], tables[1], load_dataset(an.dataset));
      std::ostringstream csv;
      eval::write_complementarity_csv(report, csv);
      write_output(an.csv.empty() ? "-" : an.csv, csv.str(), out);
      if (!an.markdown.empty()) {
        std::ostringstream md;
        eval::write_complementarity_markdown(report, md);
        write_output(an.markdown, md.str(), out);
      }
    };
  });
  auto* poly = an_cmd->add_subcommand("polysemy", "Disambiguation gain against WordNet sense counts");
  poly->add_option("--wordnet", an.wordnet, "WordNet dict directory")->required()->check(CLI::ExistingDirectory);
  poly->add_option("--dataset", an.dataset, "Norm CSV")->required()->check(CLI::ExistingFile);
  poly->add_option("--with", an.with, "Score CSV of a method with disambiguation")->required()->check(CLI::ExistingFile);
  poly->add_option("--without", an.without, "Score CSV of the matching method without it")
      ->required()->check(CLI::ExistingFile);
  poly->add_option("--csv", an.csv, "Report CSV (default: stdout)");
  poly->callback([&] {
    action = [&] {
      const auto with = load_tables(an.with);
      const auto without = load_tables(an.without);
      if (with.size() != without.size()) throw ConfigError("--with and --without must pair up");
      const auto ds = load_dataset(an.dataset);
      std::vector<eval::ReportPair> pairs;
      for (std::size_t i = 0; i < with.size(); ++i) {
        pairs.push_back({eval::evaluate(with[i], ds), eval::evaluate(without[i], ds)});
      }
      std::ostringstream csv;
      eval::write_polysemy_csv(eval::polysemy_gain_report(ds, pairs, wordnet::parse_wordnet(an.wordnet)), csv);
      write_output(an.csv.empty() ? "-" : an.csv, csv.str(), out);
    };
  });
  auto* agree = an_cmd->add_subcommand("agreement", "Per-category Spearman between two norm datasets");
  agree->add_option("--a", an.a, "First norm file")->required()->check(CLI::ExistingFile);
  agree->add_option("--b", an.b, "Second norm file")->required()->check(CLI::ExistingFile);
  agree->add_option("--format", an.format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  agree->add_option("--direction", an.direction, "higher or lower")->check(CLI::IsMember({"higher", "lower"}));
  agree->add_option("--csv", an.csv, "Report CSV (default: stdout)");
  agree->callback([&] {
    action = [&] {
      dataset::LoadOptions options;
      options.format = detail::parse_format(an.format);
      options.direction = detail::parse_direction(an.direction);
      const auto rows = dataset::inter_dataset_agreement(dataset::load_norms(an.a, options),
                                                         dataset::load_norms(an.b, options));
      std::ostringstream csv;
      eval::write_agreement_csv(rows, csv);
      write_output(an.csv.empty() ? "-" : an.csv, csv.str(), out);
    };
  });

  // run
  struct {
    std::string config;
    std::vector<std::string> set;
  } rn;
  auto* run_cmd = app.add_subcommand("run", "Execute a declarative run configuration");
  run_cmd->add_option("--config", rn.config, "INI run configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--set", rn.set, "Override a setting: section.key=value");
  run_cmd->callback([&] {
    action = [&] {
      stage_name = "config";
      const RunConfig config = load_run_config(rn.config, rn.set);
      stage_name.clear();
      execute(config, out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what(), kExitConfig);
    return kExitConfig;
  }

  try {
    action();
  } catch (const StageError& e) {
    const int code = e.config_error() ? kExitConfig
                     : e.cause_type() == "InternalError" ? kExitInternal
                                                         : kExitData;
    report_error(err, e.cause_type(), e.what(), code, e.stage());
    return code;
  } catch (const ConfigError& e) {
    report_error(err, "ConfigError", e.what(), kExitConfig, stage_name);
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    report_error(err, "InvalidArgument", e.what(), kExitConfig, stage_name);
    return kExitConfig;
  } catch (const Error& e) {
    report_error(err, detail::error_type(e), e.what(), kExitData, stage_name);
    return kExitData;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what(), kExitInternal, stage_name);
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace typicality::cli
