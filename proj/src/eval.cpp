#include "typicality/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "typicality/text.hpp"

namespace typicality::eval {
namespace {

std::string fmt_opt(const std::optional<double>& v) {
  return v ? text::format_double(*v) : std::string();
}

std::string fmt3(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v + 0.0);
  // Avoid "-0.000" for tiny negatives.
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

std::string csv(std::string_view field) { return text::quote_field(field, ','); }

std::optional<double> mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

const CategoryResult* EvalReport::find(const std::string& category) const {
  for (const auto& r : per_category) {
    if (r.category == category) return &r;
  }
  return nullptr;
}

EvalReport evaluate(const ScoreTable& table, const dataset::TypicalityDataset& ds) {
  EvalReport report{table.method(), {}, std::nullopt};
  std::vector<double> defined;
  for (const auto& c : ds.categories()) {
    std::vector<double> human, predicted;
    for (const auto& e : c.exemplars) {
      if (auto s = table.score(c.name, e.word)) {
        human.push_back(e.human_score);
        predicted.push_back(*s);
      }
    }
    CategoryResult r{c.name, spearman(human, predicted), human.size()};
    if (r.rho) defined.push_back(*r.rho);
    report.per_category.push_back(std::move(r));
  }
  report.mean_rho = mean_of(defined);
  return report;
}

ScoreTable frequency_scores(const dataset::TypicalityDataset& ds, const WordCounts& counts,
                            const std::string& method) {
  ScoreTable table(method);
  for (const auto& c : ds.categories()) {
    for (const auto& e : c.exemplars) {
      auto it = counts.find(e.word);
      if (it == counts.end()) {
        table.mark_unscored(c.name, e.word);
      } else {
        table.set(c.name, e.word, it->second);
      }
    }
  }
  return table;
}

ScoreTable zscore_ensemble(std::span<const ScoreTable> tables,
                           std::vector<FlaggedCategory>* flagged) {
  if (tables.size() < 2) throw std::invalid_argument("an ensemble needs at least two tables");

  std::string name;
  for (const auto& t : tables) name += (name.empty() ? "" : " + ") + t.method();

  std::vector<std::map<PairKey, double>> z(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    for (const std::string& cat : tables[t].categories()) {
      const auto scores = tables[t].category_scores(cat);
      double sum = 0.0;
      for (const auto& [ex, s] : scores) sum += s;
      const double mean = sum / static_cast<double>(scores.size());
      double ss = 0.0;
      for (const auto& [ex, s] : scores) ss += (s - mean) * (s - mean);
      const double sd = std::sqrt(ss / static_cast<double>(scores.size()));
      const bool degenerate = !(sd > 0.0);
      if (degenerate && flagged != nullptr) flagged->push_back({tables[t].method(), cat});
      for (const auto& [ex, s] : scores) {
        z[t].emplace(PairKey{cat, ex}, degenerate ? 0.0 : (s - mean) / sd);
      }
    }
  }

  std::set<PairKey> keys;
  for (const auto& t : tables) {
    for (const auto& [k, v] : t.scores()) keys.insert(k);
    keys.insert(t.unscored().begin(), t.unscored().end());
  }

  ScoreTable out(name);
  for (const PairKey& k : keys) {
    double total = 0.0;
    bool complete = true;
    for (const auto& zt : z) {
      auto it = zt.find(k);
      if (it == zt.end()) {
        complete = false;
        break;
      }
      total += it->second;
    }
    if (complete) {
      out.set(k.category, k.exemplar, total + 0.0);
    } else {
      out.mark_unscored(k.category, k.exemplar);
    }
  }
  return out;
}

ComplementarityReport complementarity(const ScoreTable& a, const ScoreTable& b,
                                      const dataset::TypicalityDataset& ds) {
  const ScoreTable pair[] = {a, b};
  const ScoreTable ens = zscore_ensemble(pair);
  const EvalReport ra = evaluate(a, ds);
  const EvalReport rb = evaluate(b, ds);
  const EvalReport re = evaluate(ens, ds);

  ComplementarityReport report{a.method(), b.method(), {}, std::nullopt};
  std::vector<double> inter, gain;
  for (std::size_t i = 0; i < ds.categories().size(); ++i) {
    const auto& c = ds.categories()[i];
    std::vector<double> xa, xb;
    for (const auto& e : c.exemplars) {
      auto sa = a.score(c.name, e.word);
      auto sb = b.score(c.name, e.word);
      if (sa && sb) {
        xa.push_back(*sa);
        xb.push_back(*sb);
      }
    }
    ComplementarityRow row;
    row.category = c.name;
    row.inter_rho = spearman(xa, xb);
    row.n_shared = xa.size();
    row.rho_a = ra.per_category[i].rho;
    row.rho_b = rb.per_category[i].rho;
    row.rho_ensemble = re.per_category[i].rho;
    if (row.rho_a && row.rho_b && row.rho_ensemble) {
      row.avg_gain = ((*row.rho_ensemble - *row.rho_a) + (*row.rho_ensemble - *row.rho_b)) / 2.0;
    }
    if (row.inter_rho && row.avg_gain) {
      inter.push_back(*row.inter_rho);
      gain.push_back(*row.avg_gain);
    }
    report.rows.push_back(std::move(row));
  }
  report.summary_rho = spearman(inter, gain);
  return report;
}

PolysemyReport polysemy_gain_report(const dataset::TypicalityDataset& ds,
                                    std::span<const ReportPair> report_pairs,
                                    const wordnet::SynsetGraph& g) {
  PolysemyReport report;
  for (const auto& p : report_pairs) {
    report.labels.push_back(p.with_wsd.method + " - " + p.without_wsd.method);
  }
  for (const auto& c : ds.categories()) {
    PolysemyRow row;
    row.category = c.name;
    for (const auto& p : report_pairs) {
      const CategoryResult* w = p.with_wsd.find(c.name);
      const CategoryResult* wo = p.without_wsd.find(c.name);
      std::optional<double> gain;
      if (w && wo && w->rho && wo->rho) gain = *w->rho - *wo->rho;
      row.gains.push_back(gain);
    }
    row.category_synsets = wordnet::polysemy_counts(g, c.name).all_pos;
    double total = 0.0;
    for (const auto& e : c.exemplars) {
      total += static_cast<double>(wordnet::polysemy_counts(g, e.word).all_pos);
    }
    row.mean_exemplar_synsets = total / static_cast<double>(c.exemplars.size());
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------

void write_eval_csv(std::span<const EvalReport> reports, std::ostream& out) {
  out << "method,category,rho,n\n";
  for (const auto& r : reports) {
    std::size_t defined = 0;
    for (const auto& c : r.per_category) {
      out << csv(r.method) << ',' << csv(c.category) << ',' << fmt_opt(c.rho) << ',' << c.n
          << '\n';
      if (c.rho) ++defined;
    }
    out << csv(r.method) << ",(mean)," << fmt_opt(r.mean_rho) << ',' << defined << '\n';
  }
}

void write_summary_markdown(std::span<const DatasetReports> columns, std::ostream& out) {
  std::vector<std::string> methods;
  for (const auto& col : columns) {
    for (const auto& r : col.reports) {
      if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
        methods.push_back(r.method);
      }
    }
  }
  out << "| Method |";
  for (const auto& col : columns) out << ' ' << col.dataset << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---:|";
  out << '\n';
  for (const auto& m : methods) {
    out << "| " << m << " |";
    for (const auto& col : columns) {
      std::optional<double> v;
      for (const auto& r : col.reports) {
        if (r.method == m) v = r.mean_rho;
      }
      out << ' ' << fmt3(v) << " |";
    }
    out << '\n';
  }
}

void write_category_markdown(std::span<const EvalReport> reports, std::ostream& out) {
  out << "| Category |";
  for (const auto& r : reports) out << ' ' << r.method << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < reports.size(); ++i) out << "---:|";
  out << '\n';
  if (reports.empty()) return;
  for (const auto& c : reports.front().per_category) {
    out << "| " << c.category << " |";
    for (const auto& r : reports) {
      const CategoryResult* cr = r.find(c.category);
      out << ' ' << fmt3(cr ? cr->rho : std::nullopt) << " |";
    }
    out << '\n';
  }
  out << "| Mean |";
  for (const auto& r : reports) out << ' ' << fmt3(r.mean_rho) << " |";
  out << '\n';
}

void write_complementarity_csv(const ComplementarityReport& report, std::ostream& out) {
  out << "category,inter_rho,n,rho_a,rho_b,rho_ensemble,avg_gain\n";
  for (const auto& r : report.rows) {
    out << csv(r.category) << ',' << fmt_opt(r.inter_rho) << ',' << r.n_shared << ','
        << fmt_opt(r.rho_a) << ',' << fmt_opt(r.rho_b) << ',' << fmt_opt(r.rho_ensemble) << ','
        << fmt_opt(r.avg_gain) << '\n';
  }
  out << "(summary),,,,,," << fmt_opt(report.summary_rho) << '\n';
}

void write_complementarity_markdown(const ComplementarityReport& report, std::ostream& out) {
  out << "| Category | " << report.method_a << " vs " << report.method_b << " | "
      << report.method_a << " | " << report.method_b << " | Ensemble | Avg. increase |\n"
      << "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& r : report.rows) {
    out << "| " << r.category << " | " << fmt3(r.inter_rho) << " | " << fmt3(r.rho_a) << " | "
        << fmt3(r.rho_b) << " | " << fmt3(r.rho_ensemble) << " | " << fmt3(r.avg_gain) << " |\n";
  }
  out << "\nRank correlation between inter-method rho and average increase: "
      << fmt3(report.summary_rho) << '\n';
}

void write_polysemy_csv(const PolysemyReport& report, std::ostream& out) {
  out << "category";
  for (const auto& l : report.labels) out << ',' << csv(l);
  out << ",category_synsets,mean_exemplar_synsets\n";
  for (const auto& r : report.rows) {
    out << csv(r.category);
    for (const auto& g : r.gains) out << ',' << fmt_opt(g);
    out << ',' << r.category_synsets << ',' << text::format_double(r.mean_exemplar_synsets)
        << '\n';
  }
}

void write_agreement_csv(std::span<const dataset::AgreementRow> rows, std::ostream& out) {
  out << "category,rho,n\n";
  std::vector<double> defined;
  for (const auto& r : rows) {
    out << csv(r.category) << ',' << fmt_opt(r.rho) << ',' << r.n << '\n';
    if (r.rho) defined.push_back(*r.rho);
  }
  out << "(mean)," << fmt_opt(mean_of(defined)) << ',' << defined.size() << '\n';
}

}  // namespace typicality::eval
