#include "typicality/vecmethods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "typicality/parallel.hpp"

namespace typicality::vec {
namespace {

Eigen::VectorXd mean_of_rows(const Eigen::MatrixXd& points, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(points.cols());
  for (Eigen::Index r : rows) acc += points.row(r).transpose();
  return acc / static_cast<double>(rows.size());
}

double objective(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                 const std::vector<int>& assignment) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

Eigen::MatrixXd layer_points(const embedstore::OccurrenceEmbeddings& occ, std::size_t layer) {
  return occ.layer(layer).cast<double>();
}

// Collects the distinct words a dataset needs, categories first.
std::vector<std::string> needed_words(const dataset::TypicalityDataset& ds) {
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (const auto& c : ds.categories()) {
    if (seen.insert(c.name).second) words.push_back(c.name);
  }
  for (const auto& c : ds.categories()) {
    for (const auto& e : c.exemplars) {
      if (seen.insert(e.word).second) words.push_back(e.word);
    }
  }
  return words;
}

template <typename Repr, typename Sim>
ScoreTable score_pairs(const dataset::TypicalityDataset& ds, const std::string& method,
                       const std::map<std::string, std::optional<Repr>>& reprs, Sim sim) {
  ScoreTable table(method);
  for (const auto& c : ds.categories()) {
    const auto& cat = reprs.at(c.name);
    for (const auto& e : c.exemplars) {
      const auto& ex = reprs.at(e.word);
      if (cat && ex) {
        table.set(c.name, e.word, sim(*cat, *ex));
      } else {
        table.mark_unscored(c.name, e.word);
      }
    }
  }
  return table;
}

template <typename Repr, typename Build>
std::map<std::string, std::optional<Repr>> build_reprs(const dataset::TypicalityDataset& ds,
                                                       const embedstore::StoreDescription& store,
                                                       std::size_t workers, Build build) {
  const std::vector<std::string> words = needed_words(ds);
  std::vector<std::optional<Repr>> out(words.size());
  parallel_for(words.size(), workers, [&](std::size_t i) {
    if (store.find(words[i]) == nullptr) return;
    out[i] = build(embedstore::load_word(store, words[i]));
  });
  std::map<std::string, std::optional<Repr>> reprs;
  for (std::size_t i = 0; i < words.size(); ++i) reprs.emplace(words[i], std::move(out[i]));
  return reprs;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine: zero-norm vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

Eigen::VectorXd mean_rows(const Eigen::MatrixXd& points) {
  if (points.rows() == 0) throw std::invalid_argument("mean of zero rows");
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(points.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return mean_of_rows(points, rows);
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
  if (k > n) {
    throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " exceeds " +
                                std::to_string(n) + " points");
  }
  const auto uk = static_cast<std::size_t>(k);

  KMeansResult result;
  result.centroids.resize(k, points.cols());

  // Farthest-point seeding.
  std::mt19937_64 rng(seed);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  Eigen::Index first = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n));
  chosen[static_cast<std::size_t>(first)] = true;
  result.centroids.row(0) = points.row(first);
  Eigen::VectorXd nearest = (points.rowwise() - points.row(first)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || nearest[i] > nearest[best]) best = i;
    }
    chosen[static_cast<std::size_t>(best)] = true;
    result.centroids.row(c) = points.row(best);
    nearest = nearest.cwiseMin((points.rowwise() - points.row(best)).rowwise().squaredNorm());
  }

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<int> next(static_cast<std::size_t>(n));
    std::vector<double> dist(static_cast<std::size_t>(n));
    std::vector<std::size_t> sizes(uk, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - result.centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      next[static_cast<std::size_t>(i)] = best;
      dist[static_cast<std::size_t>(i)] = best_d;
      ++sizes[static_cast<std::size_t>(best)];
    }
    for (std::size_t c = 0; c < uk; ++c) {
      if (sizes[c] != 0) continue;
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (sizes[static_cast<std::size_t>(next[ui])] < 2) continue;
        if (far < 0 || dist[ui] > dist[static_cast<std::size_t>(far)]) far = i;
      }
      // k <= n guarantees some cluster still has two members.
      const auto uf = static_cast<std::size_t>(far);
      --sizes[static_cast<std::size_t>(next[uf])];
      next[uf] = static_cast<int>(c);
      dist[uf] = 0.0;
      sizes[c] = 1;
    }

    const bool fixpoint = next == assignment;
    assignment = std::move(next);
    if (fixpoint) {
      result.converged = true;
      break;
    }
    std::vector<std::vector<Eigen::Index>> members(uk);
    for (Eigen::Index i = 0; i < n; ++i) {
      members[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(i);
    }
    for (std::size_t c = 0; c < uk; ++c) {
      result.centroids.row(static_cast<Eigen::Index>(c)) = mean_of_rows(points, members[c]).transpose();
    }
    result.objective.push_back(objective(points, result.centroids, assignment));
    ++result.iterations;
  }
  result.assignment = std::move(assignment);
  return result;
}

Eigen::VectorXd average_embedding(const embedstore::OccurrenceEmbeddings& occ, std::size_t layer) {
  if (occ.n_occurrences == 0) {
    throw std::invalid_argument("no occurrences for '" + occ.word + "'");
  }
  return mean_rows(layer_points(occ, layer));
}

PrototypeSet multi_prototype(const embedstore::OccurrenceEmbeddings& occ, std::size_t layer,
                             int max_k, std::uint64_t seed) {
  if (occ.n_occurrences == 0) {
    throw std::invalid_argument("no occurrences for '" + occ.word + "'");
  }
  if (max_k < 1) throw std::invalid_argument("max_k must be at least 1");
  const Eigen::MatrixXd points = layer_points(occ, layer);
  const int top = static_cast<int>(std::min<Eigen::Index>(max_k, points.rows()));

  PrototypeSet set{occ.word, layer, Eigen::MatrixXd(top * (top + 1) / 2, points.cols())};
  Eigen::Index row = 0;
  for (int k = 1; k <= top; ++k) {
    const KMeansResult km = kmeans(points, k, seed);
    set.centroids.middleRows(row, k) = km.centroids;
    row += k;
  }
  return set;
}

double maxsim_centroids(const PrototypeSet& a, const PrototypeSet& b) {
  if (a.centroids.rows() == 0 || b.centroids.rows() == 0) {
    throw std::invalid_argument("maxsim over an empty prototype set");
  }
  if (a.centroids.cols() != b.centroids.cols()) {
    throw std::invalid_argument("maxsim: prototype dimensions differ");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.centroids.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.centroids.rows(); ++j) {
      best = std::max(best, cosine(a.centroids.row(i).transpose(), b.centroids.row(j).transpose()));
    }
  }
  return best;
}

ScoreTable bert_avg_scores(const dataset::TypicalityDataset& ds,
                           const embedstore::StoreDescription& store,
                           const EmbeddingOptions& options) {
  auto reprs = build_reprs<Eigen::VectorXd>(
      ds, store, options.workers,
      [&](const embedstore::OccurrenceEmbeddings& occ) -> std::optional<Eigen::VectorXd> {
        Eigen::VectorXd v = average_embedding(occ, options.layer);
        if (v.norm() == 0.0) return std::nullopt;
        return v;
      });
  return score_pairs(ds, "BERT-Avg", reprs,
                     [](const Eigen::VectorXd& c, const Eigen::VectorXd& e) { return cosine(c, e); });
}

ScoreTable bert_mpro_scores(const dataset::TypicalityDataset& ds,
                            const embedstore::StoreDescription& store,
                            const EmbeddingOptions& options) {
  auto reprs = build_reprs<PrototypeSet>(
      ds, store, options.workers,
      [&](const embedstore::OccurrenceEmbeddings& occ) -> std::optional<PrototypeSet> {
        PrototypeSet p = multi_prototype(occ, options.layer, options.max_k, options.seed);
        if ((p.centroids.rowwise().norm().array() == 0.0).any()) return std::nullopt;
        return p;
      });
  return score_pairs(ds, "BERT-MPro", reprs, [](const PrototypeSet& c, const PrototypeSet& e) {
    return maxsim_centroids(c, e);
  });
}

ScoreTable static_cosine_scores(const dataset::TypicalityDataset& ds,
                                const embedstore::StaticVectors& vectors,
                                const std::string& method) {
  std::map<std::string, std::optional<Eigen::VectorXd>> reprs;
  for (const std::string& w : needed_words(ds)) {
    std::optional<Eigen::VectorXd> v;
    if (vectors.contains(w)) {
      v = vectors.get(w);
      if (v->norm() == 0.0) v.reset();
    }
    reprs.emplace(w, std::move(v));
  }
  return score_pairs(ds, method, reprs,
                     [](const Eigen::VectorXd& c, const Eigen::VectorXd& e) { return cosine(c, e); });
}

// ---------------------------------------------------------------------------

Eigen::SparseMatrix<double> ppmi(const Eigen::SparseMatrix<double>& counts) {
  if (counts.rows() == 0 || counts.cols() == 0) throw std::invalid_argument("ppmi: empty matrix");
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(counts.rows());
  Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(counts.cols());
  double total = 0.0;
  for (Eigen::Index j = 0; j < counts.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(counts, j); it; ++it) {
      if (it.value() < 0.0) throw std::invalid_argument("ppmi: negative count");
      row_sums[it.row()] += it.value();
      col_sums[it.col()] += it.value();
      total += it.value();
    }
  }
  if (total == 0.0) throw std::invalid_argument("ppmi: all counts are zero");

  std::vector<Eigen::Triplet<double>> out;
  for (Eigen::Index j = 0; j < counts.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(counts, j); it; ++it) {
      if (it.value() == 0.0) continue;
      const double pmi = std::log(total * it.value() / (row_sums[it.row()] * col_sums[it.col()]));
      if (pmi > 0.0) out.emplace_back(it.row(), it.col(), pmi);
    }
  }
  Eigen::SparseMatrix<double> m(counts.rows(), counts.cols());
  m.setFromTriplets(out.begin(), out.end());
  return m;
}

TruncatedSvd truncated_svd(const Eigen::SparseMatrix<double>& m, int dim, std::uint64_t seed,
                           int power_iterations) {
  const Eigen::Index small = std::min(m.rows(), m.cols());
  if (small == 0) throw std::invalid_argument("truncated_svd: empty matrix");
  if (dim < 1 || dim > small) {
    throw std::invalid_argument("truncated_svd: dim " + std::to_string(dim) +
                                " outside [1, " + std::to_string(small) + "]");
  }
  const Eigen::Index probes = std::min<Eigen::Index>(dim + 10, small);

  // Boost's distribution is specified by its source, so probes (and the
  // resulting vectors) are the same with every standard library.
  boost::random::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal;
  Eigen::MatrixXd omega(m.cols(), probes);
  for (Eigen::Index j = 0; j < probes; ++j) {
    for (Eigen::Index i = 0; i < m.cols(); ++i) omega(i, j) = normal(rng);
  }

  Eigen::MatrixXd q = orthonormal_basis(m * omega);
  for (int it = 0; it < power_iterations; ++it) {
    const Eigen::MatrixXd z = orthonormal_basis(m.transpose() * q);
    q = orthonormal_basis(m * z);
  }

  // B = Q^T M, decomposed through its transpose to keep the tall shape.
  const Eigen::MatrixXd bt = m.transpose() * q;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(bt, Eigen::ComputeThinU | Eigen::ComputeThinV);

  TruncatedSvd out;
  out.s = svd.singularValues().head(dim);
  out.u = q * svd.matrixV().leftCols(dim);
  out.v = svd.matrixU().leftCols(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::Index arg = 0;
    out.u.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.u(arg, j) < 0.0) {
      out.u.col(j) *= -1.0;
      out.v.col(j) *= -1.0;
    }
  }
  return out;
}

embedstore::StaticVectors ppmi_svd_vectors(const embedstore::CooccurrenceCounts& cooc, int dim,
                                           std::uint64_t seed) {
  const Eigen::SparseMatrix<double> p = ppmi(cooc.counts);
  dim = static_cast<int>(std::min<Eigen::Index>(dim, std::min(p.rows(), p.cols())));
  const TruncatedSvd svd = truncated_svd(p, dim, seed);
  const Eigen::MatrixXd w = svd.u * svd.s.asDiagonal();
  embedstore::StaticVectors vectors(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < cooc.words.size(); ++i) {
    vectors.add(cooc.words[i], w.row(static_cast<Eigen::Index>(i)).transpose());
  }
  return vectors;
}

}  // namespace typicality::vec
