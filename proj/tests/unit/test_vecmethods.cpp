#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "test_paths.hpp"
#include "typicality/vecmethods.hpp"

using namespace typicality;
using namespace typicality::vec;
using testing_support::TempDir;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

// Three tight, far-apart groups of points, listed group by group.
Eigen::MatrixXd blobs(int per_group, unsigned seed) {
  Eigen::MatrixXd noise = gaussian(3 * per_group, 2, seed) * 0.1;
  const double centres[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  for (int g = 0; g < 3; ++g)
    for (int i = 0; i < per_group; ++i) {
      noise(g * per_group + i, 0) += centres[g][0];
      noise(g * per_group + i, 1) += centres[g][1];
    }
  return noise;
}

double sse(const Eigen::MatrixXd& pts, const std::vector<int>& assign, int k) {
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(pts.cols());
    int n = 0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      if (assign[i] == c) {
        mean += pts.row(i).transpose();
        ++n;
      }
    if (n == 0) continue;
    mean /= n;
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      if (assign[i] == c) total += (pts.row(i).transpose() - mean).squaredNorm();
  }
  return total;
}

// Smallest within-cluster sum of squares over every assignment into k
// non-empty clusters.
double brute_force_optimum(const Eigen::MatrixXd& pts, int k) {
  const int n = static_cast<int>(pts.rows());
  std::vector<int> assign(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> used(k, 0);
    for (int a : assign) used[a] = 1;
    if (std::count(used.begin(), used.end(), 1) == k) best = std::min(best, sse(pts, assign, k));
    int pos = 0;
    while (pos < n && ++assign[pos] == k) assign[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

embedstore::StoreDescription synthetic_store(const TempDir& dir, const std::vector<std::string>& words,
                                            std::size_t n_occ, unsigned seed) {
  embedstore::StoreLayout layout;
  layout.n_layers = 2;
  layout.hidden = 6;
  layout.layer_convention = "0=embedding,1=encoder";
  const auto occ = testing_support::random_occurrences(words, n_occ, 2, 6, seed);
  embedstore::write_store(dir / "manifest.json", layout, occ);
  return embedstore::read_manifest(dir / "manifest.json");
}

}  // namespace

TEST(Cosine, KnownValuesAndErrors) {
  Eigen::VectorXd a(2), b(2), z = Eigen::VectorXd::Zero(2), c(3);
  a << 1, 0;
  b << 1, 1;
  c << 1, 0, 0;
  EXPECT_NEAR(cosine(a, b), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(cosine(b, b * 3.0), 1.0);
  EXPECT_THROW(cosine(a, z), std::invalid_argument);
  EXPECT_THROW(cosine(a, c), std::invalid_argument);
}

TEST(KMeans, RecoversSeparatedBlobsAndTheirOptimum) {
  const Eigen::MatrixXd pts = blobs(3, 4);
  for (std::uint64_t seed : {0u, 1u, 2u, 99u}) {
    const auto r = kmeans(pts, 3, seed);
    EXPECT_TRUE(r.converged);
    for (int g = 0; g < 3; ++g) {
      EXPECT_EQ(r.assignment[3 * g], r.assignment[3 * g + 1]);
      EXPECT_EQ(r.assignment[3 * g], r.assignment[3 * g + 2]);
    }
    EXPECT_NEAR(r.objective.back(), brute_force_optimum(pts, 3), 1e-9);
  }
}

TEST(KMeans, LloydInvariants) {
  for (unsigned t = 0; t < 20; ++t) {
    const Eigen::MatrixXd pts = gaussian(25, 3, 100 + t);
    const int k = 1 + static_cast<int>(t % 6);
    const auto r = kmeans(pts, k, t);
    ASSERT_EQ(r.centroids.rows(), k);
    for (std::size_t i = 1; i < r.objective.size(); ++i) {
      EXPECT_LE(r.objective[i], r.objective[i - 1] + 1e-9);
    }
    if (!r.converged) continue;
    // Every point sits with its nearest centroid, and every centroid is the
    // mean of its points.
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const double own = (pts.row(i) - r.centroids.row(r.assignment[i])).squaredNorm();
      for (int c = 0; c < k; ++c) EXPECT_LE(own, (pts.row(i) - r.centroids.row(c)).squaredNorm() + 1e-12);
    }
    EXPECT_NEAR(r.objective.back(), sse(pts, r.assignment, k), 1e-9);
  }
}

TEST(KMeans, DeterministicAndEdgeCases) {
  const Eigen::MatrixXd pts = gaussian(12, 4, 8);
  const auto a = kmeans(pts, 4, 5);
  const auto b = kmeans(pts, 4, 5);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.centroids, b.centroids);
  const auto all = kmeans(pts, 12, 0);
  EXPECT_EQ(all.objective.back(), 0.0);
  EXPECT_EQ(kmeans(pts, 1, 3).centroids.row(0).transpose(), mean_rows(pts));
  EXPECT_THROW(kmeans(pts, 0, 0), std::invalid_argument);
  EXPECT_THROW(kmeans(pts, 13, 0), std::invalid_argument);
}

TEST(KMeans, DuplicatePointsStillFillEveryCluster) {
  Eigen::MatrixXd pts(5, 1);
  pts << 1, 1, 1, 1, 2;
  const auto r = kmeans(pts, 3, 0);
  std::vector<int> sizes(3, 0);
  for (int a : r.assignment) ++sizes[a];
  for (int s : sizes) EXPECT_GT(s, 0);
}

TEST(Prototypes, UnionOfCentroidsAndMaxsim) {
  embedstore::OccurrenceEmbeddings occ =
      testing_support::random_occurrences({"bird"}, 6, 2, 4, 3)[0];
  const auto set = multi_prototype(occ, 1, 4, 0);
  EXPECT_EQ(set.centroids.rows(), 1 + 2 + 3 + 4);
  EXPECT_EQ(set.centroids.row(0).transpose(), average_embedding(occ, 1));
  // max_k above the occurrence count is capped.
  EXPECT_EQ(multi_prototype(occ, 1, 10, 0).centroids.rows(), 21);

  const auto other = multi_prototype(testing_support::random_occurrences({"x"}, 5, 2, 4, 4)[0], 1, 3, 1);
  double best = -2.0;
  for (Eigen::Index i = 0; i < set.centroids.rows(); ++i)
    for (Eigen::Index j = 0; j < other.centroids.rows(); ++j)
      best = std::max(best, cosine(set.centroids.row(i).transpose(), other.centroids.row(j).transpose()));
  EXPECT_EQ(maxsim_centroids(set, other), best);
  EXPECT_EQ(maxsim_centroids(set, other), maxsim_centroids(other, set));
}

TEST(EmbeddingScores, MProWithOneClusterEqualsAverage) {
  TempDir dir("mpro");
  const auto store = synthetic_store(dir, {"bird", "robin", "penguin", "owl"}, 7, 21);
  const dataset::TypicalityDataset ds(
      "d", {dataset::Category{"bird", {{"robin", 3}, {"penguin", 1}, {"owl", 2}, {"dodo", 0}}}});
  EmbeddingOptions opts;
  opts.layer = 1;
  opts.max_k = 1;
  opts.workers = 3;
  const ScoreTable avg = bert_avg_scores(ds, store, opts);
  ScoreTable mpro = bert_mpro_scores(ds, store, opts);
  EXPECT_EQ(avg.method(), "BERT-Avg");
  EXPECT_EQ(mpro.method(), "BERT-MPro");
  EXPECT_TRUE(avg.is_unscored("bird", "dodo"));
  mpro.rename(avg.method());
  EXPECT_EQ(mpro, avg);

  // With more prototypes, maxsim can only grow.
  opts.max_k = 4;
  const ScoreTable wide = bert_mpro_scores(ds, store, opts);
  for (const auto& [key, v] : avg.scores()) EXPECT_GE(*wide.score(key.category, key.exemplar), v);

  // Worker count does not change results.
  opts.workers = 1;
  EXPECT_EQ(bert_mpro_scores(ds, store, opts), wide);
}

TEST(StaticScores, CosineWithUnscoredMisses) {
  embedstore::StaticVectors v(2);
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0.6, 0.8;
  v.add("bird", a);
  v.add("robin", b);
  v.add("ghost", Eigen::VectorXd::Zero(2));
  const dataset::TypicalityDataset ds(
      "d", {dataset::Category{"bird", {{"robin", 2}, {"ghost", 1}, {"dodo", 0}}}});
  const ScoreTable t = static_cosine_scores(ds, v);
  EXPECT_NEAR(*t.score("bird", "robin"), 0.6, 1e-15);
  EXPECT_TRUE(t.is_unscored("bird", "ghost"));
  EXPECT_TRUE(t.is_unscored("bird", "dodo"));
}

TEST(Ppmi, HandValueAndNonNegativity) {
  // counts [[2, 0], [1, 1]]: N = 4, row sums 2 and 2, column sums 3 and 1.
  Eigen::SparseMatrix<double> m(2, 2);
  m.insert(0, 0) = 2;
  m.insert(1, 0) = 1;
  m.insert(1, 1) = 1;
  m.makeCompressed();
  const auto p = ppmi(m);
  EXPECT_NEAR(p.coeff(0, 0), std::log(4.0 * 2 / (2 * 3)), 1e-15);
  EXPECT_EQ(p.coeff(1, 0), 0.0);  // ln(4/6) < 0
  EXPECT_NEAR(p.coeff(1, 1), std::log(4.0 / 2), 1e-15);

  std::mt19937_64 rng(1);
  Eigen::SparseMatrix<double> r(15, 12);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 12; ++j)
      if (rng() % 3 == 0) r.insert(i, j) = static_cast<double>(1 + rng() % 20);
  const auto pr = ppmi(r);
  for (int k = 0; k < pr.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(pr, k); it; ++it) EXPECT_GT(it.value(), 0.0);
  EXPECT_THROW(ppmi(Eigen::SparseMatrix<double>(3, 3)), std::invalid_argument);
}

TEST(TruncatedSvd, MatchesDenseOracleOnLowRank) {
  for (unsigned t = 0; t < 10; ++t) {
    const int r = 1 + static_cast<int>(t % 5);
    const Eigen::MatrixXd dense = gaussian(20, r, t) * gaussian(r, 20, 50 + t);
    const Eigen::SparseMatrix<double> m = dense.sparseView();
    const auto svd = truncated_svd(m, r, t);
    const auto ref = oracle::jacobi_svd(dense);
    const Eigen::MatrixXd approx = svd.u * svd.s.asDiagonal() * svd.v.transpose();
    EXPECT_LT((approx - oracle::rank_r(ref, r)).norm(), 1e-6);
    EXPECT_LT((svd.s - ref.s.head(r)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((svd.u.transpose() * svd.u - Eigen::MatrixXd::Identity(r, r)).norm(), 1e-10);
    for (int c = 0; c < r; ++c) {
      Eigen::Index at = 0;
      svd.u.col(c).cwiseAbs().maxCoeff(&at);
      EXPECT_GT(svd.u(at, c), 0.0);
    }
  }
}

TEST(TruncatedSvd, DeterministicAndValidated) {
  const Eigen::SparseMatrix<double> m = gaussian(30, 25, 2).sparseView();
  const auto a = truncated_svd(m, 5, 42);
  const auto b = truncated_svd(m, 5, 42);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.s, b.s);
  for (int i = 1; i < 5; ++i) EXPECT_GE(a.s[i - 1], a.s[i]);
  EXPECT_THROW(truncated_svd(m, 0, 0), std::invalid_argument);
  EXPECT_THROW(truncated_svd(m, 26, 0), std::invalid_argument);
}

TEST(PpmiSvdVectors, OneVectorPerRow) {
  const auto cooc = embedstore::load_cooccurrence(testing_support::fixture("micro_cooc.tsv"));
  const auto v = ppmi_svd_vectors(cooc, 3, 11);
  EXPECT_EQ(v.size(), cooc.words.size());
  EXPECT_EQ(v.dim(), 3u);
  EXPECT_EQ(ppmi_svd_vectors(cooc, 10000, 11).dim(),
            std::min(cooc.words.size(), cooc.contexts.size()));
}
