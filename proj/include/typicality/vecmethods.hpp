#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "typicality/dataset.hpp"
#include "typicality/embedstore.hpp"
#include "typicality/score_table.hpp"

namespace typicality::vec {

// Throws std::invalid_argument on a dimension mismatch or a zero-norm input.
// The result is clamped to [-1, 1].
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Mean of the rows of `points` (rows are observations), summed in row order.
// Both the averaged embedding and every k-means centroid go through here, so
// a one-cluster k-means reproduces the plain average bit for bit.
Eigen::VectorXd mean_rows(const Eigen::MatrixXd& points);

struct KMeansResult {
  Eigen::MatrixXd centroids;      // k x dim
  std::vector<int> assignment;    // cluster per point
  std::vector<double> objective;  // sum of squared distances after each update
  int iterations = 0;
  bool converged = false;         // assignment reached a fixpoint
};

inline constexpr int kDefaultMaxIter = 100;

// Lloyd's algorithm with deterministic farthest-point initialisation: the
// first centre is point (seed mod n) drawn through mt19937_64, each further
// centre is the point with the largest distance to its nearest chosen
// centre (lowest index on ties). An empty cluster takes the point farthest
// from its own centroid among clusters with more than one member.
// Throws std::invalid_argument when k < 1 or k > rows.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int max_iter = kDefaultMaxIter);

struct PrototypeSet {
  std::string word;
  std::size_t layer = 0;
  Eigen::MatrixXd centroids;  // rows: centroids for k = 1, then k = 2, ...
};

// Throws std::invalid_argument for zero occurrences.
Eigen::VectorXd average_embedding(const embedstore::OccurrenceEmbeddings& occ, std::size_t layer);

// Union of k-means centroids for k = 1..min(max_k, n_occurrences).
PrototypeSet multi_prototype(const embedstore::OccurrenceEmbeddings& occ, std::size_t layer,
                             int max_k, std::uint64_t seed);

// Maximum cosine over all centroid pairs. Throws std::invalid_argument for
// an empty set or mismatched dimensions.
double maxsim_centroids(const PrototypeSet& a, const PrototypeSet& b);

struct EmbeddingOptions {
  std::size_t layer = 10;
  int max_k = 15;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// Pairs whose category or exemplar word is missing from the store, or whose
// representation has zero norm, are marked unscored.
ScoreTable bert_avg_scores(const dataset::TypicalityDataset& ds,
                           const embedstore::StoreDescription& store,
                           const EmbeddingOptions& options);
ScoreTable bert_mpro_scores(const dataset::TypicalityDataset& ds,
                            const embedstore::StoreDescription& store,
                            const EmbeddingOptions& options);

ScoreTable static_cosine_scores(const dataset::TypicalityDataset& ds,
                                const embedstore::StaticVectors& vectors,
                                const std::string& method = "W2V");

// ---------------------------------------------------------------------------
// PPMI-SVD

// max(0, ln(N n(w,c) / (n(w) n(c)))) over the stored entries; zeros are
// dropped. Throws std::invalid_argument for an empty or all-zero matrix.
Eigen::SparseMatrix<double> ppmi(const Eigen::SparseMatrix<double>& counts);

struct TruncatedSvd {
  Eigen::MatrixXd u;  // rows x dim, orthonormal columns
  Eigen::VectorXd s;  // descending
  Eigen::MatrixXd v;  // cols x dim
};

inline constexpr int kDefaultPowerIterations = 4;

// Randomized subspace iteration with min(dim + 10, min(rows, cols)) probe
// vectors. Singular vector signs are fixed so the largest-magnitude entry of
// each left vector is positive. Throws std::invalid_argument when dim is 0,
// exceeds min(rows, cols), or the matrix is empty.
TruncatedSvd truncated_svd(const Eigen::SparseMatrix<double>& m, int dim, std::uint64_t seed,
                           int power_iterations = kDefaultPowerIterations);

inline constexpr int kDefaultSvdDim = 300;

// Word vectors U_dim * S_dim of the PPMI matrix, one per co-occurrence row.
// dim is capped at min(rows, cols).
embedstore::StaticVectors ppmi_svd_vectors(const embedstore::CooccurrenceCounts& cooc, int dim,
                                           std::uint64_t seed);

}  // namespace typicality::vec
