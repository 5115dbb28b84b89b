#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ctfa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class CorrelationKind { Sample, Population };

/// Symmetric p x p matrix with an exact unit diagonal.
///
/// The constructor accepts any matrix that is symmetric and unit-diagonal up to
/// `tol`; the stored copy mirrors the upper triangle and writes the diagonal,
/// so downstream code never sees floating-point asymmetry.
class CorrelationMatrix {
public:
    CorrelationMatrix(const Matrix& entries, CorrelationKind kind, double tol = 1e-8);

    static CorrelationMatrix identity(int p, CorrelationKind kind = CorrelationKind::Population);

    int p() const { return static_cast<int>(entries_.rows()); }
    CorrelationKind kind() const { return kind_; }
    const Matrix& matrix() const { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

private:
    Matrix entries_;
    CorrelationKind kind_;
};

using Edge = std::pair<int, int>;

/// Undirected simple graph on p vertices, edges stored as sorted (i < j) pairs.
class EdgeSet {
public:
    explicit EdgeSet(int p) : p_(p) {}
    EdgeSet(int p, std::vector<Edge> edges);

    int p() const { return p_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    bool contains(int i, int j) const;

    /// Sorted neighbour lists.
    std::vector<std::vector<int>> adjacency() const;

    /// Complement graph (all non-adjacent distinct pairs).
    EdgeSet complement() const;

    bool is_subset_of(const EdgeSet& other) const;

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

private:
    int p_;
    std::vector<Edge> edges_;
};

struct GridMode {
    enum class Kind { AllUniqueSample, Equidistant };
    Kind kind = Kind::AllUniqueSample;
    int m = 0;

    static GridMode unique() { return {Kind::AllUniqueSample, 0}; }
    static GridMode equidistant(int m) { return {Kind::Equidistant, m}; }
};

struct ThresholdGrid {
    std::vector<double> values;  // strictly increasing, in [0, 1]
    GridMode mode;
};

/// Pearson correlation of the columns of an n x p data matrix.
CorrelationMatrix sample_correlation(const Matrix& data);

/// Edges (i, j) with |R_ij| > tau. Strict.
EdgeSet threshold_edges(const CorrelationMatrix& R, double tau);

ThresholdGrid candidate_thresholds(const CorrelationMatrix& R, GridMode mode);

/// Builds a grid from explicit values (sorted, deduplicated, checked against [0, 1]).
ThresholdGrid make_grid(std::vector<double> values);

namespace serial {
// Single-threaded reference kernels kept for tests and benchmarks.
CorrelationMatrix sample_correlation(const Matrix& data);
EdgeSet threshold_edges(const CorrelationMatrix& R, double tau);
}  // namespace serial

}  // namespace ctfa
