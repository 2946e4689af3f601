#pragma once

#include <cstddef>
#include <vector>

#include "consensus/matrix.hpp"

namespace consensus {

/// Row sums within this distance of zero are repaired on the diagonal; larger ones are rejected.
inline constexpr double kRowSumTol = 1e-10;
/// Off-diagonal entries in [-kNegativeClamp, 0) are clamped to zero on ingest.
inline constexpr double kNegativeClamp = 1e-12;

/**
 * Validated coupling matrix L: m >= 2 agents, zero row sums, nonnegative
 * off-diagonals, nonpositive diagonal. Entry (i, j) weights agent j's state in
 * agent i's dynamics. Construct through validate_coupling or laplacian_from_edges.
 */
class CouplingMatrix {
public:
    [[nodiscard]] std::size_t agents() const noexcept { return l_.rows(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return l_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return l_(i, j); }

    /// Same topology with every weight multiplied by factor > 0.
    [[nodiscard]] CouplingMatrix scaled(double factor) const;

private:
    explicit CouplingMatrix(Matrix l) : l_(std::move(l)) {}
    friend CouplingMatrix validate_coupling(const Matrix& raw);

    Matrix l_;
};

/// One directed interaction: agent `target` uses agent `source`'s state with weight `weight`.
/// Indices are 1-based, as in the edge-list file format.
struct Edge {
    std::size_t target = 0;
    std::size_t source = 0;
    double weight = 0.0;
};

struct EdgeList {
    std::size_t agents = 0;
    std::vector<Edge> edges;
};

/// Accepts raw when it is a valid coupling matrix (after clamping and row-sum repair); throws InvalidInput otherwise.
CouplingMatrix validate_coupling(const Matrix& raw);

/**
 * Builds L from an edge list. Edge (i, j, w) means agent i receives from agent j:
 * l_ij += w and l_ii -= w. Duplicate edges accumulate. Throws on out-of-range
 * indices, self-loops, and negative or non-finite weights.
 */
CouplingMatrix laplacian_from_edges(const EdgeList& g);

/// (m-1) x m difference operator: row i maps stacked states to x_{i+1} - x_1.
Matrix reduction_matrix(std::size_t m);

/// Moore-Penrose inverse of reduction_matrix(m), in closed form.
Matrix reduction_pinverse(std::size_t m);

/// L* = R L R^+ via the closed form L*_ij = l_(i+1)(j+1) - l_1(j+1).
Matrix reduced_coupling(const CouplingMatrix& l);

/// L* by explicit triple product; used as the cross-check for the closed form.
Matrix reduced_coupling_product(const CouplingMatrix& l);

}  // namespace consensus
