#include "consensus/coupling.hpp"

#include <cmath>
#include <string>

namespace consensus {

namespace {

void require_agents(std::size_t m) {
    if (m < 2) throw InvalidInput("coupling requires at least 2 agents, got " + std::to_string(m));
}

}  // namespace

CouplingMatrix validate_coupling(const Matrix& raw) {
    if (!raw.is_square()) throw InvalidInput("coupling matrix must be square, got " + raw.shape_string());
    const std::size_t m = raw.rows();
    require_agents(m);

    Matrix l = raw;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            if (l(i, j) < -kNegativeClamp) {
                throw InvalidInput("negative off-diagonal coupling l(" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") = " + std::to_string(l(i, j)));
            }
            if (l(i, j) < 0.0) l(i, j) = 0.0;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        double sum = 0.0;
        double off = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            sum += l(i, j);
            if (j != i) off += l(i, j);
        }
        if (std::abs(sum) >= kRowSumTol) {
            throw InvalidInput("zero-row-sum violated in row " + std::to_string(i + 1) + ": sum = " +
                               std::to_string(sum));
        }
        l(i, i) = -off;
    }
    return CouplingMatrix(std::move(l));
}

CouplingMatrix CouplingMatrix::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidInput("coupling scale factor must be positive");
    return validate_coupling(factor * l_);
}

CouplingMatrix laplacian_from_edges(const EdgeList& g) {
    require_agents(g.agents);
    const std::size_t m = g.agents;
    Matrix l(m, m);
    for (const auto& e : g.edges) {
        if (e.target < 1 || e.target > m || e.source < 1 || e.source > m) {
            throw InvalidInput("edge index out of range [1, " + std::to_string(m) + "]: (" + std::to_string(e.target) +
                               ", " + std::to_string(e.source) + ")");
        }
        if (e.target == e.source) throw InvalidInput("self-loop on agent " + std::to_string(e.target));
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw InvalidInput("edge weight must be finite and nonnegative");
        }
        l(e.target - 1, e.source - 1) += e.weight;
        l(e.target - 1, e.target - 1) -= e.weight;
    }
    return validate_coupling(l);
}

Matrix reduction_matrix(std::size_t m) {
    require_agents(m);
    Matrix r(m - 1, m);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        r(i, 0) = -1.0;
        r(i, i + 1) = 1.0;
    }
    return r;
}

Matrix reduction_pinverse(std::size_t m) {
    require_agents(m);
    const double md = static_cast<double>(m);
    Matrix p(m, m - 1, -1.0 / md);
    for (std::size_t i = 0; i + 1 < m; ++i) p(i + 1, i) = (md - 1.0) / md;
    return p;
}

Matrix reduced_coupling(const CouplingMatrix& l) {
    const std::size_t m = l.agents();
    Matrix out(m - 1, m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) out(i, j) = l(i + 1, j + 1) - l(0, j + 1);
    return out;
}

Matrix reduced_coupling_product(const CouplingMatrix& l) {
    const std::size_t m = l.agents();
    return reduction_matrix(m) * l.matrix() * reduction_pinverse(m);
}

}  // namespace consensus
