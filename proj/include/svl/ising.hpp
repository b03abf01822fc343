#pragma once

#include <cstdint>
#include <vector>

namespace svl {

enum class Boundary { open, periodic };

/// Undirected coupling J_ij between vertices i and j.
struct Edge {
    std::int32_t i;
    std::int32_t j;
    double coupling;
};

/// Ising problem instance: couplings J_ij on a graph plus local fields g_i.
/// Immutable after construction.
class IsingProblem {
public:
    /// Vertex indices must lie in [0, n), self-edges are rejected, and each
    /// undirected edge may appear at most once.
    IsingProblem(std::int32_t n, std::vector<Edge> edges, std::vector<double> fields,
                 Boundary boundary = Boundary::open);

    /// Homogeneous chain with coupling J on bonds (i, i+1), zero fields, and
    /// the wraparound bond (n-1, 0) iff periodic. Periodic chains need n >= 3
    /// (n = 2 would duplicate the single bond).
    static IsingProblem uniform_chain(std::int32_t n, double coupling, Boundary boundary);

    std::int32_t size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& fields() const { return fields_; }
    Boundary boundary() const { return boundary_; }

    /// Number of bonds; normalizes kink counts into densities.
    std::int64_t bond_count() const { return static_cast<std::int64_t>(edges_.size()); }

private:
    std::int32_t n_;
    std::vector<Edge> edges_;
    std::vector<double> fields_;
    Boundary boundary_;
};

} // namespace svl
