#include "svl/ising.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace svl {

IsingProblem::IsingProblem(std::int32_t n, std::vector<Edge> edges, std::vector<double> fields,
                           Boundary boundary)
    : n_(n), edges_(std::move(edges)), fields_(std::move(fields)), boundary_(boundary)
{
    if (n_ < 1) {
        throw std::invalid_argument("problem needs at least one vertex");
    }
    if (fields_.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("field vector length must equal vertex count");
    }
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (const auto& e : edges_) {
        if (e.i < 0 || e.i >= n_ || e.j < 0 || e.j >= n_) {
            throw std::invalid_argument("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j)
                                        + ") references a vertex outside [0, " + std::to_string(n_)
                                        + ")");
        }
        if (e.i == e.j) {
            throw std::invalid_argument("self-edge at vertex " + std::to_string(e.i));
        }
        const auto key = std::minmax(e.i, e.j);
        if (!seen.insert(key).second) {
            throw std::invalid_argument("duplicate edge (" + std::to_string(key.first) + ", "
                                        + std::to_string(key.second) + ")");
        }
    }
}

IsingProblem IsingProblem::uniform_chain(std::int32_t n, double coupling, Boundary boundary)
{
    if (n < 2) {
        throw std::invalid_argument("chain needs at least two vertices");
    }
    if (boundary == Boundary::periodic && n < 3) {
        throw std::invalid_argument("periodic chain needs at least three vertices");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1, coupling});
    }
    if (boundary == Boundary::periodic) {
        edges.push_back({n - 1, 0, coupling});
    }
    return IsingProblem(n, std::move(edges), std::vector<double>(static_cast<std::size_t>(n), 0.0),
                        boundary);
}

} // namespace svl
