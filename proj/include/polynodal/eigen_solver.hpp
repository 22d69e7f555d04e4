#pragma once

#include <memory>
#include <vector>

#include "polynodal/field.hpp"
#include "polynodal/mesh.hpp"

namespace polynodal {

struct EigenPair {
    int index = 0;               // 0-based, eigenvalues ascending
    double lambda = 0.0;
    double residual = 0.0;       // ||K v - λ M v|| / (λ ||M v||)
    bool cluster = false;        // relative gap to a neighbor < 1e-6
    std::vector<double> node_values;  // over all mesh nodes; boundary entries 0
};

struct EigenSolveOptions {
    double tol = 1e-8;
    int max_iterations = 400;
    uint64_t seed = 777;
};

// Lowest `count` Dirichlet eigenpairs of -Δ on the meshed polygon (P1 FEM,
// shift-invert subspace iteration). Mass-normalized, deterministic.
std::vector<EigenPair> solve_eigen(const Mesh& mesh, int count,
                                   const EigenSolveOptions& opt = {});

std::shared_ptr<DiscretePlanarField> eigen_field(std::shared_ptr<const Polytope> domain,
                                                 std::shared_ptr<const Mesh> mesh,
                                                 const EigenPair& pair);

inline std::shared_ptr<LiftedField> lift(std::shared_ptr<const PlanarField> base, double lambda) {
    return std::make_shared<LiftedField>(std::move(base), lambda);
}

}  // namespace polynodal
