#include "polynodal/eigen_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>

namespace polynodal {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

void assemble(const Mesh& mesh, const std::vector<int>& dof, int ndof, SpMat& K, SpMat& M) {
    std::vector<Eigen::Triplet<double>> tk, tm;
    for (const MeshTriangle& tr : mesh.triangles) {
        Vec2 p0 = mesh.nodes[static_cast<size_t>(tr.v[0])];
        Vec2 p1 = mesh.nodes[static_cast<size_t>(tr.v[1])];
        Vec2 p2 = mesh.nodes[static_cast<size_t>(tr.v[2])];
        Vec2 e1 = p1 - p0, e2 = p2 - p0;
        double det = e1.cross(e2);  // = 2 * area > 0
        double area = 0.5 * det;
        // gradients of the barycentric basis functions
        Vec2 g[3] = {{(e1.y - e2.y) / det, (e2.x - e1.x) / det},
                     {e2.y / det, -e2.x / det},
                     {-e1.y / det, e1.x / det}};
        for (int i = 0; i < 3; ++i) {
            int di = dof[static_cast<size_t>(tr.v[static_cast<size_t>(i)])];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                int dj = dof[static_cast<size_t>(tr.v[static_cast<size_t>(j)])];
                if (dj < 0) continue;
                tk.emplace_back(di, dj, area * g[i].dot(g[j]));
                tm.emplace_back(di, dj, area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    K.resize(ndof, ndof);
    M.resize(ndof, ndof);
    K.setFromTriplets(tk.begin(), tk.end());
    M.setFromTriplets(tm.begin(), tm.end());
}

}  // namespace

std::vector<EigenPair> solve_eigen(const Mesh& mesh, int count, const EigenSolveOptions& opt) {
    if (count < 1) throw Error(ErrorCode::ConfigError, "solve_eigen: count >= 1");

    std::vector<int> dof(mesh.nodes.size(), -1);
    int ndof = 0;
    for (size_t i = 0; i < mesh.nodes.size(); ++i)
        if (!mesh.boundary_node[i]) dof[i] = ndof++;
    if (ndof <= count)
        throw Error(ErrorCode::SolverDivergence, "solve_eigen: mesh too coarse for count");

    SpMat K, M;
    assemble(mesh, dof, ndof, K, M);

    Eigen::SimplicialLDLT<SpMat> solver(K);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::SolverDivergence, "solve_eigen: stiffness factorization failed");

    int p = std::min(ndof, count + std::max(8, count / 2));
    Eigen::MatrixXd X(ndof, p);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < ndof; ++i) X(i, j) = gauss(rng);

    Eigen::VectorXd lambda(p);
    bool converged = false;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
        Eigen::MatrixXd Y = solver.solve(M * X);
        // M-orthonormalize
        Eigen::MatrixXd G = Y.transpose() * (M * Y);
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success)
            throw Error(ErrorCode::SolverDivergence, "solve_eigen: subspace collapsed");
        Eigen::MatrixXd L = llt.matrixL();
        Y = L.triangularView<Eigen::Lower>().solve(Y.transpose()).transpose();
        // Rayleigh-Ritz
        Eigen::MatrixXd H = Y.transpose() * (K * Y);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
        X = Y * es.eigenvectors();
        lambda = es.eigenvalues();

        converged = true;
        for (int j = 0; j < count && converged; ++j) {
            Eigen::VectorXd r = K * X.col(j) - lambda(j) * (M * X.col(j));
            double denom = lambda(j) * std::sqrt(X.col(j).dot(M * X.col(j)));
            if (r.norm() > opt.tol * denom) converged = false;
        }
    }
    if (!converged)
        throw Error(ErrorCode::SolverDivergence, "solve_eigen: iteration limit reached");

    std::vector<EigenPair> out;
    for (int j = 0; j < count; ++j) {
        EigenPair pair;
        pair.index = j;
        pair.lambda = lambda(j);
        Eigen::VectorXd v = X.col(j);
        double nrm = std::sqrt(v.dot(M * v));
        v /= nrm;
        Eigen::VectorXd r = K * v - lambda(j) * (M * v);
        pair.residual = r.norm() / (lambda(j) * std::sqrt(v.dot(M * v)));
        pair.node_values.assign(mesh.nodes.size(), 0.0);
        for (size_t i = 0; i < mesh.nodes.size(); ++i)
            if (dof[i] >= 0) pair.node_values[i] = v(dof[i]);
        // sign convention: maximum-magnitude node value is positive
        double mx = 0.0;
        for (double x : pair.node_values)
            if (std::abs(x) > std::abs(mx)) mx = x;
        if (mx < 0.0)
            for (double& x : pair.node_values) x = -x;
        out.push_back(std::move(pair));
    }
    for (int j = 0; j < count; ++j) {
        bool near_prev = j > 0 && (out[static_cast<size_t>(j)].lambda -
                                   out[static_cast<size_t>(j - 1)].lambda) <
                                      1e-6 * out[static_cast<size_t>(j)].lambda;
        bool near_next = j + 1 < count && (out[static_cast<size_t>(j + 1)].lambda -
                                           out[static_cast<size_t>(j)].lambda) <
                                              1e-6 * out[static_cast<size_t>(j + 1)].lambda;
        out[static_cast<size_t>(j)].cluster = near_prev || near_next;
    }
    return out;
}

std::shared_ptr<DiscretePlanarField> eigen_field(std::shared_ptr<const Polytope> domain,
                                                 std::shared_ptr<const Mesh> mesh,
                                                 const EigenPair& pair) {
    return std::make_shared<DiscretePlanarField>(std::move(domain), std::move(mesh),
                                                 pair.node_values);
}

}  // namespace polynodal
