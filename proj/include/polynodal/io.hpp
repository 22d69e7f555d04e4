#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "polynodal/eigen_solver.hpp"
#include "polynodal/mesh.hpp"
#include "polynodal/polytope.hpp"

namespace polynodal {

// JSON schema: {"dimension": 2, "vertices": [[x, y], ...]}.
Polytope load_polytope(const std::filesystem::path& path);
void save_polytope(const Polytope& P, const std::filesystem::path& path);

// Named builders accepted wherever a polytope path is expected:
// square | rectangle | lshape | tshape | pentagon. Anything else is a path.
Polytope resolve_polytope(const std::string& name_or_path);

// Stable content hash of the polytope geometry (hex string).
std::string polytope_hash(const Polytope& P);

// Cache directory: NODAL_CACHE_DIR if set, else <out>/cache when provided.
std::filesystem::path cache_directory(const std::filesystem::path& fallback);

// Full-precision binary caches keyed by polytope hash + parameters.
void save_mesh_cache(const std::filesystem::path& file, const Mesh& mesh);
std::optional<Mesh> load_mesh_cache(const std::filesystem::path& file);
void save_eigen_cache(const std::filesystem::path& file, const std::vector<EigenPair>& pairs);
std::optional<std::vector<EigenPair>> load_eigen_cache(const std::filesystem::path& file);

// Cached pipeline stages: reuse the cache when the key matches, otherwise
// compute and store. An empty cache_dir disables caching.
Mesh cached_mesh(const Polytope& P, double h, const MeshOptions& opt,
                 const std::filesystem::path& cache_dir, bool* hit = nullptr);
std::vector<EigenPair> cached_eigen(const Polytope& P, const Mesh& mesh, double h, int count,
                                    const std::filesystem::path& cache_dir, bool* hit = nullptr);

}  // namespace polynodal
