#include "polynodal/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace polynodal {

namespace {

using nlohmann::json;

void write_bytes(std::ofstream& os, const void* p, size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

bool read_bytes(std::ifstream& is, void* p, size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    return static_cast<size_t>(is.gcount()) == n;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Polytope load_polytope(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("vertices"))
        throw Error(ErrorCode::IoError, path.string() + ": missing \"vertices\"");
    int dim = j.value("dimension", 2);
    if (dim != 2) throw Error(ErrorCode::IoError, path.string() + ": only dimension 2 supported");
    std::vector<Vec2> verts;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
            throw Error(ErrorCode::IoError, path.string() + ": vertices must be [x, y] pairs");
        verts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return Polytope::polygon(verts);
}

void save_polytope(const Polytope& P, const std::filesystem::path& path) {
    json j;
    j["dimension"] = P.dimension();
    json verts = json::array();
    for (size_t i = 0; i < P.vertex_count(); ++i) {
        Vec2 v = P.vertex(static_cast<int>(i));
        verts.push_back({v.x, v.y});
    }
    j["vertices"] = std::move(verts);
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    os << j.dump(2) << "\n";
}

Polytope resolve_polytope(const std::string& name_or_path) {
    if (name_or_path == "square") return make_unit_square();
    if (name_or_path == "rectangle") return make_rectangle(2.0, 1.0);
    if (name_or_path == "lshape") return make_l_shape();
    if (name_or_path == "tshape") return make_t_shape();
    if (name_or_path == "pentagon") return make_regular_polygon(5, 1.0);
    return load_polytope(name_or_path);
}

std::string polytope_hash(const Polytope& P) {
    uint64_t h = 14695981039346656037ull;
    auto mix = [&](const void* p, size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    int dim = P.dimension();
    mix(&dim, sizeof dim);
    for (size_t i = 0; i < P.vertex_count(); ++i) {
        Vec2 v = P.vertex(static_cast<int>(i));
        mix(&v.x, sizeof v.x);
        mix(&v.y, sizeof v.y);
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::filesystem::path cache_directory(const std::filesystem::path& fallback) {
    if (const char* env = std::getenv("NODAL_CACHE_DIR")) return env;
    if (fallback.empty()) return {};
    return fallback / "cache";
}

void save_mesh_cache(const std::filesystem::path& file, const Mesh& mesh) {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + file.string());
    const char magic[4] = {'P', 'N', 'M', '1'};
    write_bytes(os, magic, 4);
    uint64_t nn = mesh.nodes.size(), nt = mesh.triangles.size();
    write_bytes(os, &nn, sizeof nn);
    write_bytes(os, &nt, sizeof nt);
    for (const Vec2& p : mesh.nodes) {
        write_bytes(os, &p.x, sizeof p.x);
        write_bytes(os, &p.y, sizeof p.y);
    }
    for (const MeshTriangle& t : mesh.triangles) {
        int32_t v[3] = {t.v[0], t.v[1], t.v[2]};
        write_bytes(os, v, sizeof v);
    }
    write_bytes(os, mesh.boundary_node.data(), mesh.boundary_node.size());
}

std::optional<Mesh> load_mesh_cache(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[4];
    if (!read_bytes(is, magic, 4) || std::string_view(magic, 4) != "PNM1") return std::nullopt;
    uint64_t nn = 0, nt = 0;
    if (!read_bytes(is, &nn, sizeof nn) || !read_bytes(is, &nt, sizeof nt)) return std::nullopt;
    Mesh mesh;
    mesh.nodes.resize(nn);
    for (Vec2& p : mesh.nodes)
        if (!read_bytes(is, &p.x, sizeof p.x) || !read_bytes(is, &p.y, sizeof p.y))
            return std::nullopt;
    mesh.triangles.resize(nt);
    for (MeshTriangle& t : mesh.triangles) {
        int32_t v[3];
        if (!read_bytes(is, v, sizeof v)) return std::nullopt;
        t.v = {v[0], v[1], v[2]};
    }
    mesh.boundary_node.resize(nn);
    if (!read_bytes(is, mesh.boundary_node.data(), nn)) return std::nullopt;
    finalize_mesh(mesh);
    return mesh;
}

void save_eigen_cache(const std::filesystem::path& file, const std::vector<EigenPair>& pairs) {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + file.string());
    const char magic[4] = {'P', 'N', 'E', '1'};
    write_bytes(os, magic, 4);
    uint64_t np = pairs.size();
    write_bytes(os, &np, sizeof np);
    for (const EigenPair& p : pairs) {
        int32_t idx = p.index;
        uint8_t cluster = p.cluster ? 1 : 0;
        uint64_t nv = p.node_values.size();
        write_bytes(os, &idx, sizeof idx);
        write_bytes(os, &p.lambda, sizeof p.lambda);
        write_bytes(os, &p.residual, sizeof p.residual);
        write_bytes(os, &cluster, sizeof cluster);
        write_bytes(os, &nv, sizeof nv);
        write_bytes(os, p.node_values.data(), nv * sizeof(double));
    }
}

std::optional<std::vector<EigenPair>> load_eigen_cache(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[4];
    if (!read_bytes(is, magic, 4) || std::string_view(magic, 4) != "PNE1") return std::nullopt;
    uint64_t np = 0;
    if (!read_bytes(is, &np, sizeof np)) return std::nullopt;
    std::vector<EigenPair> pairs(np);
    for (EigenPair& p : pairs) {
        int32_t idx;
        uint8_t cluster;
        uint64_t nv;
        if (!read_bytes(is, &idx, sizeof idx) || !read_bytes(is, &p.lambda, sizeof p.lambda) ||
            !read_bytes(is, &p.residual, sizeof p.residual) ||
            !read_bytes(is, &cluster, sizeof cluster) || !read_bytes(is, &nv, sizeof nv))
            return std::nullopt;
        p.index = idx;
        p.cluster = cluster != 0;
        p.node_values.resize(nv);
        if (!read_bytes(is, p.node_values.data(), nv * sizeof(double))) return std::nullopt;
    }
    return pairs;
}

Mesh cached_mesh(const Polytope& P, double h, const MeshOptions& opt,
                 const std::filesystem::path& cache_dir, bool* hit) {
    if (hit) *hit = false;
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        std::string key = "mesh-" + polytope_hash(P) + "-h" + format_double(h) + "-a" +
                          format_double(opt.min_angle_deg) +
                          (opt.grade_corners ? "-g" + std::to_string(opt.grade_rings) : "") + "-s" +
                          std::to_string(opt.smoothing_iters) + ".bin";
        file = cache_dir / key;
        if (auto mesh = load_mesh_cache(file)) {
            if (hit) *hit = true;
            return std::move(*mesh);
        }
    }
    Mesh mesh = generate_mesh(P, h, opt);
    if (!file.empty()) save_mesh_cache(file, mesh);
    return mesh;
}

std::vector<EigenPair> cached_eigen(const Polytope& P, const Mesh& mesh, double h, int count,
                                    const std::filesystem::path& cache_dir, bool* hit) {
    if (hit) *hit = false;
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        std::string key = "eigen-" + polytope_hash(P) + "-h" + format_double(h) + "-n" +
                          std::to_string(count) + ".bin";
        file = cache_dir / key;
        if (auto pairs = load_eigen_cache(file)) {
            if (pairs->size() == static_cast<size_t>(count) &&
                (pairs->empty() || pairs->front().node_values.size() == mesh.nodes.size())) {
                if (hit) *hit = true;
                return std::move(*pairs);
            }
        }
    }
    std::vector<EigenPair> pairs = solve_eigen(mesh, count);
    if (!file.empty()) save_eigen_cache(file, pairs);
    return pairs;
}

}  // namespace polynodal
