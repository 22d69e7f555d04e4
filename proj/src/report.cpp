#include "polynodal/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace polynodal {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

bool VerificationReport::all_passed() const {
    for (const CheckRecord& c : checks)
        if (c.status == "fail") return false;
    return true;
}

ordered_json VerificationReport::to_json() const {
    ordered_json j;
    j["schema"] = schema;
    j["polytope"] = polytope;
    j["seed"] = seed;
    j["all_passed"] = all_passed();
    ordered_json arr = ordered_json::array();
    for (const CheckRecord& c : checks) {
        ordered_json r;
        r["name"] = c.name;
        r["status"] = c.status;
        if (!c.reason.empty()) r["reason"] = c.reason;
        if (!c.values.is_null()) r["values"] = c.values;
        arr.push_back(std::move(r));
    }
    j["checks"] = std::move(arr);
    return j;
}

std::string profile_csv(const DoublingProfile& profile) {
    std::ostringstream os;
    os << "r,mass,H,D,beta,N\n";
    for (size_t i = 0; i < profile.radii.size(); ++i)
        os << fmt(profile.radii[i]) << ',' << fmt(profile.mass[i]) << ',' << fmt(profile.H[i])
           << ',' << fmt(profile.D[i]) << ',' << fmt(profile.beta[i]) << ',' << fmt(profile.N[i])
           << '\n';
    return os.str();
}

std::string segments_csv(const NodalSet& z) {
    std::ostringstream os;
    os << "x1,y1,x2,y2,triangle,shell\n";
    for (const NodalSegment& s : z.segments)
        os << fmt(s.a.x) << ',' << fmt(s.a.y) << ',' << fmt(s.b.x) << ',' << fmt(s.b.y) << ','
           << s.triangle << ',' << s.shell << '\n';
    return os.str();
}

std::string survey_csv(const YauSurvey& survey) {
    std::ostringstream os;
    os << "index,lambda,length,ratio,cluster\n";
    for (const YauEntry& e : survey.entries)
        os << e.index << ',' << fmt(e.lambda) << ',' << fmt(e.length) << ',' << fmt(e.ratio) << ','
           << (e.cluster ? 1 : 0) << '\n';
    return os.str();
}

std::string doubling_survey_csv(const DoublingSurvey& survey) {
    std::ostringstream os;
    os << "eigen_index,lambda,cx,cy,t,r,N,ratio,noise\n";
    for (const SurveyEntry& e : survey.entries)
        os << e.eigen_index << ',' << fmt(e.lambda) << ',' << fmt(e.center.x) << ','
           << fmt(e.center.y) << ',' << fmt(e.center.z) << ',' << fmt(e.r) << ',' << fmt(e.n)
           << ',' << fmt(e.ratio) << ',' << (e.noise ? 1 : 0) << '\n';
    return os.str();
}

ordered_json cover_json(const StarCover& cover, const CoverReport& report) {
    ordered_json j;
    j["r0"] = cover.r0;
    j["c_star"] = cover.c_star;
    j["shrink"] = cover.shrink;
    j["ball_count"] = cover.balls.size();
    ordered_json balls = ordered_json::array();
    for (const CoverBall& b : cover.balls)
        balls.push_back({{"level", b.level},
                         {"center", {b.center.x, b.center.y}},
                         {"certified_radius", b.certified_radius},
                         {"covering_radius", b.covering_radius},
                         {"star", b.certificate.star_shaped}});
    j["balls"] = std::move(balls);
    j["verify"] = {{"ok", report.ok},
                   {"samples", report.samples},
                   {"gaps", report.gaps},
                   {"certificate_failures", report.certificate_failures},
                   {"max_multiplicity", report.max_multiplicity}};
    return j;
}

ordered_json profile_json(const DoublingProfile& profile) {
    ordered_json j;
    j["center"] = {profile.center.x, profile.center.y, profile.center.z};
    j["ambient_dim"] = profile.ambient_dim;
    j["certificate_ok"] = profile.certificate_ok;
    j["noise_floor"] = profile.floor;
    j["r"] = profile.radii;
    j["mass"] = profile.mass;
    j["H"] = profile.H;
    j["D"] = profile.D;
    j["beta"] = profile.beta;
    j["N"] = profile.N;
    return j;
}

ordered_json doubling_survey_json(const DoublingSurvey& survey) {
    ordered_json entries = ordered_json::array();
    for (const SurveyEntry& e : survey.entries)
        entries.push_back({{"eigen_index", e.eigen_index},
                           {"lambda", e.lambda},
                           {"center", {e.center.x, e.center.y, e.center.z}},
                           {"r", e.r},
                           {"N", e.n},
                           {"ratio", e.ratio},
                           {"noise", e.noise}});
    ordered_json sup = ordered_json::array();
    for (const auto& [lambda, ratio] : survey.sup_ratio)
        sup.push_back({{"lambda", lambda}, {"sup_ratio", ratio}});
    return {{"entries", std::move(entries)}, {"sup_ratio", std::move(sup)}};
}

ordered_json yau_survey_json(const YauSurvey& survey) {
    ordered_json entries = ordered_json::array();
    for (const YauEntry& e : survey.entries)
        entries.push_back({{"index", e.index},
                           {"lambda", e.lambda},
                           {"length", e.length},
                           {"ratio", e.ratio},
                           {"cluster", e.cluster}});
    return {{"entries", std::move(entries)},
            {"max_ratio", survey.max_ratio},
            {"trend_slope", survey.trend_slope}};
}

ordered_json shells_json(const ShellDecomposition& dec) {
    ordered_json shells = ordered_json::array();
    for (const Shell& sh : dec.shells)
        shells.push_back({{"k", sh.k},
                          {"d_lo", sh.d_lo},
                          {"d_hi", sh.d_hi},
                          {"nodal_length", sh.nodal_length},
                          {"ball_count", sh.ball_count},
                          {"ball_radius", sh.ball_radius}});
    return {{"center", {dec.center.x, dec.center.y}},
            {"r0", dec.r0},
            {"k_max", dec.k_max},
            {"shells", std::move(shells)},
            {"unresolved_length", dec.unresolved_length},
            {"outside_length", dec.outside_length},
            {"total_length", dec.total_length}};
}

std::string svg_overlay(const Polytope& P, const NodalSet* z, const StarCover* cover) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (size_t i = 0; i < P.vertex_count(); ++i) {
        Vec2 v = P.vertex(static_cast<int>(i));
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    double pad = 0.05 * std::max(x1 - x0, y1 - y0);
    double w = (x1 - x0) + 2 * pad, hgt = (y1 - y0) + 2 * pad;
    double scale = 640.0 / std::max(w, hgt);
    auto X = [&](double x) { return (x - x0 + pad) * scale; };
    auto Y = [&](double y) { return (y1 + pad - y) * scale; };  // flip y

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w * scale) << "\" height=\""
       << fmt(hgt * scale) << "\" viewBox=\"0 0 " << fmt(w * scale) << ' ' << fmt(hgt * scale)
       << "\">\n";
    os << "<polygon points=\"";
    for (size_t i = 0; i < P.vertex_count(); ++i) {
        Vec2 v = P.vertex(static_cast<int>(i));
        os << fmt(X(v.x)) << ',' << fmt(Y(v.y)) << ' ';
    }
    os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    if (cover) {
        for (const CoverBall& b : cover->balls) {
            const char* color = b.level == 0 ? "#d62728" : "#1f77b4";
            os << "<circle cx=\"" << fmt(X(b.center.x)) << "\" cy=\"" << fmt(Y(b.center.y))
               << "\" r=\"" << fmt(b.covering_radius * scale) << "\" fill=\"" << color
               << "\" fill-opacity=\"0.15\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
        }
    }
    if (z) {
        for (const NodalSegment& s : z->segments)
            os << "<line x1=\"" << fmt(X(s.a.x)) << "\" y1=\"" << fmt(Y(s.a.y)) << "\" x2=\""
               << fmt(X(s.b.x)) << "\" y2=\"" << fmt(Y(s.b.y))
               << "\" stroke=\"#2ca02c\" stroke-width=\"1.5\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    os << content;
}

}  // namespace polynodal
