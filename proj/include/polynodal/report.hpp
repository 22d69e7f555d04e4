#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "polynodal/doubling.hpp"
#include "polynodal/nodal.hpp"
#include "polynodal/star.hpp"

namespace polynodal {

using ordered_json = nlohmann::ordered_json;

// One verification check: name, pass/fail/skipped (+reason), realized
// constants with their tolerances.
struct CheckRecord {
    std::string name;
    std::string status;  // "pass" | "fail" | "skipped"
    std::string reason;  // skip reason or failure detail
    ordered_json values; // realized constants / tolerances
};

struct VerificationReport {
    std::string schema = "polynodal-report/1";
    std::string polytope;
    uint64_t seed = 0;
    std::vector<CheckRecord> checks;

    void add(CheckRecord rec) { checks.push_back(std::move(rec)); }
    bool all_passed() const;
    ordered_json to_json() const;  // deterministic: no timestamps or timings
};

// CSV emitters (deterministic formatting, 17 significant digits)
std::string profile_csv(const DoublingProfile& profile);            // r,mass,H,D,beta,N
std::string segments_csv(const NodalSet& z);                        // x1,y1,x2,y2,triangle,shell
std::string survey_csv(const YauSurvey& survey);                    // index,lambda,length,ratio
std::string doubling_survey_csv(const DoublingSurvey& survey);

// JSON fragments
ordered_json cover_json(const StarCover& cover, const CoverReport& report);
ordered_json profile_json(const DoublingProfile& profile);
ordered_json doubling_survey_json(const DoublingSurvey& survey);
ordered_json yau_survey_json(const YauSurvey& survey);
ordered_json shells_json(const ShellDecomposition& dec);

// SVG overlay: polygon outline, optional nodal segments, optional cover balls.
std::string svg_overlay(const Polytope& P, const NodalSet* z = nullptr,
                        const StarCover* cover = nullptr);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace polynodal
