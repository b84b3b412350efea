#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sil/harness.hpp"

namespace sil {

struct CriterionResult {
    int id = 0;
    bool pass = false;
    std::string summary;
    double seconds = 0.0;
    nlohmann::ordered_json detail;
};

CriterionResult check_cF(const Model& model);
CriterionResult check_profile(const Model& model);
CriterionResult check_connection(const Model& model, double golden_margin, ConnectionResult* main_out = nullptr,
                                 ConnectionResult* nonminimal_out = nullptr);
CriterionResult check_geometry(const Model& model);
CriterionResult check_initial_data(const Model& model);

// front sweeps shared by criteria 6-12
struct FrontEvidence {
    const Model* line = nullptr;
    SweepReport line_report;
    double line_seconds = 0.0;
    const Model* circle = nullptr;
    SweepReport circle_report;
    double circle_seconds = 0.0;
};
CriterionResult check_front_1d(const FrontEvidence& ev);
CriterionResult check_circle(const FrontEvidence& ev);
CriterionResult check_perimeters(const FrontEvidence& ev);
CriterionResult check_minimal_pair(const FrontEvidence& ev);
CriterionResult check_dissipation(const FrontEvidence& ev);
CriterionResult check_coercivity(const FrontEvidence& ev);
CriterionResult check_max_principle(const FrontEvidence& ev);
// any of 6..12, exceptions turned into a failed result
CriterionResult check_front(int id, const FrontEvidence& ev);

struct AcceptanceSetup {
    std::string config_dir;  // holds profile.json, connect.json, geometry.json, ...
    std::string goldens;     // goldens.json
    std::string out_dir;     // empty: no files
};

// ids empty runs all twelve
std::vector<CriterionResult> run_acceptance(const AcceptanceSetup& setup, const std::vector<int>& ids = {});

std::string format_result(const CriterionResult& r);

}  // namespace sil
