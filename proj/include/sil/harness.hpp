#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sil/config.hpp"

namespace sil {

struct SnapshotPolicy {
    enum Kind { None, Final, Every } kind = None;
    int every = 1;  // every K-th record

    static SnapshotPolicy parse(const std::string& s);
};

struct RunOutput {
    double eps = 0.0;
    Grid grid;
    std::vector<DiagnosticsRecord> records;
    RunStats stats;
    double seconds = 0.0;
};

// one solver run at eps; writes <tag>.csv and snapshots under out_dir when it is non-empty
RunOutput run_case(const Model& model, double eps, const std::vector<int>& counts, int sweep_index,
                   const SnapshotPolicy& snaps, const std::string& out_dir, const std::string& tag);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    int n = 0;
};
// ordinary least squares on (log x, log y); needs >= 3 points
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepReport {
    std::vector<double> eps_list;
    std::vector<RunOutput> runs;
    nlohmann::ordered_json metrics;  // metric name -> array over eps
    nlohmann::ordered_json slopes;   // metric name -> {slope, slope_se}; empty with < 3 eps
    nlohmann::ordered_json to_json() const;
};

SweepReport run_sweep(const Model& model, const std::string& out_dir, const SnapshotPolicy& snaps);

void write_profile_csv(const std::string& path, const ProfileTable& table);
void write_path_csv(const std::string& path, const ConnectionResult& res);
void write_records_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);

// runs the oracles behind the frozen golden numbers
nlohmann::ordered_json make_goldens(const Config& cfg);

}  // namespace sil
