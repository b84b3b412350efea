#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sil/diagnostics.hpp"
#include "sil/initial_data.hpp"
#include "sil/pde_solver.hpp"
#include "sil/profile_1d.hpp"

namespace sil {

inline constexpr int kConfigVersion = 1;

struct DomainSpec {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<int> counts;  // fixed node counts, or empty to derive from h_over_eps
    double h_over_eps = 0.0;  // eps / h

    int dim() const { return static_cast<int>(lo.size()); }
    Grid grid_for(double eps, const std::vector<int>& counts_override = {}) const;
};

struct InterfaceSpec {
    InterfaceKind kind = InterfaceKind::ShrinkingSphere;
    std::vector<double> center;
    double r0 = 0.0;
    double x0 = 0.0;
    double delta0 = 0.0;
};

struct ConnectSpec {
    VecN p_plus;
    VecN p_minus;
    int nodes = 2001;
    double s_half = 0.0;
    bool has_nonminimal = false;
    VecN q_plus;
    VecN q_minus;
    nlohmann::json q_manifold;  // null: same target as the main pair
};

struct GeometrySpec {
    double t = 0.0;
    std::vector<double> fd_steps{1e-2, 5e-3, 2.5e-3};
    int samples = 64;
};

struct SweepSpec {
    std::vector<double> eps_list;
    std::vector<std::vector<int>> counts_list;  // per eps, optional
};

struct Config {
    nlohmann::json doc;
    std::string base_dir;  // directory of the config file, for relative paths

    nlohmann::json manifold;
    double c3 = 1.0;
    Ramp ramp = Ramp::Cubic;
    std::optional<InterfaceSpec> interface;
    std::optional<InitialMaps> maps;
    std::optional<DomainSpec> domain;
    SolverConfig solver;
    double mp_offset = 0.0;
    int mp_samples = 64;
    int perimeter_k0 = 0;  // 0: smallest k with 2/k < c_F/2
    SweepSpec sweep;
    std::optional<ConnectSpec> connect;
    GeometrySpec geometry;
    nlohmann::json acceptance;
    std::string out_dir = "out";
};

Config parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
Config load_config(const std::string& path);

ManifoldPair build_manifold(const nlohmann::json& desc);

// everything derived from a config that does not depend on eps
struct Model {
    Config cfg;
    std::unique_ptr<Potential> pot;
    ProfileTable table;
    std::optional<Interface> iface;

    int perimeter_k(int sweep_index) const;
    DiagContext context(double eps, int sweep_index) const;
};

Model build_model(const Config& cfg);

}  // namespace sil
