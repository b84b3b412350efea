#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "sil/contour.hpp"
#include "sil/grid.hpp"
#include "sil/interface_geometry.hpp"
#include "sil/potential.hpp"

namespace sil {

struct DiagContext {
    const Potential* pot = nullptr;
    const Interface* iface = nullptr;
    double eps = 0.04;
    int sweep_index = 1;      // k in the perimeter levels c_F - 1.5/k and 1.5/k
    double mp_offset = 0.0;   // <= 0 selects 2.5 eps clamped into [2 eps, delta0/2]
    int mp_samples = 64;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double A_eps = 0.0;
    double E_eps = 0.0;
    double B_eps = 0.0;
    double g_eps = 0.0;
    double h_eps = 0.0;
    double l1_front_error = 0.0;
    std::array<double, 5> coer{};
    double max_norm = 0.0;
    double radius_est = 0.0;
    double perim_plus = 0.0;
    double perim_minus = 0.0;
    double mp_median = 0.0;
    double mp_p90 = 0.0;
    std::array<double, 3> diss{};
    double stress_trace_check = 0.0;
    double min_E_integrand = 0.0;  // smallest weighted nodal integrand of E_eps
    double gl_energy = 0.0;        // nodal central-difference GL energy
};

// lemma constants for the five coercivity terms; the last depends on delta0 of the interface
std::array<double, 5> coercivity_constants(const Interface& iface);

std::vector<double> psi_field(const Potential& pot, const Field& f);
double modulated_energy(const DiagContext& ctx, const Field& f);

struct BulkParts {
    double B = 0.0;
    double g = 0.0;
    double h = 0.0;
};
BulkParts bulk_energy(const DiagContext& ctx, const Field& f);
double l1_front_error(const DiagContext& ctx, const Field& f);
std::array<double, 5> coercivity_terms(const DiagContext& ctx, const Field& f);

// H_eps = -eps (du/dt)^T grad u / |grad u|, node-major with d entries per node
std::vector<double> H_eps_field(const DiagContext& ctx, const Field& f, const std::vector<double>& dudt);

double level_set_perimeter(const Grid& grid, const std::vector<double>& psi, double level);
struct InterfaceEstimate {
    LevelSet level_set;
    double radius_est = 0.0;
};
InterfaceEstimate extract_interface(const DiagContext& ctx, const Field& f, const std::vector<double>& psi);

struct PairStats {
    double offset = 0.0;
    double median = 0.0;
    double p90 = 0.0;
    std::vector<double> deviations;
};
std::vector<PairStats> minimal_pair_deviation(const DiagContext& ctx, const Field& f,
                                              const std::vector<double>& offsets);

MatD stress_tensor(const DiagContext& ctx, const Field& f, std::size_t node);

DiagnosticsRecord compute_record(const DiagContext& ctx, const Field& f, const std::vector<double>& dudt,
                                 double A_eps);

struct GronwallReport {
    double C_hat = 0.0;
    std::vector<double> rates;      // (dE/dt) / E per interval
    double min_dissipation = 0.0;   // smallest dissipation square over all records
};
GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& records);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);

}  // namespace sil
