#include <iostream>

#include <CLI11.hpp>

#include "sil/acceptance_checks.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria 1-12"};
    sil::AcceptanceSetup setup;
    std::vector<int> only;
    app.add_option("--configs", setup.config_dir, "directory of acceptance configs")->required();
    app.add_option("--goldens", setup.goldens, "goldens.json")->required();
    app.add_option("--out", setup.out_dir, "optional output directory for run CSVs");
    app.add_option("--only", only, "criterion ids to run");
    CLI11_PARSE(app, argc, argv);

    auto results = sil::run_acceptance(setup, only);
    int failed = 0;
    for (const auto& r : results) {
        std::cout << sil::format_result(r) << std::endl;
        failed += r.pass ? 0 : 1;
    }
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
