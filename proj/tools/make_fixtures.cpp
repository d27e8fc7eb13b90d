// Generates the bundled sample surfaces (round, boosted where applicable,
// random l <= 4 perturbation) with recorded expected verdicts. Run once from
// the repository root; outputs land in data/fixtures.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <random>

#include "nullcone/io.hpp"
#include "nullcone/nullcone_surface.hpp"

namespace nc = nullcone;
using nc::Real;

namespace {

nc::SphereField perturbed_profile(const nc::GridPtr& grid, Real r0, Real amp,
                                  std::mt19937_64& rng) {
    std::normal_distribution<Real> gauss;
    nc::Vector c = nc::Vector::Zero(grid->coeff_count());
    for (int l = 1; l <= 4; ++l)
        for (int m = -l; m <= l; ++m)
            c[nc::SphereGrid::coeff_index(l, m)] = gauss(rng) / (1.0 + l * l);
    nc::SphereField pert = nc::SphereField::from_coeffs(grid, std::move(c));
    const Real norm = pert.values().cwiseAbs().maxCoeff();
    nc::Vector r_values = r0 * (nc::Vector::Ones(grid->n_nodes()) +
                                (amp / norm) * pert.values());
    return nc::SphereField::from_values(grid, r_values.cwiseInverse());
}

}  // namespace

int main() {
    const std::string dir = "data/fixtures";
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(20240901);
    const int L = 32;

    struct Entry {
        std::string name;
        nc::WarpingModel model;
        Real r0;
        bool boosted;
    };
    std::vector<Entry> entries = {
        {"minkowski", nc::WarpingModel::minkowski(), 2.0, true},
        {"schwarzschild_m1", nc::WarpingModel::schwarzschild(1.0), 4.0, false},
        {"desitter_l1", nc::WarpingModel::de_sitter(1.0), 0.4, true},
        {"antidesitter_l1", nc::WarpingModel::anti_de_sitter(1.0), 2.0, true},
    };

    nc::json manifest;
    manifest["seed"] = 20240901;
    manifest["bandlimit"] = L;
    nc::json list = nc::json::array();

    for (const auto& e : entries) {
        const int kernel_dim = e.model.is_space_form() ? 4 : 1;
        auto add = [&](const std::string& variant, const nc::SphereField& u,
                       const std::string& classification) {
            const std::string path = dir + "/" + e.name + "_" + variant + ".json";
            nc::save_json_file(path, nc::surface_to_json(e.model, 0.0, u));
            list.push_back({{"file", e.name + "_" + variant + ".json"},
                            {"expected_kernel_dimension", kernel_dim},
                            {"expected_classification", classification}});
            std::cout << "wrote " << path << "\n";
        };

        auto grid = nc::SphereGrid::dealiased(L);
        add("round", nc::SphereField::constant(grid, 1.0 / e.r0), "SphereOfSymmetry");
        if (e.boosted) {
            nc::NullConeSurface b = nc::boost_sphere(e.model, 0.0, e.r0, 0.4, 3, L);
            add("boosted", b.u(), "LowModeBoost");
        }
        add("perturbed", perturbed_profile(grid, e.r0, 0.02, rng), "NonRigid");
    }

    manifest["surfaces"] = list;
    nc::save_json_file(dir + "/manifest.json", manifest);
    std::cout << "wrote " << dir << "/manifest.json\n";
    return 0;
}
