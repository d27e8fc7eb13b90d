#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "nullcone/cmc.hpp"
#include "nullcone/io.hpp"
#include "nullcone/report.hpp"
#include "nullcone/rigidity.hpp"
#include "test_helpers.hpp"

using namespace nullcone;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("model descriptor round trip") {
    auto schw = WarpingModel::schwarzschild(1.5, 4);
    json j = model_to_json(schw);
    WarpingModel back = model_from_json(j);
    CHECK(back.kind() == SpacetimeKind::Schwarzschild);
    CHECK(back.mass() == 1.5);
    CHECK(back.dimension() == 4);

    CHECK_THROWS_AS(model_from_json(json{{"kind", "kerr"}}), InputError);
    auto custom = WarpingModel::custom([](Real) { return 1.0; },
                                       [](Real) { return 0.0; },
                                       [](Real) { return 0.0; }, 0.1, 2.0);
    CHECK_THROWS_AS(model_to_json(custom), InputError);
}

TEST_CASE("coefficient files serialize losslessly") {
    std::mt19937_64 rng(1);
    GridPtr grid = SphereGrid::standard(10);
    SphereField u = testing::random_field(grid, 10, rng);
    json j = coeffs_to_json(10, u.coeffs());
    const std::string path = tmp_path("coeffs_test.json");
    save_json_file(path, j);
    int L = 0;
    Vector back = coeffs_from_json(load_json_file(path), &L);
    CHECK(L == 10);
    CHECK((back - u.coeffs()).cwiseAbs().maxCoeff() == 0.0);  // bit-exact

    json bad = j;
    bad["coeffs"].push_back({99, 0, 1.0});
    CHECK_THROWS_AS(coeffs_from_json(bad, nullptr), InputError);
}

TEST_CASE("surface files round trip and validate positivity") {
    auto mink = WarpingModel::minkowski();
    NullConeSurface b = boost_sphere(mink, 0.7, 2.0, 0.3, 3, 16);
    json j = surface_to_json(mink, 0.7, b.u());
    const std::string path = tmp_path("surface_test.json");
    save_json_file(path, j);
    NullConeSurface back = surface_from_json(load_json_file(path));
    CHECK(back.w0() == 0.7);
    CHECK((back.u().coeffs() - b.u().coeffs()).cwiseAbs().maxCoeff() == 0.0);

    // u with a sign change is rejected by the loader (r < 0)
    json bad = j;
    bad["u_coeffs"] = json::array({{0, 0, 0.1}, {1, 0, 5.0}});
    CHECK_THROWS_AS(surface_from_json(bad), DomainError);
}

TEST_CASE("reports have stable field order and deterministic numeric sections") {
    auto make = [&](const std::string& path) {
        RunReport rep("test-cmd", 42);
        rep.set_model(model_to_json(WarpingModel::minkowski()));
        rep.set_bandlimit(8);
        rep.set_tolerance("foo", 1e-8);
        rep.set_result("value", 0.125);
        rep.set_result("vector", {1.0, 2.0});
        rep.write(path);
    };
    const std::string p1 = tmp_path("rep1.json"), p2 = tmp_path("rep2.json");
    make(p1);
    make(p2);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(s1.find("\"command\"") < s1.find("\"results\""));
    CHECK(s1.find("\"results\"") < s1.find("\"timings\""));

    CHECK(file_digest(p1) == file_digest(p2));
}

TEST_CASE("plot writer emits svg and csv") {
    const std::string base = tmp_path("plot_test");
    Vector a(5), b(5);
    a << 1, 2, 3, 4, 5;
    b << 1e-1, 1e-3, 1e-5, 1e-7, 1e-9;
    write_plot(base, "demo", {{"a", a}, {"b", b}}, true);
    CHECK(std::filesystem::exists(base + ".svg"));
    CHECK(std::filesystem::exists(base + ".csv"));
    std::ifstream svg(base + ".svg");
    std::string content((std::istreambuf_iterator<char>(svg)), {});
    CHECK(content.find("polyline") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
    CHECK(run_cli("definitely-not-a-subcommand") == 1);
    CHECK(run_cli("ncc-check --model nosuchkind") == 1);
    CHECK(run_cli("surface-report --surface /nonexistent.json") == 1);
    CHECK(run_cli("ncc-check --model schwarzschild --mass 1 --r-min 2.1 --r-max 50 "
                  "--points 40") == 0);
}

TEST_CASE("cli: boost-sphere output feeds surface-report") {
    const std::string surf = tmp_path("cli_boost.json");
    const std::string rep = tmp_path("cli_boost_report.json");
    CHECK(run_cli("boost-sphere --model minkowski --r0 2 --beta 0.4 --bandlimit 16 "
                  "--out " + surf) == 0);
    CHECK(run_cli("surface-report --surface " + surf + " --report " + rep) == 0);
    json j = load_json_file(rep);
    CHECK(j["results"]["classification"] == "LowModeBoost");
    CHECK(j["results"]["cnnc_residual_max"].get<Real>() < 1e-6);
}

TEST_CASE("cli: theorem falsification hook returns exit 3") {
    // a boosted profile declared on a Schwarzschild cone is the one
    // configuration the classifier must flag
    auto schw = WarpingModel::schwarzschild(1.0);
    GridPtr grid = SphereGrid::dealiased(12);
    Vector c = Vector::Zero(grid->coeff_count());
    c[0] = std::cosh(0.2) / 4.0 * std::sqrt(4.0 * kPi);
    c[SphereGrid::coeff_index(1, 0)] = -std::sinh(0.2) / 4.0 * std::sqrt(4 * kPi / 3);
    SphereField u = SphereField::from_coeffs(grid, std::move(c));
    const std::string surf = tmp_path("cli_violation.json");
    save_json_file(surf, surface_to_json(schw, 0.0, u));
    CHECK(run_cli("surface-report --surface " + surf) == 3);
}

TEST_CASE("cli: solve-cmc determinism of the numeric report section") {
    const std::string r1 = tmp_path("cmc_rep1.json"), r2 = tmp_path("cmc_rep2.json");
    CHECK(run_cli("solve-cmc --model schwarzschild --mass 1 --E 0.0625 --seed 7 "
                  "--bandlimit 8 --report " + r1) == 0);
    CHECK(run_cli("solve-cmc --model schwarzschild --mass 1 --E 0.0625 --seed 7 "
                  "--bandlimit 8 --report " + r2) == 0);
    json j1 = load_json_file(r1), j2 = load_json_file(r2);
    j1.erase("timings");
    j2.erase("timings");
    CHECK(j1.dump() == j2.dump());
    CHECK(j1["results"]["classification"] == "SphereOfSymmetry");
}

TEST_CASE("cli: verify-identities requires a fixtures directory") {
    CHECK(run_cli("verify-identities --suite frames --fixtures /no/such/dir") == 1);
    CHECK(run_cli(std::string("verify-identities --suite frames --fixtures ") +
                  FIXTURES_DIR) == 0);
}

TEST_CASE("cli: mobius and curvature-oracle round") {
    const std::string rep = tmp_path("mobius_rep.json");
    CHECK(run_cli("mobius --a 0.8 0.2 --b 0.1 -0.3 --c 0.05 0.1 --d 1.1 0 "
                  "--bandlimit 16 --report " + rep) == 0);
    json j = load_json_file(rep);
    CHECK(j["results"]["low_mode_distance"].get<Real>() < 1e-9);

    const std::string errata = tmp_path("errata.jsonl");
    std::filesystem::remove(errata);
    CHECK(run_cli("curvature-oracle --model schwarzschild --mass 1 --points 2 "
                  "--errata-file " + errata) == 0);
    std::ifstream ef(errata);
    int lines = 0;
    std::string line;
    while (std::getline(ef, line)) ++lines;
    CHECK(lines >= 2 * 4);  // at least the four static/EF typos per point
}

TEST_CASE("bundled fixtures match their recorded verdicts") {
    json manifest = load_json_file(std::string(FIXTURES_DIR) + "/manifest.json");
    for (const auto& entry : manifest["surfaces"]) {
        const std::string file =
            std::string(FIXTURES_DIR) + "/" + entry["file"].get<std::string>();
        NullConeSurface s = surface_from_json(load_json_file(file));
        Classification v = classify(s.u(), s.model(), 1e-6);
        const char* names[] = {"SphereOfSymmetry", "LowModeBoost", "NonRigid"};
        CHECK(names[static_cast<int>(v.kind)] ==
              entry["expected_classification"].get<std::string>());
        CHECK_FALSE(v.theorem_violation);
        LinearizedOperator op(s, 12);
        KernelResult k = kernel(op);
        const int expected_dim =
            entry["expected_kernel_dimension"].get<int>();
        CHECK(k.dimension == expected_dim);
    }
}

TEST_CASE("cli: rigidity-kernel on the bundled Minkowski sample") {
    const std::string rep = tmp_path("kernel_rep.json");
    CHECK(run_cli(std::string("rigidity-kernel --surface ") + FIXTURES_DIR +
                  "/minkowski_perturbed.json --bandlimit 12 --report " + rep) == 0);
    json j = load_json_file(rep);
    CHECK(j["results"]["kernel_dimension"].get<int>() == 4);
    CHECK(j["results"]["gap"].get<Real>() > 1e4);
}
