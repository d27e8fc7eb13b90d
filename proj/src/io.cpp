#include "nullcone/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace nullcone {

json model_to_json(const WarpingModel& model) {
    if (model.kind() == SpacetimeKind::Custom)
        throw InputError("custom models are code-only, not serializable");
    json j;
    j["kind"] = to_string(model.kind());
    j["mass"] = model.mass();
    j["radius_l"] = model.radius_l();
    j["n"] = model.dimension();
    return j;
}

WarpingModel model_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.value("n", 3);
    if (kind == "minkowski") return WarpingModel::minkowski(n);
    if (kind == "schwarzschild")
        return WarpingModel::schwarzschild(j.at("mass").get<Real>(), n);
    if (kind == "desitter")
        return WarpingModel::de_sitter(j.at("radius_l").get<Real>(), n);
    if (kind == "antidesitter")
        return WarpingModel::anti_de_sitter(j.at("radius_l").get<Real>(), n);
    throw InputError("unknown model kind '" + kind + "'");
}

json coeffs_to_json(int bandlimit, const Vector& coeffs) {
    json j;
    j["bandlimit"] = bandlimit;
    json arr = json::array();
    for (int l = 0; l <= bandlimit; ++l)
        for (int m = -l; m <= l; ++m) {
            const Real v = coeffs[SphereGrid::coeff_index(l, m)];
            if (v != 0.0) arr.push_back({l, m, v});
        }
    j["coeffs"] = std::move(arr);
    return j;
}

Vector coeffs_from_json(const json& j, int* bandlimit_out) {
    const int L = j.at("bandlimit").get<int>();
    if (L < 0 || L > 512) throw InputError("unreasonable bandlimit in coefficient file");
    Vector c = Vector::Zero((L + 1) * (L + 1));
    for (const auto& entry : j.at("coeffs")) {
        const int l = entry.at(0).get<int>();
        const int m = entry.at(1).get<int>();
        if (l < 0 || l > L || std::abs(m) > l)
            throw InputError("coefficient entry outside the declared bandlimit");
        c[SphereGrid::coeff_index(l, m)] = entry.at(2).get<Real>();
    }
    if (bandlimit_out) *bandlimit_out = L;
    return c;
}

json surface_to_json(const WarpingModel& model, Real w0, const SphereField& u) {
    json j;
    j["model"] = model_to_json(model);
    j["w0"] = w0;
    const int L = u.grid()->bandlimit();
    json cj = coeffs_to_json(L, u.coeffs());
    j["bandlimit"] = L;
    j["u_coeffs"] = cj["coeffs"];
    j["represents"] = "u";
    return j;
}

NullConeSurface surface_from_json(const json& j) {
    WarpingModel model = model_from_json(j.at("model"));
    const Real w0 = j.at("w0").get<Real>();
    if (j.value("represents", "u") != std::string("u"))
        throw InputError("surface file must store the u = 1/r profile");
    json cj;
    cj["bandlimit"] = j.at("bandlimit");
    cj["coeffs"] = j.at("u_coeffs");
    int L = 0;
    Vector c = coeffs_from_json(cj, &L);
    GridPtr grid = SphereGrid::dealiased(L);
    SphereField u = SphereField::from_coeffs(grid, std::move(c));
    return NullConeSurface(std::move(model), w0, std::move(u));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for digest");
    unsigned long long h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace nullcone
