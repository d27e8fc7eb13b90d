#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "nullcone/nullcone_surface.hpp"
#include "nullcone/sphere_field.hpp"
#include "nullcone/types.hpp"
#include "nullcone/warping_model.hpp"

namespace nullcone {

using json = nlohmann::ordered_json;

/// Model descriptor: {"kind": ..., "mass": m, "radius_l": l, "n": n}.
/// Custom models are code-only and not serializable.
json model_to_json(const WarpingModel& model);
WarpingModel model_from_json(const json& j);

/// Coefficient file: {"bandlimit": L, "coeffs": [[l, m, value], ...]} in the
/// real orthonormal normalization documented in sphere_grid.hpp.
json coeffs_to_json(int bandlimit, const Vector& coeffs);
Vector coeffs_from_json(const json& j, int* bandlimit_out = nullptr);

/// Surface profile file:
/// {"model": ..., "w0": w, "bandlimit": L, "u_coeffs": [...], "represents": "u"}.
json surface_to_json(const WarpingModel& model, Real w0, const SphereField& u);
NullConeSurface surface_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

/// FNV-1a digest of a file's bytes, for report provenance.
std::string file_digest(const std::string& path);

}  // namespace nullcone
