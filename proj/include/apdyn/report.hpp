#pragma once

#include "apdyn/ap_solver.hpp"
#include "apdyn/system.hpp"

#include <json.hpp>

#include <string>

namespace apdyn {

inline constexpr const char* kVersion = "0.1.0";

/// %.17g, enough digits to round-trip a double.
std::string format_double(double v);

/// {"value": v, "tolerance": tol, "pass": pass}
nlohmann::json checked(double value, double tolerance, bool pass);

nlohmann::json vector_json(const Vector& v);

/// Header `t,x1..xN`, then every `stride`-th sample of the inner window.
void write_orbit_csv(const std::string& path, const OrbitGrid& orbit, int stride);

/// Header `t,x1..xN`, one row per column of `points`, all at time t.
void write_points_csv(const std::string& path, double t, const Matrix& points);

/// Writes pretty-printed JSON with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace apdyn
