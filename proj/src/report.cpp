#include "apdyn/report.hpp"

#include "apdyn/errors.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace apdyn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json checked(double value, double tolerance, bool pass) {
  return {{"value", value}, {"tolerance", tolerance}, {"pass", pass}};
}

nlohmann::json vector_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_header(std::ofstream& out, Eigen::Index n) {
  out << "t";
  for (Eigen::Index k = 1; k <= n; ++k) out << ",x" << k;
  out << "\n";
}

void write_row(std::ofstream& out, double t, const Eigen::Ref<const Vector>& x) {
  out << format_double(t);
  for (Eigen::Index k = 0; k < x.size(); ++k) out << ',' << format_double(x[k]);
  out << '\n';
}

}  // namespace

void write_orbit_csv(const std::string& path, const OrbitGrid& orbit, int stride) {
  if (stride < 1) throw DomainError("write_orbit_csv: stride must be positive");
  auto out = open_out(path);
  write_header(out, orbit.values.rows());
  for (Eigen::Index j = orbit.inner_lo; j <= orbit.inner_hi; j += stride) {
    write_row(out, orbit.time(j), orbit.values.col(j));
  }
}

void write_points_csv(const std::string& path, double t, const Matrix& points) {
  auto out = open_out(path);
  write_header(out, points.rows());
  for (Eigen::Index c = 0; c < points.cols(); ++c) write_row(out, t, points.col(c));
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace apdyn
