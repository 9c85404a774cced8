#include "htm/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace htm {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_radial_csv(const std::filesystem::path& path, const RadialFunction& u) {
  auto out = open_out(path);
  out << "r,value\n";
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    out << format_full(u.grid->node(i)) << ',' << format_full(u.values(i)) << '\n';
}

void write_profile_csv(const std::filesystem::path& path, const BlowupDiagnostics& d) {
  auto out = open_out(path);
  out << "s,phi_rescaled,phi_bubble,psi_rescaled\n";
  for (Eigen::Index i = 0; i < d.window.size(); ++i)
    out << format_full(d.window(i)) << ',' << format_full(d.phi_rescaled(i)) << ','
        << format_full(d.phi_bubble(i)) << ',' << format_full(d.psi_rescaled(i)) << '\n';
}

void write_green_csv(const std::filesystem::path& path, const GreenResult& res) {
  auto out = open_out(path);
  out << "r,G,w\n";
  for (Eigen::Index i = 0; i < res.G.values.size(); ++i)
    out << format_full(res.G.grid->node(i)) << ',' << format_full(res.G.values(i)) << ','
        << format_full(res.regular_part.values(i)) << '\n';
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace htm
