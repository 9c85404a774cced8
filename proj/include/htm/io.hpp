#pragma once

#include "htm/bubble.hpp"
#include "htm/green.hpp"
#include "htm/radial_function.hpp"

#include <filesystem>
#include <string>

namespace htm {

/// Full-precision text form of a double (17 significant digits).
std::string format_full(double x);

/// CSV with header `r,value`, one node per row.
void write_radial_csv(const std::filesystem::path& path, const RadialFunction& u);

/// CSV with header `s,phi_rescaled,phi_bubble,psi_rescaled`.
void write_profile_csv(const std::filesystem::path& path, const BlowupDiagnostics& d);

/// CSV with header `r,G,w`.
void write_green_csv(const std::filesystem::path& path, const GreenResult& res);

/// FNV-1a 64-bit hash, hex-encoded; used for config provenance.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace htm
