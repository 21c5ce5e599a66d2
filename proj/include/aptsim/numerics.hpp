#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aptsim {

/// n uniformly spaced samples over [a, b], endpoints included (n >= 2).
std::vector<double> linspace(double a, double b, int n);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12);

/// Format a double with 17 significant digits ("%.17g", C locale) so CSV
/// regression diffs are exact.
std::string format_g17(double x);

/// FNV-1a 64-bit hash, used to stamp outputs with their config.
std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

}  // namespace aptsim
