#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wrp/levy.hpp"
#include "wrp/payoff.hpp"

namespace wrp {

inline constexpr int kSchemaVersion = 1;

/// Model file:
///   {"schema_version": 1, "sigma": 1, "mu": -1, "zeta": 0.9,
///    "jumps": {"kind": "gamma", "alpha": 1, "beta": 1}}
/// jumps.kind is "none", "gamma" or "tabulated" (with "x" and "density"
/// arrays). mu defaults to -beta/alpha for Gamma jumps and to 0 otherwise;
/// zeta defaults as in LevyTriplet. ConfigError on any schema problem.
LevyTriplet parse_model(std::string_view json_text);
LevyTriplet load_model(const std::string& path);

/// Payoff file:
///   {"schema_version": 1, "kind": "put" | "indicator" | "custom",
///    "K": -0.2, "zeta": 0.9, "grid": "h.csv"}
/// Custom payoffs read (x, h) rows from the CSV named by "grid", resolved
/// relative to the payoff file. zeta defaults to default_zeta.
FourierPayoff parse_payoff(std::string_view json_text, double default_zeta,
                           const std::string& base_dir = ".");
FourierPayoff load_payoff(const std::string& path, double default_zeta);

/// "a:b:n" -> n points from a to b inclusive; a single number -> {a}.
std::vector<double> parse_grid(std::string_view spec);

/// Two numeric columns; a non-numeric first line is treated as a header.
void read_csv_columns(const std::string& path, std::vector<double>& a, std::vector<double>& b);

/// Shortest decimal form that round-trips (at most 17 significant digits),
/// independent of the locale.
std::string format_double(double v);

/// Header line, then one row per entry of the equally long columns.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace wrp
