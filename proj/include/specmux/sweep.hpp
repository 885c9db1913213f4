#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace specmux {

/// Tabular output of a scan. The first column is the swept variable; column
/// names carry their units.
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(std::size_t index) const;
    std::vector<double> column(const std::string& name) const { return column(column_index(name)); }

    void write_csv(std::ostream& out) const;
};

/// Writes a value with a fixed, locale-independent round-trip format.
std::string format_number(double value);

/// Independent generator for one sweep point, derived from the master seed and
/// the point index so results do not depend on evaluation order.
std::mt19937_64 point_rng(std::uint64_t master_seed, std::uint64_t point_index);

}  // namespace specmux
