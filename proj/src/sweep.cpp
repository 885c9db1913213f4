#include "specmux/sweep.hpp"

#include <cstdio>
#include <stdexcept>

namespace specmux {

std::size_t SweepResult::column_index(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("no column named " + name);
}

std::vector<double> SweepResult::column(std::size_t index) const
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(row.at(index));
    }
    return out;
}

std::string format_number(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.15g", value);
    return buffer;
}

void SweepResult::write_csv(std::ostream& out) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_number(row[i]);
        }
        out << '\n';
    }
}

std::mt19937_64 point_rng(std::uint64_t master_seed, std::uint64_t point_index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(point_index), static_cast<std::uint32_t>(point_index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace specmux
