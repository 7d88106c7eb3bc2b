#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smc/empirical_dist.hpp"

namespace smc {

// One value per line, doubles printed with full round-trip precision.
// Lines starting with '#' are comments.
void write_series_file(const std::filesystem::path& path, std::span<const double> values,
                       const std::vector<std::string>& comments = {});

std::vector<double> read_series_file(const std::filesystem::path& path);

// Tab-separated numeric columns behind '#' comment lines and a '# columns:'
// header naming them. All columns must have equal length.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& column_names,
                 const std::vector<std::vector<double>>& columns);

// key = value lines echoing a run's full resolved configuration; feeding the
// same values back reproduces the run byte for byte.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

// Two-column table (value, level) as written by `smc fit`.
void write_distribution_file(const std::filesystem::path& path, const EmpiricalDistribution& d);
EmpiricalDistribution read_distribution_file(const std::filesystem::path& path);

// Full round-trip formatting for doubles (printf %.17g).
std::string format_double(double x);

}  // namespace smc
