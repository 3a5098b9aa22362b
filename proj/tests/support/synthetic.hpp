#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "ccadm/dataset.hpp"

// Seeded data generators shared by the unit and acceptance tests.
namespace ccadm::testing {

/// Daily weather-like sources "S1".."Sn" with columns `hum` and `temp`.
///
/// A regional humidity signal (seasonal term plus an AR(1) process) is seen by
/// every source through independent local noise, so neighbours' humidity
/// carries information about the region the main source's own history only
/// sees noisily. Each source's humidity also responds to its previous-day
/// temperature, so the context column drives the target.
struct CorrelatedSpec {
  std::size_t sources = 6;
  std::size_t days = 1000;
  std::uint64_t seed = 7;
  double local_noise = 2.5;
};

DataRepository correlated_repository(const CorrelatedSpec& spec = {});

/// Sources "M" (hum, temp) and "N1".."N3" (hum) where temp and the neighbour
/// values are i.i.d. uniform and M.hum at day t is exactly
/// 50 + 2 * M.temp(t-1) + 3 * N1.hum(t-1). Nothing in M.hum's own past predicts it.
DataRepository noiseless_repository(std::size_t days, std::uint64_t seed);

/// Writes each dataset to `<dir>/<source_id>.csv`.
void write_repository(const DataRepository& repo, const std::filesystem::path& dir);

/// A fresh empty directory under the system temp path.
std::filesystem::path fresh_dir(const std::string& name);

/// Reads a whole file.
std::string slurp(const std::filesystem::path& path);

}  // namespace ccadm::testing
