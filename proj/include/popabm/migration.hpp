#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "popabm/random.hpp"
#include "popabm/region.hpp"

namespace popabm {

// Row-major real matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double total() const;
};

struct MarginalSet;

// Real-valued internal-migration distribution indexed (origin, destination,
// age). The diagonal is always zero.
class MigrationTensor {
 public:
  MigrationTensor() = default;
  MigrationTensor(std::vector<std::string> regions, int ages);

  static MigrationTensor ones_off_diagonal(std::vector<std::string> regions, int ages);
  static MigrationTensor read_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;

  std::size_t region_count() const { return regions_.size(); }
  int ages() const { return ages_; }
  const std::vector<std::string>& regions() const { return regions_; }

  double& at(std::size_t o, std::size_t d, int a) { return data_[(o * regions_.size() + d) * static_cast<std::size_t>(ages_) + static_cast<std::size_t>(a)]; }
  double at(std::size_t o, std::size_t d, int a) const { return data_[(o * regions_.size() + d) * static_cast<std::size_t>(ages_) + static_cast<std::size_t>(a)]; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  MarginalSet marginals() const;

 private:
  std::vector<std::string> regions_;
  int ages_ = 0;
  std::vector<double> data_;
};

// The three observable 2D marginals of a migration tensor.
struct MarginalSet {
  std::vector<std::string> regions;
  int ages = 0;
  Matrix od;           // origin x destination
  Matrix emig_by_age;  // origin x age
  Matrix imm_by_age;   // destination x age

  // origin,destination,value / origin,age,value / destination,age,value
  static MarginalSet read_csv(const std::filesystem::path& od_path,
                              const std::filesystem::path& emig_path,
                              const std::filesystem::path& imm_path);
  void write_csv(const std::filesystem::path& od_path, const std::filesystem::path& emig_path,
                 const std::filesystem::path& imm_path) const;
};

// Destination choice for internal migrants, derived from a migration tensor
// by normalising every (origin, age) slice.
class DestinationModel {
 public:
  DestinationModel(const MigrationTensor& tensor, const RegionHierarchy& regions);

  bool covers(RegionId origin) const;
  // Probability of each destination (aligned with destinations()); all zero
  // when the slice carries no mass.
  std::span<const double> distribution(RegionId origin, int age) const;
  const std::vector<RegionId>& destinations() const { return region_ids_; }
  // nullopt when the slice is empty.
  std::optional<RegionId> draw(RegionId origin, int age, RandomStream& rng) const;

 private:
  std::size_t slot(RegionId origin) const;

  std::vector<RegionId> region_ids_;
  std::vector<int> slot_of_region_;  // indexed by RegionId
  int ages_ = 0;
  std::vector<double> probabilities_;  // (origin slot, age, destination slot)
};

}  // namespace popabm
