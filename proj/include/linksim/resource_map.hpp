#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace linksim {

inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kRegsPerCce = 6;
inline constexpr int kDmrsPerReg = 3;
/// 1-based DMRS subcarrier offsets inside one REG.
inline constexpr std::array<int, kDmrsPerReg> kDmrsOffsetsInReg{2, 6, 10};
inline constexpr int kMaxAggregationLevel = 8;

bool is_valid_regb_size(int regb_size);
bool is_valid_aggregation_level(int aggregation_level);

/// CORESET geometry. Only single-symbol CORESETs can be placed.
struct CoresetConfig {
  int n_rb = 48;
  int n_symbols = 1;
  int subcarriers_per_rb = kSubcarriersPerRb;
  int regb_size = 6;

  int bundle_count() const { return n_rb / regb_size; }
  int cce_capacity() const { return n_rb * n_symbols / kRegsPerCce; }
  int bundles_per_cce() const { return kRegsPerCce / regb_size; }
  int dmrs_per_bundle() const { return kDmrsPerReg * regb_size; }
};

/// Throws std::invalid_argument naming the violated constraint.
void validate(const CoresetConfig& config);

struct PdcchAllocation {
  int aggregation_level = 0;
  int regb_size = 0;
  int subcarriers_per_rb = kSubcarriersPerRb;
  std::vector<int> cce_indices;
  /// Ascending bundle indices; bundle b covers RBs [b*regb_size, (b+1)*regb_size).
  std::vector<int> regb_positions;
  /// Per bundle, 1-based DMRS subcarrier indices within the bundle.
  std::vector<std::vector<int>> dmrs_subcarriers;

  std::size_t bundle_count() const { return regb_positions.size(); }
  int dmrs_per_bundle() const { return static_cast<int>(dmrs_subcarriers.at(0).size()); }
  int dmrs_count() const;
  /// 0-based index of the first RB of bundle m.
  int first_rb(std::size_t m) const;
  /// 0-based CORESET subcarrier of the j-th DMRS of bundle m.
  int grid_subcarrier(std::size_t m, std::size_t j) const;
  /// 0-based CORESET RB holding the j-th DMRS of bundle m.
  int grid_rb(std::size_t m, std::size_t j) const;
};

/// Bundles of one CCE under the even-spread rule: CCE c takes bundles
/// c + j*C for j < 6/regb_size, where C = n_rb/6.
std::vector<int> place_cce(const CoresetConfig& config, int cce_index);

PdcchAllocation allocate_pdcch(const CoresetConfig& config, int aggregation_level,
                               int first_cce = 0);

std::vector<int> dmrs_pattern(int regb_size);

}  // namespace linksim
