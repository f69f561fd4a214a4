#include "linksim/resource_map.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace linksim {

bool is_valid_regb_size(int regb_size) {
  return regb_size == 2 || regb_size == 3 || regb_size == 6;
}

bool is_valid_aggregation_level(int aggregation_level) {
  return aggregation_level == 1 || aggregation_level == 2 || aggregation_level == 4 ||
         aggregation_level == 8;
}

void validate(const CoresetConfig& config) {
  if (!is_valid_regb_size(config.regb_size)) {
    throw std::invalid_argument("regb_size must be one of {2, 3, 6}, got " +
                                std::to_string(config.regb_size));
  }
  if (config.n_symbols != 1) {
    throw std::invalid_argument("only single-symbol CORESETs are supported, got n_symbols = " +
                                std::to_string(config.n_symbols));
  }
  if (config.subcarriers_per_rb != kSubcarriersPerRb) {
    throw std::invalid_argument("subcarriers_per_rb must be 12");
  }
  if (config.n_rb <= 0 || config.n_rb % kRegsPerCce != 0) {
    throw std::invalid_argument("n_rb must be a positive multiple of 6, got " +
                                std::to_string(config.n_rb));
  }
  const int min_rb = kRegsPerCce * kMaxAggregationLevel / config.n_symbols;
  if (config.n_rb < min_rb) {
    throw std::invalid_argument("n_rb must be at least " + std::to_string(min_rb) +
                                " to hold one PDCCH at the maximum aggregation level");
  }
}

std::vector<int> place_cce(const CoresetConfig& config, int cce_index) {
  validate(config);
  const int capacity = config.cce_capacity();
  if (cce_index < 0 || cce_index >= capacity) {
    throw std::out_of_range("cce index exceeds CORESET capacity");
  }
  std::vector<int> bundles;
  bundles.reserve(config.bundles_per_cce());
  for (int j = 0; j < config.bundles_per_cce(); ++j) {
    bundles.push_back(cce_index + j * capacity);
  }
  return bundles;
}

std::vector<int> dmrs_pattern(int regb_size) {
  if (!is_valid_regb_size(regb_size)) {
    throw std::invalid_argument("regb_size must be one of {2, 3, 6}, got " +
                                std::to_string(regb_size));
  }
  std::vector<int> pattern;
  pattern.reserve(kDmrsPerReg * regb_size);
  for (int reg = 0; reg < regb_size; ++reg) {
    for (int offset : kDmrsOffsetsInReg) {
      pattern.push_back(reg * kSubcarriersPerRb + offset);
    }
  }
  return pattern;
}

PdcchAllocation allocate_pdcch(const CoresetConfig& config, int aggregation_level,
                               int first_cce) {
  validate(config);
  if (!is_valid_aggregation_level(aggregation_level)) {
    throw std::invalid_argument("aggregation level must be one of {1, 2, 4, 8}, got " +
                                std::to_string(aggregation_level));
  }
  if (first_cce < 0 || first_cce + aggregation_level > config.cce_capacity()) {
    throw std::out_of_range("cce index exceeds CORESET capacity");
  }

  PdcchAllocation alloc;
  alloc.aggregation_level = aggregation_level;
  alloc.regb_size = config.regb_size;
  alloc.subcarriers_per_rb = config.subcarriers_per_rb;
  for (int c = first_cce; c < first_cce + aggregation_level; ++c) {
    alloc.cce_indices.push_back(c);
    for (int b : place_cce(config, c)) alloc.regb_positions.push_back(b);
  }
  std::sort(alloc.regb_positions.begin(), alloc.regb_positions.end());
  alloc.dmrs_subcarriers.assign(alloc.regb_positions.size(), dmrs_pattern(config.regb_size));
  return alloc;
}

int PdcchAllocation::dmrs_count() const {
  int total = 0;
  for (const auto& r : dmrs_subcarriers) total += static_cast<int>(r.size());
  return total;
}

int PdcchAllocation::first_rb(std::size_t m) const {
  return regb_positions.at(m) * regb_size;
}

int PdcchAllocation::grid_subcarrier(std::size_t m, std::size_t j) const {
  return first_rb(m) * subcarriers_per_rb + dmrs_subcarriers.at(m).at(j) - 1;
}

int PdcchAllocation::grid_rb(std::size_t m, std::size_t j) const {
  return grid_subcarrier(m, j) / subcarriers_per_rb;
}

}  // namespace linksim
