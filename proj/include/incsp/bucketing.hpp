#ifndef INCSP_BUCKETING_HPP_
#define INCSP_BUCKETING_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "incsp/model.hpp"

namespace incsp {

// The approximation parameter used internally: min(1.79, eps) / 4.
inline double derive_internal_epsilon(double epsilon_input) {
  if (!(epsilon_input > 0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  return std::min(1.79, epsilon_input) / 4.0;
}

// A point on the fine grid, or one of the two sentinels. Ordered
// ZERO < FINE(0) < FINE(1) < ... < UNREACHABLE.
class EstimateIndex {
 public:
  constexpr EstimateIndex() = default;

  static constexpr EstimateIndex zero() { return EstimateIndex(kZeroCode); }
  static constexpr EstimateIndex fine(std::int32_t k) { return EstimateIndex(k); }
  static constexpr EstimateIndex unreachable() { return EstimateIndex(kUnreachableCode); }

  constexpr bool is_zero() const { return code_ == kZeroCode; }
  constexpr bool is_unreachable() const { return code_ == kUnreachableCode; }
  constexpr bool is_fine() const { return !is_zero() && !is_unreachable(); }
  constexpr std::int32_t fine_index() const { return code_; }

  friend constexpr auto operator<=>(EstimateIndex, EstimateIndex) = default;

 private:
  static constexpr std::int32_t kZeroCode = -1;
  static constexpr std::int32_t kUnreachableCode = std::numeric_limits<std::int32_t>::max();

  constexpr explicit EstimateIndex(std::int32_t code) : code_(code) {}

  std::int32_t code_ = kUnreachableCode;
};

// Memoized geometric grids. The fine grid (1+delta)^k with delta = eps/log2(m)
// holds internal estimates; the coarse grid (1+eps)^i holds query answers.
//
// Both grids extend past n*W up to n*W*(1+eps)^2 so that every estimate the
// engines can produce (at most d*(1+delta)^log2(m) <= d*e^eps) has a cell.
// fine_count() / coarse_count() report the nominal K = ceil(log(nW)) values.
class BucketTable {
 public:
  static constexpr std::size_t kDefaultCap = 10'000'000;

  BucketTable(double epsilon_internal, std::size_t m, std::size_t n, Weight max_weight,
              std::size_t cap = kDefaultCap)
      : epsilon_internal_(epsilon_internal) {
    if (!(epsilon_internal > 0)) throw std::invalid_argument("internal epsilon must be positive");
    if (m < 2 || !is_power_of_two(m)) {
      throw std::invalid_argument("sequence length must be a power of two >= 2, got " +
                                  std::to_string(m));
    }
    if (n == 0 || max_weight == 0) throw std::invalid_argument("n and W must be positive");
    log2_m_ = static_cast<unsigned>(std::countr_zero(m));
    delta_ = epsilon_internal / static_cast<double>(log2_m_);
    const double nominal_top = static_cast<double>(n) * static_cast<double>(max_weight);
    const double ceiling = nominal_top * (1 + epsilon_internal) * (1 + epsilon_internal);
    fine_ = geometric(1 + delta_, nominal_top, ceiling, cap, fine_count_);
    coarse_ = geometric(1 + epsilon_internal, nominal_top, ceiling, cap, coarse_count_);
  }

  double epsilon_internal() const { return epsilon_internal_; }
  double delta() const { return delta_; }
  unsigned log2_m() const { return log2_m_; }

  // K_fine = ceil(log_{1+delta}(nW)), the nominal number of fine cells.
  std::size_t fine_count() const { return fine_count_; }
  // K_coarse = ceil(log_{1+eps}(nW)).
  std::size_t coarse_count() const { return coarse_count_; }

  const std::vector<double>& fine_thresholds() const { return fine_; }
  const std::vector<double>& coarse_thresholds() const { return coarse_; }
  std::size_t fine_top() const { return fine_.size() - 1; }
  std::size_t coarse_top() const { return coarse_.size() - 1; }

  double value_of(EstimateIndex x) const {
    if (x.is_zero()) return 0.0;
    if (x.is_unreachable()) return kUnreachable;
    return fine_.at(static_cast<std::size_t>(x.fine_index()));
  }

  // Smallest grid point >= value. Exact grid points map to themselves.
  EstimateIndex round_up(double value) const {
    if (value < 0 || std::isnan(value)) throw std::invalid_argument("negative distance");
    if (value == 0) return EstimateIndex::zero();
    auto it = std::lower_bound(fine_.begin(), fine_.end(), value);
    if (it == fine_.end()) return EstimateIndex::unreachable();
    return EstimateIndex::fine(static_cast<std::int32_t>(it - fine_.begin()));
  }

  std::size_t coarse_cell(EstimateIndex x) const {
    if (x.is_unreachable()) throw std::invalid_argument("coarse_cell of UNREACHABLE");
    return coarse_cell_of_value(value_of(x));
  }

  // Smallest i with value <= (1+eps)^i; 0 for values <= 1.
  std::size_t coarse_cell_of_value(double value) const {
    if (value == kUnreachable || std::isnan(value)) {
      throw std::invalid_argument("coarse cell of a non-finite value");
    }
    auto it = std::lower_bound(coarse_.begin(), coarse_.end(), value);
    if (it == coarse_.end()) throw std::out_of_range("value beyond the coarse grid");
    return static_cast<std::size_t>(it - coarse_.begin());
  }

  friend bool operator==(const BucketTable&, const BucketTable&) = default;

 private:
  static std::vector<double> geometric(double base, double nominal_top, double ceiling,
                                       std::size_t cap, std::size_t& nominal_count) {
    std::vector<double> out{1.0};
    nominal_count = 0;
    bool nominal_found = nominal_top <= 1.0;
    while (out.back() < ceiling || !nominal_found) {
      if (out.size() > cap) {
        throw std::length_error("bucket table exceeds the configured cap of " +
                                std::to_string(cap) + " entries");
      }
      out.push_back(out.back() * base);
      if (!nominal_found && out.back() >= nominal_top) {
        nominal_found = true;
        nominal_count = out.size() - 1;
      }
    }
    return out;
  }

  double epsilon_internal_ = 0;
  unsigned log2_m_ = 0;
  double delta_ = 0;
  std::size_t fine_count_ = 0;
  std::size_t coarse_count_ = 0;
  std::vector<double> fine_;
  std::vector<double> coarse_;
};

inline BucketTable make_table(double epsilon_internal, std::size_t m, std::size_t n, Weight max_weight,
                              std::size_t cap = BucketTable::kDefaultCap) {
  return BucketTable(epsilon_internal, m, n, max_weight, cap);
}

}  // namespace incsp

#endif  // INCSP_BUCKETING_HPP_
