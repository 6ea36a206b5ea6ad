#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "selfsched/model.hpp"

namespace selfsched {

// Raw rows of a demand-bid CSV (`day,hour,price_eur_mwh,cum_volume_mwh`).
// Raw data may violate every curve invariant; cleaning comes later.
struct RawBidTable {
  struct Row {
    std::string day;
    int hour = 0;  // 1..24
    double price = 0.0;
    double cum_volume = 0.0;
  };
  std::vector<Row> rows;
  // (1-based line number, description) of rows that failed to parse.
  std::vector<std::pair<int, std::string>> bad_rows;
};

// One day of hourly capacity factors per technology, each in [0,1].
struct CapacityFactorDay {
  std::string day;
  std::array<double, 24> solar{};
  std::array<double, 24> offshore{};
  std::array<double, 24> onshore{};
};

struct InstalledCapacities {
  double solar = 0.0;
  double offshore = 0.0;
  double onshore = 0.0;
};

// Parses the demand CSV; malformed rows are collected with line numbers
// rather than aborting the parse. Throws DataError for a missing file or a
// wrong header.
RawBidTable parse_demand_csv(const std::string& path);

// Capacity-factor CSV (`day,hour,cf_solar,cf_offshore,cf_onshore`), grouped
// into days in order of first appearance. Rows with factors outside [0,1]
// are collected as bad rows.
std::vector<CapacityFactorDay> parse_cf_csv(
    const std::string& path,
    std::vector<std::pair<int, std::string>>* bad_rows = nullptr);

// RES CSV (`hour,res_mwh`).
ResProfile parse_res_csv(const std::string& path);

// Builds a valid curve from one hour's raw rows: drops negative-price bids,
// sorts by descending price, merges duplicate prices keeping the larger
// volume, and drops rows that would break the strictly ascending volumes.
// Throws DataError when nothing survives.
DemandCurve clean_curve(const std::vector<RawBidTable::Row>& rows);

// Reduces every curve to the smallest block count observed anywhere, keeping
// uniformly spaced blocks including the first and the last.
std::vector<std::vector<DemandCurve>> downsample_curves(
    const std::vector<std::vector<DemandCurve>>& days);

// Index of the 1-medoid: the day minimizing the summed Euclidean distance to
// all other days over the flattened feature vectors. Ties break to the
// lowest index.
std::size_t medoid_index(const std::vector<std::vector<double>>& features);

std::vector<double> features_of(const CapacityFactorDay& day);
std::vector<double> features_of(const std::vector<DemandCurve>& curve_day);

std::size_t medoid_day(const std::vector<CapacityFactorDay>& days);
std::size_t medoid_day(const std::vector<std::vector<DemandCurve>>& curve_days);

// RES_t = cf_solar * cap_solar + cf_offshore * cap_offshore +
// cf_onshore * cap_onshore.
ResProfile scale_res(const CapacityFactorDay& day, const InstalledCapacities& caps);

// Full demand pipeline: group rows by day and hour, clean every hourly
// curve, downsample to the common block count. Days appear in order of
// first appearance; every day must cover hours 1..24.
std::vector<std::vector<DemandCurve>> build_demand_days(const RawBidTable& table);

}  // namespace selfsched
