#include "selfsched/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double* out) {
  const std::string t = strip(s);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size();
}

bool parse_int(const std::string& s, int* out) {
  double v = 0.0;
  if (!parse_double(s, &v)) return false;
  if (v != std::floor(v)) return false;
  *out = static_cast<int>(v);
  return true;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

void expect_header(const std::string& got, const std::string& want,
                   const std::string& path) {
  if (strip(got) != want) {
    throw DataError(path + ": expected header '" + want + "', got '" +
                    strip(got) + "'");
  }
}

}  // namespace

RawBidTable parse_demand_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  expect_header(line, "day,hour,price_eur_mwh,cum_volume_mwh", path);

  RawBidTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    RawBidTable::Row row;
    if (f.size() != 4 || !parse_int(f[1], &row.hour) ||
        !parse_double(f[2], &row.price) || !parse_double(f[3], &row.cum_volume)) {
      table.bad_rows.emplace_back(line_no, "malformed row: " + strip(line));
      continue;
    }
    row.day = strip(f[0]);
    if (row.hour < 1 || row.hour > 24) {
      table.bad_rows.emplace_back(line_no, "hour out of 1..24: " + strip(line));
      continue;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<CapacityFactorDay> parse_cf_csv(
    const std::string& path,
    std::vector<std::pair<int, std::string>>* bad_rows) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  expect_header(line, "day,hour,cf_solar,cf_offshore,cf_onshore", path);

  std::vector<CapacityFactorDay> days;
  std::map<std::string, std::size_t> index;
  auto report = [&](int line_no, const std::string& what) {
    if (bad_rows) bad_rows->emplace_back(line_no, what);
  };
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    int hour = 0;
    double cf[3] = {0, 0, 0};
    if (f.size() != 5 || !parse_int(f[1], &hour) || !parse_double(f[2], &cf[0]) ||
        !parse_double(f[3], &cf[1]) || !parse_double(f[4], &cf[2])) {
      report(line_no, "malformed row: " + strip(line));
      continue;
    }
    if (hour < 1 || hour > 24) {
      report(line_no, "hour out of 1..24: " + strip(line));
      continue;
    }
    if (cf[0] < 0 || cf[0] > 1 || cf[1] < 0 || cf[1] > 1 || cf[2] < 0 || cf[2] > 1) {
      report(line_no, "capacity factor outside [0,1]: " + strip(line));
      continue;
    }
    const std::string day = strip(f[0]);
    auto [it, fresh] = index.try_emplace(day, days.size());
    if (fresh) {
      days.emplace_back();
      days.back().day = day;
    }
    CapacityFactorDay& d = days[it->second];
    d.solar[hour - 1] = cf[0];
    d.offshore[hour - 1] = cf[1];
    d.onshore[hour - 1] = cf[2];
  }
  return days;
}

ResProfile parse_res_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  expect_header(line, "hour,res_mwh", path);

  std::map<int, double> by_hour;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    int hour = 0;
    double v = 0.0;
    if (f.size() != 2 || !parse_int(f[0], &hour) || !parse_double(f[1], &v)) {
      throw DataError(path + ": malformed row at line " + std::to_string(line_no));
    }
    by_hour[hour] = v;
  }
  ResProfile res;
  res.values.reserve(by_hour.size());
  int expect = 1;
  for (const auto& [hour, v] : by_hour) {
    if (hour != expect++) {
      throw DataError(path + ": hours must be contiguous from 1");
    }
    res.values.push_back(v);
  }
  return res;
}

DemandCurve clean_curve(const std::vector<RawBidTable::Row>& rows) {
  // Negative bids are excluded from demand modeling.
  std::vector<RawBidTable::Row> kept;
  for (const RawBidTable::Row& r : rows) {
    if (r.price >= 0.0) kept.push_back(r);
  }
  std::sort(kept.begin(), kept.end(),
            [](const RawBidTable::Row& a, const RawBidTable::Row& b) {
              if (a.price != b.price) return a.price > b.price;
              return a.cum_volume > b.cum_volume;
            });
  DemandCurve curve;
  for (const RawBidTable::Row& r : kept) {
    if (!curve.prices.empty() && curve.prices.back() == r.price) {
      continue;  // duplicate price: the larger volume was sorted first
    }
    // Dominated rows (volume not increasing) are dropped.
    if (!curve.cum_volumes.empty() && r.cum_volume <= curve.cum_volumes.back()) {
      continue;
    }
    if (r.cum_volume <= 0.0) continue;
    curve.prices.push_back(r.price);
    curve.cum_volumes.push_back(r.cum_volume);
    curve.hour = r.hour;
  }
  if (curve.prices.empty()) {
    throw DataError("clean_curve: no usable bids remain after cleaning");
  }
  return curve;
}

std::vector<std::vector<DemandCurve>> downsample_curves(
    const std::vector<std::vector<DemandCurve>>& days) {
  int d_star = 0;
  for (const auto& day : days) {
    for (const DemandCurve& c : day) {
      if (c.prices.empty()) throw DataError("downsample_curves: empty curve");
      if (d_star == 0 || c.block_count() < d_star) d_star = c.block_count();
    }
  }
  std::vector<std::vector<DemandCurve>> out(days.size());
  for (std::size_t di = 0; di < days.size(); ++di) {
    out[di].reserve(days[di].size());
    for (const DemandCurve& c : days[di]) {
      const int d = c.block_count();
      DemandCurve r;
      r.hour = c.hour;
      if (d_star == 1) {
        // A single block can keep either end; the last block preserves the
        // curve's total volume.
        r.prices.push_back(c.prices[d - 1]);
        r.cum_volumes.push_back(c.cum_volumes[d - 1]);
      } else {
        for (int k = 1; k <= d_star; ++k) {
          // Uniform spacing over 1..d keeping both endpoints.
          const int pick = static_cast<int>(std::lround(
              1.0 + static_cast<double>(k - 1) * (d - 1) / (d_star - 1)));
          r.prices.push_back(c.prices[pick - 1]);
          r.cum_volumes.push_back(c.cum_volumes[pick - 1]);
        }
      }
      out[di].push_back(std::move(r));
    }
  }
  return out;
}

std::size_t medoid_index(const std::vector<std::vector<double>>& features) {
  if (features.empty()) throw DataError("medoid_index: no days given");
  for (const auto& f : features) {
    if (f.size() != features[0].size()) {
      throw DataError("medoid_index: feature dimensions differ");
    }
  }
  std::size_t best = 0;
  double best_sum = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < features.size(); ++j) {
      if (i == j) continue;
      double sq = 0.0;
      for (std::size_t k = 0; k < features[i].size(); ++k) {
        const double d = features[i][k] - features[j][k];
        sq += d * d;
      }
      sum += std::sqrt(sq);
    }
    if (i == 0 || sum < best_sum) {
      best = i;
      best_sum = sum;
    }
  }
  return best;
}

std::vector<double> features_of(const CapacityFactorDay& day) {
  std::vector<double> f;
  f.reserve(72);
  for (int t = 0; t < 24; ++t) {
    f.push_back(day.solar[t]);
    f.push_back(day.offshore[t]);
    f.push_back(day.onshore[t]);
  }
  return f;
}

std::vector<double> features_of(const std::vector<DemandCurve>& curve_day) {
  std::vector<double> f;
  for (const DemandCurve& c : curve_day) {
    f.insert(f.end(), c.prices.begin(), c.prices.end());
    f.insert(f.end(), c.cum_volumes.begin(), c.cum_volumes.end());
  }
  return f;
}

std::size_t medoid_day(const std::vector<CapacityFactorDay>& days) {
  std::vector<std::vector<double>> features;
  features.reserve(days.size());
  for (const CapacityFactorDay& d : days) features.push_back(features_of(d));
  return medoid_index(features);
}

std::size_t medoid_day(const std::vector<std::vector<DemandCurve>>& curve_days) {
  std::vector<std::vector<double>> features;
  features.reserve(curve_days.size());
  for (const auto& d : curve_days) features.push_back(features_of(d));
  return medoid_index(features);
}

ResProfile scale_res(const CapacityFactorDay& day, const InstalledCapacities& caps) {
  if (caps.solar < 0 || caps.offshore < 0 || caps.onshore < 0) {
    throw DataError("scale_res: capacities must be nonnegative");
  }
  ResProfile res;
  res.values.resize(24);
  for (int t = 0; t < 24; ++t) {
    res.values[t] = day.solar[t] * caps.solar + day.offshore[t] * caps.offshore +
                    day.onshore[t] * caps.onshore;
  }
  return res;
}

std::vector<std::vector<DemandCurve>> build_demand_days(const RawBidTable& table) {
  // Group rows per (day, hour) keeping days in order of first appearance.
  std::vector<std::string> day_order;
  std::map<std::string, std::array<std::vector<RawBidTable::Row>, 24>> grouped;
  for (const RawBidTable::Row& r : table.rows) {
    if (grouped.find(r.day) == grouped.end()) day_order.push_back(r.day);
    grouped[r.day][r.hour - 1].push_back(r);
  }
  std::vector<std::vector<DemandCurve>> days;
  days.reserve(day_order.size());
  for (const std::string& day : day_order) {
    std::vector<DemandCurve> curves(24);
    for (int h = 0; h < 24; ++h) {
      if (grouped[day][h].empty()) {
        throw DataError("demand data: day " + day + " is missing hour " +
                        std::to_string(h + 1));
      }
      curves[h] = clean_curve(grouped[day][h]);
      curves[h].hour = h + 1;
    }
    days.push_back(std::move(curves));
  }
  if (days.empty()) throw DataError("demand data: no rows");
  return downsample_curves(days);
}

}  // namespace selfsched
