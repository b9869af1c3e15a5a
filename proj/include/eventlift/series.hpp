#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "eventlift/csv.hpp"
#include "eventlift/dates.hpp"
#include "eventlift/errors.hpp"

namespace eventlift {

/// Contiguous date-indexed vector of daily counts: one value per day from
/// `start` onward, no gaps. Values are doubles so raw counts, shifted series
/// and forecasts share one representation. Immutable by convention after
/// construction; safe to share across threads.
struct DailySeries {
  DateDay start;
  std::vector<double> values;
  double offset = 0.0;  // constant added on top of the raw ingested counts

  DailySeries() = default;
  DailySeries(DateDay start_, std::vector<double> values_, double offset_ = 0.0)
      : start(start_), values(std::move(values_)), offset(offset_) {
    if (values.empty()) throw validation_error("DailySeries requires at least one value");
  }

  DateDay end() const { return start + (static_cast<int>(values.size()) - 1); }
  int size() const { return static_cast<int>(values.size()); }
  bool covers(DateDay from, DateDay to) const { return start <= from && to <= end(); }

  double at(DateDay d) const {
    if (d < start || d > end()) {
      throw data_availability_error("date " + d.to_string() + " outside series span " +
                                    start.to_string() + ".." + end().to_string());
    }
    return values[static_cast<size_t>(d - start)];
  }
};

/// Copy of the days [from, to] inclusive.
inline DailySeries slice(const DailySeries& s, DateDay from, DateDay to) {
  if (from > to) throw validation_error("slice: from > to");
  if (!s.covers(from, to)) {
    DateDay miss_lo = from < s.start ? from : s.end() + 1;
    DateDay miss_hi = to > s.end() ? to : s.start - 1;
    throw data_availability_error("slice: series " + s.start.to_string() + ".." +
                                  s.end().to_string() + " does not cover " +
                                  from.to_string() + ".." + to.to_string() +
                                  " (missing " + miss_lo.to_string() + ".." +
                                  miss_hi.to_string() + ")");
  }
  auto b = s.values.begin() + (from - s.start);
  return DailySeries(from, std::vector<double>(b, b + (to - from + 1)), s.offset);
}

/// Adds a constant to every value and records it in `offset` so effects can
/// later be reported on the original scale.
inline DailySeries shift_constant(const DailySeries& s, double c) {
  DailySeries out = s;
  for (double& v : out.values) v += c;
  out.offset += c;
  return out;
}

/// The event-aligned window [event - pre_days, event + post_days - 1]
/// displaced `lag_days` into the past. If any day of the displaced window is
/// unavailable, retries with `fallback_lag_days` (negative lags displace into
/// the future). Sets *used_fallback when the fallback window was taken.
inline DailySeries lag_window(const DailySeries& s, DateDay event, int lag_days,
                              int pre_days, int post_days, int fallback_lag_days,
                              bool* used_fallback = nullptr) {
  if (pre_days + post_days < 1) throw validation_error("lag_window: empty window");
  DateDay lo = event - pre_days - lag_days;
  DateDay hi = event + (post_days - 1) - lag_days;
  if (s.covers(lo, hi)) {
    if (used_fallback) *used_fallback = false;
    return slice(s, lo, hi);
  }
  DateDay flo = event - pre_days - fallback_lag_days;
  DateDay fhi = event + (post_days - 1) - fallback_lag_days;
  if (s.covers(flo, fhi)) {
    if (used_fallback) *used_fallback = true;
    return slice(s, flo, fhi);
  }
  throw data_availability_error(
      "lag_window: neither primary window " + lo.to_string() + ".." + hi.to_string() +
      " (lag " + std::to_string(lag_days) + ") nor fallback window " + flo.to_string() +
      ".." + fhi.to_string() + " (lag " + std::to_string(fallback_lag_days) +
      ") available in series " + s.start.to_string() + ".." + s.end().to_string());
}

/// Day-by-day matrix view: row r = date from + r, column j = series[j].
inline Eigen::MatrixXd align(const std::vector<const DailySeries*>& series, DateDay from,
                             DateDay to) {
  if (from > to) throw validation_error("align: from > to");
  Eigen::MatrixXd m(to - from + 1, static_cast<int>(series.size()));
  for (size_t j = 0; j < series.size(); ++j) {
    if (!series[j]->covers(from, to)) {
      throw data_availability_error("align: series " + std::to_string(j) + " (" +
                                    series[j]->start.to_string() + ".." +
                                    series[j]->end().to_string() + ") does not cover " +
                                    from.to_string() + ".." + to.to_string());
    }
    int base = from - series[j]->start;
    for (int r = 0; r <= to - from; ++r) {
      m(r, static_cast<int>(j)) = series[j]->values[static_cast<size_t>(base + r)];
    }
  }
  return m;
}

// --- CSV format: header `date,value`, ISO dates, rows ascending -------------

/// Reads a series CSV. Missing days inside the covered range are materialized
/// as zeros (a day with no activity is a zero count, not a gap).
inline DailySeries read_series_csv(const std::string& path) {
  auto rows = csv::read_rows(path);
  if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "date" || rows[0][1] != "value") {
    throw validation_error("series file '" + path + "': expected header 'date,value'");
  }
  if (rows.size() < 2) throw validation_error("series file '" + path + "' has no rows");
  DateDay start = DateDay::parse(rows[1][0]);
  DateDay prev = start - 1;
  std::vector<double> vals;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) {
      throw validation_error("series file '" + path + "' row " + std::to_string(i) +
                             ": expected 2 fields");
    }
    DateDay d = DateDay::parse(rows[i][0]);
    if (d <= prev) {
      throw validation_error("series file '" + path + "': dates must be strictly ascending at " +
                             rows[i][0]);
    }
    for (DateDay g = prev + 1; g < d; ++g) vals.push_back(0.0);
    double v = 0;
    try {
      v = std::stod(rows[i][1]);
    } catch (const std::exception&) {
      throw validation_error("series file '" + path + "': bad value '" + rows[i][1] + "'");
    }
    if (!std::isfinite(v) || v < 0) {
      throw validation_error("series file '" + path + "': values must be finite and >= 0, got '" +
                             rows[i][1] + "'");
    }
    vals.push_back(v);
    prev = d;
  }
  return DailySeries(start, std::move(vals));
}

inline void write_series_csv(const std::string& path, const DailySeries& s) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write '" + path + "'");
  out << "date,value\n";
  char buf[64];
  for (int i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g", s.values[static_cast<size_t>(i)]);
    out << (s.start + i).to_string() << ',' << buf << '\n';
  }
}

}  // namespace eventlift
