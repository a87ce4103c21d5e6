#include "gebayes/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gebayes {

const std::vector<double>& Dataset::col(const std::string& name) const {
  auto it = cols_.find(name);
  if (it == cols_.end()) throw UnknownColumn("unknown column: " + name);
  return it->second;
}

void Dataset::add_column(const std::string& name, std::vector<double> values) {
  if (!names_.empty() && values.size() != n_)
    throw LengthMismatch("column " + name + " has " +
                         std::to_string(values.size()) + " rows, expected " +
                         std::to_string(n_));
  if (cols_.count(name)) throw Error("duplicate column: " + name);
  if (names_.empty()) n_ = values.size();
  names_.push_back(name);
  cols_.emplace(name, std::move(values));
}

const ColumnStats& Dataset::stats(const std::string& name) const {
  auto it = stats_.find(name);
  if (it == stats_.end())
    throw UnknownColumn("column not standardized: " + name);
  return it->second;
}

double Dataset::to_original(const std::string& name, double v) const {
  auto it = stats_.find(name);
  if (it == stats_.end()) return v;
  return v * it->second.sd + it->second.mean;
}

double Dataset::to_standardized(const std::string& name, double v) const {
  auto it = stats_.find(name);
  if (it == stats_.end()) return v;
  return (v - it->second.mean) / it->second.sd;
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& rows) const {
  Dataset out;
  for (const auto& name : names_) {
    const auto& src = cols_.at(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (auto r : rows) v.push_back(src.at(r));
    out.add_column(name, std::move(v));
  }
  out.stats_ = stats_;
  return out;
}

Dataset standardize(const Dataset& data,
                    const std::vector<std::string>& columns) {
  Dataset out;
  for (const auto& name : data.column_names()) {
    const auto& src = data.col(name);
    bool selected = false;
    for (const auto& c : columns) selected |= (c == name);
    if (!selected) {
      out.add_column(name, src);
      if (data.is_standardized(name)) out.set_stats(name, data.stats(name));
      continue;
    }
    double mean = 0.0;
    for (double x : src) mean += x;
    mean /= static_cast<double>(src.size());
    double var = 0.0;
    for (double x : src) var += (x - mean) * (x - mean);
    var /= static_cast<double>(src.size());  // population convention
    double sd = std::sqrt(var);
    if (sd <= 0.0) throw ZeroVariance("constant column: " + name);
    std::vector<double> z(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) z[i] = (src[i] - mean) / sd;
    out.add_column(name, std::move(z));
    out.set_stats(name, ColumnStats{mean, sd});
  }
  return out;
}

Dataset destandardize(const Dataset& data) {
  Dataset out;
  for (const auto& name : data.column_names()) {
    const auto& src = data.col(name);
    if (!data.is_standardized(name)) {
      out.add_column(name, src);
      continue;
    }
    const auto& s = data.stats(name);
    std::vector<double> v(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      v[i] = src[i] * s.sd + s.mean;
    out.add_column(name, std::move(v));
  }
  return out;
}

Dataset standardize_like(const Dataset& data, const Dataset& reference) {
  Dataset out;
  for (const auto& name : data.column_names()) {
    const auto& src = data.col(name);
    if (!reference.is_standardized(name)) {
      out.add_column(name, src);
      continue;
    }
    const auto& s = reference.stats(name);
    std::vector<double> z(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      z[i] = (src[i] - s.mean) / s.sd;
    out.add_column(name, std::move(z));
    out.set_stats(name, s);
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV input");
  auto header = split_line(line);
  std::vector<std::vector<double>> cols(header.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw NonNumericCell("row " + std::to_string(row + 1) + ": expected " +
                           std::to_string(header.size()) + " cells, got " +
                           std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        std::size_t pos = 0;
        double v = std::stod(cells[c], &pos);
        if (pos != cells[c].size()) throw std::invalid_argument(cells[c]);
        cols[c].push_back(v);
      } catch (const std::exception&) {
        throw NonNumericCell("row " + std::to_string(row + 1) + ", column " +
                             header[c] + ": not numeric: '" + cells[c] + "'");
      }
    }
    ++row;
  }
  Dataset out;
  for (std::size_t c = 0; c < header.size(); ++c)
    out.add_column(header[c], std::move(cols[c]));
  return out;
}

Dataset read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  const auto& names = data.column_names();
  for (std::size_t c = 0; c < names.size(); ++c)
    f << (c ? "," : "") << names[c];
  f << "\n";
  f.precision(17);
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c)
      f << (c ? "," : "") << data.col(names[c])[r];
    f << "\n";
  }
}

}  // namespace gebayes
