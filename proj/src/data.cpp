#include "gebayes/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace gebayes {

LinearData generate_linear(const LinearDataConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> xdist(cfg.x_lo, cfg.x_hi);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<double> x(static_cast<std::size_t>(cfg.n_total));
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = xdist(rng);
    y[i] = cfg.intercept + cfg.slope * x[i] + cfg.noise_sd * noise(rng);
  }

  LinearData out;
  out.full.add_column("x", x);
  out.full.add_column("y", y);
  std::vector<std::size_t> train_rows;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= cfg.train_lo && x[i] <= cfg.train_hi) train_rows.push_back(i);
  out.train = out.full.select_rows(train_rows);
  return out;
}

Dataset solve_advection(const AdvectionConfig& cfg) {
  const double two_pi = 2.0 * std::numbers::pi;
  const int n = cfg.grid_points;
  if (n < 4 * cfg.samples_per_snapshot)
    throw UnstableConfig("grid_points must be >= 4 * samples_per_snapshot");
  const double dx = two_pi / n;

  std::vector<double> xg(static_cast<std::size_t>(n));
  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<double> forcing(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xg[static_cast<std::size_t>(i)] = i * dx;
    u[static_cast<std::size_t>(i)] =
        cfg.ic_offset + cfg.ic_amplitude * std::sin(i * dx);
    forcing[static_cast<std::size_t>(i)] =
        cfg.amplitude * std::sin(i * dx + cfg.phase);
  }

  auto times = cfg.snapshot_times;
  std::sort(times.begin(), times.end());

  std::vector<std::vector<double>> snapshots;
  std::vector<double> next_u(u.size());
  double t = 0.0;
  std::size_t next_snap = 0;
  while (next_snap < times.size()) {
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    if (!std::isfinite(umax) || umax > 1e6)
      throw UnstableConfig("advection solution blew up; refine the grid");
    double dt = 0.5 * dx / std::max(umax, 1e-12);
    dt = std::min(dt, times[next_snap] - t);
    // upwind differencing, direction per local velocity sign
    for (int i = 0; i < n; ++i) {
      auto idx = static_cast<std::size_t>(i);
      double ui = u[idx];
      double grad;
      if (ui >= 0.0)
        grad = (ui - u[static_cast<std::size_t>((i - 1 + n) % n)]) / dx;
      else
        grad = (u[static_cast<std::size_t>((i + 1) % n)] - ui) / dx;
      next_u[idx] = ui + dt * (-ui * grad + forcing[idx]);
    }
    std::swap(u, next_u);
    t += dt;
    while (next_snap < times.size() && t >= times[next_snap] - 1e-12) {
      snapshots.push_back(u);
      ++next_snap;
    }
  }

  // sample at equispaced grid indices
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int stride = n / cfg.samples_per_snapshot;
  std::vector<double> xs;
  for (int s = 0; s < cfg.samples_per_snapshot; ++s)
    xs.push_back(xg[static_cast<std::size_t>(s * stride)]);

  Dataset out;
  out.add_column("x", xs);
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    std::vector<double> truth, noisy;
    for (int s = 0; s < cfg.samples_per_snapshot; ++s) {
      double v = snapshots[k][static_cast<std::size_t>(s * stride)];
      truth.push_back(v);
      noisy.push_back(v + cfg.noise_sd * noise(rng));
    }
    std::string name = "u" + std::to_string(k + 1);
    out.add_column(name, noisy);
    out.add_column(name + "_true", truth);
  }
  return out;
}

Dataset load_table(const std::string& path,
                   const std::vector<std::string>& schema) {
  Dataset raw = read_csv(path);
  Dataset out;
  for (const auto& name : schema) {
    if (!raw.has_column(name))
      throw MissingColumn("file " + path + " is missing column " + name);
    out.add_column(name, raw.col(name));
  }
  return out;
}

std::pair<Dataset, Dataset> split_by_predicate(
    const Dataset& data, const std::string& column,
    const std::function<bool(double)>& predicate) {
  const auto& col = data.col(column);
  std::vector<std::size_t> in_rows, out_rows;
  for (std::size_t i = 0; i < col.size(); ++i)
    (predicate(col[i]) ? in_rows : out_rows).push_back(i);
  return {data.select_rows(in_rows), data.select_rows(out_rows)};
}

Dataset label_classes(const Dataset& data, const std::string& column,
                      double cutoff, const std::string& label_column) {
  const auto& col = data.col(column);
  std::vector<double> labels(col.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    labels[i] = col[i] >= cutoff ? 0.0 : 1.0;
  Dataset out = data;
  out.add_column(label_column, std::move(labels));
  return out;
}

Dataset upsample_minority(const Dataset& train, const std::string& class_column,
                          std::uint64_t seed) {
  const auto& labels = train.col(class_column);
  std::vector<std::size_t> class0, class1;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] < 0.5 ? class0 : class1).push_back(i);
  if (class0.empty() || class1.empty())
    throw SingleClass("both classes must be present for upsampling");
  if (class0.size() == class1.size()) return train;

  auto& minority = class0.size() < class1.size() ? class0 : class1;
  std::size_t deficit =
      std::max(class0.size(), class1.size()) - minority.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, minority.size() - 1);
  std::vector<std::size_t> rows(train.n_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t i = 0; i < deficit; ++i)
    rows.push_back(minority[pick(rng)]);
  return train.select_rows(rows);
}

double percentile(const std::vector<double>& values, double q) {
  if (values.empty()) throw Error("percentile of empty vector");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace gebayes
