#include "sreg/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sreg {

namespace {

int thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SLICE_REGULAR_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && cap < long(n)) n = unsigned(cap);
  }
  return int(n);
}

void append_number(std::string& row, double v) {
  char buf[40];
  if (!std::isfinite(v)) {
    row += "nan";
    return;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  row += buf;
}

}  // namespace

void write_grid_csv(std::ostream& os, const FunctionSpec& f, const GridSpec& g) {
  if (g.nx < 2 || g.ny < 2)
    throw std::invalid_argument("grid resolution must be at least 2 per axis");
  const int cells = g.nx * g.ny;
  std::vector<std::string> rows;
  rows.resize(std::size_t(cells));

  auto fill = [&](int begin, int end) {
    for (int c = begin; c < end; ++c) {
      const int ix = c % g.nx, iy = c / g.nx;
      const double x = g.x_min + (g.x_max - g.x_min) * ix / (g.nx - 1);
      const double y = g.y_min + (g.y_max - g.y_min) * iy / (g.ny - 1);
      const Quatd q = Quatd(x) + y * g.unit;
      Quatd v;
      bool pole = f.pole_at && f.pole_at(q).has_value();
      if (!pole) {
        try {
          v = f.eval(q);
        } catch (const PoleError&) {
          pole = true;
        }
      }
      if (pole || !std::isfinite(norm2(v)))
        v = Quatd{std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN()};
      std::string& row = rows[std::size_t(c)];
      append_number(row, x);
      row += ',';
      append_number(row, y);
      for (double comp : {v.w, v.x, v.y, v.z}) {
        row += ',';
        append_number(row, comp);
      }
      row += ',';
      append_number(row, std::isfinite(norm2(v)) ? abs(v)
                                                 : std::numeric_limits<double>::quiet_NaN());
      row += '\n';
    }
  };

  const int n_threads = std::min(thread_budget(), cells);
  if (n_threads <= 1) {
    fill(0, cells);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cells + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back(fill, t * chunk, std::min(cells, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  os << "x,y,f0,f1,f2,f3,absf\n";
  for (const auto& row : rows) os << row;
}

}  // namespace sreg
