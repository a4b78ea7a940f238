#pragma once

// Slice-grid export: sample a function over a rectangle of one plane L_I and
// write a byte-stable CSV (x, y, four components, modulus; nan at poles).

#include <ostream>

#include "sreg/function_spec.hpp"
#include "sreg/quaternion.hpp"

namespace sreg {

struct GridSpec {
  ImaginaryUnit unit = ImaginaryUnit::i();
  double x_min = -1, x_max = 1;
  double y_min = 0, y_max = 1;
  int nx = 2, ny = 2;
};

// Rows ordered y-major then x, ascending; numbers printed with 17 significant
// digits, '.' decimal, no locale.  Cell count parallelism is capped by the
// SLICE_REGULAR_THREADS environment variable.
void write_grid_csv(std::ostream& os, const FunctionSpec& f, const GridSpec& g);

}  // namespace sreg
