#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hamlab {

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 480;
};

/// Line plot of (x[i], y[i]) as a standalone SVG document with a framed,
/// ticked and labelled axis box. Output is a pure function of the inputs.
void write_svg(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y,
               const PlotSpec& spec);

}  // namespace hamlab
