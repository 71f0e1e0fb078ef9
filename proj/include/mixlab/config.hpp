#pragma once

#include <string>

#include "mixlab/verify.hpp"

namespace mixlab {

// Line-based "section.key = value" text. '#' starts a comment. Unknown and
// duplicate keys raise ParseError with the line number.
//
//   grid.L = 8                      grid.J = 12
//   f.family = indicator a=0 b=1    b.family = log        b.normalize = true
//   weight.u = power beta=-0.5      weight.v = file v.txt
//   sweep.t_min / sweep.t_max / sweep.steps
//   scan.jmax / scan.shifts (1 or 3)
//   theorem.m / theorem.r / theorem.delta / theorem.beta
//   run.margin / run.seed / run.force
verify::ExperimentConfig parse_config_text(const std::string& text, verify::ExperimentConfig base = {});
verify::ExperimentConfig parse_config_file(const std::string& path, verify::ExperimentConfig base = {});

// "power beta=-0.5", "file data.txt", ... ; role is "f", "b" or "weight".
verify::FamilySpec parse_family(const std::string& value, const std::string& role);

}  // namespace mixlab
