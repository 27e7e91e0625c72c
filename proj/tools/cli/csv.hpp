#pragma once

#include <ostream>
#include <string>

#include "swstab/trajectory.hpp"

namespace swstab::cli {

/// Columns t,x1,x2,norm,active,event. `active` is A, B or u=<value>; a row
/// at a switch instant carries switch+ (on D+, or to A when the switch is
/// not on Z) or switch- (on D-, or to B).
void write_csv(const Trajectory& tr, std::ostream& out);

std::string to_csv(const Trajectory& tr);

}  // namespace swstab::cli
