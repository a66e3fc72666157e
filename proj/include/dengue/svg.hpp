#pragma once

#include "dengue/pareto.hpp"

#include <string>
#include <string_view>

namespace dengue {

/// Scatter of every month on the (d1, d2) plane over [0,1]^2. Front months
/// are filled, near-front months hollow, and both carry month labels.
[[nodiscard]] std::string objective_plane_svg(const Detection &detection, std::string_view title);

} // namespace dengue
