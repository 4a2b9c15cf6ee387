#pragma once

#include <cstdint>
#include <vector>

namespace smallsum::detail {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ...,
/// all diagonal entries non-negative. Throws smallsum::Error on overflow.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
};

SmithForm smith_normal_form(IntMatrix a);

}  // namespace smallsum::detail
