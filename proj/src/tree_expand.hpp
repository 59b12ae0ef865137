#pragma once

#include "semithermo/preimage_tree.hpp"

#include <cstdint>
#include <exception>
#include <vector>

namespace semithermo::detail {

struct Child {
    std::uint8_t generator;
    SpherePoint point;
    double step_log_sderiv;
};

/// One-step preimages of y under every generator, in canonical order
/// (generator index, then root order). Throws CriticalBranch when a preimage
/// is a multiple root or lies within delta_crit of a critical point.
void expand(const SemigroupSpec& spec, const SpherePoint& y, double delta_crit, const RootOptions& roots,
            std::vector<Child>& out);

/// Rethrows the first captured exception, in index order.
void rethrow_first(const std::vector<std::exception_ptr>& errors);

} // namespace semithermo::detail
