#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace curveml {

/// Worker count from an explicit request, else CURVEML_WORKERS, else 1.
/// Throws InputError if CURVEML_WORKERS is set but not a positive integer.
unsigned resolve_workers(std::optional<unsigned> requested = std::nullopt);

/// Calls fn(i) for every i in [0, n) on up to `workers` threads, each index at
/// most once; callers write results into per-index slots so output does not
/// depend on scheduling. Once an index throws, no further indices start; the
/// exception from the lowest failing index that ran is rethrown after all
/// threads join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

} // namespace curveml
