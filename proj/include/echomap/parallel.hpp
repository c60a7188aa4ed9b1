// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include <cstddef>
#include <functional>

namespace echomap {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Callers write results
// by index, so output order never depends on scheduling. The first exception
// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace echomap
