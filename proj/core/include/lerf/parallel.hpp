// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace lerf {

/// Number of worker threads used by row-parallel loops. 0 selects
/// std::thread::hardware_concurrency(). Results never depend on this value.
void set_thread_count(int threads);
int thread_count();

/// Runs body(begin, end) over disjoint chunks of [0, rows). Each row is
/// processed by exactly one thread.
void parallel_rows(int rows, const std::function<void(int, int)>& body);

}  // namespace lerf
