// Copyright 2026 The dynpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace dynpec {

/// Number of hardware threads, at least 1.
size_t default_workers();

/// Runs task(i) for i in [0, count) on `workers` threads (0 = default).
/// Tasks must write only to their own output slots; the first exception
/// thrown by any task is rethrown after all threads join.
void parallel_for(size_t count, size_t workers, const std::function<void(size_t)> &task);

}  // namespace dynpec
