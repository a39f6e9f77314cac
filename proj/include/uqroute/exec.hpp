/*
 * Copyright 2026 The uqroute Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

namespace uqroute {

// Selects between the OpenMP kernel and the straight-line serial reference.
// Both produce identical results; the serial path is kept for tests and
// benchmarks.
enum class Exec { kSerial, kParallel };

}  // namespace uqroute
