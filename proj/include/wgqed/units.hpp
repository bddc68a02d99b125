// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>

// Frequencies and rates are angular (rad/ns) everywhere inside the library.
// Values quoted in GHz are ordinary frequencies nu = omega / 2pi.
namespace wgqed::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double planck = 6.62607015e-34;       // J s

constexpr double ghz_to_rad_per_ns(double nu_ghz) { return two_pi * nu_ghz; }
constexpr double rad_per_ns_to_ghz(double omega) { return omega / two_pi; }

}  // namespace wgqed::units
