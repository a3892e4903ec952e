// Copyright 2026 The orbitfl Authors
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

#include <vector>

#include "orbitfl/domain/types.h"

namespace orbitfl::constellation {

inline constexpr double kEarthGm = 3.986004418e14;       // m^3/s^2
inline constexpr double kEarthRadius = 6371.0e3;         // m, mean
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s

//! Mean motion of a circular orbit at the given altitude, rad/s.
double angular_rate(double altitude_km);

//! Orbital period, seconds.
double orbital_period(double altitude_km);

//! Earth-centred inertial position at time t (seconds after epoch).
Vec3 propagate_inertial(const OrbitalSlot &slot, double t);

//! Earth-fixed position at time t: the inertial position rotated by the
//! Earth's spin since epoch. t must be >= 0.
Vec3 propagate(const OrbitalSlot &slot, double t);

//! Earth-fixed position of a ground point on the mean sphere.
Vec3 ground_position(double lat_deg, double lon_deg);

//! Walker-delta layout: num_sats spread over num_planes planes with RAAN
//! evenly spaced in [0, 360) and in-plane phases evenly spaced.
std::vector<OrbitalSlot> walker_constellation(int num_sats, int num_planes,
                                              double altitude_km,
                                              double inclination_deg);

double distance(const Vec3 &a, const Vec3 &b);
double norm(const Vec3 &a);

//! True when the segment a-b clears a sphere of the given radius.
bool has_line_of_sight(const Vec3 &a, const Vec3 &b,
                       double blocking_radius = kEarthRadius);

}  // namespace orbitfl::constellation
