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
#include "orbitfl/constellation/orbit.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orbitfl::constellation {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;

double semi_major_axis(double altitude_km) {
  return kEarthRadius + altitude_km * 1e3;
}
}  // namespace

double angular_rate(double altitude_km) {
  const double a = semi_major_axis(altitude_km);
  return std::sqrt(kEarthGm / (a * a * a));
}

double orbital_period(double altitude_km) {
  return 2.0 * std::numbers::pi / angular_rate(altitude_km);
}

Vec3 propagate_inertial(const OrbitalSlot &slot, double t) {
  const double a = semi_major_axis(slot.altitude_km);
  const double u = slot.phase_deg * kDeg + angular_rate(slot.altitude_km) * t;
  const double inc = slot.inclination_deg * kDeg;
  const double raan = slot.plane_raan_deg * kDeg;

  // In-plane, then tilt about x by inclination, then turn about z by RAAN.
  const double xp = a * std::cos(u);
  const double yp = a * std::sin(u);
  const double y1 = yp * std::cos(inc);
  const double z1 = yp * std::sin(inc);
  return {xp * std::cos(raan) - y1 * std::sin(raan),
          xp * std::sin(raan) + y1 * std::cos(raan), z1};
}

Vec3 propagate(const OrbitalSlot &slot, double t) {
  if (t < 0.0) throw std::invalid_argument("propagate: t must be >= 0");
  const Vec3 eci = propagate_inertial(slot, t);
  const double theta = kEarthRotationRate * t;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * eci[0] + s * eci[1], -s * eci[0] + c * eci[1], eci[2]};
}

Vec3 ground_position(double lat_deg, double lon_deg) {
  const double lat = lat_deg * kDeg;
  const double lon = lon_deg * kDeg;
  return {kEarthRadius * std::cos(lat) * std::cos(lon),
          kEarthRadius * std::cos(lat) * std::sin(lon),
          kEarthRadius * std::sin(lat)};
}

std::vector<OrbitalSlot> walker_constellation(int num_sats, int num_planes,
                                              double altitude_km,
                                              double inclination_deg) {
  if (num_sats < 0 || num_planes < 1) {
    throw std::invalid_argument("walker_constellation: bad shape");
  }
  std::vector<OrbitalSlot> slots;
  slots.reserve(num_sats);
  const int planes = std::min(num_planes, std::max(num_sats, 1));
  for (int i = 0; i < num_sats; ++i) {
    const int plane = i % planes;
    const int index_in_plane = i / planes;
    const int per_plane = (num_sats - plane + planes - 1) / planes;
    OrbitalSlot slot;
    slot.plane_raan_deg = 360.0 * plane / planes;
    // Adjacent planes are offset by half a slot.
    double phase = 360.0 * index_in_plane / per_plane +
                   180.0 * plane / (planes * per_plane);
    slot.phase_deg = std::fmod(phase, 360.0);
    slot.altitude_km = altitude_km;
    slot.inclination_deg = inclination_deg;
    slots.push_back(slot);
  }
  return slots;
}

double norm(const Vec3 &a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

double distance(const Vec3 &a, const Vec3 &b) {
  return norm({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
}

bool has_line_of_sight(const Vec3 &a, const Vec3 &b, double blocking_radius) {
  const Vec3 d = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
  if (dd == 0.0) return norm(a) >= blocking_radius;
  // Closest point of the segment to the origin.
  double s = -(a[0] * d[0] + a[1] * d[1] + a[2] * d[2]) / dd;
  s = std::clamp(s, 0.0, 1.0);
  const Vec3 p = {a[0] + s * d[0], a[1] + s * d[1], a[2] + s * d[2]};
  return norm(p) >= blocking_radius;
}

}  // namespace orbitfl::constellation
