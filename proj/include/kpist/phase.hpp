#pragma once

#include <string>

namespace kpist {

struct RayCoordinates {
    double xi = 0.0;
    double eta = 0.0;
    double a = 0.0;
};

enum class Region { rapid_decay, transition, oscillatory };

struct RegionLabel {
    Region label = Region::transition;
    double delta = 0.05;
};

std::string to_string(Region r);

// a = (xi - eta^2/12)/12
RayCoordinates ray_coordinates(double xi, double eta);

// (l-k) xi - (l^2-k^2) eta + 4 (l^3-k^3)
double phase_S0(double k, double l, double xi, double eta);
// 12 a (l-k) + 4 (l^3-k^3)
double phase_S_shifted(double k, double l, double a);
// phi(s) = x s - y s^2 + 4 t s^3, so t*S0(k, l; x/t, y/t) = phi(l) - phi(k).
double phase_phi(double s, double t, double x, double y);
double phase_phi_prime(double s, double t, double x, double y);

RegionLabel classify(double xi, double eta, double delta = 0.05);

}  // namespace kpist
