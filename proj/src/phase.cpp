#include "kpist/phase.hpp"

#include <stdexcept>

namespace kpist {

std::string to_string(Region r) {
    switch (r) {
        case Region::rapid_decay: return "rapid_decay";
        case Region::transition: return "transition";
        case Region::oscillatory: return "oscillatory";
    }
    return "?";
}

RayCoordinates ray_coordinates(double xi, double eta) { return {xi, eta, (xi - eta * eta / 12.0) / 12.0}; }

double phase_S0(double k, double l, double xi, double eta) {
    return (l - k) * xi - (l * l - k * k) * eta + 4.0 * (l * l * l - k * k * k);
}

double phase_S_shifted(double k, double l, double a) { return 12.0 * a * (l - k) + 4.0 * (l * l * l - k * k * k); }

double phase_phi(double s, double t, double x, double y) { return s * (x + s * (-y + 4.0 * t * s)); }

double phase_phi_prime(double s, double t, double x, double y) { return x - 2.0 * y * s + 12.0 * t * s * s; }

RegionLabel classify(double xi, double eta, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("classify: delta must be positive");
    const double a = ray_coordinates(xi, eta).a;
    RegionLabel r;
    r.delta = delta;
    if (a > delta)
        r.label = Region::rapid_decay;
    else if (a < -delta)
        r.label = Region::oscillatory;
    else
        r.label = Region::transition;
    return r;
}

}  // namespace kpist
