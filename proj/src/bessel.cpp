#include "ratchet/bessel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace ratchet {

namespace {

// J_0..J_top for z > 0 by downward recurrence, normalized with
// J_0 + 2 sum_{m even} J_m = 1.
std::vector<double> bessel_row(int top, double z) {
    const int start = std::max(top, static_cast<int>(z)) + 40 +
                      static_cast<int>(12.0 * std::cbrt(z + 1.0));
    long double jp = 0.0L, j = 1e-300L, norm = 0.0L;
    std::vector<double> out(static_cast<std::size_t>(top) + 1, 0.0);
    for (int i = start; i >= 1; --i) {
        const long double jm = (2.0L * i / z) * j - jp;
        jp = j;
        j = jm;
        if (i - 1 <= top) out[static_cast<std::size_t>(i - 1)] = static_cast<double>(jm);
        if ((i - 1) % 2 == 0) norm += (i - 1 == 0) ? jm : 2.0L * jm;
        if (std::fabs(static_cast<double>(j)) > 1e250) {
            const long double s = 1e-250L;
            j *= s;
            jp *= s;
            norm *= s;
            for (double& v : out) v *= static_cast<double>(s);
        }
    }
    const auto scale = static_cast<double>(1.0L / norm);
    for (double& v : out) v *= scale;
    return out;
}

}  // namespace

double bessel_J(int m, double z) {
    if (!(std::fabs(z) < 1e4))
        throw std::invalid_argument("bessel_J: |z| must be < 1e4");
    double sign = 1.0;
    if (z < 0.0) {
        z = -z;
        if (m % 2 != 0) sign = -sign;
    }
    if (m < 0) {
        m = -m;
        if (m % 2 != 0) sign = -sign;
    }
    if (z == 0.0) return m == 0 ? 1.0 : 0.0;
    return sign * bessel_row(m, z)[static_cast<std::size_t>(m)];
}

int kick_bandwidth(double z, double tol) {
    z = std::fabs(z);
    if (z == 0.0) return 0;
    if (!(tol > 0.0)) throw std::invalid_argument("kick_bandwidth: tol must be > 0");

    static std::mutex mu;
    static std::map<std::pair<double, double>, int> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({z, tol});
        if (it != cache.end()) return it->second;
    }

    // sum_m J_m(z)^2 = 1; accumulate until the tail drops below tol/4
    const int top = std::max(64, static_cast<int>(2.0 * z) + 64);
    const std::vector<double> row = bessel_row(top, z);
    double acc = row[0] * row[0];
    int b = top;
    for (int m = 1; m <= top; ++m) {
        acc += 2.0 * row[static_cast<std::size_t>(m)] * row[static_cast<std::size_t>(m)];
        if (1.0 - acc < 0.25 * tol) {
            b = m;
            break;
        }
    }

    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(z, tol), b);
    return b;
}

}  // namespace ratchet
