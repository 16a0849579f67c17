#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgdefect/errors.hpp"

namespace sgdefect {

/// Composite Simpson rule on uniformly spaced samples. An even sample count
/// (odd interval count) closes the last three intervals with Simpson's 3/8 rule.
template <class T>
T simpson(std::span<const T> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) throw ArgumentError("simpson: need at least two samples");
    if (n == 2) return (f[0] + f[1]) * (0.5 * h);
    if (n == 3) return (f[0] + 4.0 * f[1] + f[2]) * (h / 3.0);
    const std::size_t intervals = n - 1;
    std::size_t end = n;  // exclusive end of the 1/3-rule part
    T tail{};
    if (intervals % 2 == 1) {
        end = n - 3;
        tail = (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]) * (3.0 * h / 8.0);
    }
    T acc = f[0] + f[end - 1];
    for (std::size_t k = 1; k + 1 < end; ++k) acc += f[k] * (k % 2 == 1 ? 4.0 : 2.0);
    return acc * (h / 3.0) + tail;
}

template <class T>
T simpson(const std::vector<T>& f, double h) {
    return simpson(std::span<const T>(f.data(), f.size()), h);
}

/// Uniform nodes a, a + h, ..., b.
inline std::vector<double> linspace(double a, double b, std::size_t count) {
    if (count < 2) throw ArgumentError("linspace: need at least two points");
    std::vector<double> r(count);
    const double h = (b - a) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) r[k] = a + h * static_cast<double>(k);
    r.back() = b;
    return r;
}

} // namespace sgdefect
