#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <stdexcept>

namespace scenerywalk {

/// Largest lattice dimension supported by the simulation modules (Z^{1+d} with d <= 5).
inline constexpr int kMaxDim = 6;

/// A point of Z^dim. Unused trailing coordinates are kept at zero so that the
/// defaulted comparison is lexicographic on the coordinates.
struct Site {
    int dim = 0;
    std::array<std::int64_t, kMaxDim> c{};

    Site() = default;
    explicit Site(int d) : dim(d) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("Site: dimension out of range");
    }
    Site(std::initializer_list<std::int64_t> coords) : dim(static_cast<int>(coords.size())) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Site: dimension out of range");
        int i = 0;
        for (auto v : coords) c[i++] = v;
    }

    static Site origin(int d) { return Site(d); }

    std::int64_t& operator[](int i) { return c[i]; }
    std::int64_t operator[](int i) const { return c[i]; }

    auto operator<=>(const Site&) const = default;
    bool operator==(const Site&) const = default;

    bool is_origin() const {
        for (int i = 0; i < dim; ++i)
            if (c[i] != 0) return false;
        return true;
    }
};

inline std::int64_t l1_norm(const Site& x) {
    std::int64_t s = 0;
    for (int i = 0; i < x.dim; ++i) s += std::llabs(x.c[i]);
    return s;
}

inline std::int64_t linf_norm(const Site& x) {
    std::int64_t s = 0;
    for (int i = 0; i < x.dim; ++i) s = std::max<std::int64_t>(s, std::llabs(x.c[i]));
    return s;
}

inline double euclidean_norm(const Site& x) {
    double s = 0.0;
    for (int i = 0; i < x.dim; ++i) s += static_cast<double>(x.c[i]) * static_cast<double>(x.c[i]);
    return std::sqrt(s);
}

inline Site operator-(const Site& a, const Site& b) {
    Site r(a.dim);
    for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

inline Site operator+(const Site& a, const Site& b) {
    Site r(a.dim);
    for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

inline std::int64_t l1_distance(const Site& a, const Site& b) { return l1_norm(a - b); }

/// Moves x one step in direction `dir` in [0, 2*dim): dir/2 is the axis, dir odd is negative.
inline void step(Site& x, unsigned dir) {
    x.c[dir >> 1] += (dir & 1U) ? -1 : 1;
}

/// Transverse part (x_2) of a point (x_1, x_2) of Z^{1+d}.
inline Site transverse(const Site& x) {
    Site r(x.dim - 1);
    for (int i = 1; i < x.dim; ++i) r.c[i - 1] = x.c[i];
    return r;
}

/// Signed-to-unsigned bijection 0,-1,1,-2,2,... -> 0,1,2,3,4,...
constexpr std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

/// Calls fn(site) for every site of the cube ||x||_inf <= radius in lexicographic order.
template <class Fn>
void for_each_in_box(int dim, std::int64_t radius, Fn&& fn) {
    Site x(dim);
    for (int i = 0; i < dim; ++i) x.c[i] = -radius;
    while (true) {
        fn(static_cast<const Site&>(x));
        int i = dim - 1;
        while (i >= 0 && x.c[i] == radius) {
            x.c[i] = -radius;
            --i;
        }
        if (i < 0) return;
        ++x.c[i];
    }
}

namespace detail {

// Fills coordinates [axis, x.dim) so that max |x_i| over them is exactly r (on_shell)
// or at most r (!on_shell); lexicographic order.
template <class Fn>
void shell_rec(Site& x, int axis, std::int64_t r, bool on_shell, Fn& fn) {
    if (axis == x.dim) {
        if (!on_shell) fn(static_cast<const Site&>(x));
        return;
    }
    if (!on_shell) {
        for (std::int64_t v = -r; v <= r; ++v) {
            x.c[axis] = v;
            shell_rec(x, axis + 1, r, false, fn);
        }
        return;
    }
    for (std::int64_t v = -r; v <= r; ++v) {
        x.c[axis] = v;
        const bool touches = (v == -r || v == r);
        if (axis + 1 == x.dim) {
            if (touches) fn(static_cast<const Site&>(x));
        } else {
            shell_rec(x, axis + 1, r, !touches, fn);
        }
    }
}

}  // namespace detail

/// Calls fn(site) for every site with ||x||_inf == radius, lexicographic order.
template <class Fn>
void for_each_on_shell(int dim, std::int64_t radius, Fn&& fn) {
    Site x(dim);
    if (radius == 0) {
        fn(static_cast<const Site&>(x));
        return;
    }
    detail::shell_rec(x, 0, radius, true, fn);
}

inline std::ostream& operator<<(std::ostream& os, const Site& x) {
    os << '(';
    for (int i = 0; i < x.dim; ++i) os << (i ? "," : "") << x.c[i];
    return os << ')';
}

}  // namespace scenerywalk
