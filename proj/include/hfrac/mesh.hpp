#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "group.hpp"

namespace hfrac {

// Interior nodes (inside Omega = B_radius(center)) come first, then the
// exterior nodes of B_{R_ext}(center) \ Omega.
template <int N>
struct Mesh {
    Point<N> center{};
    double radius = 1.0;
    double h = 0.0;
    double R_ext = 1.0;
    std::vector<Point<N>> nodes;
    std::vector<double> weights;
    std::size_t n_interior = 0;

    std::size_t size() const { return nodes.size(); }
    std::size_t n_exterior() const { return nodes.size() - n_interior; }
    bool is_interior(std::size_t i) const { return i < n_interior; }

    // Koranyi distance of node i from the domain center.
    double level(std::size_t i) const { return koranyi_norm(increment(center, nodes[i])); }

    void validate() const {
        if (weights.size() != nodes.size()) throw DomainError("mesh weight count mismatch");
        if (n_interior > nodes.size()) throw DomainError("mesh interior count out of range");
        if (!(radius > 0.0) || R_ext < radius) throw DomainError("mesh radii must satisfy 0 < radius <= R_ext");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!(weights[i] > 0.0)) throw DomainError("mesh weights must be positive");
            const double r = level(i);
            if (is_interior(i) ? !(r < radius) : !(r >= radius && r < R_ext))
                throw DomainError("mesh node classification is inconsistent");
        }
    }
};

// Lattice center o (h k), k in Z^{2N+1}, clipped to B_{R_ext}(center).
template <int N>
Mesh<N> build_mesh(const Point<N>& center, double radius, double h, double R_ext) {
    if (!(h > 0.0)) throw DomainError("mesh spacing must be positive");
    if (!(radius > 0.0)) throw DomainError("domain radius must be positive");
    if (R_ext < radius) throw DomainError("R_ext must not be smaller than the domain radius");
    constexpr int D = 2 * N + 1;
    const int Kz = static_cast<int>(std::floor(R_ext / h));
    const int Kt = static_cast<int>(std::floor(R_ext * R_ext / h));
    Mesh<N> m;
    m.center = center;
    m.radius = radius;
    m.h = h;
    m.R_ext = R_ext;
    std::vector<Point<N>> inner, outer;
    std::array<int, D> k{};
    for (int d = 0; d < D - 1; ++d) k[d] = -Kz;
    k[D - 1] = -Kt;
    while (true) {
        Point<N> zeta;
        for (int d = 0; d < D; ++d) zeta[d] = h * k[d];
        const double r = koranyi_norm(zeta);
        if (r < R_ext) (r < radius ? inner : outer).push_back(group_mul(center, zeta));
        int d = D - 1;
        while (d >= 0) {
            const int lim = d == D - 1 ? Kt : Kz;
            if (++k[d] <= lim) break;
            k[d] = -lim;
            --d;
        }
        if (d < 0) break;
    }
    m.n_interior = inner.size();
    m.nodes = std::move(inner);
    m.nodes.insert(m.nodes.end(), outer.begin(), outer.end());
    m.weights.assign(m.nodes.size(), std::pow(h, D));
    return m;
}

// Values on every mesh node plus the constant assumed beyond B_{R_ext}.
template <int N>
struct DiscreteFunction {
    std::shared_ptr<const Mesh<N>> mesh;
    std::vector<double> values;
    double far_value = 0.0;

    const Mesh<N>& grid() const { return *mesh; }
};

template <int N, typename F>
DiscreteFunction<N> sample(std::shared_ptr<const Mesh<N>> mesh, const F& f, double far_value = 0.0) {
    DiscreteFunction<N> u{mesh, {}, far_value};
    u.values.reserve(mesh->size());
    for (const auto& p : mesh->nodes) u.values.push_back(f(p));
    return u;
}

} // namespace hfrac
