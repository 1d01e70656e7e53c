#include "swarmsafe/commgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "swarmsafe/kernels.hpp"

namespace swarmsafe {

DenseMatrix pairwise_distances(std::span<const Vec2> positions) {
    const std::size_t n = positions.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = positions[k].x;
        ys[k] = positions[k].y;
    }
    DenseMatrix d = DenseMatrix::square(n);
    const auto& kt = kernels::active();
    for (std::size_t i = 0; i < n; ++i) kt.distance_row({xs, ys}, i, d.row(i));
    return d;
}

SigmaMatrix update_sigma(const SigmaMatrix& prev, const DenseMatrix& distances, double r_com, double epsilon) {
    const std::size_t n = prev.size();
    if (distances.rows() != n || distances.cols() != n)
        throw DomainError("distance matrix shape does not match sigma");
    if (!distances.is_symmetric()) throw DomainError("distance matrix is not symmetric");
    SigmaMatrix next(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distances(i, j);
            const bool connected = prev.get(i, j) ? d < r_com : d < r_com - epsilon;
            next.set(i, j, connected);
        }
    return next;
}

SigmaMatrix initial_sigma(const DenseMatrix& distances, double r_com) {
    const std::size_t n = distances.rows();
    SigmaMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, distances(i, j) < r_com);
    return s;
}

AdjacencyMatrix adjacency_from_distances(const DenseMatrix& distances, double r_com) {
    const std::size_t n = distances.rows();
    AdjacencyMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, distances(i, j) < r_com);
    return a;
}

AdjacencyMatrix adjacency_from_positions(std::span<const Vec2> positions, double r_com) {
    return adjacency_from_distances(pairwise_distances(positions), r_com);
}

DenseMatrix laplacian(const AdjacencyMatrix& adjacency) {
    const std::size_t n = adjacency.size();
    DenseMatrix l = DenseMatrix::square(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (adjacency.get(i, j)) l(i, j) = -1.0;
        l(i, i) = static_cast<double>(adjacency.degree(i));
    }
    return l;
}

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

SymmetricEigen jacobi_eigen(const DenseMatrix& symmetric, double tolerance, int max_sweeps) {
    const std::size_t n = symmetric.rows();
    if (symmetric.cols() != n) throw DomainError("eigensolver needs a square matrix");
    if (!symmetric.is_symmetric(1e-12)) throw DomainError("eigensolver input is not symmetric");

    DenseMatrix a = symmetric;
    DenseMatrix v = DenseMatrix::square(n);
    for (std::size_t k = 0; k < n; ++k) v(k, k) = 1.0;

    int sweep = 0;
    for (; sweep < max_sweeps && off_diagonal_norm(a) >= tolerance; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle chosen to annihilate a(p,q); t is the smaller root.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return a(l, l) < a(r, r); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = DenseMatrix::square(n);
    out.sweeps = sweep;
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

double fiedler_value(const DenseMatrix& laplacian) {
    if (laplacian.rows() < 2) throw DomainError("fiedler value needs at least 2 vertices");
    const auto eig = jacobi_eigen(laplacian);
    return std::max(0.0, eig.values[1]);
}

bool is_connected(const AdjacencyMatrix& adjacency) {
    const std::size_t n = adjacency.size();
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t w = 0; w < n; ++w)
            if (adjacency.get(u, w) && !seen[w]) {
                seen[w] = 1;
                ++reached;
                frontier.push(w);
            }
    }
    return reached == n;
}

} // namespace swarmsafe
