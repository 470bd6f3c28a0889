#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace smf {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Wrap a coordinate pair into [0,1)^2.
Point wrap(Point p);

// Minimum-image representative of a displacement, components in [-1/2, 1/2).
Point min_image(Point d);

// Flat periodic distance on the unit torus.
double flat_distance(Point a, Point b);

// Real values on the nodes of an n x n periodic grid.  Node (i, j) sits at
// (i/n, j/n); i runs along x.  Linear index is i*n + j.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(int n, double value = 0.0);

    int n() const { return n_; }
    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double& operator[](std::size_t k) { return v_[k]; }
    double operator[](std::size_t k) const { return v_[k]; }

    // Periodic 2-index access.
    double& operator()(int i, int j) { return v_[index(i, j)]; }
    double operator()(int i, int j) const { return v_[index(i, j)]; }

    std::size_t index(int i, int j) const {
        int a = ((i % n_) + n_) % n_;
        int b = ((j % n_) + n_) % n_;
        return static_cast<std::size_t>(a) * n_ + b;
    }

    Point node(std::size_t k) const {
        return {static_cast<double>(k / n_) / n_, static_cast<double>(k % n_) / n_};
    }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double max() const;
    double min() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double c);

private:
    int n_ = 0;
    std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

// Throws PreconditionError when the two fields live on different grids.
void require_same_shape(const ScalarField& a, const ScalarField& b, const char* where);

// Grid node nearest to p, as a linear index.
std::size_t nearest_node(int n, Point p);

// Sample a function of position on every node.
template <class F>
ScalarField sample(int n, F&& f) {
    ScalarField out(n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(out.node(k));
    return out;
}

} // namespace smf
