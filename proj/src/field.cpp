#include "smf/field.hpp"

#include "smf/errors.hpp"

#include <algorithm>
#include <string>

namespace smf {

Point wrap(Point p) {
    p.x -= std::floor(p.x);
    p.y -= std::floor(p.y);
    if (p.x >= 1.0) p.x = 0.0;
    if (p.y >= 1.0) p.y = 0.0;
    return p;
}

Point min_image(Point d) {
    d.x -= std::floor(d.x + 0.5);
    d.y -= std::floor(d.y + 0.5);
    return d;
}

double flat_distance(Point a, Point b) {
    Point d = min_image({a.x - b.x, a.y - b.y});
    return std::hypot(d.x, d.y);
}

ScalarField::ScalarField(int n, double value)
    : n_(n), v_(static_cast<std::size_t>(n) * n, value) {}

double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }
double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }

bool ScalarField::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

ScalarField& ScalarField::operator+=(double c) {
    for (double& x : v_) x += c;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* where) {
    if (a.n() != b.n())
        throw PreconditionError(std::string(where) + ": grid mismatch (" + std::to_string(a.n()) +
                                " vs " + std::to_string(b.n()) + ")");
}

std::size_t nearest_node(int n, Point p) {
    p = wrap(p);
    int i = static_cast<int>(std::lround(p.x * n)) % n;
    int j = static_cast<int>(std::lround(p.y * n)) % n;
    return static_cast<std::size_t>(i) * n + j;
}

} // namespace smf
