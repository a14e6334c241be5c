#include "subaudit/fuzzy/membership.hpp"

#include <algorithm>

#include "subaudit/error.hpp"

namespace subaudit::fuzzy {

void Universe::validate() const {
    if (!(lo < hi)) throw DomainError("universe requires lo < hi");
    if (resolution < 3) throw DomainError("universe resolution must be at least 3");
}

std::vector<double> Universe::grid() const {
    std::vector<double> xs(resolution);
    const double h = step();
    for (std::size_t i = 0; i + 1 < resolution; ++i) xs[i] = lo + h * static_cast<double>(i);
    xs.back() = hi;
    return xs;
}

double Universe::clamp(double x) const noexcept { return std::clamp(x, lo, hi); }

MembershipFunction MembershipFunction::triangle(double a, double b, double c) {
    return {Shape::Triangle, {a, b, b, c}};
}

MembershipFunction MembershipFunction::trapezoid(double a, double b, double c, double d) {
    return {Shape::Trapezoid, {a, b, c, d}};
}

std::vector<double> MembershipFunction::parameters() const {
    if (shape_ == Shape::Triangle) return {p_[0], p_[1], p_[3]};
    return {p_.begin(), p_.end()};
}

bool MembershipFunction::ordered() const noexcept {
    return p_[0] <= p_[1] && p_[1] <= p_[2] && p_[2] <= p_[3];
}

double MembershipFunction::operator()(double x) const noexcept {
    const auto [a, b, c, d] = p_;
    if (x >= b && x <= c) return 1.0;
    if (x > a && x < b) return (x - a) / (b - a);
    if (x > c && x < d) return (d - x) / (d - c);
    return 0.0;
}

std::string_view to_string(MembershipFunction::Shape shape) {
    return shape == MembershipFunction::Shape::Triangle ? "triangle" : "trapezoid";
}

}  // namespace subaudit::fuzzy
