#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace subaudit::fuzzy {

/// Discretized universe of discourse.
struct Universe {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t resolution = 2001;

    /// Throws DomainError unless lo < hi and resolution >= 3.
    void validate() const;
    double span() const noexcept { return hi - lo; }
    double step() const noexcept { return (hi - lo) / static_cast<double>(resolution - 1); }
    /// Uniform grid, first point lo and last point exactly hi.
    std::vector<double> grid() const;
    double clamp(double x) const noexcept;
    bool operator==(const Universe&) const = default;
};

/// Piecewise-linear membership function. A triangle (a, b, c) is stored as
/// the trapezoid (a, b, b, c) but remembers its shape for printing.
class MembershipFunction {
public:
    enum class Shape { Triangle, Trapezoid };

    static MembershipFunction triangle(double a, double b, double c);
    static MembershipFunction trapezoid(double a, double b, double c, double d);

    Shape shape() const noexcept { return shape_; }
    /// Corner points (a, b, c, d); for triangles b == c.
    const std::array<double, 4>& corners() const noexcept { return p_; }
    /// The parameters as written: three for a triangle, four for a trapezoid.
    std::vector<double> parameters() const;
    bool ordered() const noexcept;

    /// Degree in [0,1]; 1 on the plateau [b, c], 0 outside (a, d).
    double operator()(double x) const noexcept;

    bool operator==(const MembershipFunction&) const = default;

private:
    MembershipFunction(Shape shape, std::array<double, 4> p) : shape_(shape), p_(p) {}
    Shape shape_;
    std::array<double, 4> p_;
};

inline double mf_eval(const MembershipFunction& mf, double x) noexcept { return mf(x); }

std::string_view to_string(MembershipFunction::Shape shape);

}  // namespace subaudit::fuzzy
