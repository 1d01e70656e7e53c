#pragma once

#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "swarmsafe/core.hpp"

namespace swarmsafe {

/// Axis-aligned space-time extent of a field. Analytic fields are unbounded.
struct FieldBounds {
    double x_min{-std::numeric_limits<double>::infinity()};
    double x_max{std::numeric_limits<double>::infinity()};
    double y_min{-std::numeric_limits<double>::infinity()};
    double y_max{std::numeric_limits<double>::infinity()};
    double t_min{-std::numeric_limits<double>::infinity()};
    double t_max{std::numeric_limits<double>::infinity()};

    bool contains(const Vec2& q) const { return q.x >= x_min && q.x <= x_max && q.y >= y_min && q.y <= y_max; }
    bool contains(const Vec2& q, double t) const { return contains(q) && t >= t_min && t <= t_max; }
    bool bounded() const;
};

/// Time-varying planar velocity field v(q, t) in m/s. Immutable and thread-safe.
class FlowField {
public:
    virtual ~FlowField() = default;
    virtual Vec2 sample(const Vec2& position, double time) const = 0;
    virtual FieldBounds bounds() const { return {}; }
    /// Canonical spec string, e.g. "uniform:0.5,0".
    virtual std::string describe() const = 0;
};

/// v(q, t) = field.sample(q, t); gridded fields throw OutOfDomainError outside their bounds.
inline Vec2 sample_flow(const FlowField& field, const Vec2& position, double time) {
    return field.sample(position, time);
}

class UniformFlow final : public FlowField {
public:
    explicit UniformFlow(Vec2 velocity);
    Vec2 sample(const Vec2&, double) const override { return velocity_; }
    std::string describe() const override;

private:
    Vec2 velocity_;
};

/// Solid-body rotation about `center` at `rate` rad/s (counter-clockwise positive).
class RigidRotation final : public FlowField {
public:
    RigidRotation(Vec2 center, double rate);
    Vec2 sample(const Vec2& q, double) const override;
    std::string describe() const override;

private:
    Vec2 center_;
    double rate_;
};

/// Hyperbolic point at `center`: stretching along x, compression along y.
class SaddleFlow final : public FlowField {
public:
    SaddleFlow(Vec2 center, double strain_rate);
    Vec2 sample(const Vec2& q, double) const override;
    std::string describe() const override;

private:
    Vec2 center_;
    double strain_;
};

/// Rectangular domain [x0, x0 + width] x [y0, y0 + height].
struct Domain {
    double x0{0.0};
    double y0{0.0};
    double width{1.0};
    double height{1.0};

    double x1() const { return x0 + width; }
    double y1() const { return y0 + height; }
    bool contains(const Vec2& q) const { return q.x >= x0 && q.x <= x1() && q.y >= y0 && q.y <= y1(); }
    Vec2 center() const { return {x0 + 0.5 * width, y0 + 0.5 * height}; }
    bool operator==(const Domain&) const = default;
};

/// Periodically forced double gyre spanning `domain`: two counter-rotating
/// cells side by side, separatrix on the vertical midline.
///
/// With xn = (x - x0) / (width / 2) in [0, 2] and yn = (y - y0) / height in [0, 1]:
///   f(xn, t)  = a(t) xn^2 + b(t) xn,  a = e sin(wt),  b = 1 - 2 e sin(wt)
///   stream    = A * height * sin(pi f) sin(pi yn)   [m^2/s]
///   u = -d stream / dy,  v = d stream / dx
/// so the peak speed is pi * A for a square cell (width = 2 height).
class DoubleGyre final : public FlowField {
public:
    DoubleGyre(double amplitude, double perturbation, double omega, Domain domain);
    Vec2 sample(const Vec2& q, double t) const override;
    std::string describe() const override;

    /// Stream function value; exposed for finite-difference checks.
    double stream(const Vec2& q, double t) const;
    const Domain& domain() const { return domain_; }

private:
    double amplitude_;
    double perturbation_;
    double omega_;
    Domain domain_;
};

/// Velocity samples on a regular (t, y, x) lattice, trilinearly interpolated.
class GriddedField final : public FlowField {
public:
    /// u and v are dense (t, y, x) row-major arrays. Throws FlowGridError on
    /// non-monotone axes, shape mismatch or non-finite samples.
    GriddedField(std::vector<double> x_axis, std::vector<double> y_axis, std::vector<double> t_axis,
                 std::vector<double> u, std::vector<double> v, std::string source = "memory");

    Vec2 sample(const Vec2& q, double t) const override { return interpolate(q, t); }
    FieldBounds bounds() const override;
    std::string describe() const override { return "grid:" + source_; }

    /// Bilinear in space, linear in time; throws OutOfDomainError outside the grid.
    Vec2 interpolate(const Vec2& q, double t) const;

    const std::vector<double>& x_axis() const { return x_; }
    const std::vector<double>& y_axis() const { return y_; }
    const std::vector<double>& t_axis() const { return t_; }
    std::size_t index(std::size_t it, std::size_t iy, std::size_t ix) const {
        return (it * y_.size() + iy) * x_.size() + ix;
    }
    const std::vector<double>& u_data() const { return u_; }
    const std::vector<double>& v_data() const { return v_; }

private:
    std::vector<double> x_, y_, t_;
    std::vector<double> u_, v_;
    std::string source_;
};

/// Error raised while loading or validating a flow grid.
class FlowGridError : public IoError {
public:
    enum class Reason { io, malformed_header, shape_mismatch, non_monotone_axis, non_finite };
    FlowGridError(Reason reason, const std::string& what) : IoError(what), reason_(reason) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

/// Loads a flow grid. `.json` selects the header + little-endian float32
/// sidecar format, `.csv` the tabular `t,y,x,u,v` format.
GriddedField load_flow_grid(const std::filesystem::path& path);

/// Writes the JSON header plus `<stem>.bin` sidecar next to it.
void save_flow_grid(const GriddedField& field, const std::filesystem::path& header_path);
/// Writes the CSV variant.
void save_flow_grid_csv(const GriddedField& field, const std::filesystem::path& path);

/// Parses a flow spec string:
///   zero | uniform:vx,vy | double-gyre:A,e,omega[,x0,y0,width,height]
///   rotation:cx,cy,omega | saddle:cx,cy,rate | grid:PATH
/// `default_domain` is used by double-gyre when no rectangle is given.
std::shared_ptr<const FlowField> parse_flow_spec(const std::string& spec, const Domain& default_domain);

} // namespace swarmsafe
