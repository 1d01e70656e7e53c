#include "swarmsafe/flowfield.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace swarmsafe {

namespace {

constexpr double pi = std::numbers::pi;

std::string join_numbers(std::initializer_list<double> values) {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ',';
        out += fmt_sig9(v);
    }
    return out;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

} // namespace

bool FieldBounds::bounded() const {
    return std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max);
}

UniformFlow::UniformFlow(Vec2 velocity) : velocity_(velocity) {
    if (!velocity.finite()) throw ConfigError("uniform flow velocity must be finite");
}

std::string UniformFlow::describe() const { return "uniform:" + join_numbers({velocity_.x, velocity_.y}); }

RigidRotation::RigidRotation(Vec2 center, double rate) : center_(center), rate_(rate) {
    if (!center.finite()) throw ConfigError("rotation center must be finite");
    require_finite(rate, "rotation rate");
}

Vec2 RigidRotation::sample(const Vec2& q, double) const {
    const Vec2 r = q - center_;
    return {-rate_ * r.y, rate_ * r.x};
}

std::string RigidRotation::describe() const {
    return "rotation:" + join_numbers({center_.x, center_.y, rate_});
}

SaddleFlow::SaddleFlow(Vec2 center, double strain_rate) : center_(center), strain_(strain_rate) {
    if (!center.finite()) throw ConfigError("saddle center must be finite");
    if (!(strain_rate > 0.0) || !std::isfinite(strain_rate)) throw ConfigError("saddle strain rate must be positive");
}

Vec2 SaddleFlow::sample(const Vec2& q, double) const {
    const Vec2 r = q - center_;
    return {strain_ * r.x, -strain_ * r.y};
}

std::string SaddleFlow::describe() const { return "saddle:" + join_numbers({center_.x, center_.y, strain_}); }

DoubleGyre::DoubleGyre(double amplitude, double perturbation, double omega, Domain domain)
    : amplitude_(amplitude), perturbation_(perturbation), omega_(omega), domain_(domain) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ConfigError("double-gyre amplitude must be positive");
    if (!(perturbation >= 0.0) || !std::isfinite(perturbation))
        throw ConfigError("double-gyre perturbation must be non-negative");
    require_finite(omega, "double-gyre omega");
    if (!(domain.width > 0.0) || !(domain.height > 0.0)) throw ConfigError("double-gyre domain must have positive size");
}

double DoubleGyre::stream(const Vec2& q, double t) const {
    const double half = 0.5 * domain_.width;
    const double xn = (q.x - domain_.x0) / half;
    const double yn = (q.y - domain_.y0) / domain_.height;
    const double st = perturbation_ * std::sin(omega_ * t);
    const double f = st * xn * xn + (1.0 - 2.0 * st) * xn;
    return amplitude_ * domain_.height * std::sin(pi * f) * std::sin(pi * yn);
}

Vec2 DoubleGyre::sample(const Vec2& q, double t) const {
    const double half = 0.5 * domain_.width;
    const double xn = (q.x - domain_.x0) / half;
    const double yn = (q.y - domain_.y0) / domain_.height;
    const double st = perturbation_ * std::sin(omega_ * t);
    const double f = st * xn * xn + (1.0 - 2.0 * st) * xn;
    const double dfdx = 2.0 * st * xn + (1.0 - 2.0 * st);
    const double u = -pi * amplitude_ * std::sin(pi * f) * std::cos(pi * yn);
    const double v = pi * amplitude_ * (domain_.height / half) * std::cos(pi * f) * std::sin(pi * yn) * dfdx;
    return {u, v};
}

std::string DoubleGyre::describe() const {
    return "double-gyre:" + join_numbers({amplitude_, perturbation_, omega_, domain_.x0, domain_.y0, domain_.width,
                                          domain_.height});
}

// ---------------------------------------------------------------------------
// Gridded field

namespace {

void check_axis(const std::vector<double>& axis, const char* name, std::size_t min_len) {
    if (axis.size() < min_len)
        throw FlowGridError(FlowGridError::Reason::shape_mismatch,
                            std::string(name) + " needs at least " + std::to_string(min_len) + " entries");
    for (std::size_t k = 0; k < axis.size(); ++k) {
        if (!std::isfinite(axis[k]))
            throw FlowGridError(FlowGridError::Reason::non_finite, std::string(name) + " contains a non-finite value");
        if (k > 0 && !(axis[k] > axis[k - 1]))
            throw FlowGridError(FlowGridError::Reason::non_monotone_axis,
                                std::string(name) + " is not strictly increasing at index " + std::to_string(k));
    }
}

// Cell index and fractional weight of `v` on `axis`; nullopt-free: caller
// checks bounds first.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double v) {
    if (axis.size() == 1) return {0, 0.0};
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t k = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
    if (k >= axis.size() - 1) k = axis.size() - 2;
    const double w = (v - axis[k]) / (axis[k + 1] - axis[k]);
    return {k, w};
}

} // namespace

GriddedField::GriddedField(std::vector<double> x_axis, std::vector<double> y_axis, std::vector<double> t_axis,
                           std::vector<double> u, std::vector<double> v, std::string source)
    : x_(std::move(x_axis)), y_(std::move(y_axis)), t_(std::move(t_axis)), u_(std::move(u)), v_(std::move(v)),
      source_(std::move(source)) {
    check_axis(x_, "x_axis", 2);
    check_axis(y_, "y_axis", 2);
    check_axis(t_, "t_axis", 1);
    const std::size_t expected = x_.size() * y_.size() * t_.size();
    if (u_.size() != expected || v_.size() != expected)
        throw FlowGridError(FlowGridError::Reason::shape_mismatch,
                            "velocity arrays hold " + std::to_string(u_.size()) + "/" + std::to_string(v_.size()) +
                                " values, shape requires " + std::to_string(expected));
    for (std::size_t k = 0; k < expected; ++k)
        if (!std::isfinite(u_[k]) || !std::isfinite(v_[k]))
            throw FlowGridError(FlowGridError::Reason::non_finite, "velocity sample " + std::to_string(k) + " is not finite");
}

FieldBounds GriddedField::bounds() const {
    return {x_.front(), x_.back(), y_.front(), y_.back(), t_.front(), t_.back()};
}

Vec2 GriddedField::interpolate(const Vec2& q, double t) const {
    if (!bounds().contains(q, t) || !q.finite() || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << "flow query (" << fmt_sig9(q.x) << ", " << fmt_sig9(q.y) << ", t=" << fmt_sig9(t)
            << ") is outside the grid [" << fmt_sig9(x_.front()) << ", " << fmt_sig9(x_.back()) << "] x ["
            << fmt_sig9(y_.front()) << ", " << fmt_sig9(y_.back()) << "] x [" << fmt_sig9(t_.front()) << ", "
            << fmt_sig9(t_.back()) << "]";
        throw OutOfDomainError(msg.str());
    }
    const auto [ix, wx] = locate(x_, q.x);
    const auto [iy, wy] = locate(y_, q.y);
    const auto [it, wt] = locate(t_, t);

    auto slice = [&](std::size_t k) {
        const std::size_t i00 = index(k, iy, ix), i01 = index(k, iy, ix + 1);
        const std::size_t i10 = index(k, iy + 1, ix), i11 = index(k, iy + 1, ix + 1);
        const double w00 = (1.0 - wx) * (1.0 - wy), w01 = wx * (1.0 - wy);
        const double w10 = (1.0 - wx) * wy, w11 = wx * wy;
        return Vec2{w00 * u_[i00] + w01 * u_[i01] + w10 * u_[i10] + w11 * u_[i11],
                    w00 * v_[i00] + w01 * v_[i01] + w10 * v_[i10] + w11 * v_[i11]};
    };
    if (t_.size() == 1 || wt == 0.0) return slice(it);
    if (wt == 1.0) return slice(it + 1);
    return slice(it) * (1.0 - wt) + slice(it + 1) * wt;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

using nlohmann::json;

std::vector<double> axis_from_json(const json& header, const char* key) {
    if (!header.contains(key) || !header[key].is_array())
        throw FlowGridError(FlowGridError::Reason::malformed_header, std::string("header field '") + key + "' missing");
    std::vector<double> out;
    for (const auto& v : header[key]) {
        if (!v.is_number())
            throw FlowGridError(FlowGridError::Reason::malformed_header,
                                std::string("header field '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> read_floats_le(std::istream& in, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        unsigned char b[4];
        if (!in.read(reinterpret_cast<char*>(b), 4))
            throw FlowGridError(FlowGridError::Reason::shape_mismatch,
                                "binary sidecar ended after " + std::to_string(k) + " of " + std::to_string(count) +
                                    " values");
        const std::uint32_t bits = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
                                   (std::uint32_t(b[3]) << 24);
        out[k] = static_cast<double>(std::bit_cast<float>(bits));
    }
    return out;
}

void write_floats_le(std::ostream& out, const std::vector<double>& values) {
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        const unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff), static_cast<unsigned char>((bits >> 8) & 0xff),
                                    static_cast<unsigned char>((bits >> 16) & 0xff),
                                    static_cast<unsigned char>((bits >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    }
}

GriddedField load_json_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FlowGridError(FlowGridError::Reason::io, "cannot open flow grid '" + path.string() + "'");
    json header;
    try {
        in >> header;
    } catch (const json::exception& e) {
        throw FlowGridError(FlowGridError::Reason::malformed_header,
                            "flow grid header '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!header.is_object() || header.value("format", "") != "flowgrid-v1")
        throw FlowGridError(FlowGridError::Reason::malformed_header,
                            "flow grid header '" + path.string() + "' lacks \"format\": \"flowgrid-v1\"");
    auto x = axis_from_json(header, "x_axis");
    auto y = axis_from_json(header, "y_axis");
    auto t = axis_from_json(header, "t_axis");
    if (!header.contains("shape") || !header["shape"].is_array() || header["shape"].size() != 3)
        throw FlowGridError(FlowGridError::Reason::malformed_header, "header field 'shape' must be [nt, ny, nx]");
    std::size_t shape[3];
    for (int k = 0; k < 3; ++k) {
        if (!header["shape"][k].is_number_unsigned())
            throw FlowGridError(FlowGridError::Reason::malformed_header, "header field 'shape' must hold counts");
        shape[k] = header["shape"][k].get<std::size_t>();
    }
    if (shape[0] != t.size() || shape[1] != y.size() || shape[2] != x.size())
        throw FlowGridError(FlowGridError::Reason::shape_mismatch, "shape [" + std::to_string(shape[0]) + ", " +
                                                                      std::to_string(shape[1]) + ", " +
                                                                      std::to_string(shape[2]) +
                                                                      "] disagrees with axis lengths");
    if (!header.contains("data") || !header["data"].is_string())
        throw FlowGridError(FlowGridError::Reason::malformed_header, "header field 'data' missing");
    const auto bin_path = path.parent_path() / header["data"].get<std::string>();
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw FlowGridError(FlowGridError::Reason::io, "cannot open flow grid data '" + bin_path.string() + "'");
    const std::size_t count = shape[0] * shape[1] * shape[2];
    auto u = read_floats_le(bin, count);
    auto v = read_floats_le(bin, count);
    if (bin.peek() != std::char_traits<char>::eof())
        throw FlowGridError(FlowGridError::Reason::shape_mismatch, "binary sidecar holds more values than the shape");
    return GriddedField(std::move(x), std::move(y), std::move(t), std::move(u), std::move(v), path.string());
}

GriddedField load_csv_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FlowGridError(FlowGridError::Reason::io, "cannot open flow grid '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw FlowGridError(FlowGridError::Reason::malformed_header, "flow grid CSV '" + path.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,y,x,u,v")
        throw FlowGridError(FlowGridError::Reason::malformed_header,
                            "flow grid CSV header must be 't,y,x,u,v', got '" + line + "'");
    struct Row {
        double t, y, x, u, v;
    };
    std::vector<Row> rows;
    std::set<double> ts, ys, xs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        Row r{};
        if (!(fields >> r.t >> r.y >> r.x >> r.u >> r.v))
            throw FlowGridError(FlowGridError::Reason::malformed_header,
                                "flow grid CSV line " + std::to_string(lineno) + " does not hold 5 numbers");
        rows.push_back(r);
        ts.insert(r.t);
        ys.insert(r.y);
        xs.insert(r.x);
    }
    std::vector<double> t(ts.begin(), ts.end()), y(ys.begin(), ys.end()), x(xs.begin(), xs.end());
    const std::size_t count = t.size() * y.size() * x.size();
    if (rows.size() != count)
        throw FlowGridError(FlowGridError::Reason::shape_mismatch,
                            "flow grid CSV has " + std::to_string(rows.size()) + " rows, a full " +
                                std::to_string(t.size()) + "x" + std::to_string(y.size()) + "x" +
                                std::to_string(x.size()) + " lattice needs " + std::to_string(count));
    // Rows must appear in (t, y, x) order; anything else signals a shuffled or partial lattice.
    std::vector<double> u(count), v(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t ix = k % x.size();
        const std::size_t iy = (k / x.size()) % y.size();
        const std::size_t it = k / (x.size() * y.size());
        const Row& r = rows[k];
        if (r.t != t[it] || r.y != y[iy] || r.x != x[ix])
            throw FlowGridError(FlowGridError::Reason::non_monotone_axis,
                                "flow grid CSV row " + std::to_string(k + 2) + " is out of (t, y, x) order");
        u[k] = r.u;
        v[k] = r.v;
    }
    return GriddedField(std::move(x), std::move(y), std::move(t), std::move(u), std::move(v), path.string());
}

} // namespace

GriddedField load_flow_grid(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw FlowGridError(FlowGridError::Reason::io, "flow grid file '" + path.string() + "' does not exist");
    if (path.extension() == ".csv") return load_csv_grid(path);
    return load_json_grid(path);
}

void save_flow_grid(const GriddedField& field, const std::filesystem::path& header_path) {
    auto bin_name = header_path.stem().string() + ".bin";
    nlohmann::ordered_json header;
    header["format"] = "flowgrid-v1";
    header["units"] = {{"space", "m"}, {"time", "s"}, {"velocity", "m/s"}};
    header["shape"] = {field.t_axis().size(), field.y_axis().size(), field.x_axis().size()};
    header["x_axis"] = field.x_axis();
    header["y_axis"] = field.y_axis();
    header["t_axis"] = field.t_axis();
    header["data"] = bin_name;
    std::ofstream out(header_path);
    if (!out) throw IoError("cannot write '" + header_path.string() + "'");
    out << header.dump(2) << '\n';
    std::ofstream bin(header_path.parent_path() / bin_name, std::ios::binary);
    if (!bin) throw IoError("cannot write flow grid data next to '" + header_path.string() + "'");
    write_floats_le(bin, field.u_data());
    write_floats_le(bin, field.v_data());
}

void save_flow_grid_csv(const GriddedField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "t,y,x,u,v\n";
    for (std::size_t it = 0; it < field.t_axis().size(); ++it)
        for (std::size_t iy = 0; iy < field.y_axis().size(); ++iy)
            for (std::size_t ix = 0; ix < field.x_axis().size(); ++ix) {
                const auto k = field.index(it, iy, ix);
                out << fmt_sig9(field.t_axis()[it]) << ',' << fmt_sig9(field.y_axis()[iy]) << ','
                    << fmt_sig9(field.x_axis()[ix]) << ',' << fmt_sig9(field.u_data()[k]) << ','
                    << fmt_sig9(field.v_data()[k]) << '\n';
            }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_numbers(const std::string& body, const std::string& spec) {
    std::vector<double> out;
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("flow spec '" + spec + "': '" + item + "' is not a number");
        }
    }
    return out;
}

} // namespace

std::shared_ptr<const FlowField> parse_flow_spec(const std::string& spec, const Domain& default_domain) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "grid") {
        if (body.empty()) throw ConfigError("flow spec 'grid:' needs a path");
        return std::make_shared<GriddedField>(load_flow_grid(body));
    }
    const auto nums = parse_numbers(body, spec);
    auto need = [&](std::size_t n) {
        if (nums.size() != n)
            throw ConfigError("flow spec '" + spec + "' expects " + std::to_string(n) + " numbers, got " +
                              std::to_string(nums.size()));
    };
    if (kind == "zero") {
        need(0);
        return std::make_shared<UniformFlow>(Vec2{0.0, 0.0});
    }
    if (kind == "uniform") {
        need(2);
        return std::make_shared<UniformFlow>(Vec2{nums[0], nums[1]});
    }
    if (kind == "rotation") {
        need(3);
        return std::make_shared<RigidRotation>(Vec2{nums[0], nums[1]}, nums[2]);
    }
    if (kind == "saddle") {
        need(3);
        return std::make_shared<SaddleFlow>(Vec2{nums[0], nums[1]}, nums[2]);
    }
    if (kind == "double-gyre") {
        if (nums.size() == 3) return std::make_shared<DoubleGyre>(nums[0], nums[1], nums[2], default_domain);
        need(7);
        return std::make_shared<DoubleGyre>(nums[0], nums[1], nums[2], Domain{nums[3], nums[4], nums[5], nums[6]});
    }
    throw ConfigError("unknown flow kind '" + kind +
                      "' (expected zero, uniform, double-gyre, rotation, saddle or grid)");
}

} // namespace swarmsafe
