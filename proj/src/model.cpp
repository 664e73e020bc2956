#include "circlepack/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace packing {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;  // blank
}

[[noreturn]] void fail(const std::string& path, int line_no, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

std::string path_stem(const std::string& path) {
    const size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

}  // namespace

double Instance::area_lower_bound() const {
    double s = 0.0;
    for (double r : radii) s += r * r;
    return std::sqrt(s);
}

std::optional<RadiusFamily> parse_family(const std::string& name) {
    if (name == "linear") return RadiusFamily::linear;
    if (name == "inv_sqrt") return RadiusFamily::inv_sqrt;
    if (name == "sqrt") return RadiusFamily::sqrt;
    if (name == "inv_two_thirds") return RadiusFamily::inv_two_thirds;
    if (name == "inv_fifth") return RadiusFamily::inv_fifth;
    return std::nullopt;
}

std::string family_name(RadiusFamily family) {
    switch (family) {
        case RadiusFamily::linear: return "linear";
        case RadiusFamily::inv_sqrt: return "inv_sqrt";
        case RadiusFamily::sqrt: return "sqrt";
        case RadiusFamily::inv_two_thirds: return "inv_two_thirds";
        case RadiusFamily::inv_fifth: return "inv_fifth";
    }
    return "unknown";
}

Instance generate_instance(RadiusFamily family, int n) {
    if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
    Instance inst;
    inst.radii.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const double v = static_cast<double>(i);
        double r = 0.0;
        switch (family) {
            case RadiusFamily::linear: r = v; break;
            case RadiusFamily::inv_sqrt: r = std::pow(v, -0.5); break;
            case RadiusFamily::sqrt: r = std::sqrt(v); break;
            case RadiusFamily::inv_two_thirds: r = std::pow(v, -2.0 / 3.0); break;
            case RadiusFamily::inv_fifth: r = std::pow(v, -0.2); break;
        }
        inst.radii.push_back(r);
    }
    std::sort(inst.radii.begin(), inst.radii.end());
    inst.name = family_name(family) + "_n" + std::to_string(n);
    return inst;
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");

    Instance inst;
    inst.name = path_stem(path);

    std::string line;
    int line_no = 0;
    long expected = -1;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        if (expected < 0) {
            if (!(ss >> expected) || expected < 1)
                fail(path, line_no, "expected a positive circle count");
            std::string rest;
            if (ss >> rest) fail(path, line_no, "unexpected data after circle count");
            continue;
        }
        if (static_cast<long>(inst.radii.size()) >= expected)
            fail(path, line_no, "more radii than the declared count");
        double r = 0.0;
        if (!(ss >> r)) fail(path, line_no, "malformed radius");
        std::string rest;
        if (ss >> rest) fail(path, line_no, "unexpected data after radius");
        if (!(r > 0.0) || !std::isfinite(r)) fail(path, line_no, "radius must be positive");
        inst.radii.push_back(r);
    }

    if (expected < 0) fail(path, line_no, "missing circle count");
    if (static_cast<long>(inst.radii.size()) != expected)
        fail(path, line_no,
             "radius count mismatch: declared " + std::to_string(expected) + ", found " +
                 std::to_string(inst.radii.size()));

    std::sort(inst.radii.begin(), inst.radii.end());
    return inst;
}

void write_instance(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << instance.n() << "\n";
    for (double r : instance.radii) out << fmt_g15(r) << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

double estimate_initial_radius(const Instance& instance, double density) {
    if (!(density > 0.0) || density > 1.0)
        throw std::invalid_argument("estimate_initial_radius: density must be in (0,1]");
    double s = 0.0;
    for (double r : instance.radii) s += r * r;
    return std::sqrt(s / density);
}

Configuration random_layout(const Instance& instance, double R, Rng& rng) {
    if (!(R > 0.0)) throw std::invalid_argument("random_layout: R must be positive");
    Configuration config;
    config.container_radius = R;
    config.centers.reserve(instance.n());
    for (int i = 0; i < instance.n(); ++i) {
        const double rad = R * std::sqrt(rng.uniform01());
        const double ang = 2.0 * kPi * rng.uniform01();
        config.centers.push_back({rad * std::cos(ang), rad * std::sin(ang)});
    }
    return config;
}

FeasibilityReport verify_solution(const Instance& instance, const Configuration& config,
                                  std::optional<double> tol, double eps1) {
    const int n = instance.n();
    if (static_cast<int>(config.centers.size()) != n)
        throw std::invalid_argument("verify_solution: center count does not match instance");

    FeasibilityReport rep;
    const double R = config.container_radius;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::max(
                0.0, instance.radii[i] + instance.radii[j] -
                         dist(config.centers[i], config.centers[j]));
            rep.max_pair_depth = std::max(rep.max_pair_depth, d);
            rep.energy += d * d;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double d = std::max(0.0, norm(config.centers[i]) + instance.radii[i] - R);
        rep.max_boundary_depth = std::max(rep.max_boundary_depth, d);
        rep.energy += d * d;
    }
    rep.feasible = tol ? (rep.max_pair_depth <= *tol && rep.max_boundary_depth <= *tol)
                       : (rep.energy <= eps1);
    return rep;
}

std::string render_svg(const Instance& instance, const Configuration& config) {
    const int n = instance.n();
    if (static_cast<int>(config.centers.size()) != n)
        throw std::invalid_argument("render_svg: center count does not match instance");

    const double R = config.container_radius;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
        << fmt_g15(-R) << " " << fmt_g15(-R) << " " << fmt_g15(2 * R) << " "
        << fmt_g15(2 * R) << "\">\n";
    svg << "  <circle cx=\"0\" cy=\"0\" r=\"" << fmt_g15(R)
        << "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"" << fmt_g15(R / 200.0)
        << "\"/>\n";
    for (int i = 0; i < n; ++i) {
        svg << "  <circle cx=\"" << fmt_g15(config.centers[i].x) << "\" cy=\""
            << fmt_g15(config.centers[i].y) << "\" r=\"" << fmt_g15(instance.radii[i])
            << "\" fill=\"#4a90d9\" fill-opacity=\"0.45\" stroke=\"#1c3d5a\" stroke-width=\""
            << fmt_g15(R / 400.0) << "\"/>\n";
    }
    for (int i = 0; i < n; ++i) {
        svg << "  <text x=\"" << fmt_g15(config.centers[i].x) << "\" y=\""
            << fmt_g15(config.centers[i].y)
            << "\" text-anchor=\"middle\" dominant-baseline=\"central\" font-size=\""
            << fmt_g15(instance.radii[i] * 0.9) << "\">" << (i + 1) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_solution(const Instance& instance, const Configuration& config,
                    const std::string& path) {
    const int n = instance.n();
    if (static_cast<int>(config.centers.size()) != n)
        throw std::invalid_argument("write_solution: center count does not match instance");
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << n << " " << fmt_g15(config.container_radius) << "\n";
    for (int i = 0; i < n; ++i) {
        out << (i + 1) << " " << fmt_g15(instance.radii[i]) << " "
            << fmt_g15(config.centers[i].x) << " " << fmt_g15(config.centers[i].y) << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

Solution read_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");

    std::string line;
    int line_no = 0;
    long n = -1;
    Solution sol;
    std::vector<bool> seen;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        if (n < 0) {
            double R = 0.0;
            if (!(ss >> n >> R) || n < 1) fail(path, line_no, "expected \"n R\" header");
            std::string rest;
            if (ss >> rest) fail(path, line_no, "unexpected data after header");
            sol.config.container_radius = R;
            sol.radii.assign(n, 0.0);
            sol.config.centers.assign(n, Vec2{});
            seen.assign(n, false);
            continue;
        }
        long idx = 0;
        double r = 0.0, x = 0.0, y = 0.0;
        if (!(ss >> idx >> r >> x >> y)) fail(path, line_no, "malformed circle line");
        std::string rest;
        if (ss >> rest) fail(path, line_no, "unexpected data after circle line");
        if (idx < 1 || idx > n) fail(path, line_no, "circle index out of range");
        if (seen[idx - 1]) fail(path, line_no, "duplicate circle index");
        seen[idx - 1] = true;
        sol.radii[idx - 1] = r;
        sol.config.centers[idx - 1] = {x, y};
    }

    if (n < 0) fail(path, line_no, "missing header");
    for (long i = 0; i < n; ++i)
        if (!seen[i]) fail(path, line_no, "missing circle " + std::to_string(i + 1));
    return sol;
}

}  // namespace packing
