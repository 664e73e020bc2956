#include "circlepack/vacancy.hpp"

#include <algorithm>
#include <cmath>

namespace packing {

namespace {

constexpr double kPi = 3.14159265358979323846;

// circumcenter of three points; false when nearly collinear
bool circumcenter(Vec2 a, Vec2 b, Vec2 c, Vec2& out) {
    const Vec2 ab = b - a, ac = c - a;
    const double det = 2.0 * cross(ab, ac);
    const double scale = std::max({std::abs(ab.x), std::abs(ab.y), std::abs(ac.x),
                                   std::abs(ac.y), 1e-30});
    if (std::abs(det) < 1e-12 * scale * scale) return false;
    const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
    out.x = a.x + (ac.y * ab2 - ab.y * ac2) / det;
    out.y = a.y + (ab.x * ac2 - ac.x * ab2) / det;
    return true;
}

// parameters t with ||origin_of_line + t*dir|| = radius, ascending
bool line_circle_hits(Vec2 p, Vec2 dir, double radius, double& t0, double& t1) {
    const double a = dot(dir, dir);
    const double b = 2.0 * dot(p, dir);
    const double c = dot(p, p) - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0 || a == 0.0) return false;
    const double s = std::sqrt(disc);
    t0 = (-b - s) / (2.0 * a);
    t1 = (-b + s) / (2.0 * a);
    return true;
}

// true when sites {i, j} are nearest to p among all sites, within slack
bool nearest_two(std::span<const Vec2> sites, int i, int j, Vec2 p) {
    const double d = dist(p, sites[i]);
    for (size_t s = 0; s < sites.size(); ++s) {
        if (static_cast<int>(s) == i || static_cast<int>(s) == j) continue;
        if (dist(p, sites[s]) < d - 1e-9) return false;
    }
    return true;
}

class VacancyObjective final : public AamObjective {
public:
    VacancyObjective(std::span<const double> radii, std::span<const Vec2> centers,
                     double R, double rho)
        : radii_(radii), centers_(centers), R_(R), rho_(rho) {
        rmax_ = 0.0;
        for (double r : radii_) rmax_ = std::max(rmax_, r);
    }

    double value_and_gradient(std::span<const double> x,
                              std::span<double> grad) const override {
        const double xu = x[0], yu = x[1], ru = x[2];
        const double au = std::abs(ru);
        const double sgn = ru > 0.0 ? 1.0 : (ru < 0.0 ? -1.0 : 0.0);
        double e = 0.0, gx = 0.0, gy = 0.0, gr = 0.0;
        for (int i : gamma_u_) {
            const double dx = xu - centers_[i].x, dy = yu - centers_[i].y;
            const double len = std::sqrt(dx * dx + dy * dy);
            const double d = au + radii_[i] - len;
            if (d > 0.0) {
                e += d * d;
                if (len > 0.0) {
                    const double s = -2.0 * d / len;
                    gx += s * dx;
                    gy += s * dy;
                }
                gr += 2.0 * d * sgn;
            }
        }
        const double c = std::sqrt(xu * xu + yu * yu);
        const double d0 = c + au - R_;
        if (d0 > 0.0) {
            e += d0 * d0;
            if (c > 0.0) {
                const double s = 2.0 * d0 / c;
                gx += s * xu;
                gy += s * yu;
            }
            gr += 2.0 * d0 * sgn;
        }
        e -= rho_ * ru;
        gr -= rho_;
        grad[0] = gx;
        grad[1] = gy;
        grad[2] = gr;
        return e;
    }

    bool refresh_adjacency(std::span<const double> x) override {
        const double au = std::abs(x[2]);
        std::vector<int> fresh;
        for (size_t i = 0; i < radii_.size(); ++i) {
            const double d = dist({x[0], x[1]}, centers_[i]);
            const double sum = au + radii_[i];
            if (d < std::max(0.5 * sum, rmax_ / 4.0) + sum)
                fresh.push_back(static_cast<int>(i));
        }
        if (fresh == gamma_u_) return false;
        gamma_u_ = std::move(fresh);
        return true;
    }

private:
    std::span<const double> radii_;
    std::span<const Vec2> centers_;
    double R_;
    double rho_;
    double rmax_;
    std::vector<int> gamma_u_;
};

}  // namespace

VoronoiDiagram build_voronoi(std::span<const Vec2> sites, double clip_radius) {
    VoronoiDiagram dia;
    const int n = static_cast<int>(sites.size());
    if (n < 2) return dia;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                Vec2 c;
                if (!circumcenter(sites[i], sites[j], sites[k], c)) continue;
                const double rc = dist(c, sites[i]);
                bool empty = true;
                for (int s = 0; s < n && empty; ++s) {
                    if (s == i || s == j || s == k) continue;
                    if (dist(c, sites[s]) < rc - 1e-9) empty = false;
                }
                if (!empty) continue;
                bool merged = false;
                for (VoronoiVertex& v : dia.vertices) {
                    if (dist(v.pos, c) <= 1e-9) {
                        for (int s : {i, j, k})
                            if (!std::count(v.sites.begin(), v.sites.end(), s))
                                v.sites.push_back(s);
                        std::sort(v.sites.begin(), v.sites.end());
                        merged = true;
                        break;
                    }
                }
                if (!merged) dia.vertices.push_back({c, {i, j, k}});
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec2 mid = 0.5 * (sites[i] + sites[j]);
            const Vec2 ab = sites[j] - sites[i];
            const double len = norm(ab);
            if (len <= 0.0) continue;  // coincident sites have no bisector
            const Vec2 dir{-ab.y / len, ab.x / len};

            double tlo = 0.0, thi = 0.0;
            if (!line_circle_hits(mid, dir, clip_radius, tlo, thi)) continue;

            std::vector<double> cuts{tlo};
            for (const VoronoiVertex& v : dia.vertices) {
                if (std::count(v.sites.begin(), v.sites.end(), i) &&
                    std::count(v.sites.begin(), v.sites.end(), j)) {
                    const double t = dot(v.pos - mid, dir);
                    if (t > tlo && t < thi) cuts.push_back(t);
                }
            }
            cuts.push_back(thi);
            std::sort(cuts.begin(), cuts.end());

            for (size_t s = 0; s + 1 < cuts.size(); ++s) {
                const double t0 = cuts[s], t1 = cuts[s + 1];
                if (!(t1 - t0 > 1e-12)) continue;
                const Vec2 probe = mid + (0.5 * (t0 + t1)) * dir;
                if (!nearest_two(sites, i, j, probe)) continue;
                dia.edges.push_back({i, j, mid + t0 * dir, mid + t1 * dir});
            }
        }
    }
    return dia;
}

std::vector<Vec2> seed_points(std::span<const Vec2> centers, double R,
                              double smallest_radius, const VoronoiDiagram& diagram) {
    std::vector<Vec2> seeds;
    auto push_unique = [&seeds](Vec2 p) {
        for (const Vec2& q : seeds)
            if (dist(p, q) <= 1e-9) return;
        seeds.push_back(p);
    };

    const int n = static_cast<int>(centers.size());
    if (n == 0) {
        seeds.push_back({0.0, 0.0});
        return seeds;
    }
    if (n == 1) {
        const double ring = 0.5 * (R + smallest_radius);
        for (int k = 0; k < 8; ++k) {
            const double ang = k * kPi / 4.0;
            push_unique({ring * std::cos(ang), ring * std::sin(ang)});
        }
        return seeds;
    }

    for (const VoronoiVertex& v : diagram.vertices)
        if (norm(v.pos) < R) push_unique(v.pos);

    for (const VoronoiEdge& e : diagram.edges) {
        const Vec2 d = e.p1 - e.p0;
        double t0 = 0.0, t1 = 0.0;
        if (!line_circle_hits(e.p0, d, R, t0, t1)) continue;
        for (double t : {t0, t1})
            if (t >= 0.0 && t <= 1.0) push_unique(e.p0 + t * d);
    }
    return seeds;
}

double vacancy_energy(std::span<const double> radii, std::span<const Vec2> centers,
                      double R, const double u[3], double rho,
                      std::span<const int> gamma_u) {
    const double au = std::abs(u[2]);
    double e = 0.0;
    for (int i : gamma_u) {
        const double d = std::max(0.0, au + radii[i] - dist({u[0], u[1]}, centers[i]));
        e += d * d;
    }
    const double d0 = std::max(0.0, std::sqrt(u[0] * u[0] + u[1] * u[1]) + au - R);
    e += d0 * d0;
    e -= rho * u[2];
    return e;
}

void vacancy_gradient(std::span<const double> radii, std::span<const Vec2> centers,
                      double R, const double u[3], double rho,
                      std::span<const int> gamma_u, double grad[3]) {
    const double au = std::abs(u[2]);
    const double sgn = u[2] > 0.0 ? 1.0 : (u[2] < 0.0 ? -1.0 : 0.0);
    double gx = 0.0, gy = 0.0, gr = 0.0;
    for (int i : gamma_u) {
        const double dx = u[0] - centers[i].x, dy = u[1] - centers[i].y;
        const double len = std::sqrt(dx * dx + dy * dy);
        const double d = au + radii[i] - len;
        if (d > 0.0) {
            if (len > 0.0) {
                const double s = -2.0 * d / len;
                gx += s * dx;
                gy += s * dy;
            }
            gr += 2.0 * d * sgn;
        }
    }
    const double c = std::sqrt(u[0] * u[0] + u[1] * u[1]);
    const double d0 = c + au - R;
    if (d0 > 0.0) {
        if (c > 0.0) {
            const double s = 2.0 * d0 / c;
            gx += s * u[0];
            gy += s * u[1];
        }
        gr += 2.0 * d0 * sgn;
    }
    grad[0] = gx;
    grad[1] = gy;
    grad[2] = gr - rho;
}

std::optional<VacancyCircle> detect_vacancy(std::span<const double> radii,
                                            std::span<const Vec2> centers, double R,
                                            Vec2 seed, const LbfgsConfig& lbfgs) {
    std::vector<double> x{seed.x, seed.y, 0.0};
    for (double rho : {0.5, 0.1}) {
        VacancyObjective obj(radii, centers, R, rho);
        LayoutResult res = layout_optimize(obj, std::move(x), lbfgs);
        x = std::move(res.x);
        if (std::sqrt(x[0] * x[0] + x[1] * x[1]) > 2.0 * R) return std::nullopt;
    }
    const Vec2 u{x[0], x[1]};
    double clearance = R - norm(u);
    for (size_t i = 0; i < radii.size(); ++i)
        clearance = std::min(clearance, dist(u, centers[i]) - radii[i]);
    if (!(clearance > 1e-12)) return std::nullopt;
    return VacancyCircle{u, clearance};
}

std::vector<VacancyCircle> detect_all(const Instance& instance, const Configuration& config,
                                      double R, const LbfgsConfig& lbfgs) {
    const VoronoiDiagram dia = build_voronoi(config.centers, 4.0 * R);
    const std::vector<Vec2> seeds =
        seed_points(config.centers, R, instance.radii.front(), dia);

    std::vector<VacancyCircle> kept;
    for (const Vec2& seed : seeds) {
        const auto v = detect_vacancy(instance.radii, config.centers, R, seed, lbfgs);
        if (!v) continue;
        bool merged = false;
        for (VacancyCircle& k : kept) {
            if (dist(k.center, v->center) <= 1e-6) {
                if (v->radius > k.radius) k = *v;
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(*v);
    }

    std::sort(kept.begin(), kept.end(), [](const VacancyCircle& a, const VacancyCircle& b) {
        if (a.radius != b.radius) return a.radius > b.radius;
        if (a.center.x != b.center.x) return a.center.x < b.center.x;
        return a.center.y < b.center.y;
    });
    return kept;
}

}  // namespace packing
