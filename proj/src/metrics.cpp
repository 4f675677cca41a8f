#include "latmove/metrics.hpp"

#include "latmove/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace latmove {

Vec3 RigidMotion::apply(const Vec3& p) const {
    Vec3 out;
    for (int r = 0; r < 3; ++r) {
        out[r] = rotation[r][0] * p[0] + rotation[r][1] * p[1] + rotation[r][2] * p[2] + translation[r];
    }
    return out;
}

PointSets to_points(const BackboneStructure& s) {
    PointSets out;
    out.backbone.reserve(s.coords.size());
    for (Coord c : s.coords) out.backbone.push_back(to_angstrom(*s.lattice, c));
    return out;
}

PointSets to_points(const SideChainStructure& s) {
    PointSets out;
    out.backbone.reserve(s.backbone.size());
    out.side.reserve(s.sidechain.size());
    for (Coord c : s.backbone) out.backbone.push_back(to_angstrom(*s.lattice, c));
    for (Coord c : s.sidechain) out.side.push_back(to_angstrom(*s.lattice, c));
    return out;
}

RigidMotion kabsch(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    if (from.size() != to.size()) {
        throw Error("kabsch: point sets differ in size (" + std::to_string(from.size()) + " vs " +
                    std::to_string(to.size()) + ")");
    }
    if (from.empty()) throw Error("kabsch: empty point sets");

    const int n = static_cast<int>(from.size());
    Eigen::Vector3d cf = Eigen::Vector3d::Zero();
    Eigen::Vector3d ct = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) {
        cf += Eigen::Vector3d(from[i][0], from[i][1], from[i][2]);
        ct += Eigen::Vector3d(to[i][0], to[i][1], to[i][2]);
    }
    cf /= n;
    ct /= n;

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d p = Eigen::Vector3d(from[i][0], from[i][1], from[i][2]) - cf;
        const Eigen::Vector3d q = Eigen::Vector3d(to[i][0], to[i][1], to[i][2]) - ct;
        h += p * q.transpose();
    }

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Matrix3d u = svd.matrixU();
    const Eigen::Matrix3d v = svd.matrixV();
    // flip the weakest singular direction when the optimum would be a mirror
    Eigen::Vector3d signs(1, 1, (v * u.transpose()).determinant() < 0 ? -1 : 1);
    const Eigen::Matrix3d r = v * signs.asDiagonal() * u.transpose();
    const Eigen::Vector3d t = ct - r * cf;

    RigidMotion out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out.rotation[i][j] = r(i, j);
        out.translation[i] = t(i);
    }
    return out;
}

namespace {

void check_comparable(const PointSets& a, const PointSets& b) {
    if (a.size() != b.size() || a.side.size() != b.side.size()) {
        throw Error("structure comparison: lengths differ");
    }
    if (a.has_side() != b.has_side()) {
        throw Error("structure comparison: model kinds differ");
    }
    if (a.size() == 0) throw Error("structure comparison: empty structures");
    if (a.has_side() && a.side.size() != a.backbone.size()) {
        throw Error("structure comparison: side point count does not match backbone");
    }
}

std::vector<Vec3> all_points(const PointSets& p) {
    std::vector<Vec3> out = p.backbone;
    out.insert(out.end(), p.side.begin(), p.side.end());
    return out;
}

double sq_dist(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

double dist(const Vec3& a, const Vec3& b) { return std::sqrt(sq_dist(a, b)); }

} // namespace

double crmsd(const PointSets& a, const PointSets& b) {
    check_comparable(a, b);
    const std::vector<Vec3> pa = all_points(a);
    const std::vector<Vec3> pb = all_points(b);
    const RigidMotion motion = kabsch(pa, pb);

    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) sum += sq_dist(motion.apply(pa[i]), pb[i]);
    return std::sqrt(sum / static_cast<double>(pa.size()));
}

double drmsd(const PointSets& a, const PointSets& b) {
    check_comparable(a, b);
    const int n = a.size();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double db = dist(a.backbone[i], a.backbone[j]) - dist(b.backbone[i], b.backbone[j]);
            sum += db * db;
            if (a.has_side()) {
                const double ds = dist(a.side[i], a.side[j]) - dist(b.side[i], b.side[j]);
                sum += ds * ds;
            }
        }
    }
    if (a.has_side()) {
        for (int i = 0; i < n; ++i) {
            const double d = dist(a.backbone[i], a.side[i]) - dist(b.backbone[i], b.side[i]);
            sum += d * d;
        }
    }
    return std::sqrt(sum / (static_cast<double>(n) * static_cast<double>(n)));
}

} // namespace latmove
