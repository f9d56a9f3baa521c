#include "cfh/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfh {

namespace {

Vec4 centroid(const std::vector<Vec4>& pts) {
    Vec4 c = Vec4::Zero();
    for (const auto& p : pts) c += p;
    return c / double(pts.size());
}

// Rows are the centered points; returns (singular values, right vectors).
void pca(const std::vector<Vec4>& pts, const Vec4& mean, Eigen::Vector4d& sv,
         Eigen::Matrix4d& dirs) {
    Eigen::MatrixXd M(pts.size(), 4);
    for (size_t i = 0; i < pts.size(); ++i) M.row(i) = (pts[i] - mean).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    sv.setZero();
    for (int i = 0; i < svd.singularValues().size() && i < 4; ++i)
        sv[i] = svd.singularValues()[i];
    dirs = svd.matrixV();
}

// Taubin algebraic circle fit in the plane (Chernov's Newton form).
void taubin_circle(const std::vector<Eigen::Vector2d>& q, Eigen::Vector2d& center,
                   double& radius) {
    size_t n = q.size();
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : q) mean += p;
    mean /= double(n);
    double mxx = 0, myy = 0, mxy = 0, mxz = 0, myz = 0, mzz = 0;
    for (const auto& p : q) {
        double x = p.x() - mean.x();
        double y = p.y() - mean.y();
        double z = x * x + y * y;
        mxx += x * x;
        myy += y * y;
        mxy += x * y;
        mxz += x * z;
        myz += y * z;
        mzz += z * z;
    }
    mxx /= n; myy /= n; mxy /= n; mxz /= n; myz /= n; mzz /= n;
    double mz = mxx + myy;
    double cov_xy = mxx * myy - mxy * mxy;
    double var_z = mzz - mz * mz;
    double a3 = 4.0 * mz;
    double a2 = -3.0 * mz * mz - mzz;
    double a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
    double a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) - var_z * cov_xy;
    double t = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        double f = a0 + t * (a1 + t * (a2 + t * a3));
        double df = a1 + t * (2.0 * a2 + 3.0 * t * a3);
        if (df == 0.0) break;
        double step = f / df;
        t -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
    }
    double det = t * t - t * mz + cov_xy;
    Eigen::Vector2d c;
    if (std::abs(det) > 1e-300) {
        c.x() = (mxz * (myy - t) - myz * mxy) / det / 2.0;
        c.y() = (myz * (mxx - t) - mxz * mxy) / det / 2.0;
    } else {
        c.setZero();
    }
    center = c + mean;
    radius = std::sqrt(std::max(0.0, c.squaredNorm() + mz));
}

// Gauss-Newton refinement of the center for geometric distances; the optimal
// radius at a fixed center is the mean distance, so it is eliminated.
void refine_circle(const std::vector<Eigen::Vector2d>& q, Eigen::Vector2d& center,
                   double& radius) {
    double n = double(q.size());
    for (int iter = 0; iter < 20; ++iter) {
        double rmean = 0.0;
        for (const auto& p : q) rmean += (p - center).norm();
        rmean /= n;
        Eigen::Matrix2d JtJ = Eigen::Matrix2d::Zero();
        Eigen::Vector2d Jtr = Eigen::Vector2d::Zero();
        Eigen::Vector2d usum = Eigen::Vector2d::Zero();
        for (const auto& p : q) {
            Eigen::Vector2d d = center - p;
            double dist = d.norm();
            if (dist < 1e-300) continue;
            Eigen::Vector2d u = d / dist;  // gradient of dist wrt center
            double res = dist - rmean;
            JtJ += u * u.transpose();
            Jtr += u * res;
            usum += u;
        }
        // Account for the radius elimination: J_r = -1 per row.
        JtJ -= usum * usum.transpose() / n;
        Eigen::Vector2d step = JtJ.ldlt().solve(-Jtr);
        if (!step.allFinite()) break;
        center += step;
        if (step.norm() < 1e-14 * (1.0 + center.norm())) break;
    }
    radius = 0.0;
    for (const auto& p : q) radius += (p - center).norm();
    radius /= n;
}

}  // namespace

CircleFit fit_circle(const std::vector<Vec4>& pts) {
    if (pts.size() < 3) throw std::invalid_argument("circle fit needs >= 3 points");
    CircleFit out;
    Vec4 mean = centroid(pts);
    Eigen::Vector4d sv;
    Eigen::Matrix4d dirs;
    pca(pts, mean, sv, dirs);
    if (sv[0] < 1e-300) throw std::invalid_argument("circle fit of coincident points");

    if (sv[1] <= 1e-12 * sv[0]) {
        // Collinear: report the best-fit line.
        out.degenerate_line = true;
        out.line_point = mean;
        out.line_dir = dirs.col(0);
        out.radius = std::numeric_limits<double>::infinity();
        double rms = 0.0, mx = 0.0;
        for (const auto& p : pts) {
            Vec4 d = (p - mean) - dirs.col(0) * dirs.col(0).dot(p - mean);
            double e = d.norm();
            rms += e * e;
            mx = std::max(mx, e);
        }
        out.rms_residual = std::sqrt(rms / double(pts.size()));
        out.max_residual = mx;
        out.plane.col(0) = dirs.col(0);
        out.plane.col(1) = dirs.col(1);
        return out;
    }

    out.plane.col(0) = dirs.col(0);
    out.plane.col(1) = dirs.col(1);
    std::vector<Eigen::Vector2d> q(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        Vec4 d = pts[i] - mean;
        q[i] = Eigen::Vector2d(out.plane.col(0).dot(d), out.plane.col(1).dot(d));
    }
    Eigen::Vector2d c2;
    double r2;
    taubin_circle(q, c2, r2);
    refine_circle(q, c2, r2);

    out.center = mean + out.plane.col(0) * c2.x() + out.plane.col(1) * c2.y();
    out.radius = r2;
    double rms = 0.0, mx = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        Vec4 d = pts[i] - out.center;
        double in1 = out.plane.col(0).dot(d);
        double in2 = out.plane.col(1).dot(d);
        double off2 = d.squaredNorm() - in1 * in1 - in2 * in2;
        double inplane = std::hypot(in1, in2) - out.radius;
        double e = std::sqrt(inplane * inplane + std::max(0.0, off2));
        rms += e * e;
        mx = std::max(mx, e);
    }
    out.rms_residual = std::sqrt(rms / double(pts.size()));
    out.max_residual = mx;
    return out;
}

SphereFit fit_sphere(const std::vector<Vec4>& pts) {
    if (pts.size() < 5) throw std::invalid_argument("sphere fit needs >= 5 points");
    SphereFit out;
    Vec4 mean = centroid(pts);
    double scale = 0.0;
    for (const auto& p : pts) scale += (p - mean).norm();
    scale /= double(pts.size());
    if (scale < 1e-300) throw std::invalid_argument("sphere fit of coincident points");

    Eigen::Vector4d sv;
    Eigen::Matrix4d dirs;
    pca(pts, mean, sv, dirs);
    if (sv[2] <= 1e-12 * sv[0])
        throw std::invalid_argument("sphere fit needs points spanning >= 3 dimensions");

    // Total least squares on [ |y|^2, y, 1 ] with normalized coordinates y.
    Eigen::MatrixXd M(pts.size(), 6);
    for (size_t i = 0; i < pts.size(); ++i) {
        Vec4 y = (pts[i] - mean) / scale;
        M(i, 0) = y.squaredNorm();
        M.block<1, 4>(i, 1) = y.transpose();
        M(i, 5) = 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    Eigen::VectorXd u = svd.matrixV().col(5);
    double A = u[0];
    Vec4 B = u.segment<4>(1);
    double C = u[5];

    if (std::abs(A) < 1e-10 * u.norm()) {
        out.degenerate_hyperplane = true;
        Vec4 n = B / B.norm();
        double off = -C / B.norm();
        // Back to original coordinates: <n, (p-mean)/scale> = off.
        out.plane_normal = n;
        out.plane_offset = off * scale + n.dot(mean);
        double rms = 0.0, mx = 0.0;
        for (const auto& p : pts) {
            double e = std::abs(n.dot(p) - out.plane_offset);
            rms += e * e;
            mx = std::max(mx, e);
        }
        out.rms_residual = std::sqrt(rms / double(pts.size()));
        out.max_residual = mx;
        return out;
    }

    Vec4 cy = -B / (2.0 * A);
    double rad2 = cy.squaredNorm() - C / A;
    if (rad2 <= 0.0) throw std::runtime_error("sphere fit produced imaginary radius");
    out.center = mean + cy * scale;
    out.radius = std::sqrt(rad2) * scale;
    double rms = 0.0, mx = 0.0;
    for (const auto& p : pts) {
        double e = std::abs((p - out.center).norm() - out.radius);
        rms += e * e;
        mx = std::max(mx, e);
    }
    out.rms_residual = std::sqrt(rms / double(pts.size()));
    out.max_residual = mx;
    return out;
}

TwoSphereFit fit_two_sphere_containment(const std::vector<Vec4>& pts) {
    if (pts.size() < 4) throw std::invalid_argument("containment fit needs >= 4 points");
    TwoSphereFit out;
    Vec4 mean = centroid(pts);
    Eigen::Vector4d sv;
    Eigen::Matrix4d dirs;
    pca(pts, mean, sv, dirs);
    double extent = sv[0] / std::sqrt(double(pts.size()));
    out.scale = std::max(extent, 1e-30);

    if (sv[2] <= 1e-9 * sv[0]) {
        // The points already sit in an affine 2-plane: containment is the
        // off-plane spread.
        out.planar = true;
        double mx = 0.0;
        for (const auto& p : pts) {
            Vec4 d = p - mean;
            d -= dirs.col(0) * dirs.col(0).dot(p - mean);
            d -= dirs.col(1) * dirs.col(1).dot(p - mean);
            mx = std::max(mx, d.norm());
        }
        out.max_residual = mx;
        return out;
    }

    // Work in the rank-3 principal flat: distance to the flat plus an
    // ordinary sphere fit inside it.
    std::vector<Eigen::Vector3d> q(pts.size());
    double off_flat = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        Vec4 d = pts[i] - mean;
        q[i] = Eigen::Vector3d(dirs.col(0).dot(d), dirs.col(1).dot(d), dirs.col(2).dot(d));
        off_flat = std::max(off_flat, std::abs(dirs.col(3).dot(d)));
    }
    double scale = 0.0;
    for (const auto& p : q) scale += p.norm();
    scale /= double(q.size());
    Eigen::MatrixXd M(q.size(), 5);
    for (size_t i = 0; i < q.size(); ++i) {
        Eigen::Vector3d y = q[i] / scale;
        M(i, 0) = y.squaredNorm();
        M.block<1, 3>(i, 1) = y.transpose();
        M(i, 4) = 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    Eigen::VectorXd u = svd.matrixV().col(4);
    double A = u[0];
    Eigen::Vector3d B = u.segment<3>(1);
    double C = u[4];
    double mx = off_flat;
    if (std::abs(A) < 1e-10 * u.norm()) {
        Eigen::Vector3d n = B / B.norm();
        double off = -C / B.norm();
        for (const auto& p : q) mx = std::max(mx, std::abs(n.dot(p / scale) - off) * scale);
    } else {
        Eigen::Vector3d cy = -B / (2.0 * A);
        double rad2 = cy.squaredNorm() - C / A;
        if (rad2 > 0.0) {
            double rad = std::sqrt(rad2) * scale;
            out.scale = rad;
            for (const auto& p : q)
                mx = std::max(mx, std::abs((p - cy * scale).norm() - rad));
        }
    }
    out.max_residual = mx;
    return out;
}

}  // namespace cfh
