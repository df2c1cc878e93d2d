#include "cholera/numerics/continuation.hpp"

#include "cholera/numerics/errors.hpp"
#include "cholera/numerics/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace cholera::numerics {

Eigen::MatrixXd fd_state_jacobian(const Residual& residual, const Vector& x, double p,
                                  double rel) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd J(residual(x, p).size(), n);
    Vector xp = x, xm = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = rel * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        J.col(j) = (residual(xp, p) - residual(xm, p)) / (2.0 * h);
        xp[j] = xm[j] = x[j];
    }
    return J;
}

namespace {

class Tracer {
public:
    Tracer(const Residual& F, const ContinuationOptions& opt) : F_(F), opt_(opt) {}

    Eigen::MatrixXd jac_x(const Vector& x, double p) const {
        return opt_.jacobian ? opt_.jacobian(x, p) : fd_state_jacobian(F_, x, p, opt_.fd_rel_step);
    }

    Vector jac_p(const Vector& x, double p) const {
        const double h = opt_.fd_rel_step * std::max(1.0, std::abs(p));
        return (F_(x, p + h) - F_(x, p - h)) / (2.0 * h);
    }

    // Newton on F(., p) = 0 starting from x.
    std::optional<Vector> correct_natural(Vector x, double p) const {
        for (int it = 0; it < opt_.newton_max_iter; ++it) {
            const Vector r = F_(x, p);
            if (!r.allFinite()) return std::nullopt;
            const Eigen::MatrixXd J = jac_x(x, p);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
            if (!lu.isInvertible()) return std::nullopt;
            const Vector dx = lu.solve(-r);
            x += dx;
            if (!x.allFinite() || dx.norm() > 1e8) return std::nullopt;
            if (dx.norm() <= opt_.newton_tol * std::max(1.0, x.norm()) &&
                F_(x, p).norm() <= 1e3 * opt_.newton_tol)
                return x;
        }
        return std::nullopt;
    }

    // Newton on {F(x,p) = 0, t.(z - z_pred) = 0} with z = (x, p).
    std::optional<Vector> correct_arclength(Vector z, const Vector& z_pred, const Vector& t,
                                            int* iterations = nullptr) const {
        const Eigen::Index n = z.size() - 1;
        for (int it = 0; it < opt_.newton_max_iter; ++it) {
            const Vector x = z.head(n);
            const double p = z[n];
            Vector G(n + 1);
            G.head(n) = F_(x, p);
            G[n] = t.dot(z - z_pred);
            if (!G.allFinite()) return std::nullopt;
            Eigen::MatrixXd A(n + 1, n + 1);
            A.topLeftCorner(n, n) = jac_x(x, p);
            A.topRightCorner(n, 1) = jac_p(x, p);
            A.row(n) = t.transpose();
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) return std::nullopt;
            const Vector dz = lu.solve(-G);
            z += dz;
            if (!z.allFinite() || dz.norm() > 1e8) return std::nullopt;
            if (dz.norm() <= opt_.newton_tol * std::max(1.0, z.norm()) &&
                F_(z.head(n), z[n]).norm() <= 1e3 * opt_.newton_tol) {
                if (iterations) *iterations = it + 1;
                return z;
            }
        }
        return std::nullopt;
    }

    // Unit null vector of [F_x | F_p], oriented so that its dot product with
    // `orient` is positive.
    Vector tangent(const Vector& x, double p, const Vector& orient) const {
        const Eigen::Index n = x.size();
        Eigen::MatrixXd A(n, n + 1);
        A.leftCols(n) = jac_x(x, p);
        A.col(n) = jac_p(x, p);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        Vector t = svd.matrixV().col(n);
        t.normalize();
        if (t.dot(orient) < 0.0) t = -t;
        return t;
    }

    ContinuationPoint make_point(const Vector& x, double p, StepMode mode) const {
        ContinuationPoint pt;
        pt.parameter = p;
        pt.x = x;
        pt.mode = mode;
        const Eigen::MatrixXd J = jac_x(x, p);
        pt.determinant = J.determinant();
        Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            pt.eigenvalues.push_back(es.eigenvalues()[i]);
        return pt;
    }

    bool in_bounds(const Vector& x) const {
        if (opt_.lower_bounds && (x.array() < opt_.lower_bounds->array()).any()) return false;
        if (opt_.upper_bounds && (x.array() > opt_.upper_bounds->array()).any()) return false;
        return true;
    }

private:
    const Residual& F_;
    const ContinuationOptions& opt_;
};

Vector stack(const Vector& x, double p) {
    Vector z(x.size() + 1);
    z.head(x.size()) = x;
    z[x.size()] = p;
    return z;
}

}  // namespace

ContinuationResult continue_branch(const Residual& residual, const Vector& x0, Interval p_range,
                                   int n_steps, const ContinuationOptions& options) {
    if (n_steps < 1) throw ValidationError("n_steps", "must be at least 1");
    if (p_range.start == p_range.end)
        throw ValidationError("p_range", "start and end must differ");
    const Tracer tr(residual, options);
    const Eigen::Index n = x0.size();
    const double p_lo = std::min(p_range.start, p_range.end);
    const double p_hi = std::max(p_range.start, p_range.end);
    const double p_tol = 1e-12 * std::max(1.0, p_hi - p_lo);
    const double dp = (p_range.end - p_range.start) / n_steps;
    const int max_points = options.max_points > 0 ? options.max_points : 20 * n_steps;

    ContinuationResult out;
    auto x_start = tr.correct_natural(x0, p_range.start);
    if (!x_start)
        throw NumericalError("continue_branch: Newton failed at the starting parameter");
    out.points.push_back(tr.make_point(*x_start, p_range.start, StepMode::Natural));

    // Tangents are kept alongside the points for fold detection.
    Vector orient = Vector::Zero(n + 1);
    orient[n] = dp > 0.0 ? 1.0 : -1.0;
    std::vector<Vector> tangents{tr.tangent(*x_start, p_range.start, orient)};

    // Natural-parameter phase.
    bool switch_to_arclength = false;
    for (int k = 1; k <= n_steps; ++k) {
        const double p_next = k == n_steps ? p_range.end : p_range.start + k * dp;
        const auto& last = out.points.back();
        Vector guess = last.x;
        if (out.points.size() >= 2) {
            const auto& prev = out.points[out.points.size() - 2];
            const double span = last.parameter - prev.parameter;
            if (span != 0.0) guess += (last.x - prev.x) * ((p_next - last.parameter) / span);
        }
        auto x = tr.correct_natural(guess, p_next);
        // Past a fold Newton may converge onto a different branch outside the
        // bounds; let arclength stepping decide whether the branch really exits.
        if (!x || !tr.in_bounds(*x)) {
            switch_to_arclength = true;
            break;
        }
        const Vector t = tr.tangent(*x, p_next, stack(*x - last.x, p_next - last.parameter));
        // A flipped tangent between natural steps means Newton jumped across a fold.
        if (t[n] * dp <= 0.0) {
            switch_to_arclength = true;
            break;
        }
        out.points.push_back(tr.make_point(*x, p_next, StepMode::Natural));
        tangents.push_back(t);
    }
    if (!switch_to_arclength) {
        out.termination = BranchTermination::ReachedEnd;
        return out;
    }

    // Pseudo-arclength phase from the last accepted point.
    double ds = std::abs(dp);
    const double ds_max = 8.0 * std::abs(dp);
    const double ds_min = std::abs(dp) * std::ldexp(1.0, -options.max_retries);
    while (static_cast<int>(out.points.size()) < max_points) {
        const Vector z0 = stack(out.points.back().x, out.points.back().parameter);
        const Vector t0 = tangents.back();
        std::optional<Vector> z;
        int iters = 0;
        double h = ds;
        for (;;) {
            const Vector z_pred = z0 + h * t0;
            z = tr.correct_arclength(z_pred, z_pred, t0, &iters);
            if (z) break;
            h *= 0.5;
            if (h < ds_min)
                throw NumericalError("continue_branch: arclength corrector failed at p=" +
                                     std::to_string(z0[n]));
        }
        ds = iters <= 4 ? std::min(1.3 * h, ds_max) : h;

        const Vector x = z->head(n);
        const double pz = (*z)[n];
        if (pz < p_lo - p_tol || pz > p_hi + p_tol) {
            out.termination = BranchTermination::LeftParameterRange;
            break;
        }
        if (!tr.in_bounds(x)) {
            out.termination = BranchTermination::LeftStateBounds;
            break;
        }
        const Vector t = tr.tangent(x, pz, t0);

        // Turning point in p between the last two points.
        if (t0[n] * t[n] < 0.0) {
            const double sigma_hi = (*z - z0).norm();
            auto tp = [&](double sigma) {
                const Vector zp = z0 + sigma * t0;
                auto zc = tr.correct_arclength(zp, zp, t0);
                if (!zc) throw NumericalError("continue_branch: fold refinement failed");
                return tr.tangent(zc->head(n), (*zc)[n], t0)[n];
            };
            FoldPoint fold;
            double sigma_star = 0.0;
            try {
                sigma_star = find_root(tp, {0.0, sigma_hi}, 1e-13);
            } catch (const NumericalError&) {
                sigma_star = std::abs(t0[n]) < std::abs(t[n]) ? 0.0 : sigma_hi;
            }
            const Vector zp = z0 + sigma_star * t0;
            auto zc = tr.correct_arclength(zp, zp, t0);
            const Vector zf = zc ? *zc : z0;
            fold.parameter = zf[n];
            fold.x = zf.head(n);
            out.folds.push_back(std::move(fold));
        }

        out.points.push_back(tr.make_point(x, pz, StepMode::Arclength));
        tangents.push_back(t);
    }
    if (static_cast<int>(out.points.size()) >= max_points)
        out.termination = BranchTermination::PointBudget;
    return out;
}

}  // namespace cholera::numerics
