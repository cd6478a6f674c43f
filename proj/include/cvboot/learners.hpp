#pragma once

// Training procedures that honour integer frequency weights: least squares,
// lasso by coordinate descent, logistic regression by IRLS, lasso-penalised
// logistic regression, and the (G - pi)-interaction least-squares score for
// individualised treatment rules.
//
// Every learner returns a coefficient vector over (1, z) whose inner product
// with a covariate row is the model score.

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "cvboot/core.hpp"

namespace cvboot {

enum class LearnerKind { ols, lasso, logistic, lasso_logistic, itr_linear, itr_lasso };

inline std::string_view to_string(LearnerKind k)
{
    switch (k) {
    case LearnerKind::ols: return "ols";
    case LearnerKind::lasso: return "lasso";
    case LearnerKind::logistic: return "logistic";
    case LearnerKind::lasso_logistic: return "lasso_logistic";
    case LearnerKind::itr_linear: return "itr_linear";
    case LearnerKind::itr_lasso: return "itr_lasso";
    }
    return "?";
}

inline LearnerKind parse_learner_kind(std::string_view s)
{
    for (auto k : {LearnerKind::ols, LearnerKind::lasso, LearnerKind::logistic, LearnerKind::lasso_logistic,
                   LearnerKind::itr_linear, LearnerKind::itr_lasso})
        if (to_string(k) == s)
            return k;
    fail(ErrorCode::InvalidArgument, "unknown learner '", std::string(s), "'");
}

inline bool is_itr(LearnerKind k) { return k == LearnerKind::itr_linear || k == LearnerKind::itr_lasso; }
inline bool is_binary_learner(LearnerKind k) { return k == LearnerKind::logistic || k == LearnerKind::lasso_logistic; }

/// What to do when a logistic fit diverges because the classes are separable.
enum class SeparationPolicy {
    reject, // throw Separation; the engine redraws the fold
    keep,   // return the capped iterate flagged as separated
};

struct LearnerSpec {
    LearnerKind kind = LearnerKind::ols;
    double lambda = 0.0;                // lasso penalty (beta block for itr_lasso)
    std::optional<double> lambda_gamma; // itr_lasso main-effect penalty; defaults to lambda
    std::optional<double> pi;           // P(G = 1); defaults to the weighted treated fraction
    int max_iter = 10000;
    double tol = 1e-7;
    bool standardize = true; // lasso kinds: penalise coefficients of standardised columns
    SeparationPolicy separation = SeparationPolicy::keep;
    double separation_cap = 30.0; // sup-norm of coefficients that signals divergence

    void check() const
    {
        if (!(lambda >= 0) || (lambda_gamma && !(*lambda_gamma >= 0)))
            fail(ErrorCode::InvalidArgument, "penalties must be >= 0");
        if (pi && !(*pi > 0 && *pi < 1))
            fail(ErrorCode::InvalidArgument, "pi must be in (0,1)");
        if (!(tol > 0))
            fail(ErrorCode::InvalidArgument, "tol must be > 0");
        if (max_iter < 1)
            fail(ErrorCode::InvalidArgument, "max_iter must be >= 1");
    }
};

struct FitMeta {
    int iterations = 0;
    bool converged = true;
    bool separated = false;
    bool ridge_fallback = false;
};

struct FittedModel {
    Eigen::VectorXd coef; // (intercept, slopes); the ITR score block for itr kinds
    Eigen::VectorXd aux;  // itr kinds: main-effect block gamma
    LearnerKind kind = LearnerKind::ols;
    FitMeta meta;

    template <class Row>
    double score(const Row& z) const
    {
        return coef[0] + z.dot(coef.tail(coef.size() - 1));
    }
};

namespace detail {

// Positive-weight rows of a view as (design with leading 1s, outcome, weight).
struct DesignBlock {
    Eigen::MatrixXd x; // k x (p+1)
    Eigen::VectorXd y;
    Eigen::VectorXd w;
    double total = 0;
};

inline DesignBlock design_block(const WeightedView& view)
{
    const Dataset& d = view.data();
    const auto k = static_cast<Eigen::Index>(view.positive_count());
    const auto p = static_cast<Eigen::Index>(d.p());
    DesignBlock out;
    out.x.resize(k, p + 1);
    out.y.resize(k);
    out.w.resize(k);
    Eigen::Index r = 0;
    for (Index j = 0; j < view.size(); ++j) {
        if (!(view.weight(j) > 0))
            continue;
        const Index i = view.row(j);
        out.x(r, 0) = 1.0;
        out.x.row(r).tail(p) = d.z(i);
        out.y[r] = d.y(i);
        out.w[r] = view.weight(j);
        ++r;
    }
    out.total = out.w.sum();
    if (!(out.total > 0))
        fail(ErrorCode::DegenerateFold, "training view has zero total weight");
    return out;
}

// Weighted least squares with a ridge jitter fallback for rank-deficient
// Gram matrices.
inline Eigen::VectorXd weighted_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& w, bool& used_ridge)
{
    const Eigen::MatrixXd xw = x.transpose() * w.asDiagonal();
    Eigen::MatrixXd gram = xw * x;
    const Eigen::VectorXd rhs = xw * y;
    used_ridge = false;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12)
        return llt.solve(rhs);
    used_ridge = true;
    const double jitter = 1e-8 * std::max(1.0, gram.diagonal().maxCoeff());
    gram.diagonal().array() += jitter;
    llt.compute(gram);
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::SingularDesign, "Gram matrix is singular even after ridge jitter");
    Eigen::VectorXd beta = llt.solve(rhs);
    if (!beta.allFinite())
        fail(ErrorCode::SingularDesign, "non-finite least-squares solution");
    return beta;
}

inline double soft_threshold(double x, double t)
{
    if (x > t)
        return x - t;
    if (x < -t)
        return x + t;
    return 0.0;
}

// Column centring/scaling for penalised fits. Columns with zero spread are
// flagged and kept at coefficient zero.
struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, bool standardize)
    {
        Standardizer s;
        const double total = w.sum();
        s.mean = (w.transpose() * x) / total;
        s.scale.resize(x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double var = (w.array() * (x.col(j).array() - s.mean[j]).square()).sum() / total;
            const double sd = std::sqrt(std::max(var, 0.0));
            s.scale[j] = standardize ? sd : (sd > 0 ? 1.0 : 0.0);
        }
        return s;
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const
    {
        Eigen::MatrixXd out(x.rows(), x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (scale[j] > 0)
                out.col(j) = (x.col(j).array() - mean[j]) / scale[j];
            else
                out.col(j).setZero();
        return out;
    }
};

} // namespace detail

/// Coordinate descent for
///     (1/(2N)) sum_i v_i (y_i - b0 - x_i' beta)^2 + sum_j penalty_j |beta_j|
/// with an unpenalised intercept b0. `beta` is a warm start and is updated in
/// place. Stops once every coordinate satisfies its KKT condition to `tol`.
struct CoordinateDescentResult {
    double intercept = 0;
    int sweeps = 0;
    bool converged = false;
};

inline double penalized_ls_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& v,
                                     double norm, const Eigen::VectorXd& penalty, double b0,
                                     const Eigen::VectorXd& beta)
{
    const Eigen::VectorXd r = y - x * beta - Eigen::VectorXd::Constant(y.size(), b0);
    return 0.5 * (v.array() * r.array().square()).sum() / norm + (penalty.array() * beta.array().abs()).sum();
}

inline CoordinateDescentResult coordinate_descent(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                                  const Eigen::VectorXd& v, double norm,
                                                  const Eigen::VectorXd& penalty, Eigen::VectorXd& beta,
                                                  double tol, int max_sweeps)
{
    const Eigen::Index q = x.cols();
    const double vsum = v.sum();
    const Eigen::RowVectorXd xbar = (v.transpose() * x) / vsum;
    const double ybar = v.dot(y) / vsum;
    const Eigen::MatrixXd xc = x.rowwise() - xbar;
    Eigen::VectorXd curv(q);
    for (Eigen::Index j = 0; j < q; ++j)
        curv[j] = (v.array() * xc.col(j).array().square()).sum() / norm;
    Eigen::VectorXd r = (y.array() - ybar).matrix() - xc * beta;

    CoordinateDescentResult res;
#ifndef NDEBUG
    double prev_obj = std::numeric_limits<double>::infinity();
#endif
    for (res.sweeps = 1; res.sweeps <= max_sweeps; ++res.sweeps) {
        double max_change = 0;
        for (Eigen::Index j = 0; j < q; ++j) {
            if (!(curv[j] > 0)) {
                beta[j] = 0;
                continue;
            }
            const double grad = (v.array() * xc.col(j).array() * r.array()).sum() / norm;
            const double updated = detail::soft_threshold(grad + curv[j] * beta[j], penalty[j]) / curv[j];
            const double delta = updated - beta[j];
            if (delta != 0) {
                r -= delta * xc.col(j);
                beta[j] = updated;
                max_change = std::max(max_change, curv[j] * delta * delta);
            }
        }
#ifndef NDEBUG
        const double obj = 0.5 * (v.array() * r.array().square()).sum() / norm +
                           (penalty.array() * beta.array().abs()).sum();
        assert(obj <= prev_obj + 1e-12 * (1 + std::abs(prev_obj)));
        prev_obj = obj;
#endif
        if (max_change > tol * tol)
            continue;
        // KKT check on the full gradient.
        bool kkt = true;
        for (Eigen::Index j = 0; j < q && kkt; ++j) {
            if (!(curv[j] > 0))
                continue;
            const double grad = (v.array() * xc.col(j).array() * r.array()).sum() / norm;
            if (beta[j] == 0)
                kkt = std::abs(grad) <= penalty[j] + tol;
            else
                kkt = std::abs(grad - penalty[j] * (beta[j] > 0 ? 1.0 : -1.0)) <= tol;
        }
        if (kkt) {
            res.converged = true;
            break;
        }
    }
    res.sweeps = std::min(res.sweeps, max_sweeps);
    res.intercept = ybar - xbar.dot(beta);
    return res;
}

/// Weighted least squares of y on (1, z).
inline FittedModel fit_ols(const WeightedView& train, const LearnerSpec& spec = {})
{
    auto block = detail::design_block(train);
    FittedModel model;
    model.kind = LearnerKind::ols;
    (void)spec;
    model.coef = detail::weighted_least_squares(block.x, block.y, block.w, model.meta.ridge_fallback);
    model.meta.iterations = 1;
    return model;
}

/// Lasso: minimises (1/(2W)) sum w_i (y_i - a - b'z_i)^2 + lambda |b|_1 with W
/// the total weight, over standardised columns unless spec.standardize is
/// false. Coefficients come back on the original scale.
inline FittedModel fit_lasso(const WeightedView& train, const LearnerSpec& spec)
{
    spec.check();
    auto block = detail::design_block(train);
    const Eigen::MatrixXd z = block.x.rightCols(block.x.cols() - 1);
    const auto st = detail::Standardizer::fit(z, block.w, spec.standardize);
    const Eigen::MatrixXd zs = st.apply(z);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(z.cols());
    const Eigen::VectorXd penalty = Eigen::VectorXd::Constant(z.cols(), spec.lambda);
    const auto cd = coordinate_descent(zs, block.y, block.w, block.total, penalty, beta, spec.tol, spec.max_iter);

    FittedModel model;
    model.kind = LearnerKind::lasso;
    model.coef.resize(z.cols() + 1);
    double intercept = cd.intercept;
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const double b = st.scale[j] > 0 ? beta[j] / st.scale[j] : 0.0;
        model.coef[j + 1] = b;
        intercept -= b * st.mean[j];
    }
    model.coef[0] = intercept;
    model.meta.iterations = cd.sweeps;
    model.meta.converged = cd.converged;
    return model;
}

/// Smallest lambda at which every lasso slope is zero, on the same column
/// scale fit_lasso penalises.
inline double lasso_lambda_max(const WeightedView& train, bool standardize = true)
{
    auto block = detail::design_block(train);
    const Eigen::MatrixXd z = block.x.rightCols(block.x.cols() - 1);
    const auto st = detail::Standardizer::fit(z, block.w, standardize);
    const Eigen::MatrixXd zs = st.apply(z);
    const double ybar = block.w.dot(block.y) / block.total;
    const Eigen::VectorXd yc = block.y.array() - ybar;
    return ((zs.transpose() * (block.w.asDiagonal() * yc)) / block.total).cwiseAbs().maxCoeff();
}

namespace detail {

inline double expit(double eta) { return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta)); }

// log(1 + e^eta), overflow safe.
inline double log1pexp(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

inline double logistic_nll(const Eigen::VectorXd& eta, const Eigen::VectorXd& y, const Eigen::VectorXd& w)
{
    double s = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        s += w[i] * (log1pexp(eta[i]) - y[i] * eta[i]);
    return s;
}

inline void check_two_classes(const DesignBlock& block)
{
    const double cases = block.w.dot(block.y);
    if (!(cases > 0) || !(cases < block.total))
        fail(ErrorCode::OneClassFold, "training view has only one outcome class");
    for (Eigen::Index i = 0; i < block.y.size(); ++i)
        if (!is_binary_value(block.y[i]))
            fail(ErrorCode::NonBinaryOutcome, "logistic learner needs a 0/1 outcome");
}

inline void on_separation(FittedModel& model, const LearnerSpec& spec)
{
    model.meta.separated = true;
    model.meta.converged = false;
    if (spec.separation == SeparationPolicy::reject)
        fail(ErrorCode::Separation, "coefficients exceeded ", spec.separation_cap,
             " in sup-norm; classes look linearly separable");
}

} // namespace detail

/// Weighted maximum likelihood logistic regression by Newton-Raphson (IRLS)
/// with step halving; stops when the mean score vector has sup-norm <= tol.
inline FittedModel fit_logistic(const WeightedView& train, const LearnerSpec& spec)
{
    spec.check();
    auto block = detail::design_block(train);
    detail::check_two_classes(block);
    const Eigen::Index q = block.x.cols();
    FittedModel model;
    model.kind = LearnerKind::logistic;
    model.coef = Eigen::VectorXd::Zero(q);
    const double prevalence = block.w.dot(block.y) / block.total;
    model.coef[0] = std::log(prevalence / (1 - prevalence));

    Eigen::VectorXd eta = block.x * model.coef;
    double nll = detail::logistic_nll(eta, block.y, block.w);
    Eigen::VectorXd p(block.y.size());
    model.meta.converged = false;
    for (int it = 1; it <= spec.max_iter; ++it) {
        model.meta.iterations = it;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p[i] = detail::expit(eta[i]);
        const Eigen::VectorXd resid = block.y - p;
        const Eigen::VectorXd grad = block.x.transpose() * (block.w.asDiagonal() * resid);
        if (grad.cwiseAbs().maxCoeff() / block.total <= spec.tol) {
            // A score this small with every row on its own side of eta = 0
            // means the likelihood has no finite maximiser.
            if (((2 * block.y.array() - 1) * eta.array()).minCoeff() > 0) {
                detail::on_separation(model, spec);
                return model;
            }
            model.meta.converged = true;
            break;
        }
        const Eigen::VectorXd curv = block.w.array() * p.array() * (1 - p.array());
        const Eigen::MatrixXd hess = block.x.transpose() * curv.asDiagonal() * block.x;
        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        Eigen::VectorXd step;
        if (llt.info() == Eigen::Success && llt.rcond() > 1e-14) {
            step = llt.solve(grad);
        } else {
            Eigen::MatrixXd h = hess;
            h.diagonal().array() += 1e-8 * std::max(1.0, hess.diagonal().maxCoeff());
            step = h.llt().solve(grad);
            model.meta.ridge_fallback = true;
        }
        double t = 1.0;
        Eigen::VectorXd next;
        double next_nll = nll;
        for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
            next = model.coef + t * step;
            eta = block.x * next;
            next_nll = detail::logistic_nll(eta, block.y, block.w);
            if (next_nll <= nll + 1e-12 * std::abs(nll))
                break;
        }
        assert(next_nll <= nll + 1e-10 * (1 + std::abs(nll)));
        const bool stalled = std::abs(nll - next_nll) <= 1e-15 * (1 + std::abs(nll));
        model.coef = next;
        nll = next_nll;
        if (model.coef.cwiseAbs().maxCoeff() > spec.separation_cap) {
            detail::on_separation(model, spec);
            return model;
        }
        if (stalled) {
            if (((2 * block.y.array() - 1) * eta.array()).minCoeff() > 0) {
                detail::on_separation(model, spec);
                return model;
            }
            model.meta.converged = true;
            break;
        }
    }
    return model;
}

/// Lasso-penalised logistic regression: minimises
///     -(1/W) sum w_i [y_i eta_i - log(1 + e^eta_i)] + lambda |b|_1
/// by coordinate descent on successive quadratic (IRLS) approximations, with
/// step halving on the penalised objective. Intercept unpenalised.
inline FittedModel fit_lasso_logistic(const WeightedView& train, const LearnerSpec& spec)
{
    spec.check();
    auto block = detail::design_block(train);
    detail::check_two_classes(block);
    const Eigen::MatrixXd z = block.x.rightCols(block.x.cols() - 1);
    const auto st = detail::Standardizer::fit(z, block.w, spec.standardize);
    const Eigen::MatrixXd zs = st.apply(z);
    const Eigen::Index q = zs.cols();
    const double total = block.total;
    const Eigen::VectorXd penalty = Eigen::VectorXd::Constant(q, spec.lambda);

    const double prevalence = block.w.dot(block.y) / total;
    double b0 = std::log(prevalence / (1 - prevalence));
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
    auto objective = [&](double a, const Eigen::VectorXd& b) {
        const Eigen::VectorXd eta = (zs * b).array() + a;
        return detail::logistic_nll(eta, block.y, block.w) / total + spec.lambda * b.cwiseAbs().sum();
    };
    double obj = objective(b0, beta);

    FittedModel model;
    model.kind = LearnerKind::lasso_logistic;
    model.meta.converged = false;
    Eigen::VectorXd p(block.y.size());
    Eigen::VectorXd work_w(block.y.size());
    Eigen::VectorXd work_y(block.y.size());
    const int outer_max = std::max(1, std::min(spec.max_iter, 200));
    for (int it = 1; it <= outer_max; ++it) {
        model.meta.iterations = it;
        const Eigen::VectorXd eta = (zs * beta).array() + b0;
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            p[i] = detail::expit(eta[i]);
            const double c = std::max(p[i] * (1 - p[i]), 1e-5);
            work_w[i] = block.w[i] * c;
            work_y[i] = eta[i] + (block.y[i] - p[i]) / c;
        }
        // KKT of the true penalised likelihood.
        const Eigen::VectorXd resid = block.y - p;
        const double g0 = block.w.dot(resid) / total;
        bool kkt = std::abs(g0) <= spec.tol;
        for (Eigen::Index j = 0; j < q && kkt; ++j) {
            if (!(st.scale[j] > 0))
                continue;
            const double g = (block.w.array() * zs.col(j).array() * resid.array()).sum() / total;
            kkt = beta[j] == 0 ? std::abs(g) <= spec.lambda + spec.tol
                               : std::abs(g - spec.lambda * (beta[j] > 0 ? 1.0 : -1.0)) <= spec.tol;
        }
        if (kkt) {
            model.meta.converged = true;
            break;
        }
        Eigen::VectorXd cand = beta;
        const auto cd = coordinate_descent(zs, work_y, work_w, total, penalty, cand, spec.tol * 0.1,
                                           std::max(spec.max_iter, 100));
        double t = 1.0;
        double next_obj = obj;
        Eigen::VectorXd next_beta;
        double next_b0 = b0;
        for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
            next_beta = beta + t * (cand - beta);
            next_b0 = b0 + t * (cd.intercept - b0);
            next_obj = objective(next_b0, next_beta);
            if (next_obj <= obj + 1e-13 * std::abs(obj))
                break;
        }
        assert(next_obj <= obj + 1e-10 * (1 + std::abs(obj)));
        const bool stalled = std::abs(obj - next_obj) <= 1e-15 * (1 + std::abs(obj));
        beta = next_beta;
        b0 = next_b0;
        obj = next_obj;
        if (stalled) {
            model.meta.converged = true;
            break;
        }
    }

    model.coef.resize(q + 1);
    model.coef[0] = b0;
    for (Eigen::Index j = 0; j < q; ++j) {
        const double b = st.scale[j] > 0 ? beta[j] / st.scale[j] : 0.0;
        model.coef[j + 1] = b;
        model.coef[0] -= b * st.mean[j];
    }
    if (model.coef.cwiseAbs().maxCoeff() > spec.separation_cap)
        detail::on_separation(model, spec);
    return model;
}

/// Individualised treatment rule score. Least squares of y on
/// [1, z, (g - pi), (g - pi) z]; the (g - pi) block beta is returned as
/// `coef`, so the score beta'(1, z) estimates the conditional treatment
/// effect. itr_lasso penalises gamma_z with lambda_gamma and all of beta with
/// lambda (same scaling as fit_lasso).
inline FittedModel fit_itr(const WeightedView& train, const LearnerSpec& spec)
{
    spec.check();
    const Dataset& d = train.data();
    if (!d.has_treatment())
        fail(ErrorCode::MissingTreatment, "ITR learner needs a treatment column");
    auto block = detail::design_block(train);
    const Eigen::Index p1 = block.x.cols();
    Eigen::VectorXd g(block.y.size());
    {
        Eigen::Index r = 0;
        for (Index j = 0; j < train.size(); ++j)
            if (train.weight(j) > 0)
                g[r++] = d.g(train.row(j));
    }
    const double treated = block.w.dot(g);
    if (!(treated > 0) || !(treated < block.total))
        fail(ErrorCode::SingularDesign, "training view has only one treatment arm");
    const double pi = spec.pi.value_or(treated / block.total);

    Eigen::MatrixXd design(block.x.rows(), 2 * p1);
    design.leftCols(p1) = block.x;
    design.rightCols(p1) = (g.array() - pi).matrix().asDiagonal() * block.x;

    FittedModel model;
    model.kind = spec.kind == LearnerKind::itr_lasso ? LearnerKind::itr_lasso : LearnerKind::itr_linear;
    if (model.kind == LearnerKind::itr_linear) {
        const Eigen::VectorXd theta =
            detail::weighted_least_squares(design, block.y, block.w, model.meta.ridge_fallback);
        model.aux = theta.head(p1);
        model.coef = theta.tail(p1);
        model.meta.iterations = 1;
        return model;
    }

    // Penalised variant: drop the constant column, CD handles the intercept.
    const Eigen::MatrixXd cols = design.rightCols(2 * p1 - 1);
    const auto st = detail::Standardizer::fit(cols, block.w, spec.standardize);
    const Eigen::MatrixXd cs = st.apply(cols);
    Eigen::VectorXd penalty(cols.cols());
    penalty.head(p1 - 1).setConstant(spec.lambda_gamma.value_or(spec.lambda));
    penalty.tail(p1).setConstant(spec.lambda);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(cols.cols());
    const auto cd = coordinate_descent(cs, block.y, block.w, block.total, penalty, theta, spec.tol, spec.max_iter);
    Eigen::VectorXd raw(cols.cols());
    double intercept = cd.intercept;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
        raw[j] = st.scale[j] > 0 ? theta[j] / st.scale[j] : 0.0;
        intercept -= raw[j] * st.mean[j];
    }
    model.aux.resize(p1);
    model.aux[0] = intercept;
    model.aux.tail(p1 - 1) = raw.head(p1 - 1);
    model.coef = raw.tail(p1);
    model.meta.iterations = cd.sweeps;
    model.meta.converged = cd.converged;
    return model;
}

/// Dispatches on spec.kind.
inline FittedModel fit(const WeightedView& train, const LearnerSpec& spec)
{
    switch (spec.kind) {
    case LearnerKind::ols: return fit_ols(train, spec);
    case LearnerKind::lasso: return fit_lasso(train, spec);
    case LearnerKind::logistic: return fit_logistic(train, spec);
    case LearnerKind::lasso_logistic: return fit_lasso_logistic(train, spec);
    case LearnerKind::itr_linear:
    case LearnerKind::itr_lasso: return fit_itr(train, spec);
    }
    fail(ErrorCode::InvalidArgument, "unknown learner kind");
}

/// Learner object for the engine: fit(view) -> FittedModel and
/// score(model, z) -> real.
struct LinearLearner {
    using model_type = FittedModel;
    LearnerSpec spec;

    FittedModel fit(const WeightedView& train) const { return cvboot::fit(train, spec); }

    template <class Row>
    double score(const FittedModel& model, const Row& z) const
    {
        return model.score(z);
    }
};

} // namespace cvboot
