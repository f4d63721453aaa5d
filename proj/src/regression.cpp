// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/distributions/chi_squared.hpp>

#include "ctdplan/error.hpp"
#include "ctdplan/pairwise_stats.hpp"

namespace ctd {

namespace {

constexpr int kMaxIterations = 25;
constexpr double kGradTol = 1e-8;
constexpr double kStepTol = 1e-10;
constexpr double kSeparationBeta = 15.0;

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

std::string significance_symbol(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

DesignMatrix build_design_matrix(const FactorModel& model, const Plan& plan,
                                 const ScoreDataset& dataset, int interaction_order) {
    if (interaction_order != 1 && interaction_order != 2) {
        throw ValidationError("interaction order must be 1 or 2");
    }
    if (dataset.observations.empty()) throw ValidationError("score dataset is empty");
    if (dataset.plan_rows != plan.size()) {
        throw ValidationError("score dataset is linked to a different plan");
    }

    // full column layout before dropping unobserved levels
    struct MainCol {
        int factor;
        int value;  // non-reference level
        std::string name;
    };
    std::vector<MainCol> mains;
    for (std::size_t f = 0; f < model.factor_count(); ++f) {
        const auto& factor = model.factors()[f];
        for (std::size_t v = 1; v < factor.values.size(); ++v) {
            mains.push_back({static_cast<int>(f), static_cast<int>(v),
                             factor.name + "=" + factor.values[v]});
        }
    }

    // row-level dummy values for each main column
    const std::size_t nrows = plan.size();
    std::vector<std::vector<double>> main_vals(mains.size(), std::vector<double>(nrows, 0.0));
    for (std::size_t c = 0; c < mains.size(); ++c) {
        for (std::size_t r = 0; r < nrows; ++r) {
            main_vals[c][r] =
                plan.rows[r][static_cast<std::size_t>(mains[c].factor)] == mains[c].value ? 1.0
                                                                                          : 0.0;
        }
    }

    // which plan rows are actually observed
    std::vector<std::int64_t> obs_per_row(nrows + 1, 0);
    for (const auto& obs : dataset.observations) {
        ++obs_per_row[static_cast<std::size_t>(obs.row_id)];
    }

    auto observed_nonzero = [&](const std::vector<double>& col) {
        for (std::size_t r = 0; r < nrows; ++r) {
            if (obs_per_row[r + 1] > 0 && col[r] != 0.0) return true;
        }
        return false;
    };

    DesignMatrix dm;
    dm.column_names.push_back("Intercept");

    // row-level values for each kept non-intercept column
    std::vector<std::vector<double>> kept;

    auto keep = [&](std::vector<double> col, const std::string& name,
                    std::vector<int>& group_cols) {
        if (!observed_nonzero(col)) {
            dm.dropped_columns.push_back(name);
            return false;
        }
        group_cols.push_back(static_cast<int>(dm.column_names.size()));
        dm.column_names.push_back(name);
        kept.push_back(std::move(col));
        return true;
    };

    // main effects, grouped per factor
    std::vector<int> main_kept(mains.size(), -1);  // index into `kept`, or -1 if dropped
    for (std::size_t f = 0; f < model.factor_count(); ++f) {
        std::pair<std::string, std::vector<int>> group{model.factors()[f].name, {}};
        for (std::size_t c = 0; c < mains.size(); ++c) {
            if (mains[c].factor != static_cast<int>(f)) continue;
            if (keep(main_vals[c], mains[c].name, group.second)) {
                main_kept[c] = static_cast<int>(kept.size()) - 1;
            }
        }
        if (!group.second.empty()) dm.groups.push_back(std::move(group));
    }

    // order-2 interactions: products of kept main dummies, factor pairs i<j
    if (interaction_order == 2) {
        for (std::size_t fa = 0; fa < model.factor_count(); ++fa) {
            for (std::size_t fb = fa + 1; fb < model.factor_count(); ++fb) {
                std::pair<std::string, std::vector<int>> group{
                    model.factors()[fa].name + ":" + model.factors()[fb].name, {}};
                for (std::size_t ca = 0; ca < mains.size(); ++ca) {
                    if (mains[ca].factor != static_cast<int>(fa) || main_kept[ca] < 0) continue;
                    for (std::size_t cb = 0; cb < mains.size(); ++cb) {
                        if (mains[cb].factor != static_cast<int>(fb) || main_kept[cb] < 0) continue;
                        std::vector<double> prod(nrows);
                        for (std::size_t r = 0; r < nrows; ++r) {
                            prod[r] = main_vals[ca][r] * main_vals[cb][r];
                        }
                        keep(std::move(prod), mains[ca].name + ":" + mains[cb].name, group.second);
                    }
                }
                if (!group.second.empty()) dm.groups.push_back(std::move(group));
            }
        }
    }

    // expand to one row per observation
    const auto nobs = static_cast<Eigen::Index>(dataset.observations.size());
    const auto ncols = static_cast<Eigen::Index>(dm.column_names.size());
    dm.X.resize(nobs, ncols);
    dm.y.resize(nobs);
    for (Eigen::Index i = 0; i < nobs; ++i) {
        const auto& obs = dataset.observations[static_cast<std::size_t>(i)];
        const auto r = static_cast<std::size_t>(obs.row_id - 1);
        dm.X(i, 0) = 1.0;
        for (Eigen::Index c = 1; c < ncols; ++c) {
            dm.X(i, c) = kept[static_cast<std::size_t>(c) - 1][r];
        }
        dm.y(i) = obs.score;
    }
    for (std::size_t r = 1; r <= nrows; ++r) {
        if (obs_per_row[r] > 1) {
            dm.repeated_rows = true;
            break;
        }
    }
    return dm;
}

double logistic_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // y*eta - log(1 + exp(eta)), computed without overflow
        const double e = eta(i);
        const double log1pexp = e > 30.0 ? e : std::log1p(std::exp(e));
        ll += y(i) * e - log1pexp;
    }
    return ll;
}

RegressionFit fit_logistic(const DesignMatrix& dm) {
    const Eigen::MatrixXd& X = dm.X;
    const Eigen::VectorXd& y = dm.y;
    const Eigen::Index p = X.cols();

    // rank check on the observed data
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        const auto perm = qr.colsPermutation().indices();
        std::string names;
        for (Eigen::Index k = qr.rank(); k < p; ++k) {
            if (!names.empty()) names += ", ";
            names += dm.column_names[static_cast<std::size_t>(perm(k))];
        }
        throw ValidationError("design matrix is rank deficient; collinear columns: " + names);
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd grad(p);
    Eigen::MatrixXd hessian(p, p);
    bool converged = false;
    int iter = 0;
    double grad_norm = 0.0;

    while (iter < kMaxIterations) {
        ++iter;
        const Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(eta.size());
        Eigen::VectorXd w(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            mu(i) = sigmoid(eta(i));
            w(i) = mu(i) * (1.0 - mu(i));
        }
        grad = X.transpose() * (y - mu);
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm < kGradTol) {
            converged = true;
            break;
        }
        hessian = X.transpose() * w.asDiagonal() * X;
        const Eigen::VectorXd step = hessian.ldlt().solve(grad);
        if (!step.allFinite()) break;
        beta += step;
        if (step.lpNorm<Eigen::Infinity>() < kStepTol) {
            // recompute the gradient at the final point
            Eigen::VectorXd mu2(eta.size());
            const Eigen::VectorXd eta2 = X * beta;
            for (Eigen::Index i = 0; i < eta2.size(); ++i) mu2(i) = sigmoid(eta2(i));
            grad = X.transpose() * (y - mu2);
            grad_norm = grad.lpNorm<Eigen::Infinity>();
            converged = true;
            break;
        }
    }

    // Complete or quasi-complete separation drives a coefficient toward
    // infinity; the score equations then flatten, so the fit may stop either
    // by iteration count or by a vanishing gradient at an absurd coefficient.
    Eigen::Index worst = 0;
    beta.cwiseAbs().maxCoeff(&worst);
    if (std::abs(beta(worst)) > kSeparationBeta) {
        throw ValidationError("separation detected: column " +
                              dm.column_names[static_cast<std::size_t>(worst)] +
                              " perfectly predicts the outcome");
    }
    if (!converged) {
        throw Error("logistic fit did not converge in " + std::to_string(kMaxIterations) +
                    " iterations");
    }

    RegressionFit fit;
    fit.beta = beta;
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = sigmoid(eta(i));
        w(i) = mu * (1.0 - mu);
    }
    const Eigen::MatrixXd info = X.transpose() * w.asDiagonal() * X;
    fit.covariance = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.covariance = ((fit.covariance + fit.covariance.transpose()) / 2.0).eval();
    fit.log_likelihood = logistic_log_likelihood(X, y, beta);
    fit.iterations = iter;
    fit.final_grad_norm = grad_norm;
    fit.converged = true;
    fit.column_names = dm.column_names;
    fit.groups = dm.groups;
    fit.repeated_rows = dm.repeated_rows;
    return fit;
}

std::vector<CoefficientRow> coefficient_table(const RegressionFit& fit) {
    std::vector<CoefficientRow> rows;
    rows.reserve(static_cast<std::size_t>(fit.beta.size()));
    for (Eigen::Index c = 0; c < fit.beta.size(); ++c) {
        CoefficientRow row;
        row.term = fit.column_names[static_cast<std::size_t>(c)];
        row.coefficient = fit.beta(c);
        row.std_err = std::sqrt(fit.covariance(c, c));
        row.ci_low = row.coefficient - 1.96 * row.std_err;
        row.ci_high = row.coefficient + 1.96 * row.std_err;
        row.z = row.std_err > 0.0 ? row.coefficient / row.std_err : 0.0;
        row.p_value = normal_two_sided_p(row.z);
        row.odds_ratio = std::exp(row.coefficient);
        row.symbol = significance_symbol(row.p_value);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<WaldRow> wald_table(
    const RegressionFit& fit,
    const std::vector<std::pair<std::string, std::vector<int>>>& grouping) {
    boost::math::chi_squared chi1(1.0);

    std::vector<WaldRow> rows;
    // intercept first, as its own 1-df test
    {
        WaldRow row;
        row.term = "Intercept";
        const double se2 = fit.covariance(0, 0);
        if (se2 <= 0.0) throw Error("singular covariance for the intercept");
        row.chi2 = fit.beta(0) * fit.beta(0) / se2;
        row.df = 1;
        row.p_value = row.chi2 == 0.0
                          ? 1.0
                          : boost::math::cdf(boost::math::complement(chi1, row.chi2));
        row.symbol = significance_symbol(row.p_value);
        rows.push_back(std::move(row));
    }
    for (const auto& [name, cols] : grouping) {
        WaldRow row;
        row.term = name;
        row.df = static_cast<int>(cols.size());
        Eigen::VectorXd b(row.df);
        Eigen::MatrixXd cov(row.df, row.df);
        for (int a = 0; a < row.df; ++a) {
            b(a) = fit.beta(cols[static_cast<std::size_t>(a)]);
            for (int c = 0; c < row.df; ++c) {
                cov(a, c) = fit.covariance(cols[static_cast<std::size_t>(a)],
                                           cols[static_cast<std::size_t>(c)]);
            }
        }
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
        const Eigen::VectorXd solved = ldlt.solve(b);
        // LDLT quietly pseudo-solves singular systems; verify the residual
        const double residual = (cov * solved - b).lpNorm<Eigen::Infinity>();
        if (ldlt.info() != Eigen::Success || !solved.allFinite() ||
            residual > 1e-8 * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
            throw Error("singular covariance submatrix for group " + name);
        }
        row.chi2 = b.dot(solved);
        boost::math::chi_squared dist(static_cast<double>(row.df));
        row.p_value =
            row.chi2 <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, row.chi2));
        row.symbol = significance_symbol(row.p_value);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<WaldRow> wald_table(const RegressionFit& fit) { return wald_table(fit, fit.groups); }

std::string coefficient_table_csv(const std::vector<CoefficientRow>& rows) {
    std::string out = "term,coefficient,ci_low,ci_high,p_value,odds_ratio,symbol\n";
    for (const auto& r : rows) {
        out += r.term + ',' + format_number(r.coefficient) + ',' + format_number(r.ci_low) + ',' +
               format_number(r.ci_high) + ',' + format_number(r.p_value) + ',' +
               format_number(r.odds_ratio) + ',' + r.symbol + '\n';
    }
    return out;
}

std::string coefficient_table_text(const std::vector<CoefficientRow>& rows) {
    char buf[256];
    std::string out;
    std::size_t width = 4;
    for (const auto& r : rows) width = std::max(width, r.term.size());
    std::snprintf(buf, sizeof(buf), "%-*s %12s %12s %12s %10s %12s %s\n", static_cast<int>(width),
                  "term", "coefficient", "[0.025", "0.975]", "p-value", "odds-ratio", "symbol");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-*s %12s %12s %12s %10s %12s %s\n",
                      static_cast<int>(width), r.term.c_str(), format_number(r.coefficient).c_str(),
                      format_number(r.ci_low).c_str(), format_number(r.ci_high).c_str(),
                      format_number(r.p_value).c_str(), format_number(r.odds_ratio).c_str(),
                      r.symbol.c_str());
        out += buf;
    }
    return out;
}

std::string wald_table_csv(const std::vector<WaldRow>& rows) {
    std::string out = "term,chi2,p_value,df,symbol\n";
    for (const auto& r : rows) {
        out += r.term + ',' + format_number(r.chi2) + ',' + format_number(r.p_value) + ',' +
               std::to_string(r.df) + ',' + r.symbol + '\n';
    }
    return out;
}

std::string wald_table_text(const std::vector<WaldRow>& rows) {
    char buf[256];
    std::string out;
    std::size_t width = 4;
    for (const auto& r : rows) width = std::max(width, r.term.size());
    std::snprintf(buf, sizeof(buf), "%-*s %12s %10s %4s %s\n", static_cast<int>(width), "term",
                  "chi2", "p-value", "df", "symbol");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-*s %12s %10s %4d %s\n", static_cast<int>(width),
                      r.term.c_str(), format_number(r.chi2).c_str(),
                      format_number(r.p_value).c_str(), r.df, r.symbol.c_str());
        out += buf;
    }
    return out;
}

}  // namespace ctd
