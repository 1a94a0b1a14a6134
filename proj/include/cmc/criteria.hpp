#ifndef CMC_CRITERIA_HPP
#define CMC_CRITERIA_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cmc/errors.hpp"
#include "cmc/glm.hpp"
#include "cmc/special.hpp"
#include "cmc/subset_search.hpp"

namespace cmc {

enum class CriterionKind { AIC, BIC, CMC };

/// One selection rule. CMC carries its significance level alpha; the
/// information criteria ignore it.
struct CriterionSpec {
    CriterionKind kind = CriterionKind::CMC;
    double alpha = 0.5;

    static CriterionSpec aic() { return {CriterionKind::AIC, 0.0}; }
    static CriterionSpec bic() { return {CriterionKind::BIC, 0.0}; }
    static CriterionSpec cmc(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw Error("CriterionSpec: cmc alpha must lie in (0, 1)");
        }
        return {CriterionKind::CMC, alpha};
    }

    std::string name() const {
        switch (kind) {
            case CriterionKind::AIC: return "aic";
            case CriterionKind::BIC: return "bic";
            case CriterionKind::CMC: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "cmc:%g", alpha);
                return buf;
            }
        }
        return "?";
    }

    friend bool operator==(const CriterionSpec& a, const CriterionSpec& b) {
        return a.kind == b.kind && (a.kind != CriterionKind::CMC || a.alpha == b.alpha);
    }
};

/// Parses "aic", "bic" or "cmc:ALPHA".
inline CriterionSpec criterion_from_name(const std::string& name) {
    if (name == "aic") return CriterionSpec::aic();
    if (name == "bic") return CriterionSpec::bic();
    if (name.rfind("cmc:", 0) == 0) {
        std::size_t used = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(name.substr(4), &used);
        } catch (const std::exception&) {
            throw Error("criterion '" + name + "': bad alpha");
        }
        if (used != name.size() - 4) throw Error("criterion '" + name + "': bad alpha");
        return CriterionSpec::cmc(alpha);
    }
    throw Error("unknown criterion '" + name + "' (expected aic, bic or cmc:ALPHA)");
}

/// AIC = -2 loglik + 2 d, where d counts predictors only.
inline double aic(const FitResult& fit) {
    return -2.0 * fit.loglik + 2.0 * fit.size();
}

/// BIC = -2 loglik + d log(n).
inline double bic(const FitResult& fit, Eigen::Index n) {
    if (n < 1) throw Error("bic: n must be >= 1");
    return -2.0 * fit.loglik + fit.size() * std::log(static_cast<double>(n));
}

/// Argmin of AIC or BIC over the per-size bests; ties resolved toward the
/// smaller size (and, within a size, the per-size best already carries the
/// lowest mask).
inline SubsetMask select_info_criterion(const PerSizeBests& bests, CriterionKind kind) {
    if (kind == CriterionKind::CMC) {
        throw Error("select_info_criterion: use select_cmc for the CMC rule");
    }
    int best_d = 0;
    double best_value = 0.0;
    for (int d = 0; d <= bests.p; ++d) {
        const FitResult& fr = bests.entries[static_cast<std::size_t>(d)];
        const double value = kind == CriterionKind::AIC ? aic(fr) : bic(fr, bests.n);
        if (d == 0 || value < best_value) {
            best_value = value;
            best_d = d;
        }
    }
    return bests.entries[static_cast<std::size_t>(best_d)].mask;
}

/// The chi-square threshold calibrating the likelihood ratio: always p+1
/// degrees of freedom (the full parameter count including the intercept).
inline double cmc_threshold(double alpha, int p) {
    return chisq_quantile(1.0 - alpha, p + 1);
}

/// The CMC rule: the smallest size whose per-size best satisfies
/// lambda <= chisq_quantile(1 - alpha, p + 1). Within a size the per-size
/// best already has the highest likelihood, and the full model (lambda = 0)
/// makes the constraint always satisfiable.
inline SubsetMask select_cmc(const PerSizeBests& bests, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("select_cmc: alpha must lie in (0, 1)");
    }
    const double threshold = cmc_threshold(alpha, bests.p);
    const FitResult& full = bests.full();
    for (int d = 0; d <= bests.p; ++d) {
        const FitResult& fr = bests.entries[static_cast<std::size_t>(d)];
        if (loglik_ratio(fr, full) <= threshold) return fr.mask;
    }
    return full.mask;
}

inline SubsetMask select(const PerSizeBests& bests, const CriterionSpec& spec) {
    if (spec.kind == CriterionKind::CMC) return select_cmc(bests, spec.alpha);
    return select_info_criterion(bests, spec.kind);
}

/// One row of the selection table: the per-size best model with its scores.
struct ReportRow {
    SubsetMask mask;
    int size = 0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double lambda = 0.0;
    bool converged = true;
};

struct SelectionReport {
    std::vector<ReportRow> rows;  // ordered by size
    std::vector<std::pair<CriterionSpec, SubsetMask>> chosen;
    std::vector<std::pair<double, double>> thresholds;  // (alpha, chi-square quantile)
    Eigen::Index n = 0;
    int p = 0;
};

/// Scores every per-size best and applies each requested criterion.
inline SelectionReport build_report(const PerSizeBests& bests,
                                    const std::vector<CriterionSpec>& specs) {
    if (specs.empty()) throw Error("build_report: need at least one criterion");
    SelectionReport report;
    report.n = bests.n;
    report.p = bests.p;
    report.rows.reserve(bests.entries.size());
    const FitResult& full = bests.full();
    for (const FitResult& fr : bests.entries) {
        ReportRow row;
        row.mask = fr.mask;
        row.size = fr.size();
        row.loglik = fr.loglik;
        row.aic = aic(fr);
        row.bic = bic(fr, bests.n);
        row.lambda = loglik_ratio(fr, full);
        row.converged = fr.converged;
        report.rows.push_back(row);
    }
    for (const CriterionSpec& spec : specs) {
        report.chosen.emplace_back(spec, select(bests, spec));
        if (spec.kind == CriterionKind::CMC) {
            bool have = false;
            for (const auto& [alpha, value] : report.thresholds) {
                if (alpha == spec.alpha) { have = true; break; }
            }
            if (!have) {
                report.thresholds.emplace_back(spec.alpha, cmc_threshold(spec.alpha, bests.p));
            }
        }
    }
    return report;
}

} // namespace cmc

#endif // CMC_CRITERIA_HPP
