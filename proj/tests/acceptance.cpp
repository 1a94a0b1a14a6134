// Acceptance suite: exercises the selection toolkit end to end against its
// published reference values and invariants, printing one PASS/FAIL line per
// criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "cmc/cmc.hpp"

#include "heart.hpp"
#include "oracles.hpp"

namespace {

using cmc::CriterionSpec;
using cmc::Dataset;
using cmc::Family;
using cmc::Scenario;
using cmc::SubsetMask;

struct Suite {
    int failures = 0;

    void report(int index, const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s  [%d] %s%s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                    detail.empty() ? "" : " (", detail.c_str(), detail.empty() ? "" : ")");
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

const std::vector<CriterionSpec>& five_criteria() {
    static const std::vector<CriterionSpec> specs = {
        CriterionSpec::aic(), CriterionSpec::bic(), CriterionSpec::cmc(0.9),
        CriterionSpec::cmc(0.5), CriterionSpec::cmc(0.1)};
    return specs;
}

struct Cell {
    double fir, far;
};

/// Runs one simulation scenario and checks all five (FIR, FAR) pairs against
/// the reference cells at +-0.03. Appends failures to `detail`.
bool check_scenario(const Scenario& scn, const Cell (&expected)[5], std::string& detail) {
    const auto result = cmc::run_scenario(scn, five_criteria(), workers());
    bool ok = true;
    for (int k = 0; k < 5; ++k) {
        const double dfir = std::abs(result.mean_rates[k].fir - expected[k].fir);
        const double dfar = std::abs(result.mean_rates[k].far - expected[k].far);
        if (dfir > 0.03 || dfar > 0.03) {
            ok = false;
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s %s got (%.3f,%.3f) want (%.2f,%.2f); ",
                          scn.id.c_str(), five_criteria()[k].name().c_str(),
                          result.mean_rates[k].fir, result.mean_rates[k].far,
                          expected[k].fir, expected[k].far);
            detail += buf;
        }
    }
    return ok;
}

Scenario make_scenario(std::string id, Family family, int n, int p, int p_star,
                       double coef, std::uint64_t seed) {
    Scenario scn;
    scn.id = std::move(id);
    scn.family = family;
    scn.n = n;
    scn.p = p;
    scn.p_star = p_star;
    scn.coef = coef;
    scn.sigma2 = 1.0;
    scn.replications = 1000;
    scn.seed = seed;
    return scn;
}

Dataset random_dataset(const Family& family, int n, int p, std::uint64_t seed) {
    cmc::RandomStream rng(seed);
    Dataset data;
    data.family = family;
    data.x.resize(n, p);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) data.x(i, j) = rng.normal();
        const double eta = 0.5 + 0.8 * data.x(i, 0) - 0.5 * data.x(i, 1 % p);
        switch (family.kind) {
            case cmc::FamilyKind::Gaussian:
                data.y(i) = eta + rng.normal();
                break;
            case cmc::FamilyKind::Binomial:
                data.y(i) = rng.binomial(family.trials, cmc::logistic(eta));
                break;
            case cmc::FamilyKind::Poisson:
                data.y(i) = static_cast<double>(rng.poisson(std::exp(eta)));
                break;
        }
    }
    return data;
}

// ---- criterion 1: full logistic fit against the published estimates ----

void criterion_table4(Suite& suite, const cmc::LoadedCsv& heart) {
    const auto start = std::chrono::steady_clock::now();
    const cmc::FitResult full = cmc::fit(heart.dataset, SubsetMask::full(9));
    const double elapsed = seconds_since(start);

    const double expected[10] = {-6.1507208650, 0.0065040171, 0.0793764457,
                                 0.1739238981,  0.0185865682, 0.9253704194,
                                 0.0395950250,  -0.0629098693, 0.0001216624,
                                 0.0452253496};
    std::string detail;
    bool ok = true;
    for (int k = 0; k < 10; ++k) {
        if (std::abs(full.beta_aug(k) - expected[k]) > 1e-4) {
            ok = false;
            detail += "coefficient " + std::to_string(k) + " off; ";
        }
    }
    const double minus2ll = -2.0 * full.loglik;
    if (std::abs(minus2ll - 472.14) > 0.01) {
        ok = false;
        detail += "-2 loglik = " + std::to_string(minus2ll) + "; ";
    }
    if (elapsed >= 1.0) {
        ok = false;
        detail += "runtime " + std::to_string(elapsed) + " s; ";
    }
    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "10 coefficients within 1e-4, -2 loglik %.4f, %.3f s", minus2ll,
                      elapsed);
        detail = buf;
    }
    suite.report(1, "full-model logistic estimates", ok, detail);
}

// ---- criterion 2: per-size table ----

void criterion_table5(Suite& suite, const cmc::LoadedCsv& heart) {
    const auto start = std::chrono::steady_clock::now();
    const cmc::PerSizeBests bests = cmc::best_per_size(heart.dataset);
    const cmc::SelectionReport report = cmc::build_report(bests, five_criteria());
    const double elapsed = seconds_since(start);

    const SubsetMask masks[10] = {
        testdata::heart_mask({}),
        testdata::heart_mask({8}),
        testdata::heart_mask({4, 8}),
        testdata::heart_mask({1, 4, 8}),
        testdata::heart_mask({1, 4, 5, 8}),
        testdata::heart_mask({1, 2, 4, 5, 8}),
        testdata::heart_mask({1, 2, 4, 5, 6, 8}),
        testdata::heart_mask({0, 1, 2, 4, 5, 6, 8}),
        testdata::heart_mask({0, 1, 2, 3, 4, 5, 6, 8}),
        testdata::heart_mask({0, 1, 2, 3, 4, 5, 6, 7, 8}),
    };
    struct Row {
        double aic, bic, loglr;
    };
    const Row rows[10] = {
        {596.1084, 596.1084, 123.96}, {527.5623, 531.6979, 53.422},
        {510.6582, 518.9293, 34.518}, {501.3854, 513.7921, 23.245},
        {492.7143, 509.2566, 12.574}, {485.6856, 506.3634, 3.5455},
        {485.9799, 510.7933, 1.8398}, {486.5490, 515.4979, 0.4089},
        {488.1408, 521.2253, 0.0001}, {490.1400, 527.3601, 0.0000},
    };

    std::string detail;
    bool ok = true;
    for (int d = 0; d <= 9; ++d) {
        if (report.rows[d].mask != masks[d]) {
            ok = false;
            detail += "mask at size " + std::to_string(d) + "; ";
        }
        if (std::abs(report.rows[d].aic - rows[d].aic) > 0.01 ||
            std::abs(report.rows[d].bic - rows[d].bic) > 0.01 ||
            std::abs(report.rows[d].lambda - rows[d].loglr) > 0.01) {
            ok = false;
            detail += "scores at size " + std::to_string(d) + "; ";
        }
    }
    for (int k = 0; k < 4; ++k) {  // aic, bic, cmc:0.9, cmc:0.5
        if (report.chosen[k].second != masks[5]) {
            ok = false;
            detail += report.chosen[k].first.name() + " choice; ";
        }
    }
    if (report.chosen[4].second != masks[4]) {
        ok = false;
        detail += "cmc:0.1 choice; ";
    }
    if (elapsed >= 5.0) {
        ok = false;
        detail += "runtime " + std::to_string(elapsed) + " s; ";
    }
    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "masks, 30 score cells, 5 selections, %.3f s", elapsed);
        detail = buf;
    }
    suite.report(2, "per-size table and selections", ok, detail);
}

// ---- criterion 3: chi-square thresholds ----

void criterion_thresholds(Suite& suite) {
    const double t90 = cmc::chisq_quantile(0.10, 10);
    const double t50 = cmc::chisq_quantile(0.50, 10);
    const double t10 = cmc::chisq_quantile(0.90, 10);
    const bool ok = std::abs(t90 - 4.865) <= 0.001 && std::abs(t50 - 9.341) <= 0.001 &&
                    std::abs(t10 - 15.987) <= 0.001;
    char buf[96];
    std::snprintf(buf, sizeof buf, "got %.4f / %.4f / %.4f", t90, t50, t10);
    suite.report(3, "chi-square thresholds 4.865 / 9.341 / 15.987", ok, buf);
}

// ---- criteria 4-6: simulation tables ----

void criterion_table1(Suite& suite) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;

    const Cell cells_20[5] = {{0.04, 0.34}, {0.05, 0.24}, {0.05, 0.25},
                              {0.09, 0.13}, {0.21, 0.06}};
    ok &= check_scenario(
        make_scenario("gauss-20-10-5", Family::gaussian(), 20, 10, 5, 1.0, 7101),
        cells_20, detail);

    const Cell cells_50[5] = {{0.00, 0.22}, {0.00, 0.08}, {0.00, 0.12},
                              {0.00, 0.03}, {0.01, 0.00}};
    ok &= check_scenario(
        make_scenario("gauss-50-10-5", Family::gaussian(), 50, 10, 5, 1.0, 7102),
        cells_50, detail);

    const Cell cells_100[5] = {{0.00, 0.20}, {0.00, 0.05}, {0.00, 0.05},
                               {0.00, 0.01}, {0.00, 0.00}};
    ok &= check_scenario(
        make_scenario("gauss-100-20-10", Family::gaussian(), 100, 20, 10, 1.0, 7103),
        cells_100, detail);

    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "30 cells within 0.03, %.0f s",
                      seconds_since(start));
        detail = buf;
    }
    suite.report(4, "gaussian simulation rows", ok, detail);
}

void criterion_table2(Suite& suite) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;

    const Cell cells_a[5] = {{0.06, 0.20}, {0.10, 0.11}, {0.06, 0.20},
                             {0.14, 0.07}, {0.30, 0.03}};
    ok &= check_scenario(
        make_scenario("binom-20-5-6-3", Family::binomial(5), 20, 6, 3, 1.0, 7201),
        cells_a, detail);

    const Cell cells_b[5] = {{0.00, 0.16}, {0.00, 0.05}, {0.00, 0.16},
                             {0.00, 0.03}, {0.00, 0.00}};
    ok &= check_scenario(
        make_scenario("binom-50-10-6-3", Family::binomial(10), 50, 6, 3, 1.0, 7202),
        cells_b, detail);

    const Cell cells_c[5] = {{0.00, 0.14}, {0.00, 0.05}, {0.00, 0.07},
                             {0.00, 0.02}, {0.00, 0.00}};
    ok &= check_scenario(
        make_scenario("binom-50-10-10-5", Family::binomial(10), 50, 10, 5, 1.0, 7203),
        cells_c, detail);

    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "30 cells within 0.03, %.0f s",
                      seconds_since(start));
        detail = buf;
    }
    suite.report(5, "binomial simulation rows", ok, detail);
}

void criterion_table3(Suite& suite) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;

    const Cell cells_a[5] = {{0.06, 0.19}, {0.09, 0.10}, {0.05, 0.20},
                             {0.12, 0.06}, {0.28, 0.03}};
    ok &= check_scenario(
        make_scenario("pois-20-6-3", Family::poisson(), 20, 6, 3, 0.5, 7305),
        cells_a, detail);

    const Cell cells_b[5] = {{0.00, 0.16}, {0.00, 0.05}, {0.00, 0.08},
                             {0.00, 0.01}, {0.01, 0.00}};
    ok &= check_scenario(
        make_scenario("pois-50-10-5", Family::poisson(), 50, 10, 5, 0.5, 7302),
        cells_b, detail);

    const Cell cells_c[5] = {{0.00, 0.16}, {0.00, 0.03}, {0.00, 0.07},
                             {0.00, 0.01}, {0.00, 0.00}};
    ok &= check_scenario(
        make_scenario("pois-100-10-5", Family::poisson(), 100, 10, 5, 0.5, 7303),
        cells_c, detail);

    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "30 cells within 0.03, %.0f s",
                      seconds_since(start));
        detail = buf;
    }
    suite.report(6, "poisson simulation rows", ok, detail);
}

// ---- criterion 7: empirical recovery bound ----

void criterion_recovery_bound(Suite& suite) {
    const Scenario scn =
        make_scenario("gauss-150-10-5", Family::gaussian(), 150, 10, 5, 1.0, 7401);
    const std::vector<CriterionSpec> specs = {CriterionSpec::cmc(0.1),
                                              CriterionSpec::cmc(0.5)};
    const auto result = cmc::run_scenario(scn, specs, workers());
    const bool ok = result.exact_recovery[0] > 0.9 && result.exact_recovery[1] > 0.5;
    char buf[96];
    std::snprintf(buf, sizeof buf, "cmc:0.1 recovery %.3f > 0.9, cmc:0.5 recovery %.3f > 0.5",
                  result.exact_recovery[0], result.exact_recovery[1]);
    suite.report(7, "exact-recovery lower bound", ok, buf);
}

// ---- criterion 8: property suite ----

void criterion_properties(Suite& suite) {
    std::string detail;
    bool ok = true;
    cmc::RandomStream seeder(777000u);

    // lambda >= 0 and per-size monotone loglik across all three families
    for (const auto family :
         {Family::gaussian(), Family::binomial(4), Family::poisson()}) {
        for (int t = 0; t < 6; ++t) {
            const Dataset data = random_dataset(family, 45, 5, seeder.next_u64());
            const cmc::PerSizeBests bests = cmc::best_per_size(data);
            for (std::uint32_t bits = 0; bits < 32; ++bits) {
                const cmc::FitResult fr = cmc::fit(data, SubsetMask(bits));
                if (cmc::loglik_ratio(fr, bests.full()) < 0.0) {
                    ok = false;
                    detail += "negative lambda (" + family.name() + "); ";
                }
            }
            for (int d = 1; d <= 5; ++d) {
                if (bests.entries[d].loglik < bests.entries[d - 1].loglik - 1e-8) {
                    ok = false;
                    detail += "loglik not monotone (" + family.name() + "); ";
                }
            }
        }
    }

    // gaussian lambda identity within 1e-8
    for (int t = 0; t < 10; ++t) {
        const Dataset data = random_dataset(Family::gaussian(), 40, 5, seeder.next_u64());
        const cmc::FitResult full = cmc::fit(data, SubsetMask::full(5));
        auto rss_of = [&](const cmc::FitResult& fr) {
            Eigen::VectorXd eta = Eigen::VectorXd::Constant(data.n(), fr.beta_aug(0));
            eta += data.x * fr.beta_aug.tail(5);
            return (data.y - eta).squaredNorm();
        };
        const double rss_full = rss_of(full);
        for (std::uint32_t bits = 0; bits < 32; ++bits) {
            const cmc::FitResult fr = cmc::fit(data, SubsetMask(bits));
            const double identity = data.n() * std::log(rss_of(fr) / rss_full);
            if (std::abs(cmc::loglik_ratio(fr, full) - identity) > 1e-8) {
                ok = false;
                detail += "lambda identity; ";
            }
        }
    }

    // cmc nesting across alpha on 200 random datasets
    for (int t = 0; t < 200; ++t) {
        const Dataset data = random_dataset(Family::gaussian(), 35, 5, seeder.next_u64());
        const cmc::PerSizeBests bests = cmc::best_per_size(data);
        int prev = 0;
        bool first = true;
        for (const double alpha : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
            const int size = cmc::select_cmc(bests, alpha).size();
            if (!first && size < prev) {
                ok = false;
                detail += "cmc nesting at trial " + std::to_string(t) + "; ";
            }
            prev = size;
            first = false;
        }
    }

    // argmin / argmin-size invariance under constant loglik shifts
    for (int t = 0; t < 20; ++t) {
        const Dataset data = random_dataset(Family::gaussian(), 40, 5, seeder.next_u64());
        const cmc::PerSizeBests bests = cmc::best_per_size(data);
        for (const double shift : {-1000.0, 17.5, 420.0}) {
            cmc::PerSizeBests shifted = bests;
            for (auto& entry : shifted.entries) entry.loglik += shift;
            if (cmc::select_info_criterion(shifted, cmc::CriterionKind::AIC) !=
                    cmc::select_info_criterion(bests, cmc::CriterionKind::AIC) ||
                cmc::select_info_criterion(shifted, cmc::CriterionKind::BIC) !=
                    cmc::select_info_criterion(bests, cmc::CriterionKind::BIC) ||
                cmc::select_cmc(shifted, 0.5) != cmc::select_cmc(bests, 0.5)) {
                ok = false;
                detail += "shift invariance; ";
            }
        }
    }

    // IRLS maximum vs lattice search on 20 tiny GLM instances
    for (int t = 0; t < 20; ++t) {
        const Family family = t % 2 == 0 ? Family::binomial(5) : Family::poisson();
        const Dataset data = random_dataset(family, 30, 2, seeder.next_u64());
        const cmc::FitResult fr = cmc::fit(data, SubsetMask::full(2));
        if (!fr.converged) continue;  // lattice certification needs the interior MLE
        const double lattice = oracles::lattice_max_loglik(family, data.y, data.x,
                                                           fr.beta_aug, 1e-3, 2);
        if (lattice - fr.loglik > 1e-6) {
            ok = false;
            detail += "lattice beat IRLS (" + family.name() + "); ";
        }
    }

    // worker-count determinism of the simulation aggregate
    {
        Scenario small =
            make_scenario("det-check", Family::gaussian(), 30, 6, 3, 1.0, 7501);
        small.replications = 80;
        const auto r1 = cmc::run_scenario(small, five_criteria(), 1);
        const auto r5 = cmc::run_scenario(small, five_criteria(), 5);
        for (std::size_t k = 0; k < five_criteria().size(); ++k) {
            if (r1.mean_rates[k].fir != r5.mean_rates[k].fir ||
                r1.mean_rates[k].far != r5.mean_rates[k].far ||
                r1.exact_recovery[k] != r5.exact_recovery[k]) {
                ok = false;
                detail += "worker determinism; ";
            }
        }
    }

    if (ok) detail = "lambda, monotonicity, identity, nesting, shifts, lattice, determinism";
    suite.report(8, "property suite", ok, detail);
}

} // namespace

int main() {
    Suite suite;
    try {
        const cmc::LoadedCsv heart = testdata::load_heart();
        criterion_table4(suite, heart);
        criterion_table5(suite, heart);
        criterion_thresholds(suite);
        criterion_table1(suite);
        criterion_table2(suite);
        criterion_table3(suite);
        criterion_recovery_bound(suite);
        criterion_properties(suite);
    } catch (const std::exception& e) {
        std::printf("FAIL  suite aborted: %s\n", e.what());
        return 1;
    }
    if (suite.failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", suite.failures);
    return 1;
}
