#ifndef CMC_SIMULATION_HPP
#define CMC_SIMULATION_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cmc/criteria.hpp"
#include "cmc/dataset.hpp"
#include "cmc/errors.hpp"
#include "cmc/rng.hpp"
#include "cmc/subset_search.hpp"

namespace cmc {

/// One simulation configuration. The data-generating coefficient vector is
/// (1, coef, ..., coef, 0, ..., 0) with p_star active predictors.
struct Scenario {
    std::string id;
    Family family;
    int n = 0;
    int p = 0;
    int p_star = 0;
    double coef = 1.0;
    double sigma2 = 1.0;  // Gaussian noise variance
    int replications = 1000;
    std::uint64_t seed = 1;

    void validate() const {
        if (n < 1) throw Error("scenario '" + id + "': n must be positive");
        if (p < 1) throw Error("scenario '" + id + "': p must be positive");
        if (p_star < 1 || p_star > p) {
            throw Error("scenario '" + id + "': need 1 <= p_star <= p");
        }
        if (coef == 0.0) throw Error("scenario '" + id + "': coef must be nonzero");
        if (family.kind == FamilyKind::Gaussian && !(sigma2 > 0.0)) {
            throw Error("scenario '" + id + "': sigma2 must be positive");
        }
        if (replications < 1) {
            throw Error("scenario '" + id + "': replications must be positive");
        }
    }
};

struct ErrorRates {
    double fir = 0.0;  // missed active / total active
    double far = 0.0;  // included inactive / total inactive
};

/// Draws one (X, y) pair: predictors iid standard normal, responses from the
/// family with means induced by the true coefficients. Returns the dataset
/// and the mask of active predictors.
inline std::pair<Dataset, SubsetMask> generate(const Scenario& scn, RandomStream& rng) {
    scn.validate();
    Dataset data;
    data.family = scn.family;
    data.x.resize(scn.n, scn.p);
    data.y.resize(scn.n);
    for (int i = 0; i < scn.n; ++i) {
        for (int j = 0; j < scn.p; ++j) data.x(i, j) = rng.normal();
    }
    const double sd = std::sqrt(scn.sigma2);
    for (int i = 0; i < scn.n; ++i) {
        double eta = 1.0;
        for (int j = 0; j < scn.p_star; ++j) eta += scn.coef * data.x(i, j);
        switch (scn.family.kind) {
            case FamilyKind::Gaussian:
                data.y(i) = eta + sd * rng.normal();
                break;
            case FamilyKind::Binomial:
                data.y(i) = rng.binomial(scn.family.trials, logistic(eta));
                break;
            case FamilyKind::Poisson:
                data.y(i) = static_cast<double>(rng.poisson(std::exp(eta)));
                break;
        }
    }
    SubsetMask truth;
    for (int j = 0; j < scn.p_star; ++j) truth.set(j);
    return {std::move(data), truth};
}

/// False inactive rate and false active rate of a selected subset against
/// the true one. Both denominators must be positive.
inline ErrorRates error_rates(SubsetMask selected, SubsetMask truth, int p, int p_star) {
    if (p_star < 1 || p_star >= p) {
        throw DegenerateDenominator("error_rates: need 1 <= p_star < p, got p_star=" +
                                    std::to_string(p_star) + ", p=" + std::to_string(p));
    }
    int missed_active = 0;
    int false_active = 0;
    for (int j = 0; j < p; ++j) {
        const bool active = truth.test(j);
        const bool chosen = selected.test(j);
        if (active && !chosen) ++missed_active;
        if (!active && chosen) ++false_active;
    }
    ErrorRates rates;
    rates.fir = static_cast<double>(missed_active) / p_star;
    rates.far = static_cast<double>(false_active) / (p - p_star);
    return rates;
}

/// Aggregates of one scenario run.
struct ScenarioResult {
    Scenario scenario;
    std::vector<CriterionSpec> specs;
    std::vector<ErrorRates> mean_rates;      // per criterion, averaged over replications
    std::vector<double> exact_recovery;      // per criterion, fraction with selected == truth
    std::uint64_t nonconverged_full = 0;     // replications whose full fit did not converge
};

/// Runs every replication of a scenario: generate, enumerate, select with
/// each criterion, accumulate FIR/FAR. Replications use independent RNG
/// substreams and results are reduced in replication order, so the output is
/// identical for any worker count.
inline ScenarioResult run_scenario(const Scenario& scn,
                                   const std::vector<CriterionSpec>& specs,
                                   int workers = 1) {
    scn.validate();
    if (scn.p > 20) {
        throw TooManyPredictors("scenario '" + scn.id + "': p = " + std::to_string(scn.p) +
                                " exceeds the exhaustive-enumeration guard of 20");
    }
    if (specs.empty()) throw Error("run_scenario: need at least one criterion");
    if (workers < 1) workers = 1;

    const std::size_t reps = static_cast<std::size_t>(scn.replications);
    const std::size_t k = specs.size();
    std::vector<ErrorRates> rep_rates(reps * k);
    std::vector<std::uint8_t> rep_exact(reps * k, 0);
    std::vector<std::uint8_t> rep_nonconv(reps, 0);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            RandomStream rng = RandomStream::substream(scn.seed, r);
            auto [data, truth] = generate(scn, rng);
            const PerSizeBests bests = best_per_size(data);
            if (!bests.full().converged) rep_nonconv[r] = 1;
            for (std::size_t s = 0; s < k; ++s) {
                const SubsetMask chosen = select(bests, specs[s]);
                rep_rates[r * k + s] = error_rates(chosen, truth, scn.p, scn.p_star);
                rep_exact[r * k + s] = chosen == truth ? 1 : 0;
            }
        }
    };

    if (workers == 1 || reps < 2) {
        run_range(0, reps);
    } else {
        const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(workers), reps);
        std::vector<std::thread> pool;
        pool.reserve(t);
        const std::size_t chunk = (reps + t - 1) / t;
        for (std::size_t w = 0; w < t; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(reps, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    ScenarioResult result;
    result.scenario = scn;
    result.specs = specs;
    result.mean_rates.assign(k, ErrorRates{});
    result.exact_recovery.assign(k, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        result.nonconverged_full += rep_nonconv[r];
        for (std::size_t s = 0; s < k; ++s) {
            result.mean_rates[s].fir += rep_rates[r * k + s].fir;
            result.mean_rates[s].far += rep_rates[r * k + s].far;
            result.exact_recovery[s] += rep_exact[r * k + s];
        }
    }
    for (std::size_t s = 0; s < k; ++s) {
        result.mean_rates[s].fir /= static_cast<double>(reps);
        result.mean_rates[s].far /= static_cast<double>(reps);
        result.exact_recovery[s] /= static_cast<double>(reps);
    }
    return result;
}

/// Parses scenario stanza files:
///
///     [gauss-50-10-5]
///     family = gaussian
///     n = 50
///     p = 10
///     p_star = 5
///     coef = 1.0
///     sigma2 = 1.0
///     replications = 1000
///     seed = 7003
///
/// Blank lines and '#' comments are ignored; 'm' gives the binomial trial
/// count and defaults to 1.
inline std::vector<Scenario> parse_scenarios(std::istream& in) {
    std::vector<Scenario> out;
    std::string line;
    bool in_stanza = false;
    std::string id, family_name;
    int m = 1;
    Scenario current;
    int lineno = 0;

    auto flush = [&]() {
        if (!in_stanza) return;
        if (family_name.empty()) {
            throw ScenarioParseError("scenario '" + id + "': missing family");
        }
        current.id = id;
        current.family = family_from_name(family_name, m);
        current.validate();
        out.push_back(current);
        in_stanza = false;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        std::string body = line.substr(first, last - first + 1);
        if (body[0] == '#') continue;
        if (body.front() == '[' && body.back() == ']') {
            flush();
            id = body.substr(1, body.size() - 2);
            if (id.empty()) {
                throw ScenarioParseError("line " + std::to_string(lineno) +
                                         ": empty scenario id");
            }
            current = Scenario{};
            family_name.clear();
            m = 1;
            in_stanza = true;
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos || !in_stanza) {
            throw ScenarioParseError("line " + std::to_string(lineno) +
                                     ": expected 'key = value' inside a [stanza]");
        }
        std::string key = body.substr(0, eq);
        std::string value = body.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (value.empty()) {
            throw ScenarioParseError("line " + std::to_string(lineno) + ": empty value");
        }
        try {
            if (key == "family") family_name = value;
            else if (key == "n") current.n = std::stoi(value);
            else if (key == "m") m = std::stoi(value);
            else if (key == "p") current.p = std::stoi(value);
            else if (key == "p_star") current.p_star = std::stoi(value);
            else if (key == "coef") current.coef = std::stod(value);
            else if (key == "sigma2") current.sigma2 = std::stod(value);
            else if (key == "replications") current.replications = std::stoi(value);
            else if (key == "seed") current.seed = std::stoull(value);
            else {
                throw ScenarioParseError("line " + std::to_string(lineno) +
                                         ": unknown key '" + key + "'");
            }
        } catch (const ScenarioParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ScenarioParseError("line " + std::to_string(lineno) + ": bad value '" +
                                     value + "' for key '" + key + "'");
        }
    }
    flush();
    return out;
}

inline std::vector<Scenario> parse_scenarios_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    return parse_scenarios(in);
}

} // namespace cmc

#endif // CMC_SIMULATION_HPP
