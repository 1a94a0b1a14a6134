#ifndef CMC_REPORT_HPP
#define CMC_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmc/criteria.hpp"
#include "cmc/errors.hpp"

namespace cmc {

/// Self-contained selection report: everything both output formats need.
/// The JSON form is the lossless machine path; the table form mirrors the
/// per-size layout with an indicator grid and 4-decimal scores.
struct ReportDoc {
    struct Row {
        int size = 0;
        std::uint32_t mask = 0;
        std::vector<std::string> variables;
        double loglik = 0.0;
        double aic = 0.0;
        double bic = 0.0;
        double lambda = 0.0;
        bool converged = true;
    };
    std::vector<Row> rows;                                // ordered by size
    std::vector<std::pair<std::string, std::uint32_t>> chosen;
    std::vector<std::pair<std::string, double>> thresholds;  // alpha string -> quantile
    std::vector<std::string> predictor_names;             // dataset column order
};

inline std::string format_alpha(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", alpha);
    return buf;
}

inline ReportDoc make_report_doc(const SelectionReport& report,
                                 const std::vector<std::string>& predictor_names) {
    if (static_cast<int>(predictor_names.size()) != report.p) {
        throw Error("make_report_doc: predictor name count does not match p");
    }
    ReportDoc doc;
    doc.predictor_names = predictor_names;
    for (const ReportRow& row : report.rows) {
        ReportDoc::Row out;
        out.size = row.size;
        out.mask = row.mask.bits;
        for (int j = 0; j < report.p; ++j) {
            if (row.mask.test(j)) out.variables.push_back(predictor_names[j]);
        }
        out.loglik = row.loglik;
        out.aic = row.aic;
        out.bic = row.bic;
        out.lambda = row.lambda;
        out.converged = row.converged;
        doc.rows.push_back(std::move(out));
    }
    for (const auto& [spec, mask] : report.chosen) {
        doc.chosen.emplace_back(spec.name(), mask.bits);
    }
    for (const auto& [alpha, value] : report.thresholds) {
        doc.thresholds.emplace_back(format_alpha(alpha), value);
    }
    return doc;
}

inline nlohmann::ordered_json to_json(const ReportDoc& doc) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
        nlohmann::ordered_json r;
        r["size"] = row.size;
        r["mask"] = row.mask;
        r["variables"] = row.variables;
        r["loglik"] = row.loglik;
        r["aic"] = row.aic;
        r["bic"] = row.bic;
        r["lambda"] = row.lambda;
        r["converged"] = row.converged;
        j["rows"].push_back(std::move(r));
    }
    j["chosen"] = nlohmann::ordered_json::object();
    for (const auto& [name, mask] : doc.chosen) j["chosen"][name] = mask;
    j["thresholds"] = nlohmann::ordered_json::object();
    for (const auto& [alpha, value] : doc.thresholds) j["thresholds"][alpha] = value;
    return j;
}

/// Inverse of to_json. The predictor list is recovered from the full-model
/// row, which contains every variable in dataset column order.
inline ReportDoc doc_from_json(const nlohmann::ordered_json& j) {
    ReportDoc doc;
    for (const auto& r : j.at("rows")) {
        ReportDoc::Row row;
        row.size = r.at("size").get<int>();
        row.mask = r.at("mask").get<std::uint32_t>();
        row.variables = r.at("variables").get<std::vector<std::string>>();
        row.loglik = r.at("loglik").get<double>();
        row.aic = r.at("aic").get<double>();
        row.bic = r.at("bic").get<double>();
        row.lambda = r.at("lambda").get<double>();
        row.converged = r.at("converged").get<bool>();
        doc.rows.push_back(std::move(row));
    }
    for (const auto& [name, mask] : j.at("chosen").items()) {
        doc.chosen.emplace_back(name, mask.get<std::uint32_t>());
    }
    for (const auto& [alpha, value] : j.at("thresholds").items()) {
        doc.thresholds.emplace_back(alpha, value.get<double>());
    }
    if (doc.rows.empty()) throw Error("report json: no rows");
    doc.predictor_names = doc.rows.back().variables;
    return doc;
}

/// Fixed-width table in the per-size layout: one row per model size, a 0/1
/// indicator per predictor, AIC / BIC / LogLR at 4 decimals, and the list of
/// criteria that chose each row. A '*' after LogLR flags a fit that did not
/// converge.
inline std::string render_table(const ReportDoc& doc) {
    const std::size_t p = doc.predictor_names.size();
    auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        return std::string(buf);
    };

    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head = doc.predictor_names;
    head.insert(head.end(), {"AIC", "BIC", "LogLR", "chosen by"});
    cells.push_back(head);

    bool any_nonconverged = false;
    for (const auto& row : doc.rows) {
        std::vector<std::string> line;
        for (std::size_t jcol = 0; jcol < p; ++jcol) {
            line.push_back((row.mask >> jcol) & 1u ? "1" : "0");
        }
        line.push_back(fmt(row.aic));
        line.push_back(fmt(row.bic));
        std::string lam = fmt(row.lambda);
        if (!row.converged) {
            lam += '*';
            any_nonconverged = true;
        }
        line.push_back(lam);
        std::string markers;
        for (const auto& [name, mask] : doc.chosen) {
            if (mask == row.mask) {
                if (!markers.empty()) markers += ' ';
                markers += name;
            }
        }
        line.push_back(markers);
        cells.push_back(std::move(line));
    }

    const std::size_t ncol = cells[0].size();
    std::vector<std::size_t> width(ncol, 0);
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < ncol; ++c) {
            width[c] = std::max(width[c], line[c].size());
        }
    }

    std::string out;
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < ncol; ++c) {
            if (c > 0) out += "  ";
            if (c + 1 == ncol) {
                out += line[c];  // last column left-aligned, no padding
            } else {
                out.append(width[c] - line[c].size(), ' ');
                out += line[c];
            }
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    if (!doc.thresholds.empty()) {
        out += '\n';
        const std::size_t df = doc.rows.size();  // p + 1
        for (const auto& [alpha, value] : doc.thresholds) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "cmc:%s threshold: chi-square quantile(1-%s, df=%zu) = %.3f\n",
                          alpha.c_str(), alpha.c_str(), df, value);
            out += buf;
        }
    }
    if (any_nonconverged) {
        out += "* fit did not converge\n";
    }
    return out;
}

} // namespace cmc

#endif // CMC_REPORT_HPP
