#include "msmine/report.hpp"

#include "msmine/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

using nlohmann::json;

namespace msmine {

ReportFormat parse_format(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    throw ArgumentError("unknown format '" + s + "'");
}

std::string mask_id(const std::string& id) {
    if (id.empty()) throw ArgumentError("cannot mask an empty id");
    return id.substr(0, std::min<std::size_t>(3, id.size())) + "XXX";
}

double round2(double v) {
    // nearbyint under the default rounding mode ties to even.
    return std::nearbyint(v * 100.0) / 100.0;
}

namespace {

std::string apply_mask(const std::string& id, bool enabled) {
    return enabled ? mask_id(id) : id;
}

// Two decimals with the trailing hundredths zero dropped: 0.5, 0.53, 1.0.
std::string fmt_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", round2(v));
    std::string s = buf;
    if (s.size() >= 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    if (s.size() >= 4 && s.compare(s.size() - 3, 3, ".00") == 0) s.erase(s.size() - 1);
    return s;
}

// Coupling values: two decimals, zero shown as plain 0.
std::string fmt_oc(double v) {
    if (round2(v) == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", round2(v));
    return buf;
}

std::string score_cell(const std::vector<KeyDevScore>& scores,
                       const ReportConfig& cfg) {
    std::string out = "[";
    bool first = true;
    for (const auto& s : top_k(scores, cfg.top_k)) {
        if (!first) out += ", ";
        first = false;
        out += "('" + apply_mask(s.developer, cfg.mask_ids) + "', " +
               fmt_score(s.score) + ")";
    }
    return out + "]";
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        out += csv_escape(fields[i]);
    }
    return out + "\n";
}

std::string md_row(const std::vector<std::string>& fields) {
    std::string out = "|";
    for (const auto& f : fields) out += " " + f + " |";
    return out + "\n";
}

json metric_list_json(const std::vector<KeyDevScore>& scores) {
    json arr = json::array();
    for (const auto& s : scores) {
        arr.push_back({{"developer", s.developer},
                       {"score", s.score},
                       {"rank", s.rank}});
    }
    return arr;
}

std::vector<KeyDevScore> metric_list_from_json(const json& arr, Metric m) {
    std::vector<KeyDevScore> out;
    for (const auto& j : arr) {
        out.push_back({j.at("developer").get<std::string>(), m,
                       j.at("score").get<double>(), j.at("rank").get<int>()});
    }
    return out;
}

json metric_lists_json(const MetricLists& lists, const ReportConfig* cfg) {
    auto render = [&](const std::vector<KeyDevScore>& scores) {
        if (!cfg) return metric_list_json(scores);
        json arr = json::array();
        for (const auto& s : top_k(scores, cfg->top_k)) {
            arr.push_back({{"developer", apply_mask(s.developer, cfg->mask_ids)},
                           {"score", s.score},
                           {"rank", s.rank}});
        }
        return arr;
    };
    return {{"jack", render(lists.jack)},
            {"maven", render(lists.maven)},
            {"connector", render(lists.connector)}};
}

} // namespace

std::string render_keydev_table(const KeyDevResults& results,
                                const ReportConfig& cfg) {
    std::vector<std::string> services;
    for (const auto& [svc, lists] : results.per_service) services.push_back(svc);
    std::sort(services.begin(), services.end());

    switch (cfg.format) {
        case ReportFormat::Markdown: {
            std::string out;
            out += "# Key developers (window ending " +
                   format_instant(results.window.end) + ")\n\n";
            out += md_row({"service", "jack", "maven", "connector"});
            out += md_row({"---", "---", "---", "---"});
            for (const auto& svc : services) {
                const auto& lists = results.per_service.at(svc);
                out += md_row({svc, score_cell(lists.jack, cfg),
                               score_cell(lists.maven, cfg),
                               score_cell(lists.connector, cfg)});
            }
            out += md_row({"whole-project", score_cell(results.global.jack, cfg),
                           score_cell(results.global.maven, cfg),
                           score_cell(results.global.connector, cfg)});
            return out;
        }
        case ReportFormat::Csv: {
            std::string out = csv_row({"service", "jack", "maven", "connector"});
            for (const auto& svc : services) {
                const auto& lists = results.per_service.at(svc);
                out += csv_row({svc, score_cell(lists.jack, cfg),
                                score_cell(lists.maven, cfg),
                                score_cell(lists.connector, cfg)});
            }
            out += csv_row({"whole-project", score_cell(results.global.jack, cfg),
                            score_cell(results.global.maven, cfg),
                            score_cell(results.global.connector, cfg)});
            return out;
        }
        case ReportFormat::Json: {
            json per_service;
            for (const auto& svc : services) {
                per_service[svc] =
                    metric_lists_json(results.per_service.at(svc), &cfg);
            }
            json j = {{"window_end", format_instant(results.window.end)},
                      {"window_length_days", results.window.length_days},
                      {"per_service", per_service},
                      {"whole_project", metric_lists_json(results.global, &cfg)}};
            return j.dump(2) + "\n";
        }
    }
    throw ArgumentError("bad format");
}

std::string render_coupling_table(const std::vector<CouplingMatrix>& windows,
                                  const ReportConfig& cfg) {
    if (windows.empty()) throw ArgumentError("no coupling windows to render");

    std::set<std::string> dev_set;
    for (const auto& w : windows) {
        for (const auto& [dev, oc] : w.per_developer) dev_set.insert(dev);
    }
    auto dev_total = [](const CouplingMatrix& w, const std::string& dev) {
        auto it = w.per_developer.find(dev);
        return it == w.per_developer.end() ? 0.0 : it->second;
    };
    std::vector<std::string> devs(dev_set.begin(), dev_set.end());
    std::sort(devs.begin(), devs.end(), [&](const auto& a, const auto& b) {
        const double fa = dev_total(windows.front(), a);
        const double fb = dev_total(windows.front(), b);
        if (fa != fb) return fa > fb;
        return a < b;
    });

    std::vector<std::string> columns;
    std::vector<double> totals;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        columns.push_back("window_" + std::to_string(i + 1));
        double t = 0.0;
        for (const auto& [cell, oc] : windows[i].cells) t += oc;
        totals.push_back(t);
    }

    switch (cfg.format) {
        case ReportFormat::Markdown:
        case ReportFormat::Csv: {
            const bool md = cfg.format == ReportFormat::Markdown;
            auto row = md ? md_row : csv_row;
            std::string out;
            std::vector<std::string> header = {"developer"};
            header.insert(header.end(), columns.begin(), columns.end());
            out += row(header);
            if (md) out += row(std::vector<std::string>(header.size(), "---"));
            for (const auto& dev : devs) {
                std::vector<std::string> fields = {apply_mask(dev, cfg.mask_ids)};
                for (const auto& w : windows) fields.push_back(fmt_oc(dev_total(w, dev)));
                out += row(fields);
            }
            std::vector<std::string> footer = {"TOTAL"};
            for (double t : totals) footer.push_back(fmt_oc(t));
            out += row(footer);
            return out;
        }
        case ReportFormat::Json: {
            json rows;
            for (const auto& dev : devs) {
                json vals = json::array();
                for (const auto& w : windows) vals.push_back(dev_total(w, dev));
                rows[apply_mask(dev, cfg.mask_ids)] = vals;
            }
            json j = {{"columns", columns}, {"rows", rows}, {"totals", totals}};
            return j.dump(2) + "\n";
        }
    }
    throw ArgumentError("bad format");
}

std::string keydev_results_to_json(const KeyDevResults& results) {
    json per_service;
    for (const auto& [svc, lists] : results.per_service) {
        per_service[svc] = metric_lists_json(lists, nullptr);
    }
    json j = {{"kind", "keydevs"},
              {"window_end", format_instant(results.window.end)},
              {"window_length_days", results.window.length_days},
              {"per_service", per_service},
              {"whole_project", metric_lists_json(results.global, nullptr)}};
    return j.dump(2) + "\n";
}

namespace {

MetricLists metric_lists_from_json(const json& j) {
    MetricLists lists;
    lists.jack = metric_list_from_json(j.at("jack"), Metric::Jack);
    lists.maven = metric_list_from_json(j.at("maven"), Metric::Maven);
    lists.connector = metric_list_from_json(j.at("connector"), Metric::Connector);
    return lists;
}

} // namespace

KeyDevResults keydev_results_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("keydev results: ") + e.what());
    }
    if (j.value("kind", "") != "keydevs") {
        throw ParseError("not a keydevs result file");
    }
    KeyDevResults results;
    results.window.end = parse_instant(j.at("window_end").get<std::string>());
    results.window.length_days = j.at("window_length_days").get<double>();
    for (auto it = j.at("per_service").begin(); it != j.at("per_service").end(); ++it) {
        results.per_service[it.key()] = metric_lists_from_json(it.value());
    }
    results.global = metric_lists_from_json(j.at("whole_project"));
    return results;
}

std::string coupling_results_to_json(const std::vector<CouplingMatrix>& windows) {
    json jwindows = json::array();
    for (const auto& w : windows) {
        json cells = json::array();
        for (const auto& [key, oc] : w.cells) {
            cells.push_back({{"a", key.first}, {"b", key.second}, {"oc", oc}});
        }
        json per_dev;
        for (const auto& [dev, oc] : w.per_developer) per_dev[dev] = oc;
        json entries = json::array();
        for (const auto& e : w.entries) {
            entries.push_back({{"developer", e.developer},
                               {"service_a", e.service_a},
                               {"service_b", e.service_b},
                               {"sum_a", e.sum_a},
                               {"sum_b", e.sum_b},
                               {"oc", e.oc}});
        }
        jwindows.push_back({{"end", format_instant(w.window.end)},
                            {"length_days", w.window.length_days},
                            {"services", w.services},
                            {"cells", cells},
                            {"per_developer", per_dev},
                            {"entries", entries}});
    }
    json j = {{"kind", "coupling"}, {"windows", jwindows}};
    return j.dump(2) + "\n";
}

std::vector<CouplingMatrix> coupling_results_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("coupling results: ") + e.what());
    }
    if (j.value("kind", "") != "coupling") {
        throw ParseError("not a coupling result file");
    }
    std::vector<CouplingMatrix> out;
    for (const auto& jw : j.at("windows")) {
        CouplingMatrix m;
        m.window.end = parse_instant(jw.at("end").get<std::string>());
        m.window.length_days = jw.at("length_days").get<double>();
        m.services = jw.at("services").get<std::vector<std::string>>();
        for (const auto& jc : jw.at("cells")) {
            m.cells[{jc.at("a").get<std::string>(), jc.at("b").get<std::string>()}] =
                jc.at("oc").get<double>();
        }
        const auto& per_dev = jw.at("per_developer");
        for (auto it = per_dev.begin(); it != per_dev.end(); ++it) {
            m.per_developer[it.key()] = it.value().get<double>();
        }
        for (const auto& je : jw.at("entries")) {
            m.entries.push_back({je.at("developer").get<std::string>(),
                                 je.at("service_a").get<std::string>(),
                                 je.at("service_b").get<std::string>(),
                                 je.at("sum_a").get<long>(),
                                 je.at("sum_b").get<long>(),
                                 je.at("oc").get<double>()});
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace msmine
