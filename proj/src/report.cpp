#include "nullcone/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace nullcone {

RunReport::RunReport(std::string command, unsigned long long seed)
    : command_(std::move(command)), seed_(seed) {
    tolerances_ = json::object();
    results_ = json::object();
    timings_ = json::object();
    model_ = json::object();
}

void RunReport::add_input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"digest", file_digest(path)}});
}

void RunReport::set_model(const json& descriptor) { model_ = descriptor; }
void RunReport::set_bandlimit(int L) { bandlimit_ = L; }

void RunReport::set_tolerance(const std::string& name, Real value) {
    tolerances_[name] = value;
}

void RunReport::set_result(const std::string& key, const json& value) {
    results_[key] = value;
}

void RunReport::add_erratum(const ErratumEntry& e) {
    errata_.push_back({{"component", e.component},
                       {"printed", e.printed},
                       {"oracle", e.oracle},
                       {"point", {{"chart", e.chart}, {"r", e.r}, {"theta", e.theta}}}});
}

void RunReport::add_timing(const std::string& phase, Real seconds) {
    timings_[phase] = seconds;
}

json RunReport::to_json() const {
    json j;
    j["command"] = command_;
    j["seed"] = seed_;
    j["inputs"] = inputs_;
    j["model"] = model_;
    j["bandlimit"] = bandlimit_;
    j["tolerances"] = tolerances_;
    j["results"] = results_;
    j["errata"] = errata_;
    j["timings"] = timings_;
    return j;
}

void RunReport::write(const std::string& path) const {
    save_json_file(path, to_json());
}

void write_plot(const std::string& base_path, const std::string& title,
                const std::vector<std::pair<std::string, Vector>>& series,
                bool log_scale) {
    {
        std::ofstream csv(base_path + ".csv");
        csv << "index";
        for (const auto& s : series) csv << "," << s.first;
        csv << "\n";
        Index rows = 0;
        for (const auto& s : series) rows = std::max(rows, s.second.size());
        for (Index i = 0; i < rows; ++i) {
            csv << i;
            for (const auto& s : series) {
                csv << ",";
                if (i < s.second.size()) csv << s.second[i];
            }
            csv << "\n";
        }
    }

    const int W = 640, H = 400, ML = 60, MR = 20, MT = 40, MB = 40;
    Real lo = 1e300, hi = -1e300;
    Index n = 0;
    for (const auto& s : series) {
        n = std::max(n, s.second.size());
        for (Index i = 0; i < s.second.size(); ++i) {
            Real v = s.second[i];
            if (log_scale) v = std::log10(std::max(std::abs(v), Real(1e-300)));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;
    std::ofstream svg(base_path + ".svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
        << (log_scale ? " (log10)" : "") << "</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    int ci = 0;
    for (const auto& s : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4]
            << "\" stroke-width=\"1.5\" points=\"";
        for (Index i = 0; i < s.second.size(); ++i) {
            Real v = s.second[i];
            if (log_scale) v = std::log10(std::max(std::abs(v), Real(1e-300)));
            Real x = ML + (W - ML - MR) * (n > 1 ? Real(i) / (n - 1) : 0.5);
            Real y = H - MB - (H - MT - MB) * (v - lo) / (hi - lo);
            svg << x << "," << y << " ";
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << ML + 5 << "\" y=\"" << MT + 15 * (ci + 1)
            << "\" fill=\"" << colors[ci % 4] << "\">" << s.first << "</text>\n";
        ++ci;
    }
    svg << "<text x=\"10\" y=\"" << MT << "\">" << hi << "</text>\n"
        << "<text x=\"10\" y=\"" << H - MB << "\">" << lo << "</text>\n</svg>\n";
}

}  // namespace nullcone
