#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nullcone/curvature.hpp"
#include "nullcone/io.hpp"
#include "nullcone/types.hpp"

namespace nullcone {

/// Structured run report with a stable field order; the numeric sections are
/// byte-identical across runs with the same command and seed.
class RunReport {
public:
    RunReport(std::string command, unsigned long long seed);

    void add_input(const std::string& path);  // records the path and digest
    void set_model(const json& descriptor);
    void set_bandlimit(int L);
    void set_tolerance(const std::string& name, Real value);
    void set_result(const std::string& key, const json& value);
    void add_erratum(const ErratumEntry& e);
    void add_timing(const std::string& phase, Real seconds);

    const json& errata() const { return errata_; }
    json to_json() const;  // timings last so numeric sections diff cleanly
    void write(const std::string& path) const;

private:
    std::string command_;
    unsigned long long seed_;
    json inputs_ = json::array();
    json model_;
    int bandlimit_ = 0;
    json tolerances_;
    json results_;
    json errata_ = json::array();
    json timings_;
};

/// Minimal vector plot: polyline(s) over an index or abscissa, written as an
/// SVG file plus a CSV with the raw numbers.
void write_plot(const std::string& base_path, const std::string& title,
                const std::vector<std::pair<std::string, Vector>>& series,
                bool log_scale = false);

}  // namespace nullcone
