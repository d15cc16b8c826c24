#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "siirv/error.hpp"

namespace lab {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Csv::Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Csv::row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("csv row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string Csv::render(const Scenario& s) const {
    const Json m = meta(s);
    std::string out = "# scenario=" + s.name + "\n# seed=" + std::to_string(s.seed) + "\n# config_hash=" +
                      m["config_hash"].get<std::string>() + "\n# constants=" + m["constants"].dump() + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
        out += "\n";
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
}

Json meta(const Scenario& s) {
    const Json consts = siirv::io::to_json(s.constants);
    const Json hashed{{"scenario", s.raw}, {"constants", consts}};
    return {{"scenario", s.name},
            {"kind", kind_name(s.kind)},
            {"seed", s.seed},
            {"config_hash", siirv::io::hex64(siirv::io::config_hash(hashed))},
            {"constants", consts},
            {"version", "0.1.0"}};
}

void write_outputs(const Scenario& s, const std::string& out_dir, const Csv& csv, Json body) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base = std::filesystem::path(out_dir) / s.name;
    std::ofstream c(base.string() + ".csv", std::ios::binary);
    c << csv.render(s);
    body["meta"] = meta(s);
    std::ofstream j(base.string() + ".json", std::ios::binary);
    j << body.dump(2) << "\n";
    if (!c || !j) throw siirv::Error("cannot write outputs under '" + out_dir + "'");
}

}  // namespace lab
