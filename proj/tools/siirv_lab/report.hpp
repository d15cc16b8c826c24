#pragma once

#include <string>
#include <vector>

#include "scenario.hpp"

namespace lab {

// Shortest round-trip-stable rendering used in every table.
std::string fmt(double v);

class Csv {
public:
    explicit Csv(std::vector<std::string> columns);
    void row(std::vector<std::string> cells);
    std::size_t size() const { return rows_.size(); }
    // Comment header with seed, config hash and constants, then the table.
    std::string render(const Scenario& s) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

Json meta(const Scenario& s);

// Writes <out>/<name>.csv and <out>/<name>.json.
void write_outputs(const Scenario& s, const std::string& out_dir, const Csv& csv, Json body);

// Exit status of one scenario run.
enum Status { kOk = 0, kFailure = 1, kConfig = 2, kVerify = 3, kOverflow = 4 };

Status run_cover(const Scenario& s, const std::string& out);
Status run_learn(const Scenario& s, const std::string& out);
Status run_verify(const Scenario& s, const std::string& out);
Status run_bench(const Scenario& s, const std::string& out);

}  // namespace lab
