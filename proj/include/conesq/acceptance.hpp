#pragma once

#include <string>
#include <vector>

#include "conesq/experiments.hpp"

namespace conesq {

struct AcceptOptions {
    int threads = 1;
    std::string out_dir;  // empty: no report files
    double memory_mb = 4096;
};

struct AcceptResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;  // seconds
    std::vector<SweepResult> sweeps;
};

inline constexpr int kCriterionCount = 9;
const char* criterion_name(int id);
double criterion_budget(int id);

// Runs one criterion; never throws for numerical failures (they become FAIL with the reason).
AcceptResult run_criterion(int id, const AcceptOptions& opts);
// "AC<id> PASS|FAIL <name>: <detail> (<t> s / <budget> s)"; a run over budget fails.
std::string format_line(const AcceptResult& r);

}  // namespace conesq
