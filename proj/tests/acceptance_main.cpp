// Runs acceptance criteria and prints one PASS/FAIL line per criterion.
// usage: acceptance [ids...] [--threads N] [--out DIR]; no ids means all.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "conesq/acceptance.hpp"

int main(int argc, char** argv) {
    conesq::AcceptOptions opts;
    if (const char* mb = std::getenv("CONESQ_MEMORY_MB")) opts.memory_mb = std::atof(mb);
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--threads" && i + 1 < argc) {
            opts.threads = std::atoi(argv[++i]);
        } else if (a == "--out" && i + 1 < argc) {
            opts.out_dir = argv[++i];
        } else {
            int id = std::atoi(a.c_str());
            if (id < 1 || id > conesq::kCriterionCount) {
                std::fprintf(stderr, "unknown criterion %s\n", a.c_str());
                return 2;
            }
            ids.push_back(id);
        }
    }
    if (ids.empty())
        for (int i = 1; i <= conesq::kCriterionCount; ++i) ids.push_back(i);
    bool all = true;
    for (int id : ids) {
        auto r = conesq::run_criterion(id, opts);
        std::printf("%s\n", conesq::format_line(r).c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
