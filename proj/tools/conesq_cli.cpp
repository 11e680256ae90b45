// conesq: experiment runner. Subcommands verify, sweep, extremize, report, accept.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "conesq/acceptance.hpp"
#include "conesq/config.hpp"
#include "conesq/report.hpp"

using namespace conesq;

namespace {

int run_accept(const std::vector<int>& ids, const AcceptOptions& opts) {
    bool all = true;
    for (int id : ids) {
        AcceptResult r = run_criterion(id, opts);
        std::printf("%s\n", format_line(r).c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

std::vector<int> all_ids() {
    std::vector<int> v;
    for (int i = 1; i <= kCriterionCount; ++i) v.push_back(i);
    return v;
}

void print_sweep(const SweepResult& r) {
    std::printf("%s:%s n=%d p=%s engine=%s alpha=%s prefactor=%s residual=%s", r.experiment.c_str(), r.series.c_str(),
                r.n, fmt_num(r.p).c_str(), r.engine.c_str(), fmt_num(r.fit.alpha).c_str(),
                fmt_num(r.fit.prefactor).c_str(), fmt_num(r.fit.residual).c_str());
    if (r.has_expected) std::printf(" expected=%s", fmt_num(r.expected_alpha).c_str());
    std::printf("\n");
    for (const auto& q : r.points)
        std::printf("  delta=%s ratio=%s stderr=%s\n", fmt_num(q.delta).c_str(), fmt_num(q.ratio).c_str(),
                    fmt_num(q.stderr_).c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Square-function experiments: identities, instance suites, exponent sweeps, acceptance."};
    app.require_subcommand(0, 1);
    bool accept_flag = false;
    int threads = 1;
    std::string out;
    app.add_flag("--accept", accept_flag, "Run the whole acceptance suite");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Output directory");

    // verify
    auto* verify = app.add_subcommand("verify", "Identity, lemma-instance and Minkowski suites");
    std::string suite = "all";
    verify->add_option("--suite", suite, "identities | lemmas | minkowski | all")
        ->check(CLI::IsMember({"identities", "lemmas", "minkowski", "all"}));
    verify->add_option("--threads", threads);
    verify->add_option("--out", out);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Delta sweep with power-law fit");
    std::string config, experiment, engine, kind, deltas, input;
    double p = 0, dilation = 0;
    int n = 0, seeds = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    sweep->add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
    sweep->add_option("--experiment", experiment, "Experiment name");
    sweep->add_option("--p", p, "Lebesgue exponent");
    sweep->add_option("--delta", deltas, "Deltas: 2^-4:2^-10 or a comma list");
    sweep->add_option("--engine", engine, "fft | overlap");
    sweep->add_option("--kind", kind, "Extremizer kind for extremizer_sweep");
    sweep->add_option("--input", input, "extremizer | random | both");
    sweep->add_option("--n", n, "Dimension");
    sweep->add_option("--seed", seed, "Base seed");
    sweep->add_option("--seeds", seeds, "Random seeds per delta");
    sweep->add_option("--samples", samples, "Overlap-engine samples");
    sweep->add_option("--dilation", dilation, "Packet dilation factor");
    sweep->add_option("--threads", threads);
    sweep->add_option("--out", out);

    // extremize
    auto* extremize = app.add_subcommand("extremize", "Build an extremizer and export its geometry");
    std::string ekind = "cone_L8_A2", phase = "aligned";
    double edelta = 1.0 / 16, ep = 8, edil = 0;
    int en = 3;
    std::uint64_t eseed = 1;
    long gridN = 0;
    double gridL = 0;
    extremize->add_option("--kind", ekind, "bochner_riesz | sharp_cutoff_A1 | cone_L8_A2");
    extremize->add_option("--n", en);
    extremize->add_option("--delta", edelta, "Scale (1/R for Bochner-Riesz)");
    extremize->add_option("--p", ep);
    extremize->add_option("--seed", eseed);
    extremize->add_option("--dilation", edil);
    extremize->add_option("--phase", phase)->check(CLI::IsMember({"aligned", "random"}));
    extremize->add_option("--grid-n", gridN, "Also synthesize f on an N-point grid");
    extremize->add_option("--grid-l", gridL, "Period of that grid");
    extremize->add_option("--out", out)->required();

    // report
    auto* report = app.add_subcommand("report", "Regenerate CSV and plots from a results CSV");
    std::string in;
    report->add_option("--in", in, "results.csv")->required()->check(CLI::ExistingFile);
    report->add_option("--out", out)->required();

    // accept
    auto* accept = app.add_subcommand("accept", "Acceptance suite, one PASS/FAIL line per criterion");
    std::vector<int> ids;
    accept->add_option("--criteria", ids, "Criterion ids (default all)")->delimiter(',')->check(CLI::Range(1, kCriterionCount));
    accept->add_option("--threads", threads);
    accept->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        AcceptOptions ao;
        ao.threads = threads;
        ao.out_dir = out;
        ao.memory_mb = memory_ceiling_mb(ao.memory_mb);

        if (accept_flag || accept->parsed()) return run_accept(ids.empty() ? all_ids() : ids, ao);

        if (verify->parsed()) {
            std::vector<int> v;
            if (suite == "identities" || suite == "all") v.push_back(1);
            if (suite == "lemmas" || suite == "all") v.push_back(2);
            if (suite == "minkowski" || suite == "all") v.push_back(3);
            return run_accept(v, ao);
        }

        if (sweep->parsed()) {
            ExperimentConfig c = config.empty() ? ExperimentConfig{} : load_config(config, experiment);
            if (config.empty()) c.memory_mb = memory_ceiling_mb(c.memory_mb);
            if (!experiment.empty()) c.experiment = experiment;
            if (p > 0) c.p = p;
            if (!deltas.empty()) c.deltas = parse_deltas(deltas);
            if (!engine.empty()) c.engine = engine;
            if (!kind.empty()) c.kind = kind;
            if (!input.empty()) c.input = input;
            if (n > 0) c.n = n;
            if (sweep->count("--seed")) c.seed = seed;
            if (seeds > 0) c.seeds = seeds;
            if (samples > 0) c.samples = samples;
            if (dilation > 0) c.dilation = dilation;
            if (sweep->count("--threads") || app.count("--threads")) c.threads = threads;
            auto results = run_sweep(c);
            bool ok = true;
            for (const auto& r : results) {
                print_sweep(r);
                if (r.has_expected) ok = ok && std::abs(r.fit.alpha - r.expected_alpha) <= kExponentTolerance;
            }
            if (!out.empty())
                for (const auto& path : write_report(results, out)) std::printf("wrote %s\n", path.c_str());
            return ok ? 0 : 1;
        }

        if (extremize->parsed()) {
            ExtremizerConfig ec;
            ec.kind = kind_from_name(ekind);
            ec.n = en;
            ec.delta = edelta;
            ec.p = ep;
            ec.seed = eseed;
            ec.dilation = edil;
            ec.phase_mode = phase == "aligned" ? PhaseMode::aligned : PhaseMode::random;
            Extremizer ex = build_extremizer(ec);
            std::filesystem::create_directories(out);
            auto dump = [&](const std::string& name, const std::vector<Plank>& boxes) {
                std::ofstream os(out + "/" + name);
                if (!os) throw IoError("cannot write " + out + "/" + name);
                write_geometry(os, boxes);
            };
            std::vector<Plank> freq;
            for (const auto& pk : ex.packets) freq.push_back(pk.box);
            dump("packets.txt", freq);
            dump("tubes.txt", ex.tubes.boxes);
            dump("pieces.txt", ex.pieces.boxes);
            std::printf("%s: %zu packets, dilation %s, expected exponent %s\n", kind_name(ec.kind), ex.packets.size(),
                        fmt_num(ex.dilation).c_str(), fmt_num(ex.expected_exponent).c_str());
            if (gridN > 0) {
                GridSpec g(en, gridN, gridL > 0 ? gridL : 1.0);
                write_field(synthesize_extremizer(ex, g), out + "/f.field");
                std::printf("wrote %s/f.field\n", out.c_str());
            }
            return 0;
        }

        if (report->parsed()) {
            for (const auto& path : write_report(read_csv(in), out)) std::printf("wrote %s\n", path.c_str());
            return 0;
        }

        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
