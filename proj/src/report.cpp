#include "conesq/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace conesq {

std::string csv_header() {
    return "experiment,n,p,delta,engine,seed,ratio,stderr,alpha,prefactor,residual,expected_alpha,pass\n";
}

std::string to_csv(const std::vector<SweepResult>& results) {
    std::ostringstream os;
    os << csv_header();
    for (const auto& r : results) {
        std::string pass;
        if (r.has_expected) pass = std::abs(r.fit.alpha - r.expected_alpha) <= kExponentTolerance ? "true" : "false";
        for (const auto& q : r.points) {
            os << r.experiment << (r.series.empty() ? "" : ":" + r.series) << ',' << r.n << ',' << fmt_num(r.p) << ','
               << fmt_num(q.delta) << ',' << r.engine << ',' << q.seed << ',' << fmt_num(q.ratio) << ','
               << fmt_num(q.stderr_) << ',' << fmt_num(r.fit.alpha) << ',' << fmt_num(r.fit.prefactor) << ','
               << fmt_num(r.fit.residual) << ',' << (r.has_expected ? fmt_num(r.expected_alpha) : "") << ',' << pass
               << '\n';
        }
    }
    return os.str();
}

std::string to_svg(const SweepResult& r) {
    const double W = 480, H = 360, m = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& q : r.points) {
        double x = std::log2(1 / q.delta), y = std::log2(q.ratio);
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    if (r.points.empty()) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-9) x1 = x0 + 1;
    double pad = std::max(0.25, 0.1 * (y1 - y0));
    y0 -= pad;
    y1 += pad;
    auto X = [&](double x) { return m + (x - x0) / (x1 - x0) * (W - 2 * m); };
    auto Y = [&](double y) { return H - m - (y - y0) / (y1 - y0) * (H - 2 * m); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << m << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">" << r.experiment
       << (r.series.empty() ? "" : " / " + r.series) << ", p=" << fmt_num(r.p) << ", alpha=" << fmt_num(r.fit.alpha)
       << "</text>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" font-family=\"sans-serif\" font-size=\"12\">log2(1/delta)</text>\n";
    os << "<text x=\"8\" y=\"" << m - 8 << "\" font-family=\"sans-serif\" font-size=\"12\">log2 ratio</text>\n";
    if (r.points.size() >= 2) {
        double c = std::log2(r.fit.prefactor);
        os << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(c + r.fit.alpha * x0) << "\" x2=\"" << X(x1) << "\" y2=\""
           << Y(c + r.fit.alpha * x1) << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
        if (r.has_expected) {
            // reference slope anchored at the first point
            double ax = std::log2(1 / r.points.front().delta), ay = std::log2(r.points.front().ratio);
            os << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(ay + r.expected_alpha * (x0 - ax)) << "\" x2=\"" << X(x1)
               << "\" y2=\"" << Y(ay + r.expected_alpha * (x1 - ax))
               << "\" stroke=\"darkorange\" stroke-dasharray=\"6,4\"/>\n";
        }
    }
    for (const auto& q : r.points)
        os << "<circle cx=\"" << X(std::log2(1 / q.delta)) << "\" cy=\"" << Y(std::log2(q.ratio))
           << "\" r=\"4\" fill=\"black\"/>\n";
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    os << body;
    if (!os) throw IoError("write failed: " + path);
}

std::vector<SweepResult> from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line + "\n" != csv_header()) throw IoError("results CSV: unexpected header");
    std::vector<SweepResult> out;
    auto num = [](const std::string& s) { return s.empty() ? 0.0 : std::stod(s); };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() == 12) f.emplace_back();  // empty trailing pass column
        if (f.size() != 13) throw IoError("results CSV: expected 13 columns: " + line);
        std::string exp = f[0], series;
        if (auto c = exp.find(':'); c != std::string::npos) {
            series = exp.substr(c + 1);
            exp = exp.substr(0, c);
        }
        int n = std::stoi(f[1]);
        double p = num(f[2]);
        auto it = std::find_if(out.begin(), out.end(), [&](const SweepResult& r) {
            return r.experiment == exp && r.series == series && r.n == n && r.p == p && r.engine == f[4];
        });
        if (it == out.end()) {
            SweepResult r;
            r.experiment = exp;
            r.series = series;
            r.n = n;
            r.p = p;
            r.engine = f[4];
            r.fit.alpha = num(f[8]);
            r.fit.prefactor = num(f[9]);
            r.fit.residual = num(f[10]);
            r.has_expected = !f[11].empty();
            r.expected_alpha = num(f[11]);
            out.push_back(r);
            it = out.end() - 1;
        }
        SweepPoint q;
        q.delta = num(f[3]);
        q.seed = std::stoull(f[5]);
        q.ratio = num(f[6]);
        q.stderr_ = num(f[7]);
        q.series = series;
        it->points.push_back(q);
    }
    return out;
}

std::vector<SweepResult> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_csv(ss.str());
}

std::vector<std::string> write_report(const std::vector<SweepResult>& results, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
    std::vector<std::string> out;
    std::string csv = dir + "/results.csv";
    write_text(csv, to_csv(results));
    out.push_back(csv);
    for (const auto& r : results) {
        std::string name = r.experiment + (r.series.empty() ? "" : "_" + r.series) + "_p" + fmt_num(r.p) + ".svg";
        write_text(dir + "/" + name, to_svg(r));
        out.push_back(dir + "/" + name);
    }
    return out;
}

}  // namespace conesq
