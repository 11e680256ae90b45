#include "conesq/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

namespace conesq {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& raw) {
    std::string s = trim(raw);
    if (s.rfind("2^", 0) == 0) {
        std::size_t used = 0;
        int k = std::stoi(s.substr(2), &used);
        if (used + 2 != s.size()) throw DomainError("bad dyadic literal: " + s);
        return std::ldexp(1.0, k);
    }
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw DomainError("bad number: " + s);
    return v;
}

template <class T>
T parse_as(const std::string& key, const std::string& v) {
    try {
        double x = parse_number(v);
        return static_cast<T>(x);
    } catch (const std::invalid_argument&) {
        throw DomainError("config key '" + key + "': not a number: " + v);
    }
}

}  // namespace

std::vector<double> parse_deltas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(parse_number(item));
            continue;
        }
        double a = parse_number(item.substr(0, colon)), b = parse_number(item.substr(colon + 1));
        if (!is_dyadic(a) || !is_dyadic(b)) throw DomainError("delta range endpoints must be dyadic: " + item);
        int ka = static_cast<int>(std::lround(std::log2(a))), kb = static_cast<int>(std::lround(std::log2(b)));
        int step = ka >= kb ? -1 : 1;
        for (int k = ka;; k += step) {
            out.push_back(std::ldexp(1.0, k));
            if (k == kb) break;
        }
    }
    return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    if (key == "experiment") c.experiment = v;
    else if (key == "engine") c.engine = v;
    else if (key == "kind") c.kind = v;
    else if (key == "input") c.input = v;
    else if (key == "n") c.n = parse_as<int>(key, v);
    else if (key == "p") c.p = parse_as<double>(key, v);
    else if (key == "delta" || key == "deltas") c.deltas = parse_deltas(v);
    else if (key == "K") c.K = parse_as<double>(key, v);
    else if (key == "gamma") c.gamma = parse_as<double>(key, v);
    else if (key == "m_separation" || key == "m") c.m_separation = parse_as<int>(key, v);
    else if (key == "seed") c.seed = parse_as<std::uint64_t>(key, v);
    else if (key == "seeds") c.seeds = parse_as<int>(key, v);
    else if (key == "threads") c.threads = parse_as<int>(key, v);
    else if (key == "samples") c.samples = parse_as<long>(key, v);
    else if (key == "dilation") c.dilation = parse_as<double>(key, v);
    else if (key == "memory_mb") c.memory_mb = parse_as<double>(key, v);
    else throw DomainError("unknown config key: " + key);
}

ExperimentConfig parse_config(const std::string& text, const std::string& experiment) {
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
        boost::property_tree::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    c.memory_mb = memory_ceiling_mb(c.memory_mb);
    for (const auto& [k, node] : tree)
        if (node.empty()) apply_setting(c, k, node.data());
    if (!experiment.empty()) c.experiment = experiment;
    if (auto table = tree.get_child_optional(c.experiment))
        for (const auto& [k, node] : *table) apply_setting(c, k, node.data());
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), experiment);
}

double memory_ceiling_mb(double fallback) {
    const char* s = std::getenv("CONESQ_MEMORY_MB");
    if (!s || !*s) return fallback;
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || !(v > 0)) throw DomainError("CONESQ_MEMORY_MB must be a positive number");
    return v;
}

}  // namespace conesq
