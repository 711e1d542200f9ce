#include "fdwlan/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fdwlan/errors.hpp"

namespace fdwlan {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw InvalidParameter("config key '" + key + "': expected integer, got '" + v + "'");
    }
}

int64_t to_i64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InvalidParameter("config key '" + key + "': expected integer, got '" + v + "'");
    }
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos, 0);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InvalidParameter("config key '" + key + "': expected unsigned integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InvalidParameter("config key '" + key + "': expected number, got '" + v + "'");
    }
}

}  // namespace

IniData parse_ini(const std::string& text) {
    IniData data;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidParameter("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            data[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InvalidParameter("config line " + std::to_string(lineno) + ": empty key");
        data[section][key] = value;
    }
    return data;
}

IniData load_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_ini(ss.str());
}

void apply_phy_mac(const IniData& ini, PhyMacParams& p) {
    const auto it = ini.find("phy_mac");
    if (it == ini.end()) return;
    for (const auto& [key, v] : it->second) {
        if (key == "phy_header_us") p.phy_header_us = to_double(key, v);
        else if (key == "mac_header_bytes") p.mac_header_bytes = to_int(key, v);
        else if (key == "fcs_bytes") p.fcs_bytes = to_int(key, v);
        else if (key == "ack_bytes") p.ack_bytes = to_int(key, v);
        else if (key == "mpdu_max_bytes") p.mpdu_max_bytes = to_int(key, v);
        else if (key == "data_rate_mbps") p.data_rate_mbps = to_double(key, v);
        else if (key == "basic_rate_mbps") p.basic_rate_mbps = to_double(key, v);
        else if (key == "slot_us") p.slot_us = to_double(key, v);
        else if (key == "sifs_us") p.sifs_us = to_double(key, v);
        else if (key == "difs_us") p.difs_us = to_double(key, v);
        else if (key == "cw_min") p.cw_min = to_int(key, v);
        else if (key == "cw_max") p.cw_max = to_int(key, v);
        else throw InvalidParameter("unknown [phy_mac] key '" + key + "'");
    }
    p.validate();
}

BackoffParams make_backoff(const IniData& ini, const PhyMacParams& params) {
    int w0 = params.cw_min;
    int m = params.max_backoff_stage();
    int r = kDefaultRetryLimit;
    const auto it = ini.find("backoff");
    if (it != ini.end()) {
        for (const auto& [key, v] : it->second) {
            if (key == "w0") w0 = to_int(key, v);
            else if (key == "m") m = to_int(key, v);
            else if (key == "r") r = to_int(key, v);
            else throw InvalidParameter("unknown [backoff] key '" + key + "'");
        }
    }
    return BackoffParams(w0, m, r);
}

void apply_scenario(const IniData& ini, Scenario& sc) {
    const auto it = ini.find("scenario");
    if (it == ini.end()) return;
    for (const auto& [key, v] : it->second) {
        if (key == "n") sc.n = to_int(key, v);
        else if (key == "duplex") sc.duplex = parse_duplex(v);
        else if (key == "aggregation") sc.aggregation = parse_aggregation_mode(v);
        else if (key == "rho") sc.rho = RhoSpec::parse(v);
        else if (key == "horizon_events") sc.horizon_events = to_i64(key, v);
        else if (key == "seed") sc.seed = to_u64(key, v);
        else if (key == "runs") sc.runs = to_int(key, v);
        else throw InvalidParameter("unknown [scenario] key '" + key + "'");
    }
}

Scenario scenario_from_config(const std::string& path) {
    Scenario sc;
    if (path.empty()) {
        sc.backoff = BackoffParams::from_phy(sc.phy_mac);
        return sc;
    }
    const IniData ini = load_ini(path);
    apply_phy_mac(ini, sc.phy_mac);
    sc.backoff = make_backoff(ini, sc.phy_mac);
    apply_scenario(ini, sc);
    return sc;
}

std::optional<std::string> default_config_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("IBFD_DCF_CONFIG"); env && *env) return std::string(env);
    return std::nullopt;
}

}  // namespace fdwlan
