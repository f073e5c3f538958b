#include "dcgridsim/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dcgridsim::io {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

/// Section/key store that tracks consumption so leftovers can be rejected.
class KeyStore {
public:
    void put(const std::string& section, const std::string& key, const std::string& value) {
        data_[section][key] = value;
    }
    bool has_section(const std::string& s) const { return data_.count(s) > 0; }

    std::string take(const std::string& section, const std::string& key, const std::string& dflt,
                     bool* present = nullptr) {
        auto sit = data_.find(section);
        if (sit == data_.end()) {
            if (present) *present = false;
            return dflt;
        }
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) {
            if (present) *present = false;
            return dflt;
        }
        const std::string v = kit->second;
        sit->second.erase(kit);
        if (present) *present = true;
        return v;
    }
    double take_double(const std::string& section, const std::string& key, double dflt) {
        bool present = false;
        const std::string v = take(section, key, "", &present);
        if (!present) return dflt;
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x))
            throw std::invalid_argument("config: bad number for " + section + "." + key + ": '" +
                                        v + "'");
        return x;
    }
    long long take_int(const std::string& section, const std::string& key, long long dflt) {
        bool present = false;
        const std::string v = take(section, key, "", &present);
        if (!present) return dflt;
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("config: bad integer for " + section + "." + key);
        return x;
    }
    bool take_bool(const std::string& section, const std::string& key, bool dflt) {
        bool present = false;
        std::string v = take(section, key, "", &present);
        if (!present) return dflt;
        std::transform(v.begin(), v.end(), v.begin(), ::tolower);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw std::invalid_argument("config: bad boolean for " + section + "." + key);
    }

    void reject_leftovers() const {
        for (const auto& [section, keys] : data_)
            for (const auto& [key, value] : keys)
                throw std::invalid_argument("config: unknown key '" + section + "." + key + "'");
    }

private:
    std::map<std::string, std::map<std::string, std::string>> data_;
};

KeyStore tokenize(const std::string& text) {
    KeyStore ks;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    static const char* kSections[] = {"run",  "market", "servers",    "chiller",
                                      "tank", "room",   "aux",        "scheduling",
                                      "tracking"};
    while (std::getline(in, line)) {
        ++lineno;
        const auto cpos = line.find_first_of(";#");
        if (cpos != std::string::npos) line.erase(cpos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config:" + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            const bool known = std::any_of(std::begin(kSections), std::end(kSections),
                                           [&](const char* s) { return section == s; });
            if (!known)
                throw std::invalid_argument("config: unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config:" + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw std::invalid_argument("config:" + std::to_string(lineno) + ": key before any section");
        ks.put(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return ks;
}

} // namespace

FullConfig parse_config(const std::string& text) {
    KeyStore ks = tokenize(text);
    FullConfig c;
    auto& m = c.manifest;
    auto& s = c.setup;

    m.workload_path = ks.take("run", "workload", "");
    m.price_energy_path = ks.take("run", "price_energy", "");
    m.price_regulation_path = ks.take("run", "price_regulation", "");
    m.regd_path = ks.take("run", "regd", "");
    m.wetbulb_path = ks.take("run", "wetbulb", "");
    m.regd_hist_path = ks.take("run", "regd_hist", "");
    m.out_dir = ks.take("run", "out_dir", m.out_dir);
    m.scenario = ks.take("run", "scenario", m.scenario);
    const std::string start = ks.take("run", "start", "2018-07-01T00:00:00");
    m.start_s = parse_iso8601(start);
    m.hours = static_cast<int>(ks.take_int("run", "hours", m.hours));
    m.seed = static_cast<std::uint64_t>(ks.take_int("run", "seed", static_cast<long long>(m.seed)));
    m.cop_derate = ks.take_bool("run", "cop_derate", m.cop_derate);
    m.reduced_order_rollout =
        ks.take_bool("run", "reduced_order_rollout", m.reduced_order_rollout);

    std::vector<std::string> missing;
    if (m.workload_path.empty()) missing.push_back("run.workload");
    if (m.price_energy_path.empty()) missing.push_back("run.price_energy");
    if (m.price_regulation_path.empty()) missing.push_back("run.price_regulation");
    if (m.regd_path.empty()) missing.push_back("run.regd");
    if (m.wetbulb_path.empty()) missing.push_back("run.wetbulb");
    if (!missing.empty()) {
        std::string msg = "config: required series paths missing:";
        for (const auto& k : missing) msg += " " + k;
        throw std::invalid_argument(msg);
    }
    if (m.hours < 1) throw std::invalid_argument("config: run.hours must be >= 1");

    c.demand_price = ks.take_double("market", "demand_price", c.demand_price);
    c.demand_limit_bl_kw = ks.take_double("market", "demand_limit_bl_kw", c.demand_limit_bl_kw);
    c.demand_limit_opbl_kw =
        ks.take_double("market", "demand_limit_opbl_kw", c.demand_limit_opbl_kw);

    auto& ag = s.params.servers;
    ag.n_servers_total = static_cast<int>(ks.take_int("servers", "n_total", ag.n_servers_total));
    ag.b0 = ks.take_double("servers", "b0", ag.b0);
    ag.b1 = ks.take_double("servers", "b1", ag.b1);
    ag.b2 = ks.take_double("servers", "b2", ag.b2);
    ag.c0 = ks.take_double("servers", "c0", ag.c0);
    ag.c1 = ks.take_double("servers", "c1", ag.c1);
    ag.service_rate_k = ks.take_double("servers", "k", ag.service_rate_k);
    ag.design_redundancy = ks.take_double("servers", "gamma", ag.design_redundancy);
    ag.fr_flexibility = ks.take_double("servers", "beta", ag.fr_flexibility);
    ag.arrival_cv = ks.take_double("servers", "ca", ag.arrival_cv);
    ag.service_cv = ks.take_double("servers", "cb", ag.service_cv);
    ag.response_cap_s = ks.take_double("servers", "response_cap_s", ag.response_cap_s);
    ag.freq_max = ks.take_double("servers", "f_max", ag.freq_max);
    ag.validate();

    s.chiller_capacity_kw = ks.take_double("chiller", "capacity_kw", s.chiller_capacity_kw);
    s.chiller_cop = ks.take_double("chiller", "cop", s.chiller_cop);
    s.chiller_tau_s = ks.take_double("chiller", "tau_s", s.chiller_tau_s);
    const double min_frac = ks.take_double("chiller", "min_load_frac", 0.05);
    s.params.cop_derate_per_k = ks.take_double("chiller", "derate_per_k", 0.015);
    s.params.wetbulb_design_c = ks.take_double("chiller", "wetbulb_design_c", 25.0);
    s.params.cop_derate_enabled = m.cop_derate;
    if (!(min_frac > 0.0 && min_frac < 1.0))
        throw std::invalid_argument("config: chiller.min_load_frac must lie in (0, 1)");
    s.params.limits.chiller_max_kw = s.chiller_capacity_kw;
    s.params.limits.chiller_min_kw = min_frac * s.chiller_capacity_kw;

    s.tank_volumes = static_cast<int>(ks.take_int("tank", "n_volumes", s.tank_volumes));
    const double hours_at_nominal = ks.take_double("tank", "hours_at_nominal", 4.0);
    s.tank_capacity_kj = s.chiller_capacity_kw * hours_at_nominal * 3600.0;
    s.tank_cp_kj_per_kg_k = ks.take_double("tank", "cp", s.tank_cp_kj_per_kg_k);
    s.params.t_discharge_inlet_c = ks.take_double("tank", "t_top_c", 12.0);
    s.params.t_charge_inlet_c = ks.take_double("tank", "t_bottom_c", 5.0);
    s.tank_initial_soc = ks.take_double("tank", "initial_soc", s.tank_initial_soc);
    s.params.flow_pi.mdot_max_kgps = ks.take_double("tank", "mdot_max_kgps", 52.6);
    s.params.flow_pi.kp = ks.take_double("tank", "flow_kp", s.params.flow_pi.kp);
    s.params.flow_pi.ki = ks.take_double("tank", "flow_ki", s.params.flow_pi.ki);
    if (s.tank_volumes < 2) throw std::invalid_argument("config: tank.n_volumes must be >= 2");
    if (!(s.params.t_discharge_inlet_c > s.params.t_charge_inlet_c))
        throw std::invalid_argument("config: tank nominal temperatures inverted");
    if (s.tank_initial_soc < 0.0 || s.tank_initial_soc > 1.0)
        throw std::invalid_argument("config: tank.initial_soc outside [0, 1]");
    const double charge_cap = s.params.flow_pi.mdot_max_kgps * s.tank_cp_kj_per_kg_k *
                              (s.params.t_discharge_inlet_c - s.params.t_charge_inlet_c);
    s.params.limits.charge_max_kw = charge_cap;
    s.params.limits.charge_min_kw = -charge_cap;

    s.room_setpoint_c = ks.take_double("room", "setpoint_c", s.room_setpoint_c);
    s.room_band_k = ks.take_double("room", "band_k", s.room_band_k);
    s.room_capacitance_kj_per_k =
        ks.take_double("room", "capacitance_kj_per_k", s.room_capacitance_kj_per_k);
    s.room_initial_c = ks.take_double("room", "initial_c", s.room_initial_c);

    s.params.aux.pump_primary_kw = ks.take_double("aux", "pump_primary_kw", 7.0);
    s.params.aux.pump_secondary_kw = ks.take_double("aux", "pump_secondary_kw", 22.5);
    s.params.aux.pump_condenser_kw = ks.take_double("aux", "pump_condenser_kw", 30.0);
    s.params.aux.pump_transfer_kw = ks.take_double("aux", "pump_transfer_kw", 4.0);
    s.params.aux.tower_fan_kw = ks.take_double("aux", "tower_fan_kw", 86.0);
    s.params.aux.supply_fan_kw = ks.take_double("aux", "supply_fan_kw", 210.0);
    s.params.aux.fan_design_load_kw = s.chiller_capacity_kw;

    s.sched.horizon_h = static_cast<int>(ks.take_int("scheduling", "horizon_h", 12));
    s.sched.soc_min = ks.take_double("scheduling", "soc_min", 0.05);
    s.sched.soc_max = ks.take_double("scheduling", "soc_max", 0.95);
    s.sched.penalty_soc = ks.take_double("scheduling", "penalty_soc", 1000.0);
    s.sched.penalty_room = ks.take_double("scheduling", "penalty_room", 1000.0);
    s.sched.solver_max_evals =
        static_cast<int>(ks.take_int("scheduling", "solver_max_evals", 900));
    s.sched.reduced_order_rollout = m.reduced_order_rollout;
    s.sched.demand_price = c.demand_price;
    s.onpeak.start_hour = static_cast<int>(ks.take_int("scheduling", "onpeak_start", 11));
    s.onpeak.end_hour = static_cast<int>(ks.take_int("scheduling", "onpeak_end", 19));
    s.sched.validate();
    if (s.onpeak.start_hour < 0 || s.onpeak.end_hour > 24 ||
        s.onpeak.start_hour >= s.onpeak.end_hour)
        throw std::invalid_argument("config: bad on-peak window");

    s.pid.kp = ks.take_double("tracking", "pid_kp", 0.0);
    s.pid.ki = ks.take_double("tracking", "pid_ki", 0.0);
    s.pid.kd = ks.take_double("tracking", "pid_kd", 0.0);

    ks.reject_leftovers();
    return c;
}

std::string serialize_config(const FullConfig& c) {
    std::ostringstream os;
    const auto& m = c.manifest;
    const auto& s = c.setup;
    os.precision(17);
    os << "[run]\n"
       << "workload = " << m.workload_path << "\n"
       << "price_energy = " << m.price_energy_path << "\n"
       << "price_regulation = " << m.price_regulation_path << "\n"
       << "regd = " << m.regd_path << "\n"
       << "wetbulb = " << m.wetbulb_path << "\n";
    if (!m.regd_hist_path.empty()) os << "regd_hist = " << m.regd_hist_path << "\n";
    os << "out_dir = " << m.out_dir << "\n"
       << "scenario = " << m.scenario << "\n"
       << "start = " << format_iso8601(m.start_s) << "\n"
       << "hours = " << m.hours << "\n"
       << "seed = " << m.seed << "\n"
       << "cop_derate = " << (m.cop_derate ? "true" : "false") << "\n"
       << "reduced_order_rollout = " << (m.reduced_order_rollout ? "true" : "false") << "\n";
    os << "\n[market]\n"
       << "demand_price = " << c.demand_price << "\n"
       << "demand_limit_bl_kw = " << c.demand_limit_bl_kw << "\n"
       << "demand_limit_opbl_kw = " << c.demand_limit_opbl_kw << "\n";
    const auto& ag = s.params.servers;
    os << "\n[servers]\n"
       << "n_total = " << ag.n_servers_total << "\n"
       << "b0 = " << ag.b0 << "\nb1 = " << ag.b1 << "\nb2 = " << ag.b2 << "\n"
       << "c0 = " << ag.c0 << "\nc1 = " << ag.c1 << "\n"
       << "k = " << ag.service_rate_k << "\n"
       << "gamma = " << ag.design_redundancy << "\n"
       << "beta = " << ag.fr_flexibility << "\n"
       << "ca = " << ag.arrival_cv << "\ncb = " << ag.service_cv << "\n"
       << "response_cap_s = " << ag.response_cap_s << "\n"
       << "f_max = " << ag.freq_max << "\n";
    os << "\n[chiller]\n"
       << "capacity_kw = " << s.chiller_capacity_kw << "\n"
       << "cop = " << s.chiller_cop << "\n"
       << "tau_s = " << s.chiller_tau_s << "\n"
       << "min_load_frac = " << s.params.limits.chiller_min_kw / s.chiller_capacity_kw << "\n"
       << "derate_per_k = " << s.params.cop_derate_per_k << "\n"
       << "wetbulb_design_c = " << s.params.wetbulb_design_c << "\n";
    os << "\n[tank]\n"
       << "n_volumes = " << s.tank_volumes << "\n"
       << "hours_at_nominal = " << s.tank_capacity_kj / (s.chiller_capacity_kw * 3600.0) << "\n"
       << "cp = " << s.tank_cp_kj_per_kg_k << "\n"
       << "t_top_c = " << s.params.t_discharge_inlet_c << "\n"
       << "t_bottom_c = " << s.params.t_charge_inlet_c << "\n"
       << "initial_soc = " << s.tank_initial_soc << "\n"
       << "mdot_max_kgps = " << s.params.flow_pi.mdot_max_kgps << "\n"
       << "flow_kp = " << s.params.flow_pi.kp << "\n"
       << "flow_ki = " << s.params.flow_pi.ki << "\n";
    os << "\n[room]\n"
       << "setpoint_c = " << s.room_setpoint_c << "\n"
       << "band_k = " << s.room_band_k << "\n"
       << "capacitance_kj_per_k = " << s.room_capacitance_kj_per_k << "\n"
       << "initial_c = " << s.room_initial_c << "\n";
    os << "\n[aux]\n"
       << "pump_primary_kw = " << s.params.aux.pump_primary_kw << "\n"
       << "pump_secondary_kw = " << s.params.aux.pump_secondary_kw << "\n"
       << "pump_condenser_kw = " << s.params.aux.pump_condenser_kw << "\n"
       << "pump_transfer_kw = " << s.params.aux.pump_transfer_kw << "\n"
       << "tower_fan_kw = " << s.params.aux.tower_fan_kw << "\n"
       << "supply_fan_kw = " << s.params.aux.supply_fan_kw << "\n";
    os << "\n[scheduling]\n"
       << "horizon_h = " << s.sched.horizon_h << "\n"
       << "soc_min = " << s.sched.soc_min << "\n"
       << "soc_max = " << s.sched.soc_max << "\n"
       << "penalty_soc = " << s.sched.penalty_soc << "\n"
       << "penalty_room = " << s.sched.penalty_room << "\n"
       << "solver_max_evals = " << s.sched.solver_max_evals << "\n"
       << "onpeak_start = " << s.onpeak.start_hour << "\n"
       << "onpeak_end = " << s.onpeak.end_hour << "\n";
    os << "\n[tracking]\n"
       << "pid_kp = " << s.pid.kp << "\n"
       << "pid_ki = " << s.pid.ki << "\n"
       << "pid_kd = " << s.pid.kd << "\n";
    return os.str();
}

FullConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    FullConfig c = parse_config(buf.str());

    const auto base = std::filesystem::path(path).parent_path();
    const auto resolve = [&](std::string& p) {
        if (p.empty()) return;
        std::filesystem::path fp(p);
        if (fp.is_relative()) p = (base / fp).string();
    };
    resolve(c.manifest.workload_path);
    resolve(c.manifest.price_energy_path);
    resolve(c.manifest.price_regulation_path);
    resolve(c.manifest.regd_path);
    resolve(c.manifest.wetbulb_path);
    resolve(c.manifest.regd_hist_path);
    return c;
}

sim::SimInputs load_inputs(const FullConfig& c) {
    sim::SimInputs in;
    in.workload = load_series_csv(c.manifest.workload_path);
    in.wetbulb = load_series_csv(c.manifest.wetbulb_path);
    in.market.energy_price = load_series_csv(c.manifest.price_energy_path);
    in.market.regulation_price = load_series_csv(c.manifest.price_regulation_path);
    in.market.reg_signal = load_series_csv(c.manifest.regd_path);
    in.market.demand_price = c.demand_price;
    if (!c.manifest.regd_hist_path.empty())
        in.regd_hist = load_series_csv(c.manifest.regd_hist_path);
    return in;
}

} // namespace dcgridsim::io
