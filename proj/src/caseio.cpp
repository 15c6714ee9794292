#include "coopt/caseio.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace coopt {

using json = nlohmann::ordered_json;

CaseIoError::CaseIoError(std::string k, std::vector<Issue> iss)
    : std::runtime_error(k + " error\n" + format_issues(iss)), kind(std::move(k)),
      issues(std::move(iss)) {}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CaseIoError("parse", {{"FileError", path, "cannot open file", false}});
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace {

struct SchemaReader {
    std::vector<Issue> issues;

    void err(const std::string& where, const std::string& msg) {
        issues.push_back({"SchemaError", where, msg, false});
    }
    bool require(const json& j, const std::string& where, const char* key, json::value_t kind,
                 bool numeric_ok = false) {
        if (!j.contains(key)) {
            err(where + "." + key, "missing required field");
            return false;
        }
        const auto& v = j.at(key);
        if (numeric_ok && v.is_number()) return true;
        if (v.type() != kind && !(kind == json::value_t::number_float && v.is_number())) {
            err(where + "." + key, "wrong type");
            return false;
        }
        return true;
    }
    double num(const json& j, const std::string& where, const char* key, bool* ok) {
        if (!require(j, where, key, json::value_t::number_float, true)) { *ok = false; return 0.0; }
        return j.at(key).get<double>();
    }
    std::string str(const json& j, const std::string& where, const char* key, bool* ok) {
        if (!require(j, where, key, json::value_t::string)) { *ok = false; return {}; }
        return j.at(key).get<std::string>();
    }
};

} // namespace

MarketCase parse_case_json(const std::string& text, bool strict, std::vector<Issue>* warnings) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CaseIoError("parse", {{"ParseError", "byte " + std::to_string(e.byte), e.what(), false}});
    }

    SchemaReader rd;
    MarketCase c;
    bool ok = true;

    if (rd.require(j, "", "meta", json::value_t::object)) {
        const auto& m = j["meta"];
        c.name = m.contains("name") && m["name"].is_string() ? m["name"].get<std::string>() : "";
        if (!rd.require(m, "meta", "periods", json::value_t::number_unsigned, true)) ok = false;
        else if (!m["periods"].is_number_integer() || m["periods"].get<int>() < 1)
            rd.err("meta.periods", "must be a positive integer");
    }
    if (j.contains("options") && j["options"].is_object()) {
        const auto& o = j["options"];
        if (o.contains("slack_bus")) {
            if (o["slack_bus"].is_string()) c.grid.slack_bus = o["slack_bus"].get<std::string>();
            else rd.err("options.slack_bus", "wrong type");
        }
    }
    if (rd.require(j, "", "buses", json::value_t::array)) {
        for (size_t i = 0; i < j["buses"].size(); ++i) {
            if (!j["buses"][i].is_string()) rd.err("buses[" + std::to_string(i) + "]", "must be a string");
            else c.grid.buses.push_back(j["buses"][i].get<std::string>());
        }
    }
    if (rd.require(j, "", "lines", json::value_t::array)) {
        for (size_t i = 0; i < j["lines"].size(); ++i) {
            const std::string where = "lines[" + std::to_string(i) + "]";
            const auto& e = j["lines"][i];
            if (!e.is_object()) { rd.err(where, "must be an object"); continue; }
            Line ln;
            bool lok = true;
            ln.id = rd.str(e, where, "id", &lok);
            ln.from = rd.str(e, where, "from", &lok);
            ln.to = rd.str(e, where, "to", &lok);
            ln.reactance = rd.num(e, where, "reactance", &lok);
            ln.limit = rd.num(e, where, "limit", &lok);
            if (e.contains("scenario_limit")) {
                if (e["scenario_limit"].is_number()) ln.scenario_limit = e["scenario_limit"].get<double>();
                else rd.err(where + ".scenario_limit", "wrong type");
            }
            if (lok) c.grid.lines.push_back(std::move(ln));
        }
    }
    if (rd.require(j, "", "generators", json::value_t::array)) {
        for (size_t i = 0; i < j["generators"].size(); ++i) {
            const std::string where = "generators[" + std::to_string(i) + "]";
            const auto& e = j["generators"][i];
            if (!e.is_object()) { rd.err(where, "must be an object"); continue; }
            GeneratorParams g;
            bool gok = true;
            g.id = rd.str(e, where, "id", &gok);
            g.bus = rd.str(e, where, "bus", &gok);
            g.energy_bid = rd.num(e, where, "energy_bid", &gok);
            g.reserve_up_bid = rd.num(e, where, "reserve_up_bid", &gok);
            g.reserve_down_bid = rd.num(e, where, "reserve_down_bid", &gok);
            g.redispatch_up_price = rd.num(e, where, "redispatch_up_price", &gok);
            g.redispatch_down_price = rd.num(e, where, "redispatch_down_price", &gok);
            g.min_output = rd.num(e, where, "min_output", &gok);
            g.max_output = rd.num(e, where, "max_output", &gok);
            g.reserve_up_cap = rd.num(e, where, "reserve_up_cap", &gok);
            g.reserve_down_cap = rd.num(e, where, "reserve_down_cap", &gok);
            g.ramp_up = rd.num(e, where, "ramp_up", &gok);
            g.ramp_down = rd.num(e, where, "ramp_down", &gok);
            if (gok) c.generators.push_back(std::move(g));
        }
    }
    if (rd.require(j, "", "loads", json::value_t::array)) {
        for (size_t i = 0; i < j["loads"].size(); ++i) {
            const std::string where = "loads[" + std::to_string(i) + "]";
            const auto& e = j["loads"][i];
            if (!e.is_object()) { rd.err(where, "must be an object"); continue; }
            LoadParams l;
            bool lok = true;
            l.id = rd.str(e, where, "id", &lok);
            l.bus = rd.str(e, where, "bus", &lok);
            const double maxd = rd.num(e, where, "max_demand", &lok);
            l.shed_price = rd.num(e, where, "shed_price", &lok);
            if (lok) {
                c.loads.push_back(std::move(l));
                c.demand.max_demand.push_back(maxd);
            }
        }
    }
    if (rd.require(j, "", "load_coefficients", json::value_t::array)) {
        const auto& a = j["load_coefficients"];
        const int T = j.contains("meta") && j["meta"].contains("periods") &&
                              j["meta"]["periods"].is_number_integer()
                          ? j["meta"]["periods"].get<int>()
                          : -1;
        if (T >= 0 && static_cast<int>(a.size()) != T)
            rd.err("load_coefficients", "length " + std::to_string(a.size()) +
                                            " does not match meta.periods = " + std::to_string(T));
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number()) rd.err("load_coefficients[" + std::to_string(i) + "]", "must be a number");
            else c.demand.coefficients.push_back(a[i].get<double>());
        }
    }
    if (j.contains("scenarios")) {
        if (!j["scenarios"].is_array()) rd.err("scenarios", "must be an array");
        else {
            for (size_t i = 0; i < j["scenarios"].size(); ++i) {
                const std::string where = "scenarios[" + std::to_string(i) + "]";
                const auto& e = j["scenarios"][i];
                if (!e.is_object()) { rd.err(where, "must be an object"); continue; }
                NonBaseScenario s;
                bool sok = true;
                s.id = rd.str(e, where, "id", &sok);
                s.probability = rd.num(e, where, "probability", &sok);
                if (e.contains("outages")) {
                    if (!e["outages"].is_array()) rd.err(where + ".outages", "must be an array");
                    else
                        for (const auto& o : e["outages"]) {
                            if (o.is_string()) s.outages.push_back(o.get<std::string>());
                            else rd.err(where + ".outages", "entries must be strings");
                        }
                }
                if (e.contains("fluctuation")) {
                    const auto& f = e["fluctuation"];
                    const std::string fw = where + ".fluctuation";
                    if (!f.is_object()) rd.err(fw, "must be an object");
                    else {
                        const std::string type =
                            f.contains("type") && f["type"].is_string() ? f["type"].get<std::string>() : "";
                        if (type == "percent") {
                            s.fluctuation.kind = FluctuationRule::Kind::Percent;
                            if (f.contains("default")) {
                                if (f["default"].is_number())
                                    s.fluctuation.percent_default = f["default"].get<double>();
                                else rd.err(fw + ".default", "must be a number");
                            }
                            if (f.contains("overrides")) {
                                if (!f["overrides"].is_object()) rd.err(fw + ".overrides", "must be an object");
                                else
                                    for (const auto& [k, v] : f["overrides"].items()) {
                                        if (v.is_number()) s.fluctuation.percent_overrides[k] = v.get<double>();
                                        else rd.err(fw + ".overrides." + k, "must be a number");
                                    }
                            }
                        } else if (type == "mw") {
                            s.fluctuation.kind = FluctuationRule::Kind::ExplicitMw;
                            if (f.contains("values") && f["values"].is_object()) {
                                for (const auto& [k, v] : f["values"].items()) {
                                    if (!v.is_array()) { rd.err(fw + ".values." + k, "must be an array"); continue; }
                                    std::vector<double> series;
                                    for (const auto& x : v) {
                                        if (x.is_number()) series.push_back(x.get<double>());
                                        else rd.err(fw + ".values." + k, "entries must be numbers");
                                    }
                                    s.fluctuation.mw[k] = std::move(series);
                                }
                            } else rd.err(fw + ".values", "missing per-load series");
                        } else rd.err(fw + ".type", "must be \"percent\" or \"mw\"");
                    }
                }
                if (sok) c.scenarios.scenarios.push_back(std::move(s));
            }
        }
    }
    if (j.contains("initial_state")) {
        const auto& s = j["initial_state"];
        if (!s.is_object()) rd.err("initial_state", "must be an object");
        else {
            InitialState st;
            const size_t J = c.generators.size();
            st.g.assign(J, 0.0);
            st.reserve_up.assign(J, 0.0);
            st.reserve_down.assign(J, 0.0);
            auto fill = [&](const char* key, std::vector<double>& dst) {
                if (!s.contains(key)) return;
                if (!s[key].is_object()) { rd.err(std::string("initial_state.") + key, "must be an object"); return; }
                for (const auto& [k, v] : s[key].items()) {
                    const int gix = c.generator_index(k);
                    if (gix < 0) rd.err(std::string("initial_state.") + key + "." + k, "unknown generator");
                    else if (!v.is_number()) rd.err(std::string("initial_state.") + key + "." + k, "must be a number");
                    else dst[gix] = v.get<double>();
                }
            };
            fill("g", st.g);
            fill("reserve_up", st.reserve_up);
            fill("reserve_down", st.reserve_down);
            c.initial_state = std::move(st);
        }
    }

    (void)ok;
    if (!rd.issues.empty()) throw CaseIoError("schema", std::move(rd.issues));

    std::vector<Issue> sem = validate_case(c);
    std::vector<Issue> errors;
    for (auto& i : sem) {
        if (i.warning && !strict) {
            if (warnings) warnings->push_back(i);
        } else {
            errors.push_back(i);
        }
    }
    if (!errors.empty()) throw CaseIoError("semantic", std::move(errors));
    return c;
}

MarketCase load_case(const std::string& path, bool strict, std::vector<Issue>* warnings) {
    return parse_case_json(read_file(path), strict, warnings);
}

std::string serialize_case(const MarketCase& c) {
    json j;
    j["meta"] = {{"name", c.name}, {"periods", c.periods()}};
    if (!c.grid.slack_bus.empty()) j["options"] = {{"slack_bus", c.grid.slack_bus}};
    j["buses"] = c.grid.buses;
    j["lines"] = json::array();
    for (const auto& ln : c.grid.lines) {
        json e = {{"id", ln.id}, {"from", ln.from}, {"to", ln.to},
                  {"reactance", ln.reactance}, {"limit", ln.limit}};
        if (ln.scenario_limit) e["scenario_limit"] = *ln.scenario_limit;
        j["lines"].push_back(std::move(e));
    }
    j["generators"] = json::array();
    for (const auto& g : c.generators)
        j["generators"].push_back({{"id", g.id},
                                   {"bus", g.bus},
                                   {"energy_bid", g.energy_bid},
                                   {"reserve_up_bid", g.reserve_up_bid},
                                   {"reserve_down_bid", g.reserve_down_bid},
                                   {"redispatch_up_price", g.redispatch_up_price},
                                   {"redispatch_down_price", g.redispatch_down_price},
                                   {"min_output", g.min_output},
                                   {"max_output", g.max_output},
                                   {"reserve_up_cap", g.reserve_up_cap},
                                   {"reserve_down_cap", g.reserve_down_cap},
                                   {"ramp_up", g.ramp_up},
                                   {"ramp_down", g.ramp_down}});
    j["loads"] = json::array();
    for (int l = 0; l < c.num_loads(); ++l)
        j["loads"].push_back({{"id", c.loads[l].id},
                              {"bus", c.loads[l].bus},
                              {"max_demand", c.demand.max_demand[l]},
                              {"shed_price", c.loads[l].shed_price}});
    j["load_coefficients"] = c.demand.coefficients;
    j["scenarios"] = json::array();
    for (const auto& s : c.scenarios.scenarios) {
        json e = {{"id", s.id}, {"probability", s.probability}, {"outages", s.outages}};
        if (s.fluctuation.kind == FluctuationRule::Kind::Percent) {
            json f = {{"type", "percent"}, {"default", s.fluctuation.percent_default}};
            if (!s.fluctuation.percent_overrides.empty()) {
                json o;
                for (const auto& [k, v] : s.fluctuation.percent_overrides) o[k] = v;
                f["overrides"] = std::move(o);
            }
            e["fluctuation"] = std::move(f);
        } else {
            json vals;
            for (const auto& [k, v] : s.fluctuation.mw) vals[k] = v;
            e["fluctuation"] = {{"type", "mw"}, {"values", std::move(vals)}};
        }
        j["scenarios"].push_back(std::move(e));
    }
    if (c.initial_state) {
        json g, ru, rd;
        for (int i = 0; i < c.num_generators(); ++i) {
            g[c.generators[i].id] = c.initial_state->g[i];
            ru[c.generators[i].id] = c.initial_state->reserve_up[i];
            rd[c.generators[i].id] = c.initial_state->reserve_down[i];
        }
        j["initial_state"] = {{"g", std::move(g)}, {"reserve_up", std::move(ru)},
                              {"reserve_down", std::move(rd)}};
    }
    return j.dump(2) + "\n";
}

// --- sha256 (FIPS 180-4, compact) ---------------------------------------

namespace {
inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }
}

std::string sha256_hex(const std::string& bytes) {
    static const std::uint32_t K[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                          0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

    std::string msg = bytes;
    const std::uint64_t bitlen = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bitlen >> (8 * i)) & 0xff));

    for (size_t off = 0; off < msg.size(); off += 64) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (static_cast<std::uint8_t>(msg[off + 4 * i]) << 24) |
                   (static_cast<std::uint8_t>(msg[off + 4 * i + 1]) << 16) |
                   (static_cast<std::uint8_t>(msg[off + 4 * i + 2]) << 8) |
                   static_cast<std::uint8_t>(msg[off + 4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], cc = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
                      hh = h[7];
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            const std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t mj = (a & b) ^ (a & cc) ^ (b & cc);
            const std::uint32_t t2 = S0 + mj;
            hh = g; g = f; f = e; e = d + t1; d = cc; cc = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += cc; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
    char out[65];
    for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
    return std::string(out, 64);
}

// --- CSV -----------------------------------------------------------------

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}
std::string money(double v) { return fmt(v, "%.2f"); }

} // namespace

void write_solution_csv(std::ostream& os, const PreparedCase& pc, const CooptSolution& sol) {
    os << "kind,family,period,scenario,id,value\n";
    const auto& c = pc.data;
    auto scen_id = [&](int k) { return c.scenarios.scenarios[k].id; };
    for (int t = 0; t < sol.T; ++t) {
        for (int j = 0; j < sol.J; ++j) {
            const auto& id = c.generators[j].id;
            os << "primal,g," << t + 1 << ",," << id << ',' << fmt(sol.g[sol.tj(t, j)]) << '\n';
            os << "primal,r_up," << t + 1 << ",," << id << ',' << fmt(sol.r_up[sol.tj(t, j)]) << '\n';
            os << "primal,r_down," << t + 1 << ",," << id << ',' << fmt(sol.r_down[sol.tj(t, j)]) << '\n';
        }
        for (int k = 0; k < sol.K; ++k) {
            for (int j = 0; j < sol.J; ++j) {
                const auto& id = c.generators[j].id;
                os << "primal,redispatch_up," << t + 1 << ',' << scen_id(k) << ',' << id << ','
                   << fmt(sol.redisp_up[sol.tkj(t, k, j)]) << '\n';
                os << "primal,redispatch_down," << t + 1 << ',' << scen_id(k) << ',' << id << ','
                   << fmt(sol.redisp_down[sol.tkj(t, k, j)]) << '\n';
            }
            for (int l = 0; l < sol.L; ++l)
                os << "primal,shed," << t + 1 << ',' << scen_id(k) << ',' << c.loads[l].id << ','
                   << fmt(sol.shed[sol.tkl(t, k, l)]) << '\n';
        }
    }
    const int NL = c.grid.num_lines();
    for (int t = 0; t < sol.T; ++t) {
        os << "dual,balance," << t + 1 << ",,," << fmt(sol.balance_dual[t]) << '\n';
        for (int ln = 0; ln < NL; ++ln)
            os << "dual,flow," << t + 1 << ",," << c.grid.lines[ln].id << ','
               << fmt(sol.flow_dual[t * NL + ln]) << '\n';
        for (int j = 0; j < sol.J; ++j) {
            const auto& id = c.generators[j].id;
            const int ij = sol.tj(t, j);
            os << "dual,cap_lo," << t + 1 << ",," << id << ',' << fmt(sol.cap_lo_dual[ij]) << '\n';
            os << "dual,cap_hi," << t + 1 << ",," << id << ',' << fmt(sol.cap_hi_dual[ij]) << '\n';
            os << "dual,ramp_up," << t + 1 << ",," << id << ',' << fmt(sol.ramp_up_dual[ij]) << '\n';
            os << "dual,ramp_down," << t + 1 << ",," << id << ',' << fmt(sol.ramp_dn_dual[ij]) << '\n';
        }
        for (int k = 0; k < sol.K; ++k) {
            os << "dual,scenario_balance," << t + 1 << ',' << scen_id(k) << ",,"
               << fmt(sol.s_balance_dual[sol.tk(t, k)]) << '\n';
            const auto& rows = sol.s_flow_dual[sol.tk(t, k)];
            for (size_t ln = 0; ln < rows.size(); ++ln)
                os << "dual,scenario_flow," << t + 1 << ',' << scen_id(k) << ','
                   << pc.scenario_grid[k].lines[ln].id << ',' << fmt(rows[ln]) << '\n';
            for (int j = 0; j < sol.J; ++j) {
                const auto& id = c.generators[j].id;
                os << "dual,redispatch_up_cap," << t + 1 << ',' << scen_id(k) << ',' << id << ','
                   << fmt(sol.up_cap_dual[sol.tkj(t, k, j)]) << '\n';
                os << "dual,redispatch_down_cap," << t + 1 << ',' << scen_id(k) << ',' << id << ','
                   << fmt(sol.dn_cap_dual[sol.tkj(t, k, j)]) << '\n';
            }
            for (int l = 0; l < sol.L; ++l)
                os << "dual,shed_cap," << t + 1 << ',' << scen_id(k) << ',' << c.loads[l].id << ','
                   << fmt(sol.shed_hi_dual[sol.tkl(t, k, l)]) << '\n';
        }
    }
}

void write_prices_csv(std::ostream& os, const PreparedCase& pc, const PriceSystem& p) {
    const auto& c = pc.data;
    os << "period,kind,id,price,omega_base,shed_credit";
    for (int k = 0; k < p.K; ++k) os << ",omega_" << c.scenarios.scenarios[k].id;
    os << '\n';
    for (int t = 0; t < p.T; ++t) {
        for (int j = 0; j < p.J; ++j) {
            os << t + 1 << ",energy_gen," << c.generators[j].id << ','
               << fmt(p.gen_energy[p.tj(t, j)]) << ',' << fmt(p.gen_energy_base[p.tj(t, j)]) << ',';
            for (int k = 0; k < p.K; ++k) os << ',' << fmt(p.gen_energy_scen[p.tkj(t, k, j)]);
            os << '\n';
        }
        for (int l = 0; l < p.L; ++l) {
            os << t + 1 << ",energy_load," << c.loads[l].id << ',' << fmt(p.load_energy[p.tl(t, l)])
               << ',' << fmt(p.load_energy_base[p.tl(t, l)]) << ','
               << fmt(p.load_shed_credit[p.tl(t, l)]);
            for (int k = 0; k < p.K; ++k) os << ',' << fmt(p.load_energy_scen[p.tkl(t, k, l)]);
            os << '\n';
        }
        for (int j = 0; j < p.J; ++j) {
            os << t + 1 << ",reserve_up," << c.generators[j].id << ','
               << fmt(p.reserve_up[p.tj(t, j)]) << ",,";
            for (int k = 0; k < p.K; ++k) os << ',';
            os << '\n';
            os << t + 1 << ",reserve_down," << c.generators[j].id << ','
               << fmt(p.reserve_down[p.tj(t, j)]) << ",,";
            for (int k = 0; k < p.K; ++k) os << ',';
            os << '\n';
        }
    }
}

void write_ledger_csv(std::ostream& os, const SettlementLedger& ledger) {
    os << "period,party,component,scenario,amount\n";
    for (const auto& e : ledger.entries)
        os << e.period + 1 << ',' << e.party << ',' << e.component << ',' << e.scenario << ','
           << money(e.amount) << '\n';
}

void write_profit_csv(std::ostream& os, const ProfitReport& rep) {
    os << "generator,period,ex_ante_receipts,expected_ex_post_receipts,base_bid_cost,"
          "expected_redispatch_cost,profit\n";
    for (const auto& r : rep.rows)
        os << r.generator << ',' << r.period + 1 << ',' << money(r.ex_ante_receipts) << ','
           << money(r.expected_ex_post_receipts) << ',' << money(r.base_bid_cost) << ','
           << money(r.expected_redispatch_cost) << ',' << money(r.profit) << '\n';
    for (size_t g = 0; g < rep.generator_ids.size(); ++g)
        os << rep.generator_ids[g] << ",total,,,,," << money(rep.total[g]) << '\n';
}

void write_comparison_csv(std::ostream& os, const ComparisonTable& table) {
    os << "label,kappa_up,kappa_down,status,base_cost,expected_recourse,expected_total,"
          "mc_avg_cost,mc_se,pct_gap_vs_coopt\n";
    for (const auto& r : table.rows) {
        os << r.label << ',' << fmt(r.kappa_up) << ',' << fmt(r.kappa_down) << ',' << r.status;
        if (r.status == "ok")
            os << ',' << fmt(r.base_cost) << ',' << fmt(r.expected_recourse) << ','
               << fmt(r.expected_total) << ',' << fmt(r.mc_avg_cost) << ',' << fmt(r.mc_se) << ','
               << (r.coopt ? std::string() : fmt(r.pct_gap_vs_coopt));
        else
            os << ",,,,,,";
        os << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const SimulationResult& sim) {
    os << "sample,realized_cost,running_avg_cost,running_avg_net_revenue\n";
    for (int i = 0; i < sim.samples; ++i) {
        os << i + 1 << ',' << fmt(sim.sample_cost[i]) << ',' << fmt(sim.running_avg_cost[i]) << ',';
        if (sim.has_net_revenue) os << fmt(sim.running_avg_net_revenue[i]);
        os << '\n';
    }
}

void write_envelope_csv(std::ostream& os, const std::vector<EnvelopeReport>& reports) {
    os << "generator,period,quantity,param,analytic,fd_central,fd_left,fd_right,abs_error,"
          "kink,boundary,ramping_active,infeasible_left,infeasible_right,bracketed,smooth_pass\n";
    for (const auto& r : reports)
        for (const auto& e : r.entries)
            os << r.generator << ',' << r.period + 1 << ',' << e.quantity << ',' << fmt(e.param)
               << ',' << fmt(e.analytic) << ',' << fmt(e.fd_central) << ',' << fmt(e.fd_left) << ','
               << fmt(e.fd_right) << ',' << fmt(e.abs_error) << ',' << e.kink << ',' << e.boundary
               << ',' << e.ramping_active << ',' << e.infeasible_left << ',' << e.infeasible_right
               << ',' << e.bracketed << ',' << e.smooth_pass << '\n';
}

void write_kkt_report(std::ostream& os, const KktReport& rep, double objective) {
    os << "objective," << fmt(objective, "%.17g") << '\n'
       << "duality_gap_rel," << fmt(rep.duality_gap_rel) << '\n'
       << "stationarity," << fmt(rep.stationarity) << '\n'
       << "complementarity," << fmt(rep.complementarity) << '\n'
       << "dual_feasibility," << fmt(rep.dual_feasibility) << '\n'
       << "primal_feasibility," << fmt(rep.primal_feasibility) << '\n'
       << "pass," << (rep.pass ? "1" : "0") << '\n';
}

void write_surplus_report(std::ostream& os, const SurplusReport& rep) {
    os << "period,ex_ante_inflow,expected_ex_post_outflow,expected_surplus\n";
    for (size_t t = 0; t < rep.surplus.size(); ++t)
        os << t + 1 << ',' << fmt(rep.ex_ante[t]) << ',' << fmt(rep.expected_ex_post[t]) << ','
           << fmt(rep.surplus[t]) << '\n';
    os << "total,,," << fmt(rep.total) << '\n';
}

void write_manifest(std::ostream& os, const RunManifest& m) {
    json j;
    j["tool"] = "coopt";
    j["version"] = kToolVersion;
    j["command"] = m.command;
    j["case_path"] = m.case_path;
    j["case_sha256"] = m.case_sha256;
    j["seed"] = m.seed;
    j["samples"] = m.samples;
    j["kappa_grid"] = m.kappa_grid;
    j["kappa_down_ratio"] = m.kappa_down_ratio;
    j["threads"] = m.threads;
    j["elapsed_seconds"] = m.elapsed_seconds;
    j["outputs"] = m.outputs;
    os << j.dump(2) << '\n';
}

} // namespace coopt
