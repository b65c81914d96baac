#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordnung/bv.hpp"
#include "ordnung/errors.hpp"
#include "ordnung/order.hpp"

namespace ordnung {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "ordnung 0.1.0";

// ---------------------------------------------------------------------------
// number formatting

// Shortest round-trip decimal form; reports quote numbers as strings so the
// bytes do not depend on the platform's formatting.
inline std::string num_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double num_parse(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc{} && res.ptr == s.data() + s.size(), errc::parse_error,
            "bad number '" + s + "'");
    return v;
}

// ---------------------------------------------------------------------------
// digest

inline std::string digest_bytes(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[i] = hex[(h >> (60 - 4 * i)) & 0xF];
    buf[16] = '\0';
    return std::string(buf);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::parse_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// dataset

// Everything a command may need from one input file. The chain is always
// present; the rest depends on the keys of the file.
struct Dataset {
    std::optional<Chain> chain;
    std::optional<FunctionFamily> family;                // real-valued functions
    std::optional<FiniteMetricSpace> metric;             // with index_functions
    std::optional<FinitePoset> poset;                    // with index_functions
    std::vector<std::vector<std::size_t>> index_functions;
    std::optional<FiniteTopology> topology;

    std::vector<MetricChainFunction> metric_members() const {
        require(metric.has_value(), errc::schema_error, "input has no metric");
        std::vector<MetricChainFunction> out;
        out.reserve(index_functions.size());
        for (const auto& row : index_functions) out.emplace_back(*chain, *metric, row);
        return out;
    }
};

namespace detail {

inline Chain chain_from_json(const json& j) {
    if (j.is_number_unsigned() || j.is_number_integer()) {
        const auto n = j.get<long long>();
        require(n >= 1, errc::schema_error, "chain size must be positive");
        return Chain(static_cast<std::size_t>(n));
    }
    require(j.is_object() && j.contains("labels"), errc::schema_error,
            "chain must be a size or an object with labels");
    auto labels = j.at("labels").get<std::vector<std::string>>();
    const std::size_t n = labels.size();
    return Chain(n, std::move(labels));
}

inline json chain_to_json(const Chain& c) {
    if (c.labels.empty()) return json(c.size);
    return json{{"labels", c.labels}};
}

} // namespace detail

// ---------------------------------------------------------------------------
// JSON ingestion

inline Dataset ingest_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(errc::parse_error, std::string("json: ") + e.what());
    }
    require(j.is_object(), errc::schema_error, "top level must be an object");
    Dataset ds;
    require(j.contains("chain"), errc::schema_error, "missing 'chain'");
    ds.chain = detail::chain_from_json(j.at("chain"));

    if (j.contains("topology")) {
        const auto& t = j.at("topology");
        require(t.is_object() && t.contains("ground") && t.contains("opens"), errc::schema_error,
                "topology needs 'ground' and 'opens'");
        const auto ground = t.at("ground").get<std::size_t>();
        std::vector<std::uint64_t> opens;
        for (const auto& o : t.at("opens")) {
            std::uint64_t m = 0;
            for (const auto& p : o) {
                const auto i = p.get<std::size_t>();
                require(i < ground, errc::schema_error, "open set point out of range");
                m |= std::uint64_t{1} << i;
            }
            opens.push_back(m);
        }
        ds.topology = FiniteTopology(ground, std::move(opens));
    }
    if (j.contains("metric")) {
        const auto& m = j.at("metric");
        require(m.is_object() && m.contains("dist"), errc::schema_error, "metric needs 'dist'");
        const auto rows = m.at("dist").get<std::vector<std::vector<double>>>();
        std::vector<double> flat;
        for (const auto& row : rows) {
            require(row.size() == rows.size(), errc::schema_error,
                    "distance matrix must be square");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        ds.metric = FiniteMetricSpace(rows.size(), std::move(flat));
    }
    if (j.contains("poset")) {
        const auto& p = j.at("poset");
        require(p.is_object() && p.contains("size") && p.contains("relation"), errc::schema_error,
                "poset needs 'size' and 'relation'");
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        for (const auto& pr : p.at("relation")) {
            require(pr.is_array() && pr.size() == 2, errc::schema_error,
                    "relation entries are pairs");
            rel.emplace_back(pr[0].get<std::size_t>(), pr[1].get<std::size_t>());
        }
        ds.poset = FinitePoset(p.at("size").get<std::size_t>(), rel);
    }

    if (j.contains("functions")) {
        if (ds.metric || ds.poset) {
            ds.index_functions = j.at("functions").get<std::vector<std::vector<std::size_t>>>();
            for (const auto& row : ds.index_functions)
                require(row.size() == ds.chain->size, errc::schema_error,
                        "function length must match the chain");
        } else {
            require(j.contains("range"), errc::schema_error, "missing 'range'");
            const auto range = j.at("range").get<std::vector<double>>();
            require(range.size() == 2, errc::schema_error, "range must be [c, d]");
            auto rows = j.at("functions").get<std::vector<std::vector<double>>>();
            ds.family = FunctionFamily::from_rows(*ds.chain, rows, range[0], range[1]);
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// CSV ingestion: header "# range c d chain n", one function per row.

inline Dataset ingest_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), errc::parse_error, "empty csv");
    std::istringstream head(line);
    std::string hash, kw_range, kw_chain;
    std::string c_str, d_str, n_str;
    head >> hash >> kw_range >> c_str >> d_str >> kw_chain >> n_str;
    require(hash == "#" && kw_range == "range" && kw_chain == "chain", errc::parse_error,
            "csv header must be '# range c d chain n'");
    const double lo = num_parse(c_str);
    const double hi = num_parse(d_str);
    std::size_t n = 0;
    {
        auto res = std::from_chars(n_str.data(), n_str.data() + n_str.size(), n);
        require(res.ec == std::errc{} && n >= 1, errc::parse_error, "bad chain size in header");
    }
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            std::string cell = line.substr(pos, comma - pos);
            // trim
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
                cell.erase(cell.begin());
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r' ||
                                     cell.back() == '\t'))
                cell.pop_back();
            if (!cell.empty()) {
                try {
                    row.push_back(num_parse(cell));
                } catch (const error&) {
                    fail(errc::parse_error,
                         "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
                }
            }
            pos = comma + 1;
        }
        if (row.empty()) continue;
        require(row.size() == n, errc::parse_error,
                "line " + std::to_string(lineno) + ": expected " + std::to_string(n) + " values");
        rows.push_back(std::move(row));
    }
    Dataset ds;
    ds.chain = Chain(n);
    ds.family = FunctionFamily::from_rows(*ds.chain, rows, lo, hi);
    return ds;
}

inline Dataset ingest_text(const std::string& text, const std::string& format) {
    if (format == "json") return ingest_json_text(text);
    if (format == "csv") return ingest_csv_text(text);
    fail(errc::parse_error, "unknown format '" + format + "'");
}

inline Dataset ingest(const std::string& path, const std::string& format) {
    return ingest_text(read_file(path), format);
}

// ---------------------------------------------------------------------------
// serialization

inline json serialize_family(const FunctionFamily& family) {
    json j;
    j["chain"] = detail::chain_to_json(family.chain);
    j["range"] = {family.lo, family.hi};
    json rows = json::array();
    for (const auto& f : family.members) rows.push_back(f.values);
    j["functions"] = std::move(rows);
    return j;
}

inline std::string serialize_family_csv(const FunctionFamily& family) {
    std::ostringstream out;
    out << "# range " << num_str(family.lo) << " " << num_str(family.hi) << " chain "
        << family.chain.size << "\n";
    for (const auto& f : family.members) {
        for (std::size_t i = 0; i < f.values.size(); ++i)
            out << (i ? "," : "") << num_str(f.values[i]);
        out << "\n";
    }
    return out.str();
}

inline json serialize_metric_input(const std::vector<MetricChainFunction>& members) {
    require(!members.empty(), errc::empty_family, "nothing to serialize");
    const auto& target = members.front().target;
    json j;
    j["chain"] = detail::chain_to_json(members.front().chain);
    json dist = json::array();
    for (std::size_t i = 0; i < target.size(); ++i) {
        json row = json::array();
        for (std::size_t jj = 0; jj < target.size(); ++jj) row.push_back(target.dist(i, jj));
        dist.push_back(std::move(row));
    }
    j["metric"] = {{"dist", std::move(dist)}};
    json rows = json::array();
    for (const auto& m : members) rows.push_back(m.values);
    j["functions"] = std::move(rows);
    return j;
}

inline json serialize_poset_input(const Chain& chain, const FinitePoset& poset,
                                  const std::vector<std::vector<std::size_t>>& members) {
    json j;
    j["chain"] = detail::chain_to_json(chain);
    json rel = json::array();
    for (auto [a, b] : poset.pairs()) rel.push_back(json::array({a, b}));
    j["poset"] = {{"size", poset.size()}, {"relation", std::move(rel)}};
    j["functions"] = members;
    return j;
}

// ---------------------------------------------------------------------------
// analysis report

struct AnalysisReport {
    std::string command;
    std::string input_digest;
    json parameters = json::object(); // flag values as strings
    json result = json::object();     // payload, numbers rendered with num_str
    json invariants = json::object(); // post-hoc checks run on the result
    std::string version = kToolVersion;
    double wall_ms = 0.0;
};

inline json report_to_json(const AnalysisReport& r) {
    json j;
    j["command"] = r.command;
    j["input_digest"] = r.input_digest;
    j["parameters"] = r.parameters;
    j["result"] = r.result;
    j["invariants"] = r.invariants;
    j["version"] = r.version;
    j["wall_ms"] = num_str(r.wall_ms);
    return j;
}

inline AnalysisReport report_from_json(const json& j) {
    AnalysisReport r;
    r.command = j.at("command").get<std::string>();
    r.input_digest = j.at("input_digest").get<std::string>();
    r.parameters = j.at("parameters");
    r.result = j.at("result");
    r.invariants = j.at("invariants");
    r.version = j.at("version").get<std::string>();
    r.wall_ms = num_parse(j.at("wall_ms").get<std::string>());
    return r;
}

} // namespace ordnung
