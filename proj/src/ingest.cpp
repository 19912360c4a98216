#include "evplace/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "evplace/errors.hpp"
#include "text_util.hpp"

namespace evplace {

namespace {

using detail::fmt_double;
using detail::parse_double;
using detail::parse_ll;
using detail::trim;

using json = nlohmann::json;

constexpr const char* kCategoryNames[] = {
    "parking", "supermarket_mall", "apartment_office",
    "university_college", "hotel", "gas_station",
};

[[noreturn]] void throw_schema(const std::string& path, const std::vector<std::string>& errs) {
    std::string msg = path + ": " + std::to_string(errs.size()) +
                      (errs.size() == 1 ? " error" : " errors");
    for (const auto& e : errs) {
        msg += "\n  ";
        msg += e;
    }
    throw SchemaError(msg);
}

bool has_suffix_ci(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) ==
               std::tolower(static_cast<unsigned char>(b));
    });
}

bool is_geojson_path(const std::string& path) {
    return has_suffix_ci(path, ".json") || has_suffix_ci(path, ".geojson");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
    return text;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::string text = read_file(path);
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

/// One row in either source format, normalized to name -> raw text. Numbers
/// coming from GeoJSON properties keep full precision via shortest form.
struct RawRow {
    std::string where;  // "row 3" or "feature 2"
    std::map<std::string, std::string> fields;

    const std::string* get(const std::string& name) const {
        auto it = fields.find(name);
        if (it == fields.end() || trim(it->second).empty()) return nullptr;
        return &it->second;
    }
};

std::vector<RawRow> read_csv_rows(const std::string& path,
                                  const std::vector<std::string>& required,
                                  const std::vector<std::string>& optional) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw SchemaError(path + ": empty file");
    const auto header = detail::split_csv(lines[0]);
    std::vector<std::string> errs;
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& h : header) {
        std::string name(trim(h));
        if (!seen.insert(name).second) errs.push_back("duplicate column '" + name + "'");
        const bool known = std::count(required.begin(), required.end(), name) ||
                           std::count(optional.begin(), optional.end(), name);
        if (!known) errs.push_back("unknown column '" + name + "'");
        names.push_back(name);
    }
    for (const auto& r : required) {
        if (!seen.count(r)) errs.push_back("missing required column '" + r + "'");
    }
    if (!errs.empty()) throw_schema(path, errs);

    std::vector<RawRow> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        auto fields = detail::split_csv(lines[li]);
        RawRow row;
        row.where = "row " + std::to_string(li + 1);
        if (fields.size() != names.size()) {
            errs.push_back(row.where + ": expected " + std::to_string(names.size()) +
                           " fields, got " + std::to_string(fields.size()));
            continue;
        }
        for (std::size_t c = 0; c < names.size(); ++c) row.fields[names[c]] = fields[c];
        rows.push_back(std::move(row));
    }
    if (!errs.empty()) throw_schema(path, errs);
    if (rows.empty()) throw EmptyInstanceError(path + ": no data rows");
    return rows;
}

std::vector<RawRow> read_geojson_rows(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": invalid JSON: " + e.what());
    }
    std::vector<std::string> errs;
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array()) {
        throw SchemaError(path + ": expected a GeoJSON FeatureCollection");
    }
    std::vector<RawRow> rows;
    std::size_t idx = 0;
    for (const auto& feat : doc["features"]) {
        RawRow row;
        row.where = "feature " + std::to_string(idx++);
        if (!feat.is_object() || feat.value("type", "") != "Feature") {
            errs.push_back(row.where + ": not a Feature object");
            continue;
        }
        const auto geom = feat.find("geometry");
        if (geom == feat.end() || !geom->is_object() || geom->value("type", "") != "Point" ||
            !geom->contains("coordinates") || !(*geom)["coordinates"].is_array() ||
            (*geom)["coordinates"].size() < 2 || !(*geom)["coordinates"][0].is_number() ||
            !(*geom)["coordinates"][1].is_number()) {
            errs.push_back(row.where + ": geometry must be a Point with [lon, lat]");
            continue;
        }
        // GeoJSON stores [lon, lat].
        row.fields["lon"] = fmt_double((*geom)["coordinates"][0].get<double>());
        row.fields["lat"] = fmt_double((*geom)["coordinates"][1].get<double>());
        const auto props = feat.find("properties");
        if (props != feat.end() && props->is_object()) {
            for (const auto& [key, value] : props->items()) {
                if (value.is_null()) continue;
                if (value.is_string()) {
                    row.fields[key] = value.get<std::string>();
                } else if (value.is_number_integer()) {
                    row.fields[key] = std::to_string(value.get<long long>());
                } else if (value.is_number()) {
                    row.fields[key] = fmt_double(value.get<double>());
                } else {
                    errs.push_back(row.where + ": property '" + key +
                                   "' must be a string or number");
                }
            }
        }
        rows.push_back(std::move(row));
    }
    if (!errs.empty()) throw_schema(path, errs);
    if (rows.empty()) throw EmptyInstanceError(path + ": no features");
    return rows;
}

std::optional<double> want_double(const RawRow& row, const std::string& name, bool required,
                                  std::vector<std::string>& errs) {
    const std::string* raw = row.get(name);
    if (!raw) {
        if (required) errs.push_back(row.where + ": missing value for '" + name + "'");
        return std::nullopt;
    }
    auto v = parse_double(*raw);
    if (!v || !std::isfinite(*v)) {
        errs.push_back(row.where + ": '" + name + "' is not a finite number: '" + *raw + "'");
        return std::nullopt;
    }
    return v;
}

}  // namespace

const char* to_string(SiteCategory c) {
    return kCategoryNames[static_cast<int>(c)];
}

std::optional<SiteCategory> site_category_from_string(const std::string& s) {
    for (int i = 0; i < 6; ++i) {
        if (s == kCategoryNames[i]) return static_cast<SiteCategory>(i);
    }
    return std::nullopt;
}

std::vector<std::string> power_band_warnings(const ChargerSpec& spec) {
    std::vector<std::string> out;
    if (spec.level == ChargerLevel::L2) {
        if (spec.power_kw < 3.7 || spec.power_kw > 22.0) {
            out.push_back("level-2 power " + fmt_double(spec.power_kw) +
                          " kW outside the expected 3.7-22 kW band");
        }
    } else {
        if (spec.power_kw <= 44.0) {
            out.push_back("level-3 power " + fmt_double(spec.power_kw) +
                          " kW not above the expected 44 kW floor");
        }
    }
    return out;
}

std::vector<CandidateSite> load_sites(const std::string& path) {
    static const std::vector<std::string> required = {"id", "lat", "lon", "land_cost",
                                                      "category"};
    static const std::vector<std::string> optional = {"district", "i2", "i3",
                                                      "m2",       "m3", "e2", "e3"};
    const auto rows = is_geojson_path(path) ? read_geojson_rows(path)
                                            : read_csv_rows(path, required, optional);
    std::vector<std::string> errs;
    std::vector<CandidateSite> sites;
    std::set<std::string> ids;
    for (const auto& row : rows) {
        CandidateSite s;
        if (const std::string* id = row.get("id")) {
            s.id = std::string(trim(*id));
            if (!ids.insert(s.id).second) {
                errs.push_back(row.where + ": duplicate id '" + s.id + "'");
            }
        } else {
            errs.push_back(row.where + ": missing value for 'id'");
        }
        const auto lat = want_double(row, "lat", true, errs);
        const auto lon = want_double(row, "lon", true, errs);
        if (lat && lon) {
            s.location = {*lat, *lon};
            if (!is_valid(s.location)) {
                errs.push_back(row.where + ": coordinates out of range");
            }
        }
        if (const auto v = want_double(row, "land_cost", true, errs)) {
            if (*v < 0) {
                errs.push_back(row.where + ": 'land_cost' must be non-negative");
            } else {
                s.land_cost = *v;
            }
        }
        if (const std::string* cat = row.get("category")) {
            if (auto c = site_category_from_string(std::string(trim(*cat)))) {
                s.category = *c;
            } else {
                errs.push_back(row.where + ": unknown category '" + *cat + "'");
            }
        } else {
            errs.push_back(row.where + ": missing value for 'category'");
        }
        if (const std::string* d = row.get("district")) s.district = std::string(trim(*d));
        auto override_field = [&](const char* name, std::optional<double>& slot,
                                  bool strictly_positive) {
            if (const auto v = want_double(row, name, false, errs)) {
                if (strictly_positive ? (*v <= 0) : (*v < 0)) {
                    errs.push_back(row.where + ": '" + name + "' must be " +
                                   (strictly_positive ? "positive" : "non-negative"));
                } else {
                    slot = *v;
                }
            }
        };
        override_field("i2", s.install_l2, false);
        override_field("i3", s.install_l3, false);
        override_field("m2", s.maintenance_l2, false);
        override_field("m3", s.maintenance_l3, false);
        override_field("e2", s.energy_l2, true);
        override_field("e3", s.energy_l3, true);
        sites.push_back(std::move(s));
    }
    if (!errs.empty()) throw_schema(path, errs);
    return sites;
}

std::vector<ResidentialPoint> load_rps(const std::string& path) {
    static const std::vector<std::string> required = {"id", "lat", "lon", "vehicles"};
    static const std::vector<std::string> optional = {"district"};
    const auto rows = is_geojson_path(path) ? read_geojson_rows(path)
                                            : read_csv_rows(path, required, optional);
    std::vector<std::string> errs;
    std::vector<ResidentialPoint> rps;
    std::set<std::string> ids;
    for (const auto& row : rows) {
        ResidentialPoint r;
        if (const std::string* id = row.get("id")) {
            r.id = std::string(trim(*id));
            if (!ids.insert(r.id).second) {
                errs.push_back(row.where + ": duplicate id '" + r.id + "'");
            }
        } else {
            errs.push_back(row.where + ": missing value for 'id'");
        }
        const auto lat = want_double(row, "lat", true, errs);
        const auto lon = want_double(row, "lon", true, errs);
        if (lat && lon) {
            r.location = {*lat, *lon};
            if (!is_valid(r.location)) {
                errs.push_back(row.where + ": coordinates out of range");
            }
        }
        if (const std::string* v = row.get("vehicles")) {
            if (auto n = parse_ll(*v); n && *n >= 0) {
                r.vehicles = *n;
            } else {
                errs.push_back(row.where + ": 'vehicles' must be a non-negative integer: '" +
                               *v + "'");
            }
        } else {
            errs.push_back(row.where + ": missing value for 'vehicles'");
        }
        if (const std::string* d = row.get("district")) r.district = std::string(trim(*d));
        rps.push_back(std::move(r));
    }
    if (!errs.empty()) throw_schema(path, errs);
    return rps;
}

namespace {

[[noreturn]] void throw_config(const std::string& path, const std::vector<std::string>& errs) {
    std::string msg = path + ": " + std::to_string(errs.size()) +
                      (errs.size() == 1 ? " error" : " errors");
    for (const auto& e : errs) {
        msg += "\n  ";
        msg += e;
    }
    throw ConfigError(msg);
}

}  // namespace

ScenarioParams load_params(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw ConfigError(path + ": cannot open file");
    probe.close();

    std::map<std::string, double> values;
    std::vector<std::string> errs;
    const auto lines = read_lines(path);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string line = lines[li];
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back("line " + std::to_string(li + 1) + ": expected 'key = value'");
            continue;
        }
        const std::string key(trim(std::string_view(line).substr(0, eq)));
        const std::string value(trim(std::string_view(line).substr(eq + 1)));
        if (values.count(key)) {
            errs.push_back("line " + std::to_string(li + 1) + ": duplicate key '" + key + "'");
            continue;
        }
        const auto v = parse_double(value);
        if (!v || !std::isfinite(*v)) {
            errs.push_back("line " + std::to_string(li + 1) + ": '" + key +
                           "' is not a finite number: '" + value + "'");
            continue;
        }
        values[key] = *v;
    }

    struct Key {
        const char* name;
        bool required;
        double fallback;
        // 0: >= 0, 1: > 0, 2: (0, 1], 3: integer >= 1
        int rule;
    };
    static const Key keys[] = {
        {"avg_energy_per_vehicle_day", true, 0, 1},
        {"price_operator", true, 0, 0},
        {"price_user", true, 0, 0},
        {"price_per_km", true, 0, 0},
        {"avg_wage", true, 0, 0},
        {"traffic_rate", true, 0, 2},
        {"budget", true, 0, 0},
        {"d_max", true, 0, 1},
        {"amortization_days", false, 14600, 3},
        {"max_stations_per_site", false, 50, 3},
        {"level2.install", true, 0, 0},
        {"level2.maintenance", true, 0, 0},
        {"level2.energy", true, 0, 1},
        {"level2.power", false, 7.4, 1},
        {"level3.install", true, 0, 0},
        {"level3.maintenance", true, 0, 0},
        {"level3.energy", true, 0, 1},
        {"level3.power", false, 60.0, 1},
    };

    std::map<std::string, double> resolved;
    for (const auto& k : keys) {
        auto it = values.find(k.name);
        if (it == values.end()) {
            if (k.required) {
                errs.push_back(std::string("missing required key '") + k.name + "'");
            } else {
                resolved[k.name] = k.fallback;
            }
            continue;
        }
        const double v = it->second;
        bool ok = true;
        switch (k.rule) {
            case 0: ok = v >= 0; break;
            case 1: ok = v > 0; break;
            case 2: ok = v > 0 && v <= 1.0; break;
            case 3: ok = v >= 1 && v == std::floor(v); break;
        }
        if (!ok) {
            static const char* rule_text[] = {"must be non-negative", "must be positive",
                                              "must be in (0, 1]",
                                              "must be an integer >= 1"};
            errs.push_back(std::string("'") + k.name + "' " + rule_text[k.rule] + ", got " +
                           fmt_double(v));
        } else {
            resolved[k.name] = v;
        }
    }
    for (const auto& [key, value] : values) {
        (void)value;
        const bool known = std::any_of(std::begin(keys), std::end(keys),
                                       [&](const Key& k) { return key == k.name; });
        if (!known) errs.push_back("unknown key '" + key + "'");
    }
    if (!errs.empty()) throw_config(path, errs);

    ScenarioParams p;
    p.avg_energy_per_vehicle_day = resolved["avg_energy_per_vehicle_day"];
    p.price_operator = resolved["price_operator"];
    p.price_user = resolved["price_user"];
    p.price_per_km = resolved["price_per_km"];
    p.avg_wage = resolved["avg_wage"];
    p.traffic_rate = resolved["traffic_rate"];
    p.budget = resolved["budget"];
    p.d_max = resolved["d_max"];
    p.amortization_days = static_cast<long long>(resolved["amortization_days"]);
    p.max_stations_per_site = static_cast<long long>(resolved["max_stations_per_site"]);
    p.level2 = {ChargerLevel::L2, resolved["level2.install"], resolved["level2.maintenance"],
                resolved["level2.energy"], resolved["level2.power"]};
    p.level3 = {ChargerLevel::L3, resolved["level3.install"], resolved["level3.maintenance"],
                resolved["level3.energy"], resolved["level3.power"]};
    return p;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    return out;
}

}  // namespace

void write_sites(const std::vector<CandidateSite>& sites, const std::string& path) {
    auto out = open_out(path);
    out << "id,lat,lon,land_cost,category,district,i2,i3,m2,m3,e2,e3\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : ""; };
    for (const auto& s : sites) {
        out << detail::csv_escape(s.id) << ',' << fmt_double(s.location.lat) << ','
            << fmt_double(s.location.lon) << ',' << fmt_double(s.land_cost) << ','
            << to_string(s.category) << ',' << detail::csv_escape(s.district) << ','
            << opt(s.install_l2) << ',' << opt(s.install_l3) << ',' << opt(s.maintenance_l2)
            << ',' << opt(s.maintenance_l3) << ',' << opt(s.energy_l2) << ','
            << opt(s.energy_l3) << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

void write_rps(const std::vector<ResidentialPoint>& rps, const std::string& path) {
    auto out = open_out(path);
    out << "id,lat,lon,vehicles,district\n";
    for (const auto& r : rps) {
        out << detail::csv_escape(r.id) << ',' << fmt_double(r.location.lat) << ','
            << fmt_double(r.location.lon) << ',' << r.vehicles << ','
            << detail::csv_escape(r.district) << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

void write_params(const ScenarioParams& params, const std::string& path) {
    auto out = open_out(path);
    auto kv = [&](const char* key, double v) { out << key << " = " << fmt_double(v) << "\n"; };
    kv("avg_energy_per_vehicle_day", params.avg_energy_per_vehicle_day);
    kv("price_operator", params.price_operator);
    kv("price_user", params.price_user);
    kv("price_per_km", params.price_per_km);
    kv("avg_wage", params.avg_wage);
    kv("traffic_rate", params.traffic_rate);
    kv("budget", params.budget);
    kv("d_max", params.d_max);
    out << "amortization_days = " << params.amortization_days << "\n";
    out << "max_stations_per_site = " << params.max_stations_per_site << "\n";
    kv("level2.install", params.level2.install_cost);
    kv("level2.maintenance", params.level2.maintenance_cost);
    kv("level2.energy", params.level2.energy_per_day);
    kv("level2.power", params.level2.power_kw);
    kv("level3.install", params.level3.install_cost);
    kv("level3.maintenance", params.level3.maintenance_cost);
    kv("level3.energy", params.level3.energy_per_day);
    kv("level3.power", params.level3.power_kw);
    if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {

// Hand-rolled mappings: std::uniform_*_distribution output differs across
// standard libraries, and synth output must be reproducible everywhere.
double u01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& g, double a, double b) {
    return a + (b - a) * u01(g);
}

long long uniform_int(std::mt19937_64& g, long long lo, long long hi) {
    return lo + static_cast<long long>(g() % static_cast<unsigned long long>(hi - lo + 1));
}

std::string padded_id(char prefix, int k, int n) {
    std::size_t width = 3;
    for (int t = n; t >= 1000; t /= 10) ++width;
    std::string digits = std::to_string(k);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

}  // namespace

SyntheticInstance generate_synthetic(int n_sites, int n_rps, std::uint64_t seed,
                                     GeoPoint bbox_min, GeoPoint bbox_max) {
    if (n_sites < 1 || n_rps < 1) {
        throw std::invalid_argument("generate_synthetic: counts must be >= 1");
    }
    if (!is_valid(bbox_min) || !is_valid(bbox_max) || bbox_min.lat >= bbox_max.lat ||
        bbox_min.lon >= bbox_max.lon) {
        throw std::invalid_argument("generate_synthetic: degenerate bounding box");
    }

    SyntheticInstance inst;
    ScenarioParams& p = inst.params;
    p.avg_energy_per_vehicle_day = 6.0;
    p.price_operator = 2500.0;
    p.price_user = 3076.0;
    p.price_per_km = 8000.0;
    p.avg_wage = 40000.0;
    p.traffic_rate = 0.6;
    p.amortization_days = 14600;
    p.max_stations_per_site = 3;
    p.level2 = {ChargerLevel::L2, 60e6, 600.0, 74.0, 7.4};
    p.level3 = {ChargerLevel::L3, 750e6, 1200.0, 600.0, 60.0};

    const double diag1 = haversine_km(bbox_min, bbox_max);
    const double diag2 = haversine_km({bbox_min.lat, bbox_max.lon}, {bbox_max.lat, bbox_min.lon});
    p.d_max = std::max(5.0, 1.05 * std::max(diag1, diag2));

    std::mt19937_64 rng(seed);
    for (int k = 0; k < n_sites; ++k) {
        CandidateSite s;
        s.id = padded_id('S', k + 1, n_sites);
        s.location = {uniform(rng, bbox_min.lat, bbox_max.lat),
                      uniform(rng, bbox_min.lon, bbox_max.lon)};
        s.land_cost = uniform(rng, 25e6, 80e6);
        s.category = static_cast<SiteCategory>(uniform_int(rng, 0, 5));
        s.district = "D" + std::to_string(k % 3 + 1);
        inst.sites.push_back(std::move(s));
    }

    // Size total demand to ~80% of the level-2 fleet capacity under the
    // per-site cap, so instances stay feasible with room for branching.
    const double site_capacity =
        p.traffic_rate * p.level2.energy_per_day * static_cast<double>(p.max_stations_per_site);
    const double vehicle_capacity = site_capacity * n_sites / p.avg_energy_per_vehicle_day;
    const long long vmax =
        std::max<long long>(1, static_cast<long long>(std::floor(0.8 * vehicle_capacity / n_rps)));
    long long total_vehicles = 0;
    for (int k = 0; k < n_rps; ++k) {
        ResidentialPoint r;
        r.id = padded_id('R', k + 1, n_rps);
        r.location = {uniform(rng, bbox_min.lat, bbox_max.lat),
                      uniform(rng, bbox_min.lon, bbox_max.lon)};
        r.vehicles = uniform_int(rng, 1, vmax);
        r.district = "D" + std::to_string(k % 3 + 1);
        total_vehicles += r.vehicles;
        inst.rps.push_back(std::move(r));
    }

    const double demand = p.avg_energy_per_vehicle_day * static_cast<double>(total_vehicles);
    const double per_station = p.traffic_rate * p.level2.energy_per_day;
    const double stations_needed = std::ceil(demand / per_station);
    p.budget = 2.0 * stations_needed * p.level2.install_cost;
    return inst;
}

}  // namespace evplace
