#include "dini/io.hpp"

#include <fstream>
#include <sstream>

namespace dini {

double get_number(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError("missing key '" + key + "'");
  if (!j[key].is_number()) throw DomainError("key '" + key + "' must be a number");
  return j[key].get<double>();
}

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_number(j, key);
}

int get_int(const json& j, const std::string& key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw DomainError("key '" + key + "' must be an integer");
  return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j[key].is_string()) throw DomainError("key '" + key + "' must be a string");
  return j[key].get<std::string>();
}

namespace {

Mat2 mat_from_json(const json& j, const std::string& key) {
  if (!j.contains(key)) throw DomainError("missing matrix '" + key + "'");
  const json& m = j[key];
  if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() ||
      m[0].size() != 2 || m[1].size() != 2)
    throw DomainError("matrix '" + key + "' must be [[a11,a12],[a21,a22]]");
  try {
    return {m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(),
            m[1][1].get<double>()};
  } catch (const json::exception&) {
    throw DomainError("matrix '" + key + "' has non-numeric entries");
  }
}

}  // namespace

DiniModulus modulus_from_json(const json& j) {
  std::string kind = get_string(j, "kind", "flat");
  double scale = get_number(j, "scale", 1.0);
  if (kind == "flat") return flat_modulus();
  if (kind == "power") return power_modulus(get_number(j, "beta"), scale);
  if (kind == "log_power") return log_power_modulus(get_number(j, "delta"), scale);
  if (kind == "custom") {
    if (!j.contains("table") || !j["table"].is_array())
      throw DomainError("custom modulus needs a 'table' of [r, psi] pairs");
    std::vector<std::pair<double, double>> t;
    for (const auto& row : j["table"]) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        throw DomainError("custom modulus rows must be [r, psi]");
      t.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return custom_modulus(std::move(t));
  }
  throw DomainError("unknown modulus kind '" + kind + "'");
}

json modulus_to_json(const DiniModulus& m) {
  json j;
  j["kind"] = m.kind_name();
  switch (m.kind) {
    case DiniModulus::Kind::power:
      j["beta"] = m.beta;
      j["scale"] = m.scale;
      break;
    case DiniModulus::Kind::log_power:
      j["delta"] = m.delta;
      j["scale"] = m.scale;
      break;
    case DiniModulus::Kind::custom: {
      json t = json::array();
      for (auto [r, p] : m.table) t.push_back({r, p});
      j["table"] = t;
      break;
    }
    default:
      break;
  }
  return j;
}

BoundaryChart chart_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("domain must be a JSON object");
  std::string kind = get_string(j, "kind", "flat");
  double R0 = get_number(j, "R0", kind == "flat" ? 1.0 : 0.5);
  if (kind == "flat") return flat_chart(R0);
  if (kind == "power_graph") return power_graph_chart(get_number(j, "c"), get_number(j, "p"), R0);
  return chart_from_modulus(modulus_from_json(j), R0);
}

CoefficientField coefficients_from_json(const json& j) {
  if (j.is_null()) return identity_coefficients();
  std::string kind = get_string(j, "kind", "identity");
  if (kind == "identity") return identity_coefficients();
  if (kind == "diag") return diag_coefficients(get_number(j, "d1"), get_number(j, "d2"));
  if (kind == "constant") return constant_coefficients(mat_from_json(j, "A"));
  if (kind == "affine_perturbation")
    return affine_perturbation(get_number(j, "eps"), mat_from_json(j, "E"),
                               get_number(j, "window", 1.0));
  throw DomainError("unknown coefficient kind '" + kind + "'");
}

Potential potential_from_json(const json& j) {
  if (j.is_null()) return zero_potential();
  std::string kind = get_string(j, "kind", "zero");
  if (kind == "zero") return zero_potential();
  if (kind == "constant") return constant_potential(get_number(j, "value"));
  throw DomainError("unknown potential kind '" + kind + "'");
}

json grid_to_json(const GridField& g, const json& chart_spec) {
  json j;
  j["nx"] = g.nx();
  j["ny"] = g.ny();
  j["h"] = g.h();
  j["origin"] = {g.xi0(), g.t0()};
  j["chart"] = chart_spec;
  j["values"] = g.values();
  return j;
}

std::shared_ptr<GridField> grid_from_json(const json& j) {
  int nx = get_int(j, "nx", -1), ny = get_int(j, "ny", -1);
  if (nx < 1 || ny < 1) throw DomainError("grid field needs positive nx, ny");
  double h = get_number(j, "h");
  if (!j.contains("origin") || !j["origin"].is_array() || j["origin"].size() != 2)
    throw DomainError("grid field needs origin [xi0, t0]");
  if (!j.contains("values") || !j["values"].is_array())
    throw DomainError("grid field needs a values array");
  std::vector<double> v = j["values"].get<std::vector<double>>();
  if (v.size() != static_cast<size_t>(nx + 1) * (ny + 1))
    throw DomainError("grid field values must hold (nx+1)(ny+1) entries");
  return std::make_shared<GridField>(nx, ny, h, j["origin"][0].get<double>(),
                                     j["origin"][1].get<double>(), std::move(v),
                                     chart_from_json(j.value("chart", json::object())));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DomainError("write failed for '" + path + "'");
}

}  // namespace dini
