#include "cuspedge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cuspedge/errors.hpp"

namespace cuspedge {

json to_json(const Jet1& a) {
  json coeffs = json::array();
  for (int i = 0; i <= a.order(); ++i) {
    if (a.get(i) != 0.0) coeffs.push_back({i, a.get(i)});
  }
  return json{{"vars", 1}, {"order", a.order()}, {"coeffs", coeffs}};
}

json to_json(const Jet2& a) {
  json coeffs = json::array();
  for (int i = 0; i <= a.order(); ++i) {
    for (int j = 0; i + j <= a.order(); ++j) {
      if (a.get(i, j) != 0.0) coeffs.push_back({i, j, a.get(i, j)});
    }
  }
  return json{{"vars", 2}, {"order", a.order()}, {"coeffs", coeffs}};
}

namespace {

int require_int(const json& j, const char* what, int lo, int hi) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw SchemaError(std::string(what) + ": expected an integer");
  }
  const long long v = j.get<long long>();
  if (v < lo || v > hi) {
    throw SchemaError(std::string(what) + ": " + std::to_string(v) +
                      " out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

double require_real(const json& j, const char* what) {
  if (!j.is_number()) {
    throw SchemaError(std::string(what) + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw SchemaError(std::string(what) + ": not finite");
  }
  return v;
}

void check_jet_shell(const json& j, int want_vars) {
  if (!j.is_object()) throw SchemaError("jet: expected an object");
  for (const char* key : {"vars", "order", "coeffs"}) {
    if (!j.contains(key)) {
      throw SchemaError(std::string("jet: missing \"") + key + "\"");
    }
  }
  const int vars = require_int(j.at("vars"), "jet.vars", 1, 2);
  if (vars != want_vars) {
    throw SchemaError("jet.vars: expected " + std::to_string(want_vars) +
                      ", got " + std::to_string(vars));
  }
  if (!j.at("coeffs").is_array()) {
    throw SchemaError("jet.coeffs: expected an array");
  }
}

}  // namespace

Jet1 jet1_from_json(const json& j) {
  check_jet_shell(j, 1);
  const int order = require_int(j.at("order"), "jet.order", 0, 64);
  Jet1 a = Jet1::constant(0.0, order);
  int pos = 0;
  for (const json& entry : j.at("coeffs")) {
    const std::string where = "jet.coeffs[" + std::to_string(pos++) + "]";
    if (!entry.is_array() || entry.size() != 2) {
      throw SchemaError(where + ": expected [index, value]");
    }
    const int i = require_int(entry.at(0), where.c_str(), 0, order);
    a.set(i, require_real(entry.at(1), where.c_str()));
  }
  return a;
}

Jet2 jet2_from_json(const json& j) {
  check_jet_shell(j, 2);
  const int order = require_int(j.at("order"), "jet.order", 0, 64);
  Jet2 a = Jet2::constant(0.0, order);
  int pos = 0;
  for (const json& entry : j.at("coeffs")) {
    const std::string where = "jet.coeffs[" + std::to_string(pos++) + "]";
    if (!entry.is_array() || entry.size() != 3) {
      throw SchemaError(where + ": expected [i, j, value]");
    }
    const int iu = require_int(entry.at(0), where.c_str(), 0, order);
    const int iv = require_int(entry.at(1), where.c_str(), 0, order);
    if (iu + iv > order) {
      throw SchemaError(where + ": total degree exceeds the order");
    }
    a.set(iu, iv, require_real(entry.at(2), where.c_str()));
  }
  return a;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("JSON parse error at byte " + std::to_string(e.byte) +
                      ": " + e.what());
  }
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": JSON parse error at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_rec(const json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        append_escaped(out, it.key());
        out += ": ";
        dump_rec(it.value(), indent, depth + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of plain numbers stay on one line; nested structures wrap.
      bool scalar = true;
      for (const json& e : j) {
        if (e.is_structured()) scalar = false;
      }
      if (scalar) {
        out += "[";
        bool first = true;
        for (const json& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(e, indent, depth + 1, out);
        }
        out += "]";
      } else {
        out += "[\n";
        bool first = true;
        for (const json& e : j) {
          if (!first) out += ",\n";
          first = false;
          out += pad1;
          dump_rec(e, indent, depth + 1, out);
        }
        out += "\n" + pad + "]";
      }
      return;
    }
    case json::value_t::string:
      append_escaped(out, j.get<std::string>());
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

}  // namespace cuspedge
