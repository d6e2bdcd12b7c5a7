/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "recoh/errors.hpp"

namespace recoh {

namespace {

double number_from_json(const json& j, const char* what) {
  if (!j.is_number())
    throw parse_error(std::string(what) + " must be a number");
  return j.get<double>();
}

cxd entry_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw parse_error("matrix entry must be a [re, im] pair");
  return {number_from_json(j[0], "matrix entry"), number_from_json(j[1], "matrix entry")};
}

Index index_from_json(const json& j, const char* what) {
  if (!j.is_number_integer())
    throw parse_error(std::string(what) + " must be an integer");
  return j.get<Index>();
}

std::vector<Index> dims_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw parse_error(std::string(what) + " must be a nonempty array");
  std::vector<Index> dims;
  dims.reserve(j.size());
  for (const json& d : j)
    dims.push_back(index_from_json(d, what));
  return dims;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object())
    throw parse_error("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    throw parse_error(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<Matrix> matrix_list_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw parse_error(std::string(what) + " must be a nonempty array of matrices");
  std::vector<Matrix> out;
  out.reserve(j.size());
  for (const json& m : j)
    out.push_back(matrix_from_json(m));
  return out;
}

// Arrays print inline unless they hold objects or nest deeper than
// arrays-of-scalars, so matrix rows stay on one line each.
bool inline_array(const json& j, int depth = 0) {
  if (j.is_object())
    return false;
  if (!j.is_array())
    return true;
  if (depth >= 2)
    return false;
  for (const json& child : j)
    if (!inline_array(child, depth + 1))
      return false;
  return true;
}

void format_number(std::string& out, double x) {
  if (!std::isfinite(x))
    throw validation_error("non-finite number in JSON output");
  if (x == 0.0)
    x = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void format_string(std::string& out, const std::string& s) {
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
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void emit_value_compact(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      out += "null";
      break;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case json::value_t::number_float:
      format_number(out, j.get<double>());
      break;
    case json::value_t::string:
      format_string(out, j.get<std::string>());
      break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const json& child : j) {
        if (!first)
          out += ", ";
        first = false;
        emit_value_compact(out, child);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first)
          out += ", ";
        first = false;
        format_string(out, it.key());
        out += ": ";
        emit_value_compact(out, it.value());
      }
      out += '}';
      break;
    }
    default:
      throw validation_error("unsupported JSON value type");
  }
}

void emit_value(std::string& out, const json& j, int indent) {
  const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(indent + 1), ' ');
  switch (j.type()) {
    case json::value_t::null:
      out += "null";
      break;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case json::value_t::number_float:
      format_number(out, j.get<double>());
      break;
    case json::value_t::string:
      format_string(out, j.get<std::string>());
      break;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      if (inline_array(j)) {
        emit_value_compact(out, j);
        break;
      }
      out += "[\n";
      bool first = true;
      for (const json& child : j) {
        if (!first)
          out += ",\n";
        first = false;
        out += pad_in;
        emit_value(out, child, indent + 1);
      }
      out += '\n';
      out += pad;
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      // nlohmann::json stores object keys sorted, so iteration order is
      // already deterministic.
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first)
          out += ",\n";
        first = false;
        out += pad_in;
        format_string(out, it.key());
        out += ": ";
        emit_value(out, it.value(), indent + 1);
      }
      out += '\n';
      out += pad;
      out += '}';
      break;
    }
    default:
      throw validation_error("unsupported JSON value type");
  }
}

} // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw parse_error("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw parse_error("matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw parse_error("matrix rows must all have the same length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = entry_from_json(row[c]);
  }
  return m;
}

json state_to_json(const DensityMatrix& rho) {
  json j;
  j["dims"] = rho.dims();
  j["matrix"] = matrix_to_json(rho.mat());
  return j;
}

DensityMatrix state_from_json(const json& j, const Tolerances& tol) {
  const std::vector<Index> dims = dims_from_json(field(j, "dims"), "dims");
  return DensityMatrix(dims, matrix_from_json(field(j, "matrix")), tol);
}

DensityMatrix load_state(const std::string& path, const Tolerances& tol) {
  return state_from_json(load_json_file(path), tol);
}

Matrix load_unitary(const std::string& path, const Tolerances& tol) {
  const Matrix u = matrix_from_json(field(load_json_file(path), "matrix"));
  if (u.rows() != u.cols())
    throw validation_error("unitary must be square: " + path);
  if (max_abs(Matrix(u.adjoint() * u) - identity(u.rows())) > tol.orthonormal)
    throw validation_error("matrix is not unitary: " + path);
  return u;
}

OrthonormalBasis load_basis(const std::string& path, const Tolerances& tol) {
  return OrthonormalBasis(matrix_from_json(field(load_json_file(path), "matrix")), tol);
}

json channel_to_json(const KrausChannel& ch) {
  json j;
  j["in_dims"] = ch.in_dims;
  j["out_dims"] = ch.out_dims;
  json kraus = json::array();
  for (const Matrix& k : ch.kraus)
    kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

KrausChannel load_channel(const std::string& path, const Tolerances& tol) {
  const json j = load_json_file(path);
  return make_channel(matrix_list_from_json(field(j, "kraus"), "kraus"),
                      dims_from_json(field(j, "in_dims"), "in_dims"),
                      dims_from_json(field(j, "out_dims"), "out_dims"), tol);
}

json program_to_json(const GoiaProgram& prog) {
  json steps = json::array();
  for (const GoiaStep& step : prog.steps) {
    json s;
    if (const auto* inc = std::get_if<StepIncoherentOnA>(&step)) {
      s["type"] = "incoherent_on_a";
      json kraus = json::array();
      for (const Matrix& k : inc->kraus)
        kraus.push_back(matrix_to_json(k));
      s["kraus"] = std::move(kraus);
    } else if (const auto* ctrl = std::get_if<StepControlledFromA>(&step)) {
      s["type"] = "controlled_from_a";
      json blocks = json::array();
      for (const Matrix& b : ctrl->blocks)
        blocks.push_back(matrix_to_json(b));
      s["blocks"] = std::move(blocks);
    } else if (const auto* add = std::get_if<StepAddAncillaB>(&step)) {
      s["type"] = "add_ancilla_b";
      s["dim"] = add->dim;
    } else if (const auto* tr = std::get_if<StepTraceOutB>(&step)) {
      s["type"] = "trace_b";
      s["factor"] = tr->factor;
    } else if (const auto* meas = std::get_if<StepMeasureB>(&step)) {
      s["type"] = "measure_b";
      s["factor"] = meas->factor;
      s["basis"] = matrix_to_json(meas->basis_vectors);
    }
    steps.push_back(std::move(s));
  }
  json j;
  j["steps"] = std::move(steps);
  return j;
}

GoiaProgram program_from_json(const json& j) {
  const json& steps = field(j, "steps");
  if (!steps.is_array())
    throw parse_error("\"steps\" must be an array");
  GoiaProgram prog;
  for (const json& s : steps) {
    const json& type = field(s, "type");
    if (!type.is_string())
      throw parse_error("step \"type\" must be a string");
    const std::string name = type.get<std::string>();
    if (name == "incoherent_on_a") {
      prog.steps.push_back(StepIncoherentOnA{matrix_list_from_json(field(s, "kraus"), "kraus")});
    } else if (name == "controlled_from_a") {
      prog.steps.push_back(
          StepControlledFromA{matrix_list_from_json(field(s, "blocks"), "blocks")});
    } else if (name == "add_ancilla_b") {
      prog.steps.push_back(StepAddAncillaB{index_from_json(field(s, "dim"), "dim")});
    } else if (name == "trace_b") {
      const Index f = index_from_json(field(s, "factor"), "factor");
      if (f < 0)
        throw parse_error("\"factor\" must be nonnegative");
      prog.steps.push_back(StepTraceOutB{static_cast<std::size_t>(f)});
    } else if (name == "measure_b") {
      const Index f = index_from_json(field(s, "factor"), "factor");
      if (f < 0)
        throw parse_error("\"factor\" must be nonnegative");
      prog.steps.push_back(
          StepMeasureB{static_cast<std::size_t>(f), matrix_from_json(field(s, "basis"))});
    } else {
      throw parse_error("unknown step type \"" + name + "\"");
    }
  }
  return prog;
}

GoiaProgram load_program(const std::string& path) {
  return program_from_json(load_json_file(path));
}

std::string emit_json(const json& j) {
  std::string out;
  emit_value(out, j, 0);
  out += '\n';
  return out;
}

std::string emit_json_compact(const json& j) {
  std::string out;
  emit_value_compact(out, j);
  return out;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw parse_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out)
    throw parse_error("cannot open file for writing: " + path);
  out << emit_json(j);
  if (!out)
    throw parse_error("failed while writing: " + path);
}

} // namespace recoh
