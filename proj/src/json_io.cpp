#include <qsorter/json_io.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsorter {

namespace {

void escape_into(const std::string& s, std::string& out) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
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

void dump_into(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        escape_into(key, out);
        out += ':';
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case nlohmann::detail::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        dump_into(value, out);
      }
      out += ']';
      break;
    }
    case nlohmann::detail::value_t::string:
      escape_into(j.get_ref<const std::string&>(), out);
      break;
    case nlohmann::detail::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case nlohmann::detail::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += "null";
  }
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string dump_deterministic(const ordered_json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

ordered_json complex_to_json(const std::complex<double>& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json awg_to_json(const AwgDesign& design) {
  ordered_json j;
  j["d"] = design.d;
  j["wavelengths"] = design.wavelengths;
  j["lengths"] = design.lengths;
  ordered_json rows = ordered_json::array();
  for (Index k = 0; k < design.integers.rows(); ++k) {
    ordered_json row = ordered_json::array();
    for (Index s = 0; s < design.integers.cols(); ++s) row.push_back(design.integers(k, s));
    rows.push_back(std::move(row));
  }
  j["integers"] = std::move(rows);
  j["residual"] = design.residual;
  return j;
}

AwgDesign awg_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("wavelengths") || !j.contains("lengths"))
    throw std::invalid_argument("awg design: expected fields d, wavelengths, lengths");
  AwgDesign design;
  design.d = j.at("d").get<Index>();
  design.wavelengths = j.at("wavelengths").get<std::vector<double>>();
  design.lengths = j.at("lengths").get<std::vector<double>>();
  if (design.d < 1 || static_cast<Index>(design.wavelengths.size()) != design.d ||
      static_cast<Index>(design.lengths.size()) != design.d)
    throw std::invalid_argument("awg design: wavelengths and lengths must have exactly d entries");
  // integers and residual derive from the lengths; the file's own residual
  // field is informational only
  const AwgFit fit = awg_fit(design.wavelengths, design.lengths);
  design.integers = fit.integers;
  design.residual = fit.residual < kAwgExactResidual ? 0.0 : fit.residual;
  return design;
}

ordered_json mesh_to_json(const BeamsplitterMesh& mesh) {
  ordered_json elements = ordered_json::array();
  for (const auto& element : mesh.elements) {
    ordered_json e;
    if (const auto* bs = std::get_if<Beamsplitter>(&element)) {
      e["kind"] = "bs";
      e["modes"] = ordered_json::array({bs->mode_a, bs->mode_b});
      e["theta"] = bs->theta;
      e["phi"] = bs->phi;
    } else {
      const auto& ps = std::get<PhaseShifter>(element);
      e["kind"] = "ps";
      e["modes"] = ordered_json::array({ps.mode});
      e["theta"] = 0.0;
      e["phi"] = ps.phase;
    }
    elements.push_back(std::move(e));
  }
  return elements;
}

UnitaryXcd unitary_from_json(const nlohmann::json& j, double tol) {
  const nlohmann::json& rows = j.is_object() && j.contains("unitary") ? j.at("unitary") : j;
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("matrix file: expected a non-empty \"unitary\" array of rows");
  const Index d = static_cast<Index>(rows.size());
  Eigen::MatrixXcd m(d, d);
  for (Index r = 0; r < d; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != d)
      throw std::invalid_argument("matrix file: matrix must be square");
    for (Index c = 0; c < d; ++c) {
      const auto& entry = row[c];
      if (entry.is_array()) {
        if (entry.size() != 2)
          throw std::invalid_argument("matrix file: complex entries must be [re, im] pairs");
        m(r, c) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
      } else {
        m(r, c) = std::complex<double>(entry.get<double>(), 0.0);
      }
    }
  }
  return UnitaryXcd::checked(m, tol);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("cannot open output file: " + path);
  out << contents;
  if (!out) throw NumericalError("failed writing output file: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace qsorter
