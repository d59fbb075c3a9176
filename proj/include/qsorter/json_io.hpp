#pragma once

// JSON serialization. Configs and matrix files are parsed with nlohmann;
// everything written to disk goes through dump_deterministic(), which emits
// floating-point values with 17 significant digits so files round-trip
// exactly and identical runs produce identical bytes.

#include <qsorter/devices.hpp>
#include <qsorter/mesh.hpp>

#include <json.hpp>

#include <string>

namespace qsorter {

using ordered_json = nlohmann::ordered_json;

/// Compact, key-order-preserving dump with %.17g floats.
std::string dump_deterministic(const ordered_json& j);

/// Formats one double with 17 significant digits.
std::string format_double(double value);

ordered_json complex_to_json(const std::complex<double>& z);

/// {d, wavelengths, lengths, integers, residual}.
ordered_json awg_to_json(const AwgDesign& design);
AwgDesign awg_from_json(const nlohmann::json& j);

/// Ordered array of elements, each {"kind": "bs"|"ps", "modes": [...],
/// "theta": ..., "phi": ...}; a phase shifter carries its phase in "phi".
ordered_json mesh_to_json(const BeamsplitterMesh& mesh);

/// Reads {"unitary": [[entry, ...], ...]} where an entry is [re, im] or a
/// plain real number. The matrix is checked unitary within `tol`.
UnitaryXcd unitary_from_json(const nlohmann::json& j, double tol);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace qsorter
