#pragma once

#include <filesystem>
#include <json.hpp>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/edge_linear.hpp"
#include "qcurv/expansion.hpp"
#include "qcurv/geometry.hpp"
#include "qcurv/indicial.hpp"
#include "qcurv/nonlinear.hpp"

namespace qcurv {

using Json = nlohmann::json;  // object keys are kept sorted

// Deterministic serialization: sorted keys, two-space indent, floats as %.12e,
// non-finite floats as null.
void dump_json(std::ostream& os, const Json& j);
std::string dump_json(const Json& j);

Json to_json(const CurvatureConstants& c);
Json to_json(const BoundarySpectrum& s);
Json to_json(const ExpansionFit& f);
Json to_json(const SmallnessCheck& s);
Json to_json(const SolveReport& r);
Json to_json(const KernelElement& k, const FactoredOperator& op);

// Named columns written after (r, x) in declaration order.
struct Profile {
  GridPtr grid;
  std::vector<std::pair<std::string, std::vector<real>>> columns;
  void add(std::string name, const RadialFunction& f) { columns.emplace_back(std::move(name), f.values()); }
};
void write_profile_csv(std::ostream& os, const Profile& p);

// Generic table with a header row; values printed as %.12e.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
void write_table_csv(std::ostream& os, const Table& t);

// key,value rows of the flattened report (nested keys joined with '.')
void write_flat_csv(std::ostream& os, const Json& j);

// Writes through a temporary file; IO failures carry the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qcurv
