#pragma once

// JSON and CSV formats.
//
// A matrix is an array of n rows. Rows of numbers give a floating element;
// rows of "p/q" strings give an exact one. The object form
//   {"entries": [[...]], "exact": [["p/q", ...]]}
// carries both, and the floating entries must match the exact image.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "flaglab/contraction.hpp"
#include "flaglab/growth.hpp"
#include "flaglab/orbit.hpp"
#include "flaglab/symshadow.hpp"

namespace flaglab {

using Json = nlohmann::json;

Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

GroupElement element_from_json(const Json& j);
Json element_to_json(const GroupElement& g);

// Accepts a bare array of matrices or {"generators": [...]}.
std::vector<GroupElement> generators_from_json(const Json& j);
std::vector<GroupElement> load_generators(const std::string& path);

Json flag_to_json(const Flag& f);
Json flag_to_json(const OppositeFlag& f);
Flag flag_from_json(const Json& j);
OppositeFlag opposite_flag_from_json(const Json& j);

Json cartan_to_json(const CartanVector& h);

Json to_json(const ContractionCertificate& c);
ContractionCertificate contraction_certificate_from_json(const Json& j);
Json to_json(const ExactCrosscheck& x);
Json to_json(const FreenessCertificate& c);
FreenessCertificate freeness_certificate_from_json(const Json& j);

Json to_json(const OrbitRecord& r);
Json to_json(const GrowthReport& r);
Json to_json(const AnosovFit& f);
Json to_json(const DefectStats& d);
Json to_json(const ZariskiReport& z);

void write_growth_csv(std::ostream& out, const GrowthReport& r);
void write_cone_csv(std::ostream& out, const std::vector<IndicatorPoint>& curve);
void write_calibration_csv(std::ostream& out, const std::vector<CalibrationRow>& rows);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace flaglab
