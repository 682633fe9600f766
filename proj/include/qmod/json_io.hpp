#pragma once

#include <json.hpp>
#include <string>

#include "qmod/distribution.hpp"
#include "qmod/filtration.hpp"
#include "qmod/qseries.hpp"
#include "qmod/singular_moduli.hpp"
#include "qmod/theta_cycle.hpp"

namespace qmod {

using Json = nlohmann::ordered_json;

// Wire schema used by every CLI subcommand:
//   {valuation, precision, modulus, coeffs: [[exponent, "coeff"], ...]}
// with exponents ascending and coefficients as decimal strings.
Json series_to_json(const QSeries& s);
QSeries series_from_json(const Json& j);

Json filtration_to_json(const FiltrationResult& r);
Json props_report_to_json(const FiltrationPropsReport& r);
Json cycle_report_to_json(const CycleReport& r);
Json square_class_report_to_json(const SquareClassReport& r);
Json distribution_report_to_json(const DistributionReport& r);

Json load_json_file(const std::string& path);
void dump_json(const Json& j, const std::string& out_path);  // empty path -> stdout

}  // namespace qmod
