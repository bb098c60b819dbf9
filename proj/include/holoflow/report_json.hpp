#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "holoflow/contact.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/geometry.hpp"
#include "holoflow/singularity.hpp"

namespace holoflow::report {

using Json = nlohmann::ordered_json;

// Two-space indented JSON with every double printed as %.17g. Non-finite
// doubles are written as the strings "inf", "-inf", "nan".
std::string dump(const Json& j);

Json number(double x);
Json point(cplx z);  // [re, im]

Json to_json(const LimitEstimate& e);
Json to_json(const SeriesReport& s);
Json to_json(const ValidationReport& v);
Json to_json(const DwEstimate& d);
Json to_json(const Thm11Report& r);
Json to_json(const SingularityReport& r);
Json to_json(const TangencyReport& r);
Json to_json(const ContactArcReport& r);
Json to_json(const std::vector<ContactArcReport>& arcs);
Json to_json(const HerglotzMassReport& r);
Json to_json(const CornerReport& r);
Json to_json(const LocalDensityReport& r);
Json to_json(const SectorTestReport& r);
Json to_json(const BertilssonReport& r);
Json to_json(const SubdivisionReport& r);

// {"tau": [re, im], "p_expr": "..."} | {"g_expr": "...", "tau"?: [re, im]} |
// {"gallery": {"name": "...", "params": {...}}}; exactly one style.
GeneratorSpec generator_from_json_text(const std::string& text);

}  // namespace holoflow::report
