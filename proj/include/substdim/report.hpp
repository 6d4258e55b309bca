#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "substdim/besicovitch.hpp"
#include "substdim/classify.hpp"
#include "substdim/types.hpp"

namespace substdim {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// JSON has no infinity literal; infinite values serialize as "inf".
json json_number(double v);
double number_from_json(const json& v);

json substitution_to_json(const Substitution& theta);
Substitution substitution_from_json(const json& doc,
                                    bool require_constant_length = true);

json bounds_to_json(const AcBounds& bounds);
json classification_to_json(const ClassificationReport& report);
json dimension_fit_to_json(const DimensionFit& fit);
json ifs_report_to_json(const IfsCheckReport& report);

/// Full report document: substitution echo, verdict, certificates, bounds,
/// trace, tool version, config echo.
json make_report_document(const std::string& command, const Substitution& theta,
                          const ClassificationReport& report,
                          const json& config_echo);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> checks;    // one line per replayed certificate
  std::vector<std::string> failures;
};

/// Replays every certificate in a report document using only the document:
/// coincidence compositions, exhaustion closures, periodicity witnesses, and
/// bound arithmetic.
VerifyResult verify_document(const json& doc);

}  // namespace substdim
