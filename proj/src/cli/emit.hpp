#pragma once

#include <nlohmann/json.hpp>

#include "mockpadic/cli.hpp"

namespace mockpadic::cli {

using Json = nlohmann::ordered_json;

/// {"valuation": v | null, "unit": "u", "digits": d, "absolute_precision": a | null, "text": ...}
Json padic_json(const PadicApprox& x);
Json valuation_json(const DifferenceValuation& d);
Json series_json(const LaurentSeries& s);
Json certificate_json(const OrderCertificate& c);
Json representative_json(const CuspFormClass& phi);
Json report_json(const DeltaReport& r);
Json suite_json(const SuiteResult& s);
Json config_json(const RunConfig& cfg);

/// CSV header and rows of the approximant table.
std::string approximant_csv_header();
std::string approximant_csv_rows(const DeltaReport& r);

/// Human-readable rendering of one report.
std::string report_text(const DeltaReport& r);
std::string suite_text(const SuiteResult& s);

} // namespace mockpadic::cli
