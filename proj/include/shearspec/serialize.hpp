#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shearspec/bracketing.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/hardy.hpp"
#include "shearspec/spectra.hpp"
#include "shearspec/variational.hpp"

namespace shearspec {

using Json = nlohmann::json;

/// Doubles are written as JSON numbers when finite and as the strings
/// "inf", "-inf", "nan" otherwise (plain JSON has no non-finite numbers).
Json number_to_json(double x);
double number_from_json(const Json& j);

// nlohmann ADL hooks. Eigenvectors of EigResult are not serialised; custom
// deficit terms are written but cannot be read back.
void to_json(Json& j, const DeficitTerm& t);
void from_json(const Json& j, DeficitTerm& t);
void to_json(Json& j, const Deficit& d);
void from_json(const Json& j, Deficit& d);
void to_json(Json& j, const ShearProfile& p);
void from_json(const Json& j, ShearProfile& p);
void to_json(Json& j, const StripGeometry& g);
void from_json(const Json& j, StripGeometry& g);
void to_json(Json& j, const SchemaGeometry& g);
void from_json(const Json& j, SchemaGeometry& g);

void to_json(Json& j, const EigResult& r);
void from_json(const Json& j, EigResult& r);
void to_json(Json& j, const SpectrumReport& r);
void from_json(const Json& j, SpectrumReport& r);
void to_json(Json& j, const Rung& r);
void from_json(const Json& j, Rung& r);
void to_json(Json& j, const ConvergenceTable& t);
void from_json(const Json& j, ConvergenceTable& t);
void to_json(Json& j, const DispersionCurve& c);
void from_json(const Json& j, DispersionCurve& c);

void to_json(Json& j, const LambdaIResult& r);
void from_json(const Json& j, LambdaIResult& r);
void to_json(Json& j, const HardyCertificate& c);
void from_json(const Json& j, HardyCertificate& c);
void to_json(Json& j, const VerifyHardyReport& r);
void from_json(const Json& j, VerifyHardyReport& r);

void to_json(Json& j, const GapSample& g);
void from_json(const Json& j, GapSample& g);
void to_json(Json& j, const VariationalCertificate& c);
void from_json(const Json& j, VariationalCertificate& c);

void to_json(Json& j, const BracketingReport& r);
void from_json(const Json& j, BracketingReport& r);
void to_json(Json& j, const Alpha0Entry& e);
void from_json(const Json& j, Alpha0Entry& e);
void to_json(Json& j, const Alpha0Result& r);
void from_json(const Json& j, Alpha0Result& r);

}  // namespace shearspec
