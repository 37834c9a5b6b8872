#pragma once

// JSON forms of class sets, fit reports and verification reports. Integers
// and high-precision floats are written as decimal strings.

#include <string>

#include "specgeo/algcheck.hpp"
#include "specgeo/quadclass.hpp"
#include "specgeo/znreal.hpp"

namespace specgeo {

std::string classset_to_json(const ClassSet& cs, int indent = 1);
ClassSet classset_from_json(const std::string& text);

std::string fitreport_to_json(const FitReport& r, int indent = 1);
FitReport fitreport_from_json(const std::string& text);

std::string report_to_json(const VerificationReport& r, unsigned bits, int indent = 1);

// "mpfr-<bits>"
std::string precision_tag(unsigned bits);

}  // namespace specgeo
