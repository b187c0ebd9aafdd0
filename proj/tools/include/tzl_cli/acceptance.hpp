#pragma once

// Acceptance criteria 1-14. Each check is deterministic given its fixed
// seed and reports one pass/fail line.

#include "tzl/toeplitz_spectra.hpp"

#include <functional>
#include <string>

namespace tzl::cli {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult run_criterion(int id, int threads = 1);

/// "C07 PASS equidistribution (12.3 s): ..."
std::string format_result(const CriterionResult& r);

using SpectrumProvider = std::function<ToeplitzSpectrum(int, const SymbolSpec&)>;

/// Criterion 2 against an arbitrary spectrum source (used for mutation tests).
CriterionResult check_trace_identity(const SpectrumProvider& provider);

} // namespace tzl::cli
