#pragma once

#include <stdexcept>
#include <string>

namespace dengue {

/// Base of every error raised by the library. `kind()` is a short stable
/// token used by the CLI's one-line error output.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char *kind() const noexcept { return "error"; }
};

#define DENGUE_DEFINE_ERROR(Name, token)                                       \
    class Name : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
        [[nodiscard]] const char *kind() const noexcept override { return token; } \
    }

DENGUE_DEFINE_ERROR(IngestError, "ingest");
DENGUE_DEFINE_ERROR(AlignmentError, "alignment");
DENGUE_DEFINE_ERROR(ParameterError, "parameter");
DENGUE_DEFINE_ERROR(CorrelationError, "correlation_undefined");
DENGUE_DEFINE_ERROR(CalibrationError, "calibration");
DENGUE_DEFINE_ERROR(MissingDataError, "missing_data");
DENGUE_DEFINE_ERROR(DegenerateRegionError, "degenerate_region");
DENGUE_DEFINE_ERROR(PipelineError, "pipeline");
DENGUE_DEFINE_ERROR(UnderdeterminedError, "underdetermined");
DENGUE_DEFINE_ERROR(SingularDesignError, "singular_design");
DENGUE_DEFINE_ERROR(InputError, "input");
DENGUE_DEFINE_ERROR(ConfigError, "config");
// Raised for command-line misuse and unreadable input paths (exit code 2).
DENGUE_DEFINE_ERROR(UsageError, "usage");

#undef DENGUE_DEFINE_ERROR

} // namespace dengue
