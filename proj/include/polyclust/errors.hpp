#pragma once

#include <stdexcept>
#include <string>

namespace polyclust {

/// Base class for all library errors; what() carries the detail message.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define POLYCLUST_ERROR(Name)                                        \
    struct Name : Error {                                            \
        explicit Name(const std::string& msg) : Error(msg) {}        \
    }

// series-core
POLYCLUST_ERROR(InvalidLength);
POLYCLUST_ERROR(NonFiniteSeries);
POLYCLUST_ERROR(DegenerateScale);
POLYCLUST_ERROR(InvalidLag);
POLYCLUST_ERROR(DegenerateVariance);
POLYCLUST_ERROR(DegenerateSpectrum);

// polyspectra
POLYCLUST_ERROR(WeightArityError);
POLYCLUST_ERROR(OracleSizeError);

// simgen
POLYCLUST_ERROR(UnstableModel);
POLYCLUST_ERROR(ScenarioError);

// clustering
POLYCLUST_ERROR(InvalidK);
POLYCLUST_ERROR(InvalidDissimilarity);
POLYCLUST_ERROR(ConstantFeature);

// validation
POLYCLUST_ERROR(InvalidSampleSize);
POLYCLUST_ERROR(DegenerateCentroids);

// eval-metrics
POLYCLUST_ERROR(InputMismatch);
POLYCLUST_ERROR(UndefinedAUC);

// io
POLYCLUST_ERROR(SchemaError);
POLYCLUST_ERROR(ParseError);
POLYCLUST_ERROR(DuplicateDate);

#undef POLYCLUST_ERROR

} // namespace polyclust
