#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoflow {

/// Base class for all geoflow runtime failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The integrated quantity exceeded its configured ceiling.  For the Riccati
/// flow this signals a conjugate-point pole reached in finite time; t_star is
/// the last time before the ceiling was crossed.
class BlowUpError : public Error {
public:
    BlowUpError(double t_star, double norm)
        : Error("solution norm " + std::to_string(norm) +
                " exceeded ceiling at t = " + std::to_string(t_star)),
          t_star(t_star), norm(norm) {}
    double t_star;
    double norm;
};

/// Adaptive stepping could not satisfy the requested error tolerance.
class ToleranceFailure : public Error {
public:
    explicit ToleranceFailure(const std::string& what) : Error(what) {}
};

/// An iteration (period map, Newton shooting, ...) stalled above tolerance.
/// residual_history records the defect per iteration for diagnostics.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::vector<double> history = {})
        : Error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

/// A Mobius transform was required to be hyperbolic (|trace| > 2) but is not.
class NotHyperbolic : public Error {
public:
    explicit NotHyperbolic(const std::string& what) : Error(what) {}
};

/// Fundamental-domain projection did not terminate (point too close to the
/// limit set).
class MaxIterations : public Error {
public:
    explicit MaxIterations(const std::string& what) : Error(what) {}
};

/// The metric developed non-negative curvature at the reported point.
class PositiveCurvature : public Error {
public:
    PositiveCurvature(double x, double y, double k)
        : Error("curvature " + std::to_string(k) + " >= 0 at (" +
                std::to_string(x) + ", " + std::to_string(y) + ")"),
          x(x), y(y), curvature(k) {}
    double x, y, curvature;
};

/// One link of the trace moment chain failed beyond tolerance; signals an
/// integrator defect, not a mathematical possibility.
class ChainViolation : public Error {
public:
    ChainViolation(const std::string& link, double magnitude)
        : Error("moment chain link '" + link + "' violated by " +
                std::to_string(magnitude)),
          link(link), magnitude(magnitude) {}
    std::string link;
    double magnitude;
};

/// A refined orbit closed up with a deck word not matching its seed class.
class WrongDeckWord : public Error {
public:
    WrongDeckWord(const std::string& expected, const std::string& got)
        : Error("orbit closed with deck word '" + got + "', seeded from '" +
                expected + "'"),
          expected(expected), got(got) {}
    std::string expected, got;
};

/// Monte Carlo experiment could not collect enough usable samples.
class InsufficientSamples : public Error {
public:
    InsufficientSamples(std::size_t usable, std::size_t drawn)
        : Error("only " + std::to_string(usable) + " of " +
                std::to_string(drawn) + " samples usable"),
          usable(usable), drawn(drawn) {}
    std::size_t usable, drawn;
};

/// Configuration file problem: unknown key, bad value, missing section.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace geoflow
