#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sconst {

// Base of all domain errors. kind() is the stable machine-readable tag the
// CLI emits in error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error("InvalidInput", msg) {}
};

struct PoleAtExpansionPoint : Error {
    explicit PoleAtExpansionPoint(const std::string& msg)
        : Error("PoleAtExpansionPoint", msg) {}
};

struct SingularJacobian : Error {
    explicit SingularJacobian(const std::string& msg) : Error("SingularJacobian", msg) {}
};

struct NoConvergence : Error {
    NoConvergence(const std::string& msg, std::vector<std::complex<double>> best,
                  double norm)
        : Error("NoConvergence", msg),
          best_iterate(std::move(best)),
          residual_norm(norm) {}
    std::vector<std::complex<double>> best_iterate;
    double residual_norm;
};

struct CoincidentRapidities : Error {
    explicit CoincidentRapidities(const std::string& msg)
        : Error("CoincidentRapidities", msg) {}
};

struct InvalidGeometry : Error {
    explicit InvalidGeometry(const std::string& msg) : Error("InvalidGeometry", msg) {}
};

struct CollidingRoots : Error {
    explicit CollidingRoots(const std::string& msg) : Error("CollidingRoots", msg) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& msg) : Error("TooLarge", msg) {}
};

struct WrongSector : Error {
    explicit WrongSector(const std::string& msg) : Error("WrongSector", msg) {}
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t position)
        : Error("ParseError", msg), offset(position) {}
    std::size_t offset;
};

struct UnverifiedRoots : Error {
    explicit UnverifiedRoots(const std::string& msg) : Error("UnverifiedRoots", msg) {}
};

}  // namespace sconst
