#pragma once

#include <stdexcept>
#include <string>

namespace torun {

// Input validation failures (bad grids, out-of-range parameters, malformed
// files). The CLI maps these to exit code 2.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failures: iteration did not converge, a certified property was
// violated, a produced object is degenerate. The CLI maps these to exit 3.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A randomized or certified bound check failed beyond its slack.
class property_failure : public convergence_error {
public:
    explicit property_failure(const std::string& msg) : convergence_error(msg) {}
};

// The closedness condition of a candidate form is violated (unconverged f).
class inconsistent_form : public convergence_error {
public:
    explicit inconsistent_form(const std::string& msg) : convergence_error(msg) {}
};

// Produced lattice has (numerically) collinear periods.
class degenerate_lattice : public convergence_error {
public:
    explicit degenerate_lattice(const std::string& msg) : convergence_error(msg) {}
};

} // namespace torun
